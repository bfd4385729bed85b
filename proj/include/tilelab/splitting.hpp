#pragma once

#include "tilelab/check.hpp"
#include "tilelab/tiling.hpp"
#include "tilelab/zm_core.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tilelab {

struct SigmaPair {
    TileSet zone;
    TileSet sigma_A;
    TileSet sigma_B;
};

SigmaPair sigma_sets(const Tiling& T, const TileSet& Z);

enum class Parity { AB, BA };
const char* to_string(Parity p);

struct SplitConditions {
    bool ab = false;
    bool ba = false;
};
// Evaluates both parity definitions on given Σ-sets for a fiber in direction i.
SplitConditions splitting_conditions(const ZmContext& ctx, int i, std::span<const Int> sigma_A,
                                     std::span<const Int> sigma_B);
// Exactly one of the conditions; NeitherParity otherwise.
Parity classify_parity(const SplitConditions& c, Int z, int i);

// Parity of z*F_i; owner tables give a and b with a + b = z for every residue.
Parity fiber_parity_from_owners(const ZmContext& ctx, int i, const Int* owner_a, const Int* owner_b, Int z);
// Also verifies the plane containments of both Σ-sets (LemmaViolation).
Parity fiber_parity(const Tiling& T, Int z, int i);

struct SplitReport {
    int direction = 0;
    Int p = 0;
    std::vector<std::pair<Int, Parity>> fibers; // anchor (least residue) → parity, anchors 0 .. M/p - 1
    bool uniform_AB = false, uniform_BA = false;
    bool A_uniform_AB = false, A_uniform_BA = false;
    bool B_uniform_AB = false, B_uniform_BA = false;

    Parity parity_at(Int z) const;
};

SplitReport split_report(const Tiling& T, int i);

// Parity of z*F_i in (A, B) equals that of (z - c)*F_i in (A - c, B) for every z.
bool check_translate_splitting(const Tiling& T, Int c, int i);

CheckResult check_disjoint_sigma(const Tiling& T, Int a0, Int a1, int i);
CheckResult check_local_distribution(const Tiling& T, Int a0, int i);
// A-uniform (B, A) parity ⇒ Φ_{p_i^{n_i}} | A; needs 0 ∈ B.
CheckResult check_aunif(const Tiling& T, int i);
// Φ_{p_i^{n_i}} | A without A-uniform (B, A) parity.
bool aunif_converse_candidate(const Tiling& T, int i);

// Some ν ∈ {i, j} with Σ_A(Λ) ⊂ Π(a, p_ν^{n_ν-1}) and Σ_B(Λ) ⊂ Π(b, p_ν^{n_ν-1}), Λ = Λ(z, M/p_i p_j).
// Returns the smallest such ν; LemmaViolation if none.
int plane_consistency(const Tiling& T, Int z, int i, int j);
CheckResult cross_direction_check(const Tiling& T, Int z, int i, int j);

// Assumption (F) data for the tile A of a three-prime tiling with Φ_M | A.
struct FiberedGridProfile {
    Context ctx;
    TileSet A;
    Int D = 1;
    std::vector<TileSet> in_fiber;      // in_fiber[ν] = {a ∈ A : a*F_ν ⊆ A}
    std::vector<int> kappa;             // by residue; -1 off A
    std::vector<std::uint8_t> grid_dirs; // by grid anchor in [0, D): bit ν set when A ∩ Λ is fibered in direction ν

    int kappa_of(Int a) const;
    TileSet fiber_of(Int a) const; // F(a)
    bool in_all(Int a) const;      // a ∈ 𝓘 ∩ 𝓙 ∩ 𝓚
};

FiberedGridProfile fibered_grid_profile(const Tiling& T);

CheckResult fiberbasic_check(const FiberedGridProfile& prof, const Tiling& T);

struct Stratification {
    Int anchor = 0;
    std::vector<int> S;         // directions κ takes on Σ_A(Λ), increasing
    int layer_direction = 0;    // k
    std::vector<int> lambda;    // per layer z0 + ν M/p_k
    bool triple_point = false;  // some a ∈ Σ_A(Λ) lies in 𝓘 ∩ 𝓙 ∩ 𝓚
};

// LemmaViolation when three directions occur, a layer mixes directions,
// or a triple point fails to force a single direction.
Stratification grid_stratification(const FiberedGridProfile& prof, const Tiling& T, Int z0);

// Grid Λ(a + b, D) seen from a ∈ A, b ∈ B; the normalized statement is a = b = 0.
CheckResult consistency3_check(const FiberedGridProfile& prof, const Tiling& T, Int a = 0, Int b = 0);

struct ConsistentSplitting {
    CheckResult result;
    std::optional<Parity> parity;
    bool two_directions = false; // |S| = 2
    bool two_and_two = false;    // each λ value on at least two layers
    bool uniform = false;        // observed, whether or not the hypotheses hold
};
ConsistentSplitting consistent_splitting_check(const FiberedGridProfile& prof, const Tiling& T, Int z0);

} // namespace tilelab
