#pragma once

#include "tilelab/check.hpp"
#include "tilelab/tiling.hpp"
#include "tilelab/zm_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tilelab {

// {a ∈ A : π_i(a) < p_i^{n_i - 1}}
TileSet slab_subset(const TileSet& A, int i);

// Z_M → Z_{M/p_i}: i-th coordinate reduced mod p_i^{n_i-1}, the others kept.
struct SlabProjection {
    Context target;
    std::vector<Int> image; // by residue of Z_M
};
SlabProjection slab_projection(const Context& ctx, int i);
// Image of a set; nullopt when two members collide.
std::optional<TileSet> project(const SlabProjection& proj, const TileSet& S);

struct SlabCondition {
    bool holds = false;
    std::string witness;
};

SlabCondition slab_cond_i(const Tiling& T, int i); // PreconditionFailed unless Φ_{p_i^{n_i}} | A
SlabCondition slab_cond_ii(const Tiling& T, int i);
SlabCondition slab_cond_iii(const Tiling& T, int i);

struct SlabVerdict {
    int direction = 0;
    SlabCondition cond_i, cond_ii, cond_iii;

    bool agree() const { return cond_i.holds == cond_ii.holds && cond_ii.holds == cond_iii.holds; }
};
// Needs Φ_{p_i^{n_i}} | A; EquivalenceViolation if the three conditions disagree.
SlabVerdict slab_equivalence_check(const Tiling& T, int i);

struct SplittingSlabVerdict {
    int direction = 0;
    bool I = false;   // Φ_{p_i^{n_i}} | A and the divisor condition
    bool II = false;  // A ⊕ rB has uniform (rB, A) parity for every unit r
    bool III = false; // A_{x,b} ⊆ Π(x, p_i^{n_i}) for x ∈ a*F_i, a ∈ A, b ∈ B

    bool agree() const { return I == II && II == III; }
};
SplittingSlabVerdict splittingslab_conditions(const Tiling& T, int i);
// EquivalenceViolation on disagreement; returns the common value.
bool splittingslab_equiv_check(const Tiling& T, int i);

struct Implication {
    bool applicable = false;
    bool implied = false;
};
// (i) every a ∈ A has a neighbour at distance M/p_i, or (ii) Φ_{p_i^{n_i}} | A and B is plane-saturated.
// When applicable, A must satisfy the slab conditions; ImplicationViolation otherwise.
Implication slabcor_check(const Tiling& T, int i);

// |B ∩ Π(z, p_i^{n_i})| ≤ (|B|, M_i) for all z.
bool plane_bound_check(const TileSet& B, int i);

// p_i > (|B|, M_i) and M/p_i ∉ Div(A) ⇒ uniform (A, B) parity; ImplicationViolation otherwise.
Implication blowbound_check(const Tiling& T, int i);

// {p a mod M}; CollapseError when |pA| < |A|.
TileSet prime_power_dilate(const TileSet& A, Int p);

// p_1 > D(M / p_1^{n_1}) for the largest prime p_1 of M.
bool largeprime_hypothesis(const ZmContext& ctx);

struct CertificateStep {
    enum class Kind { Slab, PrimeRemoval, Base };
    Kind kind = Kind::Base;
    Int p = 0;
    Int modulus_from = 1, modulus_to = 1;
    bool on_B = false; // the slabbed or dilated tile is B
    Int shift = 0;     // slab: translate c with the slab taken from T - c; prime removal: class j of the other tile
    int primes = 0;    // base: number of distinct primes
    std::string hypothesis;
    std::vector<Int> A_after, B_after;
};
const char* to_string(CertificateStep::Kind k);

struct T2Certificate {
    Tiling input;
    bool largeprime = false;
    std::vector<CertificateStep> steps;
    bool success = false;
    bool t2_A = false, t2_B = false;
};

// Recomputes every intermediate tiling from the input and the recorded choices.
bool replay_certificate(const T2Certificate& cert, std::string* why = nullptr);

// PipelineStuck when no step applies.
T2Certificate prove_t2_largeprime(const Tiling& T);

} // namespace tilelab
