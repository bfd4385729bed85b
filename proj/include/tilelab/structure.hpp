#pragma once

#include "tilelab/tiling.hpp"
#include "tilelab/zm_core.hpp"

#include <boost/rational.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace tilelab {

using ExactRational = boost::rational<std::int64_t>;

// 𝔸_m[x | X] = #{a ∈ A ∩ X : (x - a, M) = m}, indexed by divisor position.
struct DivisorCounts {
    TileSet owner;
    Int x = 0;
    std::vector<Int> counts;

    Int operator[](Int m) const { return counts.at(owner.ctx().divisor_index(m)); }
    Int total() const;
};

DivisorCounts divisor_counts(const TileSet& A, Int x, const std::optional<TileSet>& restriction = std::nullopt);

// Σ_{m|M} 𝔸_m[x] 𝔹_m[y] / φ(M/m)
ExactRational box_product(const DivisorCounts& a, const DivisorCounts& b);
ExactRational box_product(const TileSet& A, const TileSet& B, Int x, Int y);

struct CountIdentity {
    Int lhs = 0; // #{(a, b, r) ∈ A × B × R : r(a - x) + (b - y) = 0}
    Int rhs = 0; // Σ_m φ(M)/φ(M/m) 𝔸_m[x] 𝔹_m[y]
};
// Throws LemmaViolation if lhs, rhs and φ(M) are not all equal.
CountIdentity dilation_count_identity(const Tiling& T, Int x, Int y);

// (A_{x,y}, B_{y,x})
std::pair<TileSet, TileSet> saturating_pair_sets(const TileSet& A, const TileSet& B, Int x, Int y);
// A_x = {a ∈ A : (x - a, M) ∈ Div(B)}
TileSet saturating_set(const TileSet& A, const TileSet& B, Int x);

// a ∈ A_{x,y} and b ∈ B_{y,x}, each witnessed by some element of the other tile.
bool satset_membership(const TileSet& A, const TileSet& B, Int x, Int y, Int a, Int b);
// True iff (x - a, M) = (y - b, M), i.e. a and b witness each other; checked against an
// exhaustive scan for r ∈ R with x - a = r(y - b). Throws EquivalenceViolation on disagreement.
bool satset_dilation_equiv(const TileSet& A, const TileSet& B, Int x, Int y, Int a, Int b);
bool dilation_exists(const ZmContext& ctx, Int u, Int v); // ∃ r ∈ R : u = r v

// Integer-weighted box product for sweeps: returns L·⟨𝔸[x],𝔹[y]⟩ with L = lcm of φ(d), d | M.
class BoxProductKernel {
public:
    explicit BoxProductKernel(const ZmContext& ctx);
    Int scale() const { return L_; }
    Int scaled(const Int* a_counts, const Int* b_counts) const;

private:
    std::vector<Int> w_;
    Int L_ = 1;
};

} // namespace tilelab
