#pragma once

#include "tilelab/zm_core.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tilelab {

// A ⊕ B = Z_M with the decomposition table precomputed.
class Tiling {
public:
    Tiling(TileSet A, TileSet B); // throws NotATiling
    static std::optional<Tiling> make(TileSet A, TileSet B);

    const Context& context() const { return A_.context(); }
    const ZmContext& ctx() const { return A_.ctx(); }
    Int modulus() const { return A_.modulus(); }
    const TileSet& A() const { return A_; }
    const TileSet& B() const { return B_; }
    // z = a + b
    Int a_of(Int z) const { return owner_a_[ctx().reduce(z)]; }
    Int b_of(Int z) const { return owner_b_[ctx().reduce(z)]; }

    Tiling swapped() const;
    Tiling translated(Int cA, Int cB) const;
    // Translate both tiles so that each contains 0 (by their least elements).
    Tiling normalized() const;
    bool is_normalized() const { return A_.contains(0) && B_.contains(0); }

    bool operator==(const Tiling& o) const { return A_ == o.A_ && B_ == o.B_; }
    bool operator<(const Tiling& o) const
    {
        return A_ == o.A_ ? B_ < o.B_ : A_ < o.A_;
    }

private:
    Tiling(TileSet A, TileSet B, std::vector<Int> oa, std::vector<Int> ob);
    TileSet A_, B_;
    std::vector<Int> owner_a_, owner_b_;
};

bool verify_direct(const TileSet& A, const TileSet& B);
bool verify_sands(const TileSet& A, const TileSet& B);
bool verify_cyclotomic(const TileSet& A, const TileSet& B);

// Div(A) as a set of divisor indices of M.
struct DivisorMask {
    Context ctx;
    Mask bits;

    bool contains(Int d) const;
    std::vector<Int> values() const;
    bool intersects_properly(const DivisorMask& other) const; // shares a divisor other than M
};

DivisorMask div_set(const TileSet& A);

// {ra mod M}; throws CollapseError when two elements collide.
TileSet dilate(const TileSet& A, Int r);

struct TijdemanReport {
    bool ok = true;
    std::size_t dilations_checked = 0;
    std::vector<Int> collapses; // r with |rA| < |A|
    std::vector<Int> failures;  // r with rA a set but rA ⊕ B not a tiling
};
// All r in [1, M) with gcd(r, |A|) = 1.
TijdemanReport tijdeman_orbit_report(const Tiling& T);
bool tijdeman_orbit_check(const Tiling& T);

struct IsometryTable {
    Context ctx;
    std::vector<Int> image;

    Int operator()(Int x) const { return image[ctx->reduce(x)]; }
    bool bijective() const;
    TileSet apply(const TileSet& A) const;
    // (this ∘ first)(x) = this(first(x))
    IsometryTable after(const IsometryTable& first) const;
};

IsometryTable identity_map(const Context& ctx);
IsometryTable translation_map(const Context& ctx, Int c);
IsometryTable dilation_map(const Context& ctx, Int r);
// Ex(c, c', p_nu^alpha); requires (c - c', M) = M_nu p_nu^{alpha-1}.
IsometryTable plane_exchange(const Context& ctx, Int c, Int c2, int nu, int alpha);
bool is_divisor_isometry(const IsometryTable& psi);

// {r ∈ R : r x = x'}; requires (x, M) = (x', M).
std::vector<Int> dilation_stabilizer(const Context& ctx, Int x, Int x2);

struct DilationTarget {
    int direction;
    Int x;
    Int image;
};
// r ∈ R with r x_ν = x'_ν for each target.
Int simultaneous_dilation(const Context& ctx, const std::vector<DilationTarget>& targets);

struct ComplementOptions {
    bool normalize = true;
    bool divisor_pruning = true;
    std::size_t limit = 0; // 0: unlimited
};
std::vector<TileSet> find_complements(const TileSet& A, const ComplementOptions& opts = {});
std::vector<TileSet> find_complements(const TileSet& A, bool normalize);

struct EnumerateOptions {
    bool normalize = true;
    unsigned jobs = 1;
    bool divisor_pruning = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<Int> size_of_A; // restrict to |A| = value
    std::uint64_t limit = 0;       // stop after this many tilings; 0: unlimited
};

struct EnumerationStats {
    std::uint64_t tilings = 0;
    bool complete = true;
};

// Visitors may be called concurrently from different workers when jobs > 1.
using RawTilingVisitor = std::function<void(std::span<const Int> A, std::span<const Int> B, unsigned worker)>;
using TilingVisitor = std::function<void(const Tiling& T, unsigned worker)>;

EnumerationStats for_each_tiling_raw(const Context& ctx, const EnumerateOptions& opts, const RawTilingVisitor& visit);
EnumerationStats for_each_tiling(const Context& ctx, const EnumerateOptions& opts, const TilingVisitor& visit);
// Materialized, sorted lexicographically on A then B.
std::vector<Tiling> enumerate_tilings(const Context& ctx, bool normalize);

} // namespace tilelab
