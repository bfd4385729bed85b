#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tilelab {

using Int = std::int64_t;
using Mask = boost::dynamic_bitset<std::uint64_t>;

struct PrimePower {
    Int p = 0;
    int n = 0;
    Int q = 1; // p^n
};

class ZmContext;
using Context = std::shared_ptr<const ZmContext>;

struct Residue {
    Int value = 0;
    std::vector<Int> coords;
    Int modulus = 1;

    bool operator==(const Residue&) const = default;
};

// Largest modulus for which the per-residue tables are built.
inline constexpr Int kMaxModulus = Int{1} << 24;

class ZmContext {
public:
    explicit ZmContext(Int M);

    Int modulus() const { return M_; }
    int rank() const { return static_cast<int>(primes_.size()); }
    const std::vector<PrimePower>& primes() const { return primes_; }
    Int prime(int nu) const { return primes_.at(nu).p; }
    int exponent(int nu) const { return primes_.at(nu).n; }
    Int prime_power(int nu) const { return primes_.at(nu).q; }
    // M / p_nu, the step of a fiber in direction nu.
    Int fiber_step(int nu) const { return M_ / primes_.at(nu).p; }
    int direction_of(Int p) const;

    const std::vector<Int>& divisors() const { return divisors_; }
    int divisor_count() const { return static_cast<int>(divisors_.size()); }
    bool is_divisor(Int d) const;
    int divisor_index(Int d) const;
    Int phi(Int d) const { return phi_.at(divisor_index(d)); }
    Int phi_at(int idx) const { return phi_[idx]; }
    // exponent of p_nu in divisor with index idx
    int divisor_exponent(int idx, int nu) const { return div_exp_[idx * primes_.size() + nu]; }

    const std::vector<Int>& crt_basis() const { return basis_; }
    Int crt_basis(int j) const { return basis_.at(j); }

    Int reduce(Int x) const
    {
        Int r = x % M_;
        return r < 0 ? r + M_ : r;
    }
    // (x, M) for any integer x; M when x = 0 mod M.
    Int gcd(Int x) const { return divisors_[gcd_idx_[reduce(x)]]; }
    int gcd_index(Int x) const { return gcd_idx_[reduce(x)]; }
    // v_{p_nu}((x, M)), in [0, n_nu].
    int valuation(Int x, int nu) const { return divisor_exponent(gcd_idx_[reduce(x)], nu); }

    Int coord(Int x, int j) const { return coords_[reduce(x) * primes_.size() + j]; }
    std::span<const Int> coords(Int x) const
    {
        return {coords_.data() + reduce(x) * primes_.size(), primes_.size()};
    }
    Residue residue(Int x) const;
    Residue from_coords(std::span<const Int> coords) const;
    Int value_from_coords(std::span<const Int> coords) const;

    std::string describe() const;

private:
    Int M_;
    std::vector<PrimePower> primes_;
    std::vector<Int> divisors_;
    std::vector<Int> phi_;
    std::vector<int> div_exp_;
    std::vector<Int> basis_;
    std::vector<Int> basis_inv_; // M_j^{-1} mod p_j^{n_j}
    std::vector<int> gcd_idx_;
    std::vector<Int> coords_;
};

Context factorize(Int M);
std::vector<PrimePower> prime_factorization(Int N);
Int radical_quotient(Int N);
Int euler_phi(Int N);
Int ipow(Int base, int exp);

Int gcd_divisor(const ZmContext& ctx, const Residue& x, const Residue& y);

class TileSet {
public:
    TileSet() = default;
    // Members may be given in any order; duplicates and out-of-range values are rejected.
    TileSet(Context ctx, std::vector<Int> members);
    static TileSet from_mask(Context ctx, const Mask& mask);
    static TileSet full(Context ctx);
    static TileSet singleton(Context ctx, Int x);

    const Context& context() const { return ctx_; }
    const ZmContext& ctx() const { return *ctx_; }
    Int modulus() const { return ctx_->modulus(); }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(Int x) const { return mask_.test(static_cast<std::size_t>(ctx_->reduce(x))); }
    const std::vector<Int>& members() const { return members_; }
    const Mask& mask() const { return mask_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }
    Int front() const { return members_.front(); }

    TileSet translated(Int c) const;
    TileSet intersect(const TileSet& other) const;
    bool subset_of(const TileSet& other) const;
    bool disjoint(const TileSet& other) const;

    bool operator==(const TileSet& other) const;
    bool operator<(const TileSet& other) const;

private:
    Context ctx_;
    std::vector<Int> members_;
    Mask mask_;
};

void require_same_context(const TileSet& a, const TileSet& b);

// Λ(x, D) = {y : D | y - x}
TileSet realize_grid(const Context& ctx, Int anchor, Int D);
// x * F_nu = Λ(x, M / p_nu)
TileSet fiber(const Context& ctx, Int x, int nu);
// Π(x, p_nu^alpha) = Λ(x, p_nu^alpha)
TileSet plane(const Context& ctx, Int x, int nu, int alpha);
// ℓ_nu(x) = Λ(x, M_nu)
TileSet line(const Context& ctx, Int x, int nu);

// Least residue of the grid class Λ(x, D).
inline Int grid_anchor(const ZmContext& ctx, Int x, Int D) { return ctx.reduce(x) % D; }
// y ∈ Π(x, p_nu^alpha)
inline bool in_plane(const ZmContext& ctx, Int x, Int y, int nu, int alpha)
{
    return ctx.valuation(y - x, nu) >= alpha;
}

} // namespace tilelab
