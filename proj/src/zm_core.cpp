#include "tilelab/zm_core.hpp"

#include "tilelab/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tilelab {

Int ipow(Int base, int exp)
{
    Int r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

std::vector<PrimePower> prime_factorization(Int N)
{
    if (N < 1)
        throw InvalidInput("factorization requires a positive integer, got " + std::to_string(N));
    std::vector<PrimePower> out;
    Int n = N;
    for (Int p = 2; p <= n / p; ++p) {
        if (n % p)
            continue;
        PrimePower pp{p, 0, 1};
        while (n % p == 0) {
            n /= p;
            ++pp.n;
            pp.q *= p;
        }
        out.push_back(pp);
    }
    if (n > 1)
        out.push_back({n, 1, n});
    return out;
}

Int radical_quotient(Int N)
{
    Int r = N;
    for (const auto& pp : prime_factorization(N))
        r /= pp.p;
    return r;
}

Int euler_phi(Int N)
{
    Int r = N;
    for (const auto& pp : prime_factorization(N))
        r = r / pp.p * (pp.p - 1);
    return r;
}

namespace {

Int inverse_mod(Int a, Int m)
{
    Int g = m, x = 0, x1 = 1, a1 = a % m;
    if (a1 < 0)
        a1 += m;
    while (a1) {
        Int q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1)
        throw InvalidInput("no inverse");
    return ((x % m) + m) % m;
}

} // namespace

ZmContext::ZmContext(Int M) : M_(M)
{
    if (M < 1)
        throw InvalidInput("modulus must be positive, got " + std::to_string(M));
    if (M > kMaxModulus)
        throw InvalidInput("modulus " + std::to_string(M) + " exceeds supported size");
    primes_ = prime_factorization(M);
    const std::size_t K = primes_.size();

    // divisors in increasing order, with exponent vectors
    std::vector<std::pair<Int, std::vector<int>>> divs{{1, std::vector<int>(K, 0)}};
    for (std::size_t j = 0; j < K; ++j) {
        std::size_t base = divs.size();
        for (int e = 1; e <= primes_[j].n; ++e) {
            Int pe = ipow(primes_[j].p, e);
            for (std::size_t t = 0; t < base; ++t) {
                auto ex = divs[t].second;
                ex[j] = e;
                divs.emplace_back(divs[t].first * pe, std::move(ex));
            }
        }
    }
    std::sort(divs.begin(), divs.end());
    for (auto& [d, ex] : divs) {
        divisors_.push_back(d);
        Int ph = 1;
        for (std::size_t j = 0; j < K; ++j) {
            div_exp_.push_back(ex[j]);
            if (ex[j] > 0)
                ph *= (primes_[j].p - 1) * ipow(primes_[j].p, ex[j] - 1);
        }
        phi_.push_back(ph);
    }

    for (const auto& pp : primes_) {
        Int Mj = M / pp.q;
        basis_.push_back(Mj);
        basis_inv_.push_back(inverse_mod(Mj % pp.q, pp.q));
    }

    gcd_idx_.resize(static_cast<std::size_t>(M));
    coords_.resize(static_cast<std::size_t>(M) * K);
    for (Int x = 0; x < M; ++x) {
        gcd_idx_[x] = divisor_index(std::gcd(x, M));
        // x = Σ x_j M_j  =>  x_j = x · M_j^{-1} mod p_j^{n_j}
        for (std::size_t j = 0; j < K; ++j)
            coords_[x * K + j] = (x % primes_[j].q) * basis_inv_[j] % primes_[j].q;
    }
}

int ZmContext::direction_of(Int p) const
{
    for (int i = 0; i < rank(); ++i)
        if (primes_[i].p == p)
            return i;
    throw InvalidInput(std::to_string(p) + " is not a prime divisor of " + std::to_string(M_));
}

bool ZmContext::is_divisor(Int d) const
{
    return d >= 1 && d <= M_ && M_ % d == 0;
}

int ZmContext::divisor_index(Int d) const
{
    auto it = std::lower_bound(divisors_.begin(), divisors_.end(), d);
    if (it == divisors_.end() || *it != d)
        throw InvalidInput(std::to_string(d) + " does not divide " + std::to_string(M_));
    return static_cast<int>(it - divisors_.begin());
}

Residue ZmContext::residue(Int x) const
{
    if (x < 0 || x >= M_)
        throw InvalidInput("residue " + std::to_string(x) + " outside [0, " + std::to_string(M_) + ")");
    auto c = coords(x);
    return {x, std::vector<Int>(c.begin(), c.end()), M_};
}

Int ZmContext::value_from_coords(std::span<const Int> c) const
{
    if (c.size() != primes_.size())
        throw InvalidInput("coordinate tuple has wrong length");
    Int v = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] < 0 || c[j] >= primes_[j].q)
            throw InvalidInput("coordinate " + std::to_string(j) + " out of range");
        v = (v + c[j] * basis_[j]) % M_;
    }
    return v;
}

Residue ZmContext::from_coords(std::span<const Int> c) const
{
    return residue(value_from_coords(c));
}

std::string ZmContext::describe() const
{
    std::ostringstream os;
    os << M_ << " =";
    if (primes_.empty())
        os << " 1";
    for (std::size_t j = 0; j < primes_.size(); ++j) {
        os << (j ? " * " : " ") << primes_[j].p;
        if (primes_[j].n > 1)
            os << '^' << primes_[j].n;
    }
    return os.str();
}

Context factorize(Int M)
{
    return std::make_shared<const ZmContext>(M);
}

Int gcd_divisor(const ZmContext& ctx, const Residue& x, const Residue& y)
{
    if (x.modulus != ctx.modulus() || y.modulus != ctx.modulus())
        throw InvalidInput("residues belong to different contexts");
    return ctx.gcd(x.value - y.value);
}

TileSet::TileSet(Context ctx, std::vector<Int> members) : ctx_(std::move(ctx)), members_(std::move(members))
{
    if (!ctx_)
        throw InvalidInput("tile set without context");
    const Int M = ctx_->modulus();
    mask_.resize(static_cast<std::size_t>(M));
    for (Int x : members_) {
        if (x < 0 || x >= M)
            throw InvalidInput("residue " + std::to_string(x) + " outside [0, " + std::to_string(M) + ")");
        if (mask_.test(x))
            throw InvalidInput("duplicate residue " + std::to_string(x));
        mask_.set(x);
    }
    std::sort(members_.begin(), members_.end());
}

TileSet TileSet::from_mask(Context ctx, const Mask& mask)
{
    if (!ctx || mask.size() != static_cast<std::size_t>(ctx->modulus()))
        throw InvalidInput("mask length does not match modulus");
    TileSet t;
    t.ctx_ = std::move(ctx);
    t.mask_ = mask;
    for (auto i = mask.find_first(); i != Mask::npos; i = mask.find_next(i))
        t.members_.push_back(static_cast<Int>(i));
    return t;
}

TileSet TileSet::full(Context ctx)
{
    std::vector<Int> all(static_cast<std::size_t>(ctx->modulus()));
    std::iota(all.begin(), all.end(), Int{0});
    return TileSet(std::move(ctx), std::move(all));
}

TileSet TileSet::singleton(Context ctx, Int x)
{
    return TileSet(std::move(ctx), {x});
}

TileSet TileSet::translated(Int c) const
{
    std::vector<Int> out;
    out.reserve(members_.size());
    for (Int x : members_)
        out.push_back(ctx_->reduce(x + c));
    return TileSet(ctx_, std::move(out));
}

TileSet TileSet::intersect(const TileSet& other) const
{
    require_same_context(*this, other);
    return from_mask(ctx_, mask_ & other.mask_);
}

bool TileSet::subset_of(const TileSet& other) const
{
    require_same_context(*this, other);
    return mask_.is_subset_of(other.mask_);
}

bool TileSet::disjoint(const TileSet& other) const
{
    require_same_context(*this, other);
    return !mask_.intersects(other.mask_);
}

bool TileSet::operator==(const TileSet& other) const
{
    return modulus() == other.modulus() && members_ == other.members_;
}

bool TileSet::operator<(const TileSet& other) const
{
    if (modulus() != other.modulus())
        return modulus() < other.modulus();
    return members_ < other.members_;
}

void require_same_context(const TileSet& a, const TileSet& b)
{
    if (!a.context() || !b.context() || a.modulus() != b.modulus())
        throw InvalidInput("sets belong to different moduli");
}

TileSet realize_grid(const Context& ctx, Int anchor, Int D)
{
    if (!ctx->is_divisor(D))
        throw InvalidInput("grid step " + std::to_string(D) + " does not divide the modulus");
    const Int M = ctx->modulus();
    std::vector<Int> out;
    out.reserve(static_cast<std::size_t>(M / D));
    for (Int x = ctx->reduce(anchor) % D; x < M; x += D)
        out.push_back(x);
    return TileSet(ctx, std::move(out));
}

TileSet fiber(const Context& ctx, Int x, int nu)
{
    if (nu < 0 || nu >= ctx->rank())
        throw InvalidInput("direction index out of range");
    return realize_grid(ctx, x, ctx->fiber_step(nu));
}

TileSet plane(const Context& ctx, Int x, int nu, int alpha)
{
    if (nu < 0 || nu >= ctx->rank())
        throw InvalidInput("direction index out of range");
    if (alpha < 0 || alpha > ctx->exponent(nu))
        throw InvalidInput("plane exponent " + std::to_string(alpha) + " exceeds n_" + std::to_string(nu));
    return realize_grid(ctx, x, ipow(ctx->prime(nu), alpha));
}

TileSet line(const Context& ctx, Int x, int nu)
{
    if (nu < 0 || nu >= ctx->rank())
        throw InvalidInput("direction index out of range");
    return realize_grid(ctx, x, ctx->crt_basis(nu));
}

} // namespace tilelab
