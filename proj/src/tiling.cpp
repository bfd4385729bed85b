#include "tilelab/tiling.hpp"

#include "tilelab/cyclotomic.hpp"
#include "tilelab/errors.hpp"

#include <algorithm>
#include <numeric>

namespace tilelab {

namespace {

// Fills owner tables; false if some residue is covered twice or not at all.
bool decompose(const TileSet& A, const TileSet& B, std::vector<Int>& oa, std::vector<Int>& ob)
{
    const Int M = A.modulus();
    if (static_cast<Int>(A.size()) * static_cast<Int>(B.size()) != M)
        return false;
    oa.assign(static_cast<std::size_t>(M), -1);
    ob.assign(static_cast<std::size_t>(M), -1);
    for (Int a : A) {
        for (Int b : B) {
            Int z = a + b;
            if (z >= M)
                z -= M;
            if (oa[z] >= 0)
                return false;
            oa[z] = a;
            ob[z] = b;
        }
    }
    return true;
}

} // namespace

Tiling::Tiling(TileSet A, TileSet B, std::vector<Int> oa, std::vector<Int> ob)
    : A_(std::move(A)), B_(std::move(B)), owner_a_(std::move(oa)), owner_b_(std::move(ob))
{
}

Tiling::Tiling(TileSet A, TileSet B) : A_(std::move(A)), B_(std::move(B))
{
    require_same_context(A_, B_);
    if (!decompose(A_, B_, owner_a_, owner_b_))
        throw NotATiling("A + B is not a direct sum covering Z_" + std::to_string(A_.modulus()));
}

std::optional<Tiling> Tiling::make(TileSet A, TileSet B)
{
    require_same_context(A, B);
    std::vector<Int> oa, ob;
    if (!decompose(A, B, oa, ob))
        return std::nullopt;
    return Tiling(std::move(A), std::move(B), std::move(oa), std::move(ob));
}

Tiling Tiling::swapped() const
{
    return Tiling(B_, A_, owner_b_, owner_a_);
}

Tiling Tiling::translated(Int cA, Int cB) const
{
    return Tiling(A_.translated(cA), B_.translated(cB));
}

Tiling Tiling::normalized() const
{
    return translated(-A_.front(), -B_.front());
}

bool verify_direct(const TileSet& A, const TileSet& B)
{
    require_same_context(A, B);
    const Int M = A.modulus();
    if (static_cast<Int>(A.size()) * static_cast<Int>(B.size()) != M)
        return false;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(M), 0);
    for (Int a : A)
        for (Int b : B) {
            Int z = a + b;
            if (z >= M)
                z -= M;
            if (hit[z]++)
                return false;
        }
    return true;
}

bool DivisorMask::contains(Int d) const
{
    if (!ctx->is_divisor(d))
        return false;
    return bits.test(static_cast<std::size_t>(ctx->divisor_index(d)));
}

std::vector<Int> DivisorMask::values() const
{
    std::vector<Int> out;
    for (auto i = bits.find_first(); i != Mask::npos; i = bits.find_next(i))
        out.push_back(ctx->divisors()[i]);
    return out;
}

bool DivisorMask::intersects_properly(const DivisorMask& other) const
{
    Mask common = bits & other.bits;
    common.reset(static_cast<std::size_t>(ctx->divisor_count() - 1));
    return common.any();
}

DivisorMask div_set(const TileSet& A)
{
    if (A.empty())
        throw InvalidInput("Div of an empty set");
    const ZmContext& ctx = A.ctx();
    DivisorMask d{A.context(), Mask(static_cast<std::size_t>(ctx.divisor_count()))};
    const auto& m = A.members();
    d.bits.set(static_cast<std::size_t>(ctx.divisor_count() - 1));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            d.bits.set(static_cast<std::size_t>(ctx.gcd_index(m[j] - m[i])));
    return d;
}

bool verify_sands(const TileSet& A, const TileSet& B)
{
    require_same_context(A, B);
    if (static_cast<Int>(A.size()) * static_cast<Int>(B.size()) != A.modulus())
        return false;
    return !div_set(A).intersects_properly(div_set(B));
}

bool verify_cyclotomic(const TileSet& A, const TileSet& B)
{
    require_same_context(A, B);
    if (static_cast<Int>(A.size()) * static_cast<Int>(B.size()) != A.modulus())
        return false;
    for (Int s : A.ctx().divisors()) {
        if (s == 1)
            continue;
        if (!divides_mask(s, A) && !divides_mask(s, B))
            return false;
    }
    return true;
}

TileSet dilate(const TileSet& A, Int r)
{
    const ZmContext& ctx = A.ctx();
    std::vector<Int> out;
    out.reserve(A.size());
    Mask seen(static_cast<std::size_t>(A.modulus()));
    for (Int a : A) {
        Int x = ctx.reduce((ctx.reduce(r) * a) % A.modulus());
        if (seen.test(x))
            throw CollapseError("dilation by " + std::to_string(r) + " collapses the set");
        seen.set(x);
        out.push_back(x);
    }
    return TileSet(A.context(), std::move(out));
}

TijdemanReport tijdeman_orbit_report(const Tiling& T)
{
    TijdemanReport rep;
    const Int M = T.modulus();
    const Int k = static_cast<Int>(T.A().size());
    for (Int r = 1; r < M; ++r) {
        if (std::gcd(r, k) != 1)
            continue;
        ++rep.dilations_checked;
        try {
            TileSet rA = dilate(T.A(), r);
            if (!verify_direct(rA, T.B())) {
                rep.failures.push_back(r);
                rep.ok = false;
            }
        } catch (const CollapseError&) {
            rep.collapses.push_back(r);
            rep.ok = false;
        }
    }
    return rep;
}

bool tijdeman_orbit_check(const Tiling& T)
{
    return tijdeman_orbit_report(T).ok;
}

bool IsometryTable::bijective() const
{
    const Int M = ctx->modulus();
    if (static_cast<Int>(image.size()) != M)
        return false;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(M), 0);
    for (Int y : image) {
        if (y < 0 || y >= M || seen[y])
            return false;
        seen[y] = 1;
    }
    return true;
}

TileSet IsometryTable::apply(const TileSet& A) const
{
    std::vector<Int> out;
    out.reserve(A.size());
    for (Int a : A)
        out.push_back(image[a]);
    return TileSet(A.context(), std::move(out));
}

IsometryTable IsometryTable::after(const IsometryTable& first) const
{
    IsometryTable out{ctx, std::vector<Int>(image.size())};
    for (std::size_t x = 0; x < image.size(); ++x)
        out.image[x] = image[first.image[x]];
    return out;
}

IsometryTable identity_map(const Context& ctx)
{
    IsometryTable t{ctx, std::vector<Int>(static_cast<std::size_t>(ctx->modulus()))};
    std::iota(t.image.begin(), t.image.end(), Int{0});
    return t;
}

IsometryTable translation_map(const Context& ctx, Int c)
{
    IsometryTable t = identity_map(ctx);
    for (auto& y : t.image)
        y = ctx->reduce(y + c);
    return t;
}

IsometryTable dilation_map(const Context& ctx, Int r)
{
    IsometryTable t = identity_map(ctx);
    const Int rr = ctx->reduce(r);
    for (auto& y : t.image)
        y = (y * rr) % ctx->modulus();
    return t;
}

IsometryTable plane_exchange(const Context& ctx, Int c, Int c2, int nu, int alpha)
{
    if (nu < 0 || nu >= ctx->rank())
        throw InvalidInput("direction index out of range");
    if (alpha < 1 || alpha > ctx->exponent(nu))
        throw InvalidInput("plane exchange needs 0 < alpha <= n_i");
    const Int want = ctx->crt_basis(nu) * ipow(ctx->prime(nu), alpha - 1);
    if (ctx->gcd(c - c2) != want)
        throw InvalidInput("plane exchange needs (c - c', M) = M_i p_i^(alpha-1) = " + std::to_string(want));
    IsometryTable t = identity_map(ctx);
    for (Int x = 0; x < ctx->modulus(); ++x) {
        if (in_plane(*ctx, c, x, nu, alpha))
            t.image[x] = ctx->reduce(x + c2 - c);
        else if (in_plane(*ctx, c2, x, nu, alpha))
            t.image[x] = ctx->reduce(x + c - c2);
    }
    return t;
}

bool is_divisor_isometry(const IsometryTable& psi)
{
    if (!psi.bijective())
        throw InvalidInput("map is not a bijection of Z_M");
    const ZmContext& ctx = *psi.ctx;
    const Int M = ctx.modulus();
    for (Int x = 0; x < M; ++x)
        for (Int y = x + 1; y < M; ++y)
            if (ctx.gcd_index(psi.image[x] - psi.image[y]) != ctx.gcd_index(x - y))
                return false;
    return true;
}

std::vector<Int> dilation_stabilizer(const Context& ctx, Int x, Int x2)
{
    const Int M = ctx->modulus();
    x = ctx->reduce(x);
    x2 = ctx->reduce(x2);
    if (ctx->gcd(x) != ctx->gcd(x2))
        throw InvalidInput("dilation stabilizer needs (x, M) = (x', M)");
    std::vector<Int> out;
    for (Int r = 1; r <= M; ++r) {
        Int rr = r % M;
        if (std::gcd(rr, M) != 1)
            continue;
        if ((rr * x) % M == x2)
            out.push_back(rr);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int simultaneous_dilation(const Context& ctx, const std::vector<DilationTarget>& targets)
{
    const Int M = ctx->modulus();
    // r ≡ r_ν mod p_ν^{α_ν} for every target, solved by CRT over the listed prime powers
    Int modulus = 1, r = 0;
    std::vector<bool> used(static_cast<std::size_t>(ctx->rank()), false);
    for (const auto& t : targets) {
        if (t.direction < 0 || t.direction >= ctx->rank())
            throw InvalidInput("direction index out of range");
        if (used[t.direction])
            throw InvalidInput("two targets in one direction");
        used[t.direction] = true;
        const Int g = ctx->gcd(t.x);
        if (g != ctx->gcd(t.image))
            throw InvalidInput("target pair has different gcds with M");
        const Int p = ctx->prime(t.direction);
        Int q = M / g; // must be p^alpha with alpha >= 1
        Int base = 0;
        if (q == 1 || !is_prime_power(q, &base) || base != p)
            throw InvalidInput("target gcd must be M / p^alpha with alpha >= 1");
        auto stab = dilation_stabilizer(ctx, t.x, t.image);
        if (stab.empty())
            throw InvalidInput("no unit maps x to its image");
        Int rn = stab.front() % q;
        // combine r mod modulus with rn mod q (coprime moduli)
        Int k = 0;
        while ((r + k * modulus) % q != rn)
            ++k;
        r += k * modulus;
        modulus *= q;
    }
    // smallest lift of r mod modulus that is a unit mod M
    for (Int cand = r; cand < M + modulus; cand += modulus) {
        Int c = cand % M;
        if (std::gcd(c, M) != 1)
            continue;
        bool ok = true;
        for (const auto& t : targets)
            ok = ok && (c * ctx->reduce(t.x)) % M == ctx->reduce(t.image);
        if (ok)
            return c;
    }
    throw InvalidInput("no simultaneous dilation exists");
}

} // namespace tilelab
