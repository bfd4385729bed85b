#include "tilelab/structure.hpp"

#include "tilelab/errors.hpp"

#include <numeric>

namespace tilelab {

Int DivisorCounts::total() const
{
    return std::accumulate(counts.begin(), counts.end(), Int{0});
}

DivisorCounts divisor_counts(const TileSet& A, Int x, const std::optional<TileSet>& restriction)
{
    const ZmContext& ctx = A.ctx();
    if (restriction)
        require_same_context(A, *restriction);
    DivisorCounts dc{A, ctx.reduce(x), std::vector<Int>(static_cast<std::size_t>(ctx.divisor_count()), 0)};
    for (Int a : A) {
        if (restriction && !restriction->contains(a))
            continue;
        ++dc.counts[ctx.gcd_index(x - a)];
    }
    return dc;
}

ExactRational box_product(const DivisorCounts& a, const DivisorCounts& b)
{
    require_same_context(a.owner, b.owner);
    const ZmContext& ctx = a.owner.ctx();
    const Int M = ctx.modulus();
    ExactRational sum(0);
    for (int i = 0; i < ctx.divisor_count(); ++i) {
        Int prod = a.counts[i] * b.counts[i];
        if (prod)
            sum += ExactRational(prod, ctx.phi(M / ctx.divisors()[i]));
    }
    return sum;
}

ExactRational box_product(const TileSet& A, const TileSet& B, Int x, Int y)
{
    return box_product(divisor_counts(A, x), divisor_counts(B, y));
}

bool dilation_exists(const ZmContext& ctx, Int u, Int v)
{
    const Int M = ctx.modulus();
    u = ctx.reduce(u);
    v = ctx.reduce(v);
    for (Int r = 0; r < M; ++r) {
        if (std::gcd(r, M) != 1)
            continue;
        if ((r * v) % M == u)
            return true;
    }
    return M == 1;
}

CountIdentity dilation_count_identity(const Tiling& T, Int x, Int y)
{
    const ZmContext& ctx = T.ctx();
    const Int M = ctx.modulus();
    CountIdentity out;
    std::vector<Int> units;
    for (Int r = 0; r < M; ++r)
        if (std::gcd(r, M) == 1)
            units.push_back(r);
    if (M == 1)
        units = {0};
    for (Int a : T.A().members())
        for (Int b : T.B().members()) {
            Int u = ctx.reduce(a - x), v = ctx.reduce(y - b);
            for (Int r : units)
                if ((r * u) % M == v)
                    ++out.lhs;
        }
    auto da = divisor_counts(T.A(), x), db = divisor_counts(T.B(), y);
    const Int phiM = ctx.phi(M);
    for (int i = 0; i < ctx.divisor_count(); ++i)
        out.rhs += phiM / ctx.phi(M / ctx.divisors()[i]) * da.counts[i] * db.counts[i];
    if (out.lhs != out.rhs || out.lhs != phiM)
        throw LemmaViolation("dilation count identity fails at x=" + std::to_string(x) + " y=" + std::to_string(y)
                             + ": lhs=" + std::to_string(out.lhs) + " rhs=" + std::to_string(out.rhs)
                             + " phi(M)=" + std::to_string(phiM));
    return out;
}

namespace {

Mask support(const DivisorCounts& dc)
{
    Mask m(dc.counts.size());
    for (std::size_t i = 0; i < dc.counts.size(); ++i)
        if (dc.counts[i])
            m.set(i);
    return m;
}

} // namespace

std::pair<TileSet, TileSet> saturating_pair_sets(const TileSet& A, const TileSet& B, Int x, Int y)
{
    require_same_context(A, B);
    const ZmContext& ctx = A.ctx();
    Mask sa = support(divisor_counts(A, x)), sb = support(divisor_counts(B, y));
    std::vector<Int> ax, by;
    for (Int a : A)
        if (sb.test(static_cast<std::size_t>(ctx.gcd_index(x - a))))
            ax.push_back(a);
    for (Int b : B)
        if (sa.test(static_cast<std::size_t>(ctx.gcd_index(y - b))))
            by.push_back(b);
    return {TileSet(A.context(), std::move(ax)), TileSet(B.context(), std::move(by))};
}

TileSet saturating_set(const TileSet& A, const TileSet& B, Int x)
{
    require_same_context(A, B);
    const ZmContext& ctx = A.ctx();
    DivisorMask d = div_set(B);
    std::vector<Int> out;
    for (Int a : A)
        if (d.bits.test(static_cast<std::size_t>(ctx.gcd_index(x - a))))
            out.push_back(a);
    return TileSet(A.context(), std::move(out));
}

bool satset_membership(const TileSet& A, const TileSet& B, Int x, Int y, Int a, Int b)
{
    if (!A.contains(a) || !B.contains(b))
        throw InvalidInput("satset membership needs a ∈ A and b ∈ B");
    auto [ax, by] = saturating_pair_sets(A, B, x, y);
    return ax.contains(a) && by.contains(b);
}

bool satset_dilation_equiv(const TileSet& A, const TileSet& B, Int x, Int y, Int a, Int b)
{
    require_same_context(A, B);
    if (!A.contains(a) || !B.contains(b))
        throw InvalidInput("satset equivalence needs a ∈ A and b ∈ B");
    const ZmContext& ctx = A.ctx();
    bool matched = ctx.gcd_index(x - a) == ctx.gcd_index(y - b);
    bool dil = dilation_exists(ctx, x - a, y - b);
    if (matched != dil)
        throw EquivalenceViolation("saturating pair vs dilation disagree at x=" + std::to_string(x)
                                   + " y=" + std::to_string(y) + " a=" + std::to_string(a)
                                   + " b=" + std::to_string(b));
    return matched;
}

BoxProductKernel::BoxProductKernel(const ZmContext& ctx)
{
    const Int M = ctx.modulus();
    for (Int d : ctx.divisors())
        L_ = std::lcm(L_, ctx.phi(d));
    for (Int m : ctx.divisors())
        w_.push_back(L_ / ctx.phi(M / m));
}

Int BoxProductKernel::scaled(const Int* a, const Int* b) const
{
    Int s = 0;
    for (std::size_t i = 0; i < w_.size(); ++i)
        s += w_[i] * a[i] * b[i];
    return s;
}

} // namespace tilelab
