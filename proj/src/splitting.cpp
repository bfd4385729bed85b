#include "tilelab/splitting.hpp"

#include "tilelab/cyclotomic.hpp"
#include "tilelab/errors.hpp"

#include <algorithm>
#include <string>

namespace tilelab {

namespace {

void require_direction(const ZmContext& ctx, int i)
{
    if (i < 0 || i >= ctx.rank())
        throw InvalidInput("direction index " + std::to_string(i) + " out of range");
}

// Σ_A(Z), Σ_B(Z) as masks over Z_M.
std::pair<Mask, Mask> sigma_masks(const Tiling& T, const std::vector<Int>& zone)
{
    const auto M = static_cast<std::size_t>(T.modulus());
    Mask sa(M), sb(M);
    for (Int z : zone) {
        sa.set(static_cast<std::size_t>(T.a_of(z)));
        sb.set(static_cast<std::size_t>(T.b_of(z)));
    }
    return {sa, sb};
}

std::vector<Int> grid_points(const ZmContext& ctx, Int anchor, Int step)
{
    std::vector<Int> out;
    for (Int x = ctx.reduce(anchor) % step; x < ctx.modulus(); x += step)
        out.push_back(x);
    return out;
}

std::vector<Int> members_of(const Mask& m)
{
    std::vector<Int> out;
    for (auto i = m.find_first(); i != Mask::npos; i = m.find_next(i))
        out.push_back(static_cast<Int>(i));
    return out;
}

bool all_in_plane(const ZmContext& ctx, const std::vector<Int>& xs, Int base, int nu, int alpha)
{
    return std::all_of(xs.begin(), xs.end(), [&](Int x) { return in_plane(ctx, base, x, nu, alpha); });
}

std::vector<int> other_directions(int rank, int skip)
{
    std::vector<int> out;
    for (int nu = 0; nu < rank; ++nu)
        if (nu != skip)
            out.push_back(nu);
    return out;
}

} // namespace

const char* to_string(Parity p)
{
    return p == Parity::AB ? "AB" : "BA";
}

SigmaPair sigma_sets(const Tiling& T, const TileSet& Z)
{
    require_same_context(T.A(), Z);
    auto [sa, sb] = sigma_masks(T, Z.members());
    return {Z, TileSet::from_mask(T.context(), sa), TileSet::from_mask(T.context(), sb)};
}

SplitConditions splitting_conditions(const ZmContext& ctx, int i, std::span<const Int> sigma_A,
                                     std::span<const Int> sigma_B)
{
    require_direction(ctx, i);
    const int n = ctx.exponent(i);
    auto collapsed = [&](std::span<const Int> xs) {
        for (std::size_t k = 1; k < xs.size(); ++k)
            if (ctx.valuation(xs[k] - xs[0], i) < n)
                return false;
        return true;
    };
    auto spread = [&](std::span<const Int> xs) {
        for (std::size_t k = 0; k < xs.size(); ++k)
            for (std::size_t l = k + 1; l < xs.size(); ++l)
                if (ctx.reduce(xs[k] - xs[l]) != 0 && ctx.valuation(xs[k] - xs[l], i) != n - 1)
                    return false;
        return true;
    };
    return {collapsed(sigma_A) && spread(sigma_B), collapsed(sigma_B) && spread(sigma_A)};
}

Parity classify_parity(const SplitConditions& c, Int z, int i)
{
    if (c.ab == c.ba)
        throw NeitherParity("fiber at " + std::to_string(z) + " in direction " + std::to_string(i)
                            + (c.ab ? " satisfies both parities" : " splits with neither parity"));
    return c.ab ? Parity::AB : Parity::BA;
}

Parity fiber_parity_from_owners(const ZmContext& ctx, int i, const Int* owner_a, const Int* owner_b, Int z)
{
    const Int p = ctx.prime(i);
    const Int step = ctx.fiber_step(i);
    const Int M = ctx.modulus();
    thread_local std::vector<Int> as, bs;
    as.resize(static_cast<std::size_t>(p));
    bs.resize(static_cast<std::size_t>(p));
    Int x = ctx.reduce(z);
    for (Int nu = 0; nu < p; ++nu) {
        as[nu] = owner_a[x];
        bs[nu] = owner_b[x];
        x += step;
        if (x >= M)
            x -= M;
    }
    return classify_parity(splitting_conditions(ctx, i, as, bs), z, i);
}

Parity fiber_parity(const Tiling& T, Int z, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    auto pts = grid_points(ctx, z, ctx.fiber_step(i));
    auto [sa, sb] = sigma_masks(T, pts);
    auto as = members_of(sa), bs = members_of(sb);
    Parity par = classify_parity(splitting_conditions(ctx, i, as, bs), z, i);
    const int n = ctx.exponent(i);
    if (!all_in_plane(ctx, as, as.front(), i, n - 1) || !all_in_plane(ctx, bs, bs.front(), i, n - 1))
        throw LemmaViolation("fiber at " + std::to_string(z) + ": Σ-sets leave the plane of scale p^(n-1)");
    return par;
}

Parity SplitReport::parity_at(Int z) const
{
    const Int M = static_cast<Int>(fibers.size()) * p;
    Int r = z % M;
    if (r < 0)
        r += M;
    return fibers.at(static_cast<std::size_t>(r % static_cast<Int>(fibers.size()))).second;
}

SplitReport split_report(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    SplitReport rep;
    rep.direction = i;
    rep.p = ctx.prime(i);
    const Int step = ctx.fiber_step(i);
    bool allAB = true, allBA = true;
    for (Int z = 0; z < step; ++z) {
        Parity par = fiber_parity(T, z, i);
        rep.fibers.emplace_back(z, par);
        allAB = allAB && par == Parity::AB;
        allBA = allBA && par == Parity::BA;
    }
    rep.uniform_AB = allAB;
    rep.uniform_BA = allBA;
    auto restricted = [&](const TileSet& S, Parity want) {
        return std::all_of(S.begin(), S.end(), [&](Int x) { return rep.fibers[x % step].second == want; });
    };
    rep.A_uniform_AB = restricted(T.A(), Parity::AB);
    rep.A_uniform_BA = restricted(T.A(), Parity::BA);
    rep.B_uniform_AB = restricted(T.B(), Parity::AB);
    rep.B_uniform_BA = restricted(T.B(), Parity::BA);
    return rep;
}

bool check_translate_splitting(const Tiling& T, Int c, int i)
{
    Tiling moved(T.A().translated(-c), T.B());
    const Int step = T.ctx().fiber_step(i);
    for (Int z = 0; z < step; ++z)
        if (fiber_parity(T, z, i) != fiber_parity(moved, z - c, i))
            return false;
    return true;
}

CheckResult check_disjoint_sigma(const Tiling& T, Int a0, Int a1, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    if (!T.B().contains(0))
        return CheckResult::not_applicable("0 is not in B");
    a0 = ctx.reduce(a0);
    a1 = ctx.reduce(a1);
    if (!T.A().contains(a0) || !T.A().contains(a1) || a0 == a1)
        return CheckResult::not_applicable("need distinct a0, a1 in A");
    if (ctx.valuation(a0 - a1, i) < ctx.exponent(i))
        return CheckResult::not_applicable("a0 - a1 not divisible by p_i^n_i");
    if (fiber_parity(T, a0, i) != Parity::BA || fiber_parity(T, a1, i) != Parity::BA)
        return CheckResult::not_applicable("a fiber does not split with parity (B,A)");
    auto s0 = sigma_sets(T, fiber(T.context(), a0, i)).sigma_A;
    auto s1 = sigma_sets(T, fiber(T.context(), a1, i)).sigma_A;
    auto common = s0.intersect(s1);
    if (!common.empty())
        return CheckResult::violation("Σ_A sets of " + std::to_string(a0) + " and " + std::to_string(a1)
                                      + " share " + std::to_string(common.front()));
    return CheckResult::ok();
}

CheckResult check_local_distribution(const Tiling& T, Int a0, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    if (!T.B().contains(0))
        return CheckResult::not_applicable("0 is not in B");
    a0 = ctx.reduce(a0);
    if (!T.A().contains(a0))
        return CheckResult::not_applicable("a0 is not in A");
    const int n = ctx.exponent(i);
    std::vector<Int> local;
    for (Int a : T.A())
        if (in_plane(ctx, a0, a, i, n - 1))
            local.push_back(a);
    for (Int a : local)
        if (fiber_parity(T, a, i) != Parity::BA)
            return CheckResult::not_applicable("fiber at " + std::to_string(a) + " splits with parity (A,B)");
    auto count_plane = [&](Int x) {
        return std::count_if(T.A().begin(), T.A().end(), [&](Int a) { return in_plane(ctx, x, a, i, n); });
    };
    const auto base = count_plane(a0);
    for (Int nu = 1; nu < ctx.prime(i); ++nu) {
        const auto c = count_plane(a0 + nu * ctx.fiber_step(i));
        if (c != base)
            return CheckResult::violation("plane counts differ at shift " + std::to_string(nu) + ": "
                                          + std::to_string(base) + " vs " + std::to_string(c));
    }
    if (!divides_mask(ctx.prime_power(i), TileSet(T.context(), local)))
        return CheckResult::violation("Φ_" + std::to_string(ctx.prime_power(i))
                                      + " does not divide A ∩ Π(a0, p^(n-1))");
    return CheckResult::ok();
}

CheckResult check_aunif(const Tiling& T, int i)
{
    if (!T.B().contains(0))
        return CheckResult::not_applicable("0 is not in B");
    if (!split_report(T, i).A_uniform_BA)
        return CheckResult::not_applicable("no A-uniform (B,A) parity");
    const Int q = T.ctx().prime_power(i);
    if (!divides_mask(q, T.A()))
        return CheckResult::violation("A-uniform (B,A) parity but Φ_" + std::to_string(q) + " ∤ A");
    return CheckResult::ok();
}

bool aunif_converse_candidate(const Tiling& T, int i)
{
    return divides_mask(T.ctx().prime_power(i), T.A()) && !split_report(T, i).A_uniform_BA;
}

namespace {

struct PlaneGrid {
    std::vector<Int> sigma_A, sigma_B;
};

PlaneGrid plane_grid(const Tiling& T, Int z, int i, int j)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    require_direction(ctx, j);
    if (i == j)
        throw InvalidInput("plane consistency needs two different directions");
    auto pts = grid_points(ctx, z, ctx.modulus() / (ctx.prime(i) * ctx.prime(j)));
    auto [sa, sb] = sigma_masks(T, pts);
    return {members_of(sa), members_of(sb)};
}

} // namespace

int plane_consistency(const Tiling& T, Int z, int i, int j)
{
    const ZmContext& ctx = T.ctx();
    PlaneGrid g = plane_grid(T, z, i, j);
    const Int a = T.a_of(z), b = T.b_of(z);
    for (int nu : {std::min(i, j), std::max(i, j)}) {
        const int alpha = ctx.exponent(nu) - 1;
        if (all_in_plane(ctx, g.sigma_A, a, nu, alpha) && all_in_plane(ctx, g.sigma_B, b, nu, alpha))
            return nu;
    }
    throw LemmaViolation("grid Λ(" + std::to_string(z) + ", M/p_" + std::to_string(i) + "p_" + std::to_string(j)
                         + ") has no consistent direction");
}

CheckResult cross_direction_check(const Tiling& T, Int z, int i, int j)
{
    const ZmContext& ctx = T.ctx();
    PlaneGrid g = plane_grid(T, z, i, j);
    const Int step = ctx.fiber_step(i);
    bool any = false;
    for (Int a0 : g.sigma_A) {
        bool full = true;
        for (Int t = 1; t < ctx.prime(i) && full; ++t)
            full = T.A().contains(a0 + t * step);
        if (!full)
            continue;
        any = true;
        for (Int x : g.sigma_A)
            if (!in_plane(ctx, a0, x, j, ctx.exponent(j) - 1))
                return CheckResult::violation("a0=" + std::to_string(a0) + " spans a fiber but "
                                              + std::to_string(x) + " leaves Π(a0, p_j^(n_j-1))");
    }
    if (!any)
        return CheckResult::not_applicable("no element of Σ_A(Λ) spans a fiber in direction i");
    return CheckResult::ok();
}

int FiberedGridProfile::kappa_of(Int a) const
{
    int k = kappa.at(static_cast<std::size_t>(ctx->reduce(a)));
    if (k < 0)
        throw InvalidInput(std::to_string(a) + " is not in A");
    return k;
}

TileSet FiberedGridProfile::fiber_of(Int a) const
{
    return fiber(ctx, a, kappa_of(a));
}

bool FiberedGridProfile::in_all(Int a) const
{
    return std::all_of(in_fiber.begin(), in_fiber.end(), [&](const TileSet& s) { return s.contains(a); });
}

FiberedGridProfile fibered_grid_profile(const Tiling& T)
{
    const ZmContext& ctx = T.ctx();
    const Int M = ctx.modulus();
    if (ctx.rank() != 3)
        throw PreconditionFailed("fibered grid profile needs exactly three prime factors, M = " + std::to_string(M));
    const Int D = radical_quotient(M);
    if (D == 1)
        throw PreconditionFailed("D(M)=1 degenerate: every D(M)-grid is a single point");
    if (!divides_mask(M, T.A()))
        throw PreconditionFailed("Φ_M does not divide A");
    FiberedGridProfile prof{T.context(), T.A(), D, {}, std::vector<int>(static_cast<std::size_t>(M), -1),
                            std::vector<std::uint8_t>(static_cast<std::size_t>(D), 0)};
    for (int nu = 0; nu < 3; ++nu) {
        std::vector<Int> in;
        for (Int a : T.A()) {
            bool full = true;
            for (Int t = 1; t < ctx.prime(nu) && full; ++t)
                full = T.A().contains(a + t * ctx.fiber_step(nu));
            if (full)
                in.push_back(a);
        }
        prof.in_fiber.emplace_back(T.context(), std::move(in));
    }
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(D), 0);
    for (Int a : T.A())
        seen[a % D] = 1;
    std::fill(prof.grid_dirs.begin(), prof.grid_dirs.end(), std::uint8_t{7});
    for (Int a : T.A())
        for (int nu = 0; nu < 3; ++nu)
            if (!prof.in_fiber[nu].contains(a))
                prof.grid_dirs[a % D] &= static_cast<std::uint8_t>(~(1u << nu));
    for (Int x = 0; x < D; ++x) {
        if (!seen[x]) {
            prof.grid_dirs[x] = 0;
            continue;
        }
        if (prof.grid_dirs[x] == 0)
            throw NotFibered("A ∩ Λ(" + std::to_string(x) + ", " + std::to_string(D)
                             + ") is not a union of fibers in one direction");
    }
    for (Int a : T.A()) {
        const std::uint8_t dirs = prof.grid_dirs[a % D];
        int k = 0;
        while (!(dirs & (1u << k)))
            ++k;
        prof.kappa[a] = k;
    }
    return prof;
}

CheckResult fiberbasic_check(const FiberedGridProfile& prof, const Tiling& T)
{
    const ZmContext& ctx = T.ctx();
    const Int M = ctx.modulus();
    // fiber ids on A: F(a) keyed by its least element and direction
    std::vector<Int> fid(static_cast<std::size_t>(M), -1);
    std::vector<std::vector<Int>> fibers;
    for (Int a : T.A()) {
        const int k = prof.kappa_of(a);
        const Int step = ctx.fiber_step(k);
        const Int key = (a % step) * 3 + k;
        auto pts = grid_points(ctx, a, step);
        for (Int x : pts) {
            if (!T.A().contains(x))
                return CheckResult::violation("F(" + std::to_string(a) + ") is not contained in A");
            if (fid[x] >= 0 && fid[x] != key)
                return CheckResult::violation("fibers F(a) overlap at " + std::to_string(x));
        }
        if (fid[pts.front()] < 0) {
            fibers.push_back(pts);
            for (Int x : pts)
                fid[x] = key;
        }
    }
    std::vector<Int> hit(static_cast<std::size_t>(M), -1);
    Int id = 0;
    for (Int b : T.B())
        for (const auto& f : fibers) {
            for (Int x : f) {
                const Int z = ctx.reduce(x + b);
                if (hit[z] >= 0)
                    return CheckResult::violation("translates b*F(a) overlap at " + std::to_string(z));
                hit[z] = id;
            }
            ++id;
        }
    return CheckResult::ok();
}

Stratification grid_stratification(const FiberedGridProfile& prof, const Tiling& T, Int z0)
{
    const ZmContext& ctx = T.ctx();
    Stratification st;
    st.anchor = ctx.reduce(z0) % prof.D;
    auto pts = grid_points(ctx, z0, prof.D);
    auto sa = members_of(sigma_masks(T, pts).first);
    std::uint8_t used = 0;
    for (Int a : sa)
        used |= static_cast<std::uint8_t>(1u << prof.kappa_of(a));
    for (int nu = 0; nu < 3; ++nu)
        if (used & (1u << nu))
            st.S.push_back(nu);
    const std::string where = "grid Λ(" + std::to_string(st.anchor) + ", D)";
    for (Int a : sa) {
        if (!prof.in_all(a))
            continue;
        st.triple_point = true;
        if (st.S.size() != 1)
            throw LemmaViolation(where + ": " + std::to_string(a)
                                 + " lies in all three fiber sets but κ is not constant on Σ_A");
    }
    if (st.S.size() > 2)
        throw LemmaViolation(where + " is tiled by fibers in three directions");
    if (st.S.size() == 2) {
        st.layer_direction = 3 - st.S[0] - st.S[1];
    } else {
        st.layer_direction = st.S[0] == 0 ? 1 : 0;
    }
    const int k = st.layer_direction;
    auto ij = other_directions(3, k);
    const Int layer_step = ctx.modulus() / (ctx.prime(ij[0]) * ctx.prime(ij[1]));
    for (Int nu = 0; nu < ctx.prime(k); ++nu) {
        const Int zn = ctx.reduce(z0 + nu * ctx.fiber_step(k));
        auto layer = members_of(sigma_masks(T, grid_points(ctx, zn, layer_step)).first);
        int lam = prof.kappa_of(layer.front());
        for (Int a : layer)
            if (prof.kappa_of(a) != lam)
                throw LemmaViolation(where + ": layer " + std::to_string(nu) + " mixes directions");
        st.lambda.push_back(lam);
    }
    return st;
}

CheckResult consistency3_check(const FiberedGridProfile& prof, const Tiling& T, Int a, Int b)
{
    const ZmContext& ctx = T.ctx();
    if (!T.A().contains(a) || !T.B().contains(b))
        return CheckResult::not_applicable("base point is not a decomposition a + b");
    const int i = prof.kappa_of(a);
    auto sa = members_of(sigma_masks(T, grid_points(ctx, a + b, prof.D)).first);
    auto jk = other_directions(3, i);
    auto inside = [&](int l) { return all_in_plane(ctx, sa, a, l, ctx.exponent(l) - 1); };
    if (!inside(jk[0]) && !inside(jk[1]))
        return CheckResult::violation("Σ_A(Λ(" + std::to_string(ctx.reduce(a + b))
                                      + ", D)) fits no plane Π(a, p_l^(n_l-1)), l ≠ κ(a)");
    for (int s = 0; s < 2; ++s) {
        const int j = jk[s], k = jk[1 - s];
        const TileSet &I = prof.in_fiber[i], &J = prof.in_fiber[j];
        bool covered = std::all_of(sa.begin(), sa.end(), [&](Int x) { return I.contains(x) || J.contains(x); });
        bool hitI = std::any_of(sa.begin(), sa.end(), [&](Int x) { return I.contains(x); });
        bool hitJ = std::any_of(sa.begin(), sa.end(), [&](Int x) { return J.contains(x); });
        if (covered && hitI && hitJ && !inside(k))
            return CheckResult::violation("Σ_A(Λ) ⊂ 𝓘 ∪ 𝓙 meets both, but leaves Π(a, p_k^(n_k-1)) for k = "
                                          + std::to_string(k));
    }
    return CheckResult::ok();
}

ConsistentSplitting consistent_splitting_check(const FiberedGridProfile& prof, const Tiling& T, Int z0)
{
    const ZmContext& ctx = T.ctx();
    ConsistentSplitting out;
    Stratification st = grid_stratification(prof, T, z0);
    const int k = st.layer_direction;
    out.two_directions = st.S.size() == 2;
    if (out.two_directions) {
        const auto c0 = std::count(st.lambda.begin(), st.lambda.end(), st.S[0]);
        const auto c1 = std::count(st.lambda.begin(), st.lambda.end(), st.S[1]);
        out.two_and_two = c0 >= 2 && c1 >= 2;
    }
    auto pts = grid_points(ctx, z0, prof.D);
    Parity first = fiber_parity(T, pts.front(), k);
    Int other = -1;
    for (Int z : pts)
        if (fiber_parity(T, z, k) != first) {
            other = z;
            break;
        }
    out.uniform = other < 0;
    if (!out.two_directions || !out.two_and_two) {
        out.result = CheckResult::not_applicable(out.two_directions ? "layer counts below two" : "|S| < 2");
        return out;
    }
    if (!out.uniform)
        throw LemmaViolation("fibers at " + std::to_string(pts.front()) + " and " + std::to_string(other)
                             + " in direction k split with different parities");
    out.result = CheckResult::ok();
    out.parity = first;
    return out;
}

} // namespace tilelab
