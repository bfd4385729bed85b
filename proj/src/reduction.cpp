#include "tilelab/reduction.hpp"

#include "tilelab/cyclotomic.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/splitting.hpp"
#include "tilelab/structure.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace tilelab {

namespace {

void require_direction(const ZmContext& ctx, int i)
{
    if (i < 0 || i >= ctx.rank())
        throw InvalidInput("direction index " + std::to_string(i) + " out of range");
}

Int lower_power(const ZmContext& ctx, int i)
{
    return ctx.prime_power(i) / ctx.prime(i);
}

std::vector<Int> units_of(Int M)
{
    std::vector<Int> out;
    for (Int r = 1; r <= M; ++r)
        if (std::gcd(r % M, M) == 1)
            out.push_back(r % M);
    return out;
}

} // namespace

TileSet slab_subset(const TileSet& A, int i)
{
    const ZmContext& ctx = A.ctx();
    require_direction(ctx, i);
    const Int bound = lower_power(ctx, i);
    std::vector<Int> out;
    for (Int a : A)
        if (ctx.coord(a, i) < bound)
            out.push_back(a);
    return TileSet(A.context(), std::move(out));
}

SlabProjection slab_projection(const Context& ctx, int i)
{
    require_direction(*ctx, i);
    static std::mutex mu;
    static std::map<std::pair<Int, int>, SlabProjection> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(ctx->modulus(), i);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    const Int M = ctx->modulus();
    SlabProjection proj{factorize(M / ctx->prime(i)), std::vector<Int>(static_cast<std::size_t>(M))};
    const ZmContext& tgt = *proj.target;
    std::vector<int> source(static_cast<std::size_t>(tgt.rank()));
    for (int j = 0; j < tgt.rank(); ++j)
        source[j] = ctx->direction_of(tgt.prime(j));
    std::vector<Int> c(static_cast<std::size_t>(tgt.rank()));
    for (Int x = 0; x < M; ++x) {
        for (int j = 0; j < tgt.rank(); ++j)
            c[j] = ctx->coord(x, source[j]) % tgt.prime_power(j);
        proj.image[x] = tgt.value_from_coords(c);
    }
    if (cache.size() > 256)
        cache.clear();
    cache.emplace(key, proj);
    return proj;
}

std::optional<TileSet> project(const SlabProjection& proj, const TileSet& S)
{
    Mask seen(static_cast<std::size_t>(proj.target->modulus()));
    for (Int x : S) {
        const auto y = static_cast<std::size_t>(proj.image[x]);
        if (seen.test(y))
            return std::nullopt;
        seen.set(y);
    }
    return TileSet::from_mask(proj.target, seen);
}

SlabCondition slab_cond_i(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    if (!divides_mask(ctx.prime_power(i), T.A()))
        throw PreconditionFailed("Φ_" + std::to_string(ctx.prime_power(i)) + " does not divide A");
    const Int M = ctx.modulus();
    const SlabProjection proj = slab_projection(T.context(), i);
    const Int M2 = proj.target->modulus();
    auto pb = project(proj, T.B());
    if (!pb)
        return {false, "B does not project injectively"};
    const std::vector<Int>& B2 = pb->members();
    const Int bound = lower_power(ctx, i);
    std::vector<std::uint32_t> stamp(static_cast<std::size_t>(M2), 0);
    std::vector<Int> S;
    for (Int c = 0; c < M; ++c) {
        S.clear();
        for (Int a : T.A()) {
            const Int x = ctx.reduce(a - c);
            if (ctx.coord(x, i) < bound)
                S.push_back(proj.image[x]);
        }
        if (static_cast<Int>(S.size() * B2.size()) != M2)
            return {false, "translate c=" + std::to_string(c) + ": slab has " + std::to_string(S.size()) + " elements"};
        const auto tag = static_cast<std::uint32_t>(c + 1);
        for (Int s : S)
            for (Int b : B2) {
                Int z = s + b;
                if (z >= M2)
                    z -= M2;
                if (stamp[z] == tag)
                    return {false, "translate c=" + std::to_string(c) + ": residue " + std::to_string(z) + " covered twice"};
                stamp[z] = tag;
            }
    }
    return {true, {}};
}

SlabCondition slab_cond_ii(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    DivisorMask dA = div_set(T.A()), dB = div_set(T.B());
    const Int p = ctx.prime(i);
    for (Int m : ctx.divisors()) {
        if (m % ctx.prime_power(i))
            continue;
        if (dA.contains(m) && dB.contains(m / p))
            return {false, "m=" + std::to_string(m)};
    }
    return {true, {}};
}

SlabCondition slab_cond_iii(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    const Int p = ctx.prime(i);
    for (Int d : ctx.divisors()) {
        if (d % ctx.prime_power(i))
            continue;
        if (divides_mask(d, T.A()))
            continue;
        bool all = true;
        Int e = d;
        for (int alpha = 1; alpha <= ctx.exponent(i) && all; ++alpha) {
            e /= p;
            if (e == 1)
                break;
            all = divides_mask(e, T.B());
        }
        if (!all)
            return {false, "d=" + std::to_string(d)};
    }
    return {true, {}};
}

SlabVerdict slab_equivalence_check(const Tiling& T, int i)
{
    SlabVerdict v;
    v.direction = i;
    v.cond_i = slab_cond_i(T, i);
    v.cond_ii = slab_cond_ii(T, i);
    v.cond_iii = slab_cond_iii(T, i);
    if (!v.agree())
        throw EquivalenceViolation("slab conditions disagree in direction " + std::to_string(i) + ": (i)="
                                   + std::to_string(v.cond_i.holds) + " (ii)=" + std::to_string(v.cond_ii.holds)
                                   + " (iii)=" + std::to_string(v.cond_iii.holds));
    return v;
}

namespace {

// Parity (rB, A) of every fiber in direction i, for every unit r.
bool uniform_rB_parity(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    const Int M = ctx.modulus();
    const Int p = ctx.prime(i);
    const Int step = ctx.fiber_step(i);
    const Int q = ctx.prime_power(i), q1 = q / p;
    std::vector<Int> oa(static_cast<std::size_t>(M)), ob(static_cast<std::size_t>(M));
    std::vector<Int> as(static_cast<std::size_t>(p));
    for (Int r : units_of(M)) {
        for (Int b0 : T.B()) {
            const Int b = (r * b0) % M;
            for (Int a : T.A()) {
                Int z = a + b;
                if (z >= M)
                    z -= M;
                oa[z] = a;
                ob[z] = b;
            }
        }
        for (Int z = 0; z < step; ++z) {
            // (rB, A): the rB-summands agree mod p^n, distinct A-summands differ exactly by p^(n-1)
            const Int b0 = ob[z] % q;
            Int x = z;
            for (Int nu = 0; nu < p; ++nu, x += step) {
                if (ob[x] % q != b0)
                    return false;
                as[nu] = oa[x];
            }
            for (Int u = 0; u < p; ++u)
                for (Int v = u + 1; v < p; ++v) {
                    if (as[u] == as[v])
                        continue;
                    const Int d = as[u] > as[v] ? as[u] - as[v] : as[v] - as[u];
                    if (d % q1 != 0 || d % q == 0)
                        return false;
                }
        }
    }
    return true;
}

bool saturating_in_planes(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    const Int step = ctx.fiber_step(i);
    const int n = ctx.exponent(i);
    const int nd = ctx.divisor_count();
    // x - a' with a' ∈ A_{x,b} for some b ∈ B has (x - a', M) ∈ Div(B)
    Mask bad = div_set(T.B()).bits;
    for (int d = 0; d < nd; ++d)
        if (ctx.divisor_exponent(d, i) >= n)
            bad.reset(static_cast<std::size_t>(d));
    if (bad.none())
        return true;
    Mask anchors(static_cast<std::size_t>(step));
    for (Int a : T.A())
        anchors.set(static_cast<std::size_t>(a % step));
    for (auto s = anchors.find_first(); s != Mask::npos; s = anchors.find_next(s))
        for (Int x = static_cast<Int>(s); x < ctx.modulus(); x += step)
            for (Int a2 : T.A())
                if (bad.test(static_cast<std::size_t>(ctx.gcd_index(x - a2))))
                    return false;
    return true;
}

} // namespace

SplittingSlabVerdict splittingslab_conditions(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    SplittingSlabVerdict v;
    v.direction = i;
    v.I = divides_mask(ctx.prime_power(i), T.A()) && slab_cond_ii(T, i).holds;
    v.II = uniform_rB_parity(T, i);
    v.III = saturating_in_planes(T, i);
    return v;
}

bool splittingslab_equiv_check(const Tiling& T, int i)
{
    SplittingSlabVerdict v = splittingslab_conditions(T, i);
    if (!v.agree())
        throw EquivalenceViolation("splitting/slab conditions disagree in direction " + std::to_string(i)
                                   + ": (I)=" + std::to_string(v.I) + " (II)=" + std::to_string(v.II)
                                   + " (III)=" + std::to_string(v.III));
    return v.I;
}

Implication slabcor_check(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    const Int p = ctx.prime(i), q = ctx.prime_power(i), step = ctx.fiber_step(i);
    bool neighbours = std::all_of(T.A().begin(), T.A().end(), [&](Int a) {
        for (Int t = 1; t < p; ++t)
            if (T.A().contains(a + t * step))
                return true;
        return false;
    });
    bool saturated = false;
    const bool phi = divides_mask(q, T.A());
    if (!neighbours && phi) {
        const Int nB = static_cast<Int>(T.B().size());
        const Int want = nB / std::gcd(nB, q);
        std::vector<Int> count(static_cast<std::size_t>(q), 0);
        for (Int b : T.B())
            ++count[b % q];
        saturated = std::all_of(T.B().begin(), T.B().end(), [&](Int b) { return count[b % q] == want; });
    }
    Implication out;
    out.applicable = neighbours || saturated;
    if (!out.applicable)
        return out;
    out.implied = phi && slab_cond_ii(T, i).holds;
    if (!out.implied)
        throw ImplicationViolation("slabcor hypothesis holds in direction " + std::to_string(i)
                                   + " but A fails the slab conditions");
    return out;
}

bool plane_bound_check(const TileSet& B, int i)
{
    const ZmContext& ctx = B.ctx();
    require_direction(ctx, i);
    const Int q = ctx.prime_power(i);
    const Int bound = std::gcd(static_cast<Int>(B.size()), ctx.modulus() / q);
    std::vector<Int> count(static_cast<std::size_t>(q), 0);
    for (Int b : B)
        ++count[b % q];
    return *std::max_element(count.begin(), count.end()) <= bound;
}

Implication blowbound_check(const Tiling& T, int i)
{
    const ZmContext& ctx = T.ctx();
    require_direction(ctx, i);
    const Int p = ctx.prime(i);
    const Int Mi = ctx.modulus() / ctx.prime_power(i);
    Implication out;
    out.applicable = p > std::gcd(static_cast<Int>(T.B().size()), Mi) && !div_set(T.A()).contains(ctx.fiber_step(i));
    if (!out.applicable)
        return out;
    out.implied = split_report(T, i).uniform_AB;
    if (!out.implied)
        throw ImplicationViolation("p_i > (|B|, M_i) and M/p_i ∉ Div(A), yet parity is not uniformly (A,B) in direction "
                                   + std::to_string(i));
    return out;
}

TileSet prime_power_dilate(const TileSet& A, Int p)
{
    if (p < 1)
        throw InvalidInput("dilation factor must be positive");
    return dilate(A, p);
}

bool largeprime_hypothesis(const ZmContext& ctx)
{
    if (ctx.rank() == 0)
        return false;
    const int top = ctx.rank() - 1;
    return ctx.prime(top) > radical_quotient(ctx.modulus() / ctx.prime_power(top));
}

const char* to_string(CertificateStep::Kind k)
{
    switch (k) {
    case CertificateStep::Kind::Slab:
        return "slab";
    case CertificateStep::Kind::PrimeRemoval:
        return "prime_removal";
    case CertificateStep::Kind::Base:
        return "base";
    }
    return "?";
}

namespace {

// Prime removal: t = dilated tile (p ∤ |t|), the other tile restricted to the class j mod p.
std::optional<Tiling> apply_prime_removal(const Tiling& cur, Int p, bool on_B, Int j)
{
    const ZmContext& ctx = cur.ctx();
    const Int M = ctx.modulus();
    const TileSet& t = on_B ? cur.B() : cur.A();
    const TileSet& other = on_B ? cur.A() : cur.B();
    Context next = factorize(M / p);
    std::vector<Int> t2, o2;
    for (Int x : t)
        t2.push_back(x % (M / p));
    for (Int y : other)
        if (y % p == j)
            o2.push_back((y - j) / p);
    std::sort(t2.begin(), t2.end());
    if (std::adjacent_find(t2.begin(), t2.end()) != t2.end())
        return std::nullopt;
    TileSet T2(next, t2), O2(next, o2);
    return on_B ? Tiling::make(O2, T2) : Tiling::make(T2, O2);
}

std::optional<Tiling> apply_slab(const Tiling& cur, Int p, bool on_B, Int shift)
{
    const int i = cur.ctx().direction_of(p);
    const TileSet& Y = on_B ? cur.B() : cur.A();
    const TileSet& X = on_B ? cur.A() : cur.B();
    SlabProjection proj = slab_projection(cur.context(), i);
    auto Y2 = project(proj, slab_subset(Y.translated(-shift), i));
    auto X2 = project(proj, X);
    if (!Y2 || !X2 || Y2->empty())
        return std::nullopt;
    return on_B ? Tiling::make(*X2, *Y2) : Tiling::make(*Y2, *X2);
}

bool slab_ready(const Tiling& YX, int i)
{
    return divides_mask(YX.ctx().prime_power(i), YX.A()) && slab_cond_ii(YX, i).holds;
}

std::string describe_state(const Tiling& cur)
{
    std::string s = "M=" + std::to_string(cur.modulus()) + " A={";
    for (Int a : cur.A())
        s += std::to_string(a) + ",";
    s += "} B={";
    for (Int b : cur.B())
        s += std::to_string(b) + ",";
    return s + "}";
}

} // namespace

bool replay_certificate(const T2Certificate& cert, std::string* why)
{
    auto fail = [&](std::string msg) {
        if (why)
            *why = std::move(msg);
        return false;
    };
    Tiling cur = cert.input;
    if (cert.steps.empty() || cert.steps.back().kind != CertificateStep::Kind::Base)
        return fail("certificate does not end in a base case");
    for (std::size_t k = 0; k < cert.steps.size(); ++k) {
        const CertificateStep& st = cert.steps[k];
        const std::string at = "step " + std::to_string(k) + ": ";
        if (st.modulus_from != cur.modulus())
            return fail(at + "modulus mismatch");
        if (st.kind == CertificateStep::Kind::Base) {
            if (k + 1 != cert.steps.size())
                return fail(at + "base case before the end");
            if (cur.ctx().rank() > 2 || st.primes != cur.ctx().rank())
                return fail(at + "base case with more than two primes");
            if (!check_T2(cur.A()) || !check_T2(cur.B()))
                return fail(at + "T2 fails at the base");
            continue;
        }
        const auto& pr = cur.ctx().primes();
        if (std::none_of(pr.begin(), pr.end(), [&](const PrimePower& pp) { return pp.p == st.p; }))
            return fail(at + "prime does not divide the modulus");
        std::optional<Tiling> next = st.kind == CertificateStep::Kind::Slab
                                         ? apply_slab(cur, st.p, st.on_B, st.shift)
                                         : apply_prime_removal(cur, st.p, st.on_B, st.shift);
        if (!next)
            return fail(at + "reduced sets do not tile Z_" + std::to_string(cur.modulus() / st.p));
        if (next->modulus() != st.modulus_to || next->A().members() != st.A_after
            || next->B().members() != st.B_after)
            return fail(at + "recomputed tiling differs from the recorded one");
        cur = *next;
    }
    return true;
}

T2Certificate prove_t2_largeprime(const Tiling& T)
{
    T2Certificate cert{T, false, {}, false, false, false};
    cert.largeprime = largeprime_hypothesis(T.ctx());
    Tiling cur = T;
    for (;;) {
        const ZmContext& ctx = cur.ctx();
        const Int M = ctx.modulus();
        CertificateStep st;
        st.modulus_from = M;
        if (ctx.rank() <= 2) {
            st.kind = CertificateStep::Kind::Base;
            st.primes = ctx.rank();
            st.modulus_to = M;
            st.hypothesis = "at most two distinct primes; T2 checked directly";
            if (!check_T2(cur.A()) || !check_T2(cur.B()))
                throw LemmaViolation("T2 fails on a tiling with at most two primes: " + describe_state(cur));
            st.A_after = cur.A().members();
            st.B_after = cur.B().members();
            cert.steps.push_back(std::move(st));
            break;
        }
        const Int nA = static_cast<Int>(cur.A().size()), nB = static_cast<Int>(cur.B().size());
        std::optional<Tiling> next;
        for (int i = ctx.rank() - 1; i >= 0 && !next; --i) {
            const Int p = ctx.prime(i);
            if (nA % p == 0 && nB % p == 0)
                continue;
            st.kind = CertificateStep::Kind::PrimeRemoval;
            st.p = p;
            st.on_B = nA % p == 0;
            const TileSet& t = st.on_B ? cur.B() : cur.A();
            const TileSet& other = st.on_B ? cur.A() : cur.B();
            TileSet dil = prime_power_dilate(t, p);
            if (!verify_direct(dil, other))
                throw LemmaViolation("dilation by p=" + std::to_string(p) + " coprime to |t| does not tile: "
                                     + describe_state(cur));
            st.shift = other.front() % p;
            st.hypothesis = "p=" + std::to_string(p) + " does not divide |" + (st.on_B ? "B" : "A")
                            + "|; dilated tile lies in pZ_M";
            next = apply_prime_removal(cur, p, st.on_B, st.shift);
            if (!next)
                throw LemmaViolation("subgroup reduction at p=" + std::to_string(p) + " fails: " + describe_state(cur));
        }
        if (!next) {
            const int i = ctx.rank() - 1;
            const Int p = ctx.prime(i);
            const bool B_free = !div_set(cur.B()).contains(ctx.fiber_step(i));
            // X carries no M/p difference; the slab is taken from the other tile Y
            const bool slab_B = !B_free;
            Tiling YX = slab_B ? cur.swapped() : cur;
            Tiling XY = YX.swapped();
            Implication bb = blowbound_check(XY, i);
            if (bb.applicable) {
                if (!slab_ready(YX, i))
                    throw LemmaViolation("uniform parity from the plane bound but slab conditions fail: "
                                         + describe_state(cur));
                st.hypothesis = std::string("blowbound: p > (|") + (slab_B ? "B" : "A") + "|, M_i) and M/p ∉ Div("
                                + (slab_B ? "A" : "B") + "); slab conditions hold for " + (slab_B ? "B" : "A");
                st.on_B = slab_B;
                st.p = p;
            } else {
                for (int d = ctx.rank() - 1; d >= 0 && st.p == 0; --d)
                    for (bool onB : {false, true}) {
                        Tiling cand = onB ? cur.swapped() : cur;
                        if (slab_ready(cand, d)) {
                            st.p = ctx.prime(d);
                            st.on_B = onB;
                            st.hypothesis = std::string("slab conditions hold directly for ") + (onB ? "B" : "A");
                            break;
                        }
                    }
                if (st.p == 0)
                    throw PipelineStuck("no prime removal, plane bound or slab step applies: " + describe_state(cur));
            }
            st.kind = CertificateStep::Kind::Slab;
            st.shift = (st.on_B ? cur.B() : cur.A()).front();
            next = apply_slab(cur, st.p, st.on_B, st.shift);
            if (!next)
                throw LemmaViolation("slab sets do not tile Z_" + std::to_string(M / st.p) + ": " + describe_state(cur));
        }
        st.modulus_to = next->modulus();
        st.A_after = next->A().members();
        st.B_after = next->B().members();
        cert.steps.push_back(std::move(st));
        cur = *next;
    }
    cert.success = true;
    std::string why;
    if (!replay_certificate(cert, &why))
        throw InvariantViolation("certificate does not replay: " + why);
    cert.t2_A = check_T2(T.A());
    cert.t2_B = check_T2(T.B());
    if (!cert.t2_A || !cert.t2_B)
        throw LemmaViolation("certificate replays but T2 fails on an input tile");
    return cert;
}

} // namespace tilelab
