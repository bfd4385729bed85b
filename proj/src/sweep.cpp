#include "tilelab/sweep.hpp"

#include "tilelab/cyclotomic.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/reduction.hpp"
#include "tilelab/splitting.hpp"
#include "tilelab/structure.hpp"

#include <boost/algorithm/string.hpp>

#include <algorithm>
#include <mutex>
#include <random>
#include <sstream>
#include <unordered_map>

namespace tilelab {

namespace {

const std::vector<std::pair<std::string, unsigned>>& family_table()
{
    static const std::vector<std::pair<std::string, unsigned>> t = {
        {"criteria", kCriteria},   {"parity", kParity},
        {"containment", kContainment}, {"translate", kTranslate},
        {"sigma", kSigma},         {"intersections", kIntersections},
        {"slab", kSlab},           {"splittingslab", kSplittingSlab},
        {"implications", kImplications}, {"tijdeman", kTijdeman},
        {"box", kBoxProduct},      {"grid", kGrid},
        {"t1t2", kT1T2},           {"pipeline", kPipeline},
    };
    return t;
}

enum Counter : int {
    cCriteria,
    cNoUpgrades,
    cContainment,
    cTranslate,
    cDisjSigma,
    cLocalDist,
    cAunif,
    cAunifConverse,
    cIntersections,
    cIntersectionsPlus,
    cSlab,
    cSplittingSlab,
    cSlabcor,
    cPlaneBound,
    cBlowbound,
    cTijdeman,
    cBox,
    cAssumptionF,
    cFiberbasic,
    cTwoDir,
    cConsistency3,
    cConsistentSplitting,
    cSplittingWithout2and2,
    cT1,
    cT2,
    cThreePrimeTiles,
    cPipeline,
    cCount
};

const char* counter_name(int c)
{
    static const char* names[] = {"criteria_agree",
                                  "parity_totality",
                                  "parity_containment",
                                  "translate_splitting",
                                  "disjoint_sigma",
                                  "local_distribution",
                                  "aunif",
                                  "aunif_converse_candidate",
                                  "intersections",
                                  "intersections_plus",
                                  "slab_equivalence",
                                  "splittingslab_equivalence",
                                  "slabcor",
                                  "plane_bound",
                                  "blowbound",
                                  "tijdeman_orbit",
                                  "box_product",
                                  "assumption_F",
                                  "fiberbasic",
                                  "two_directions",
                                  "consistency3",
                                  "consistent_splitting",
                                  "uniform_without_2and2",
                                  "T1",
                                  "T2",
                                  "three_prime_cardinality",
                                  "t2_pipeline"};
    return names[c];
}

unsigned counter_family(int c)
{
    switch (c) {
    case cCriteria:
        return kCriteria;
    case cNoUpgrades:
        return kParity;
    case cContainment:
        return kContainment;
    case cTranslate:
        return kTranslate;
    case cDisjSigma:
    case cLocalDist:
    case cAunif:
    case cAunifConverse:
        return kSigma;
    case cIntersections:
    case cIntersectionsPlus:
        return kIntersections;
    case cSlab:
        return kSlab;
    case cSplittingSlab:
        return kSplittingSlab;
    case cSlabcor:
    case cPlaneBound:
    case cBlowbound:
        return kImplications;
    case cTijdeman:
        return kTijdeman;
    case cBox:
        return kBoxProduct;
    case cT1:
    case cT2:
    case cThreePrimeTiles:
        return kT1T2;
    case cPipeline:
        return kPipeline;
    default:
        return kGrid;
    }
}

bool log_only(int c)
{
    return c == cAunifConverse || c == cSplittingWithout2and2 || c == cThreePrimeTiles || c == cAssumptionF;
}

} // namespace

unsigned parse_families(const std::string& spec)
{
    if (spec == "lemmas")
        return kLemmaFamilies;
    if (spec == "t2")
        return kT2Families;
    if (spec == "all")
        return kLemmaFamilies | kT2Families;
    std::vector<std::string> parts;
    boost::split(parts, spec, boost::is_any_of(","));
    unsigned out = 0;
    for (auto& part : parts) {
        boost::trim(part);
        auto it = std::find_if(family_table().begin(), family_table().end(),
                               [&](const auto& e) { return e.first == part; });
        if (it == family_table().end())
            throw InvalidInput("unknown check family \"" + part + "\"");
        out |= it->second;
    }
    return out;
}

std::vector<std::string> family_names()
{
    std::vector<std::string> v;
    for (const auto& e : family_table())
        v.push_back(e.first);
    return v;
}

const CheckCounter& SweepSummary::counter(const std::string& name) const
{
    for (const auto& c : counters)
        if (c.name == name)
            return c;
    throw InvalidInput("no counter named " + name);
}

std::uint64_t SweepSummary::total_violations() const
{
    std::uint64_t n = 0;
    for (const auto& c : counters)
        n += c.violations;
    return n;
}

struct TilingChecker::Impl {
    Context ctx;
    SweepOptions opts;
    std::mt19937_64 rng;
    std::uint64_t tilings = 0;
    std::vector<CheckCounter> counters;
    std::vector<ViolationRecord> records;
    std::vector<Int> owner_a, owner_b;
    std::optional<BoxProductKernel> kernel;
    std::vector<Int> a_counts, b_counts;

    Impl(const Context& c, const SweepOptions& o, unsigned worker)
        : ctx(c), opts(o), rng(o.seed * 0x9E3779B97F4A7C15ull + worker), counters(cCount)
    {
        for (int k = 0; k < cCount; ++k) {
            counters[k].name = counter_name(k);
            counters[k].log_only = log_only(k);
        }
        if (opts.families & kBoxProduct)
            kernel.emplace(*ctx);
    }

    void violation(int c, const Tiling& T, std::string detail)
    {
        ++counters[c].violations;
        if (records.size() < opts.max_records)
            records.push_back({counter_name(c), to_json(T), std::move(detail)});
    }

    // Evaluates one check; exceptions from broken invariants become violations.
    template <class F>
    void guard(int c, const Tiling& T, F&& f)
    {
        try {
            f();
        } catch (const InvariantViolation& e) {
            violation(c, T, e.what());
        } catch (const PreconditionFailed&) {
        } catch (const NotFibered&) {
        } catch (const Error& e) {
            violation(c, T, std::string("error: ") + e.what());
        }
    }

    void tally(int c, const CheckResult& r, const Tiling& T)
    {
        ++counters[c].checked;
        if (!r.applicable())
            return;
        ++counters[c].applicable;
        if (r.holds())
            ++counters[c].holds;
        else
            violation(c, T, r.detail);
    }

    void tally(int c, bool applicable, bool ok, const Tiling& T, const std::string& detail)
    {
        tally(c, !applicable ? CheckResult::not_applicable("") : ok ? CheckResult::ok() : CheckResult::violation(detail),
              T);
    }

    void run(const Tiling& T);
    void criteria(const Tiling& T);
    void parity(const Tiling& T);
    void sigma(const Tiling& T);
    void intersections(const Tiling& T);
    void slab(const Tiling& T);
    void implications(const Tiling& T);
    void box(const Tiling& T);
    void grid(const Tiling& T);
    void t1t2(const Tiling& T);
    void pipeline(const Tiling& T);
};

void TilingChecker::Impl::run(const Tiling& T)
{
    ++tilings;
    const unsigned f = opts.families;
    if (f & kCriteria)
        criteria(T);
    if (f & (kParity | kContainment | kTranslate))
        parity(T);
    if (f & kSigma)
        sigma(T);
    if (f & kIntersections)
        intersections(T);
    if (f & (kSlab | kSplittingSlab))
        slab(T);
    if (f & kImplications)
        implications(T);
    if (f & kTijdeman)
        guard(cTijdeman, T, [&] {
            TijdemanReport rep = tijdeman_orbit_report(T);
            std::string detail;
            if (!rep.collapses.empty())
                detail = "r=" + std::to_string(rep.collapses.front()) + ": rA is a multiset";
            else if (!rep.failures.empty())
                detail = "r=" + std::to_string(rep.failures.front()) + ": rA ⊕ B is not a tiling";
            tally(cTijdeman, true, rep.ok, T, detail);
        });
    if (f & kBoxProduct)
        box(T);
    if (f & kGrid)
        grid(T);
    if (f & kT1T2)
        t1t2(T);
    if (f & kPipeline)
        pipeline(T);
}

void TilingChecker::Impl::criteria(const Tiling& T)
{
    guard(cCriteria, T, [&] {
        const bool d = verify_direct(T.A(), T.B());
        const bool s = verify_sands(T.A(), T.B());
        const bool c = verify_cyclotomic(T.A(), T.B());
        tally(cCriteria, true, d && s && c, T,
              std::string("direct=") + (d ? "1" : "0") + " sands=" + (s ? "1" : "0") + " cyclotomic=" + (c ? "1" : "0"));
    });
}

void TilingChecker::Impl::parity(const Tiling& T)
{
    const ZmContext& c = *ctx;
    const Int M = c.modulus();
    owner_a.resize(static_cast<std::size_t>(M));
    owner_b.resize(static_cast<std::size_t>(M));
    for (Int z = 0; z < M; ++z) {
        owner_a[z] = T.a_of(z);
        owner_b[z] = T.b_of(z);
    }
    for (int i = 0; i < c.rank(); ++i) {
        const Int step = c.fiber_step(i);
        if (opts.families & kParity)
            for (Int z = 0; z < step; ++z)
                guard(cNoUpgrades, T, [&] {
                    ++counters[cNoUpgrades].checked;
                    ++counters[cNoUpgrades].applicable;
                    fiber_parity_from_owners(c, i, owner_a.data(), owner_b.data(), z);
                    ++counters[cNoUpgrades].holds;
                });
        if (opts.families & kContainment)
            for (Int z = 0; z < step; ++z)
                guard(cContainment, T, [&] {
                    ++counters[cContainment].checked;
                    ++counters[cContainment].applicable;
                    fiber_parity(T, z, i);
                    ++counters[cContainment].holds;
                });
        if (opts.families & kTranslate) {
            const Int shift = std::uniform_int_distribution<Int>(0, M - 1)(rng);
            guard(cTranslate, T, [&] {
                tally(cTranslate, true, check_translate_splitting(T, shift, i), T,
                      "c=" + std::to_string(shift) + ", direction " + std::to_string(i));
            });
        }
    }
}

void TilingChecker::Impl::sigma(const Tiling& T)
{
    const ZmContext& c = *ctx;
    for (int i = 0; i < c.rank(); ++i) {
        const auto& A = T.A().members();
        for (std::size_t u = 0; u < A.size(); ++u)
            for (std::size_t v = u + 1; v < A.size(); ++v)
                if (c.valuation(A[u] - A[v], i) >= c.exponent(i))
                    guard(cDisjSigma, T, [&] { tally(cDisjSigma, check_disjoint_sigma(T, A[u], A[v], i), T); });
        for (Int a0 : A)
            guard(cLocalDist, T, [&] { tally(cLocalDist, check_local_distribution(T, a0, i), T); });
        guard(cAunif, T, [&] { tally(cAunif, check_aunif(T, i), T); });
        guard(cAunifConverse, T, [&] {
            ++counters[cAunifConverse].checked;
            if (aunif_converse_candidate(T, i))
                ++counters[cAunifConverse].applicable;
        });
    }
}

void TilingChecker::Impl::intersections(const Tiling& T)
{
    const ZmContext& c = *ctx;
    for (int i = 0; i < c.rank(); ++i)
        for (int j = 0; j < c.rank(); ++j) {
            if (i == j)
                continue;
            const Int step = c.modulus() / (c.prime(i) * c.prime(j));
            for (Int z = 0; z < step; ++z) {
                if (i < j)
                    guard(cIntersections, T, [&] {
                        ++counters[cIntersections].checked;
                        ++counters[cIntersections].applicable;
                        plane_consistency(T, z, i, j);
                        ++counters[cIntersections].holds;
                    });
                guard(cIntersectionsPlus, T,
                      [&] { tally(cIntersectionsPlus, cross_direction_check(T, z, i, j), T); });
            }
        }
}

void TilingChecker::Impl::slab(const Tiling& T)
{
    const ZmContext& c = *ctx;
    for (int i = 0; i < c.rank(); ++i) {
        if (opts.families & kSlab)
            guard(cSlab, T, [&] {
                ++counters[cSlab].checked;
                if (!divides_mask(c.prime_power(i), T.A()))
                    return;
                ++counters[cSlab].applicable;
                slab_equivalence_check(T, i);
                ++counters[cSlab].holds;
            });
        if (opts.families & kSplittingSlab)
            guard(cSplittingSlab, T, [&] {
                ++counters[cSplittingSlab].checked;
                ++counters[cSplittingSlab].applicable;
                splittingslab_equiv_check(T, i);
                ++counters[cSplittingSlab].holds;
            });
    }
}

void TilingChecker::Impl::implications(const Tiling& T)
{
    const ZmContext& c = *ctx;
    for (int i = 0; i < c.rank(); ++i) {
        guard(cSlabcor, T, [&] {
            Implication r = slabcor_check(T, i);
            tally(cSlabcor, r.applicable, r.implied, T, "");
        });
        guard(cPlaneBound, T, [&] {
            tally(cPlaneBound, true, plane_bound_check(T.B(), i), T,
                  "B exceeds the plane bound in direction " + std::to_string(i));
        });
        guard(cBlowbound, T, [&] {
            Implication r = blowbound_check(T, i);
            tally(cBlowbound, r.applicable, r.implied, T, "");
        });
    }
}

void TilingChecker::Impl::box(const Tiling& T)
{
    guard(cBox, T, [&] {
        const ZmContext& c = *ctx;
        const Int M = c.modulus();
        const std::size_t D = static_cast<std::size_t>(c.divisor_count());
        a_counts.assign(static_cast<std::size_t>(M) * D, 0);
        b_counts.assign(static_cast<std::size_t>(M) * D, 0);
        for (Int x = 0; x < M; ++x) {
            for (Int a : T.A())
                ++a_counts[x * D + c.gcd_index(x - a)];
            for (Int b : T.B())
                ++b_counts[x * D + c.gcd_index(x - b)];
        }
        const Int L = kernel->scale();
        for (Int x = 0; x < M; ++x)
            for (Int y = 0; y < M; ++y) {
                ++counters[cBox].checked;
                ++counters[cBox].applicable;
                const Int v = kernel->scaled(&a_counts[x * D], &b_counts[y * D]);
                if (v == L) {
                    ++counters[cBox].holds;
                } else {
                    ExactRational r(v, L);
                    violation(cBox, T,
                              "⟨𝔸[" + std::to_string(x) + "], 𝔹[" + std::to_string(y) + "]⟩ = "
                                  + std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()));
                }
            }
    });
}

void TilingChecker::Impl::grid(const Tiling& T)
{
    const ZmContext& c = *ctx;
    if (c.rank() != 3 || radical_quotient(c.modulus()) == 1)
        return;
    std::optional<FiberedGridProfile> prof;
    guard(cAssumptionF, T, [&] {
        ++counters[cAssumptionF].checked;
        prof = fibered_grid_profile(T);
        ++counters[cAssumptionF].applicable;
        ++counters[cAssumptionF].holds;
    });
    if (!prof)
        return;
    guard(cFiberbasic, T, [&] { tally(cFiberbasic, fiberbasic_check(*prof, T), T); });
    for (Int z0 = 0; z0 < prof->D; ++z0) {
        guard(cTwoDir, T, [&] {
            ++counters[cTwoDir].checked;
            ++counters[cTwoDir].applicable;
            grid_stratification(*prof, T, z0);
            ++counters[cTwoDir].holds;
        });
        guard(cConsistentSplitting, T, [&] {
            ConsistentSplitting cs = consistent_splitting_check(*prof, T, z0);
            tally(cConsistentSplitting, cs.result, T);
            if (cs.two_directions && !cs.two_and_two) {
                ++counters[cSplittingWithout2and2].checked;
                ++counters[cSplittingWithout2and2].applicable;
                if (cs.uniform)
                    ++counters[cSplittingWithout2and2].holds;
            }
        });
    }
    if (T.is_normalized())
        guard(cConsistency3, T, [&] { tally(cConsistency3, consistency3_check(*prof, T), T); });
}

void TilingChecker::Impl::t1t2(const Tiling& T)
{
    for (const TileSet* S : {&T.A(), &T.B()}) {
        guard(cT1, T, [&] {
            CycloProfile prof = cyclo_profile(*S);
            tally(cT1, true, check_T1(prof), T, "T1 fails for a tile of size " + std::to_string(S->size()));
            tally(cT2, true, check_T2(prof), T, "T2 fails for a tile of size " + std::to_string(S->size()));
            ++counters[cThreePrimeTiles].checked;
            if (prime_factorization(static_cast<Int>(S->size())).size() >= 3)
                ++counters[cThreePrimeTiles].applicable;
        });
    }
}

void TilingChecker::Impl::pipeline(const Tiling& T)
{
    ++counters[cPipeline].checked;
    try {
        T2Certificate cert = prove_t2_largeprime(T);
        ++counters[cPipeline].applicable;
        std::string why;
        if (cert.success && replay_certificate(cert, &why) && cert.t2_A && cert.t2_B)
            ++counters[cPipeline].holds;
        else
            violation(cPipeline, T, why.empty() ? "certificate without T2" : why);
    } catch (const PipelineStuck&) {
    } catch (const InvariantViolation& e) {
        ++counters[cPipeline].applicable;
        violation(cPipeline, T, e.what());
    } catch (const Error& e) {
        violation(cPipeline, T, std::string("error: ") + e.what());
    }
}

TilingChecker::TilingChecker(const Context& ctx, const SweepOptions& opts, unsigned worker)
    : impl_(std::make_unique<Impl>(ctx, opts, worker))
{
}
TilingChecker::~TilingChecker() = default;
TilingChecker::TilingChecker(TilingChecker&&) noexcept = default;

void TilingChecker::run(const Tiling& T)
{
    impl_->run(T);
}

void TilingChecker::merge_into(SweepSummary& out) const
{
    if (out.counters.empty())
        for (int k = 0; k < cCount; ++k)
            if (out.families & counter_family(k)) {
                out.counters.push_back({});
                out.counters.back().name = counter_name(k);
                out.counters.back().log_only = log_only(k);
            }
    for (auto& dst : out.counters)
        for (const auto& src : impl_->counters)
            if (src.name == dst.name) {
                dst.checked += src.checked;
                dst.applicable += src.applicable;
                dst.holds += src.holds;
                dst.violations += src.violations;
            }
    out.violations.insert(out.violations.end(), impl_->records.begin(), impl_->records.end());
}

namespace {

void finish(SweepSummary& s, const SweepOptions& opts, std::chrono::steady_clock::time_point t0)
{
    std::sort(s.violations.begin(), s.violations.end(), [](const ViolationRecord& a, const ViolationRecord& b) {
        return std::tie(a.check, a.tiling, a.detail) < std::tie(b.check, b.tiling, b.detail);
    });
    if (s.violations.size() > opts.max_records)
        s.violations.resize(opts.max_records);
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

SweepSummary run_sweep(const Context& ctx, const SweepOptions& opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned jobs = std::max(1u, opts.jobs);
    std::vector<TilingChecker> workers;
    for (unsigned w = 0; w < jobs; ++w)
        workers.emplace_back(ctx, opts, w);
    EnumerateOptions eo;
    eo.jobs = jobs;
    eo.deadline = opts.deadline;
    eo.limit = opts.limit;
    eo.size_of_A = opts.size_of_A;
    EnumerationStats st = for_each_tiling(ctx, eo, [&](const Tiling& T, unsigned w) { workers[w].run(T); });
    SweepSummary s;
    s.M = ctx->modulus();
    s.families = opts.families;
    s.tilings = st.tilings;
    s.complete = st.complete;
    for (const auto& w : workers)
        w.merge_into(s);
    finish(s, opts, t0);
    return s;
}

SweepSummary run_checks(const Context& ctx, const std::vector<Tiling>& tilings, const SweepOptions& opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    TilingChecker w(ctx, opts, 0);
    SweepSummary s;
    s.M = ctx->modulus();
    s.families = opts.families;
    for (const Tiling& T : tilings) {
        if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
            s.complete = false;
            break;
        }
        w.run(T);
        ++s.tilings;
    }
    w.merge_into(s);
    finish(s, opts, t0);
    return s;
}

Json to_json(const SweepSummary& s)
{
    Json j;
    j["M"] = s.M;
    Json fam = Json::array();
    for (const auto& [name, bit] : family_table())
        if (s.families & bit)
            fam.push_back(name);
    j["families"] = std::move(fam);
    j["tilings"] = s.tilings;
    j["complete"] = s.complete;
    Json checks = Json::array();
    for (const auto& c : s.counters) {
        Json e{{"name", c.name}, {"checked", c.checked}, {"applicable", c.applicable}, {"holds", c.holds}};
        if (c.log_only)
            e["log_only"] = true;
        else
            e["violations"] = c.violations;
        if (!c.log_only && c.applicable == 0)
            e["untested_hypothesis"] = true;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    j["violations"] = Json::array();
    for (const auto& v : s.violations)
        j["violations"].push_back({{"check", v.check}, {"tiling", v.tiling}, {"detail", v.detail}});
    j["total_violations"] = s.total_violations();
    return j;
}

std::string to_text(const SweepSummary& s)
{
    std::ostringstream os;
    os << "M=" << s.M << " tilings=" << s.tilings << (s.complete ? "" : " (incomplete)") << " time=" << s.seconds
       << "s\n";
    for (const auto& c : s.counters) {
        os << "  " << c.name << ": checked " << c.checked << ", applicable " << c.applicable << ", holds " << c.holds;
        if (c.log_only)
            os << " (log only)";
        else
            os << ", violations " << c.violations << (c.applicable == 0 ? " [untested-hypothesis]" : "");
        os << "\n";
    }
    for (const auto& v : s.violations)
        os << "  VIOLATION " << v.check << " " << v.tiling.dump() << ": " << v.detail << "\n";
    os << "total violations: " << s.total_violations() << "\n";
    return os.str();
}

} // namespace tilelab
