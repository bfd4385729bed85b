#include "tilelab/cyclotomic.hpp"
#include "tilelab/errors.hpp"
#include "tilelab/json_io.hpp"
#include "tilelab/reduction.hpp"
#include "tilelab/splitting.hpp"
#include "tilelab/structure.hpp"
#include "tilelab/sweep.hpp"
#include "tilelab/tiling.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace tilelab;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInputError = 2, kInternal = 3 };

struct Global {
    std::string format = "json";
    bool normalize = false;
    unsigned jobs = 1;
    std::uint64_t limit = 0;
};

std::string read_input(const std::string& arg)
{
    if (!arg.empty() && arg.front() == '{')
        return arg;
    std::ostringstream ss;
    if (arg == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(arg);
    if (!in)
        throw InvalidInput("cannot read " + arg);
    ss << in.rdbuf();
    return ss.str();
}

void render_text(std::ostream& os, const Json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        const std::string key = j.is_object() ? it.key() : "-";
        if (v.is_object() || (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array()))) {
            os << pad << key << ":\n";
            render_text(os, v, indent + 1);
        } else {
            os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

void emit(const Global& g, const Json& j)
{
    if (g.format == "text")
        render_text(std::cout, j, 0);
    else
        std::cout << j.dump(2) << "\n";
}

Json report_header(const std::string& command, const Json& input)
{
    Json r;
    r["command"] = command;
    r["input_hash"] = input_hash(input);
    r["input"] = input;
    return r;
}

Json verification(const TileSet& A, const TileSet& B)
{
    const bool d = verify_direct(A, B), s = verify_sands(A, B), c = verify_cyclotomic(A, B);
    return {{"operation", "verify_direct/verify_sands/verify_cyclotomic"},
            {"direct", d},
            {"sands", s},
            {"cyclotomic", c},
            {"agree", d == s && s == c}};
}

std::pair<TileSet, TileSet> load_pair(const std::string& arg, const Global& g, Json& echo)
{
    Json j = parse_json(read_input(arg));
    auto [A, B] = tile_pair_from_json(j);
    if (g.normalize) {
        A = A.translated(-A.front());
        B = B.translated(-B.front());
    }
    echo = {{"M", A.modulus()}, {"A", to_json(A)}, {"B", to_json(B)}};
    return {A, B};
}

int cmd_verify(const std::string& arg, const Global& g)
{
    Json echo;
    auto [A, B] = load_pair(arg, g, echo);
    Json r = report_header("verify", echo);
    r["verification"] = verification(A, B);
    emit(g, r);
    if (!r["verification"]["agree"].get<bool>())
        return kInternal;
    return r["verification"]["direct"].get<bool>() ? kOk : kNegative;
}

int cmd_analyze(const std::string& arg, bool split, bool slab, bool boxgrid, const Global& g)
{
    Json echo;
    auto [A, B] = load_pair(arg, g, echo);
    Json r = report_header("analyze", echo);
    r["verification"] = verification(A, B);
    auto T0 = Tiling::make(A, B);
    if (!T0) {
        r["error"] = "not a tiling; analysis refused";
        emit(g, r);
        return kNegative;
    }
    const Tiling& T = *T0;
    const ZmContext& ctx = T.ctx();
    r["cyclo"] = {{"operation", "cyclo_profile"}, {"A", to_json(cyclo_profile(A))}, {"B", to_json(cyclo_profile(B))}};
    if (split) {
        Json s = Json::array();
        for (int i = 0; i < ctx.rank(); ++i)
            s.push_back(to_json(split_report(T, i), ctx));
        r["split"] = {{"operation", "split_report"}, {"directions", s}};
    }
    if (slab) {
        Json s = Json::array();
        for (int i = 0; i < ctx.rank(); ++i) {
            Json d;
            if (divides_mask(ctx.prime_power(i), A))
                d["subtile"] = to_json(slab_equivalence_check(T, i), ctx);
            else
                d["subtile"] = {{"direction", ctx.prime(i)},
                                {"index", i},
                                {"applicable", false},
                                {"reason", "Φ_" + std::to_string(ctx.prime_power(i)) + " does not divide A"}};
            SplittingSlabVerdict v = splittingslab_conditions(T, i);
            if (!v.agree())
                throw EquivalenceViolation("(I), (II), (III) disagree in direction " + std::to_string(i));
            d["splittingslab"] = to_json(v, ctx);
            d["slab_subset"] = to_json(slab_subset(A, i));
            s.push_back(std::move(d));
        }
        r["slab"] = {{"operation", "slab_equivalence_check/splittingslab_conditions"}, {"directions", s}};
    }
    if (boxgrid) {
        const Int M = ctx.modulus();
        std::uint64_t ones = 0;
        Json bad = Json::array();
        for (Int x = 0; x < M; ++x) {
            DivisorCounts ca = divisor_counts(A, x);
            for (Int y = 0; y < M; ++y) {
                ExactRational v = box_product(ca, divisor_counts(B, y));
                if (v == ExactRational(1))
                    ++ones;
                else if (bad.size() < 10)
                    bad.push_back({{"x", x},
                                   {"y", y},
                                   {"value", std::to_string(v.numerator()) + "/" + std::to_string(v.denominator())}});
            }
        }
        const std::uint64_t pairs = static_cast<std::uint64_t>(M) * static_cast<std::uint64_t>(M);
        r["boxgrid"] = {{"operation", "box_product"},
                        {"pairs", pairs},
                        {"equal_to_one", ones},
                        {"summary", ones == pairs ? "all " + std::to_string(pairs) + " products = 1"
                                                  : std::to_string(pairs - ones) + " products differ from 1"},
                        {"failures", bad}};
        if (ones != pairs) {
            emit(g, r);
            return kInternal;
        }
    }
    emit(g, r);
    return kOk;
}

int cmd_complements(const std::string& arg, const Global& g)
{
    Json j = parse_json(read_input(arg));
    Context ctx = factorize(modulus_from_json(j));
    TileSet A = tileset_from_json(ctx, j, "A");
    ComplementOptions o;
    o.normalize = g.normalize;
    o.limit = static_cast<std::size_t>(g.limit);
    auto found = find_complements(A, o);
    if (g.format == "text") {
        for (const TileSet& B : found) {
            for (std::size_t k = 0; k < B.size(); ++k)
                std::cout << (k ? " " : "") << B.members()[k];
            std::cout << "\n";
        }
    } else {
        for (const TileSet& B : found)
            std::cout << Json{{"B", to_json(B)}}.dump() << "\n";
    }
    return found.empty() ? kNegative : kOk;
}

int cmd_sweep(Int M, const std::string& check, double seconds, std::uint64_t seed, const Global& g)
{
    if (M < 1 || M > kMaxModulus)
        throw InvalidInput("M out of range");
    SweepOptions o;
    o.families = parse_families(check);
    o.jobs = g.jobs;
    o.limit = g.limit;
    o.seed = seed;
    if (seconds > 0)
        o.deadline = std::chrono::steady_clock::now()
                     + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(seconds));
    SweepSummary s = run_sweep(factorize(M), o);
    if (g.format == "text") {
        std::cout << to_text(s);
    } else {
        Json echo{{"M", M}, {"check", check}, {"limit", g.limit}, {"seed", seed}};
        Json r = report_header("sweep", echo);
        r["summary"] = to_json(s);
        std::cout << r.dump(2) << "\n";
    }
    return s.total_violations() == 0 ? kOk : kInternal;
}

int cmd_prove(const std::string& arg, const Global& g)
{
    Json echo;
    auto [A, B] = load_pair(arg, g, echo);
    auto T = Tiling::make(A, B);
    Json r = report_header("prove", echo);
    if (!T) {
        r["error"] = "not a tiling";
        emit(g, r);
        return kNegative;
    }
    try {
        T2Certificate cert = prove_t2_largeprime(*T);
        std::string why;
        const bool replays = replay_certificate(cert, &why);
        r["certificate"] = to_json(cert);
        r["replayed"] = replays;
        if (!replays)
            r["replay_error"] = why;
        emit(g, r);
        return replays && cert.t2_A && cert.t2_B ? kOk : kNegative;
    } catch (const PipelineStuck& e) {
        r["error"] = e.what();
        r["t2"] = {{"A", check_T2(A)}, {"B", check_T2(B)}};
        emit(g, r);
        return kNegative;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tilings of Z_M: verification, structure and (T2) certificates"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--limit", g.limit, "Stop after this many results (0: no limit)");

    std::string input;
    auto* verify = app.add_subcommand("verify", "Check a tiling by the three criteria");
    verify->add_option("tiling", input, "JSON file, inline JSON or - for stdin")->required();
    verify->add_flag("--normalize", g.normalize, "Translate both sets to contain 0");

    bool split = false, slab = false, boxgrid = false;
    auto* analyze = app.add_subcommand("analyze", "Structural report for a tiling");
    analyze->add_option("tiling", input, "JSON file, inline JSON or - for stdin")->required();
    analyze->add_flag("--split", split, "Fiber splitting parities");
    analyze->add_flag("--slab", slab, "Slab reduction conditions");
    analyze->add_flag("--boxgrid", boxgrid, "Box product on all pairs (x, y)");
    analyze->add_flag("--normalize", g.normalize, "Translate both sets to contain 0");

    bool all_translates = false;
    auto* comp = app.add_subcommand("complements", "All complements B of A in Z_M");
    comp->alias("search");
    comp->add_option("set", input, "JSON {\"M\": .., \"A\": [..]}")->required();
    comp->add_flag("--all-translates", all_translates, "Report every translate instead of those containing 0");

    Int M = 0;
    std::string check = "lemmas";
    double seconds = 0;
    std::uint64_t seed = 1;
    auto* sweep = app.add_subcommand("sweep", "Exhaustive corpus checks");
    sweep->add_option("M", M, "Modulus")->required();
    sweep->add_option("--check", check, "lemmas, t2, all, or a comma list of families");
    sweep->add_option("--time-limit", seconds, "Stop enumerating after this many seconds");
    sweep->add_option("--seed", seed, "Seed for randomized translates");

    auto* prove = app.add_subcommand("prove", "(T2) certificate via the large-prime pipeline");
    prove->add_option("tiling", input, "JSON file, inline JSON or - for stdin")->required();
    prove->add_flag("--normalize", g.normalize, "Translate both sets to contain 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInputError;
    }

    std::string cache;
    if (const char* dir = std::getenv("TILELAB_CACHE_DIR"); dir && *dir) {
        cache = (std::filesystem::path(dir) / "cyclotomic.json").string();
        if (std::filesystem::exists(cache))
            load_cyclotomic_cache(cache);
    }
    int code = kOk;
    try {
        if (*verify)
            code = cmd_verify(input, g);
        else if (*analyze)
            code = cmd_analyze(input, split, slab, boxgrid, g);
        else if (*comp) {
            g.normalize = !all_translates;
            code = cmd_complements(input, g);
        } else if (*sweep)
            code = cmd_sweep(M, check, seconds, seed, g);
        else if (*prove)
            code = cmd_prove(input, g);
    } catch (const InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    if (!cache.empty()) {
        std::filesystem::create_directories(std::filesystem::path(cache).parent_path());
        save_cyclotomic_cache(cache);
    }
    return code;
}
