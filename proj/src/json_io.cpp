#include "tilelab/json_io.hpp"

#include "tilelab/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>

namespace tilelab {

Json to_json(const TileSet& S)
{
    return Json(S.members());
}

Json to_json(const Tiling& T)
{
    Json j;
    j["M"] = T.modulus();
    j["A"] = to_json(T.A());
    j["B"] = to_json(T.B());
    return j;
}

Json to_json(const CycloProfile& prof)
{
    Json j;
    j["divisors_of_mask"] = prof.divisors_of_mask;
    j["S"] = prof.s_set;
    j["T1"] = check_T1(prof);
    j["T2"] = check_T2(prof);
    return j;
}

Json to_json(const SplitReport& rep, const ZmContext& ctx)
{
    Json j;
    j["direction"] = rep.p;
    j["index"] = rep.direction;
    j["exponent"] = ctx.exponent(rep.direction);
    Json fibers = Json::array();
    for (const auto& [z, par] : rep.fibers)
        fibers.push_back({{"anchor", z}, {"parity", to_string(par)}});
    j["fibers"] = std::move(fibers);
    j["verdicts"] = {{"uniform_AB", rep.uniform_AB},     {"uniform_BA", rep.uniform_BA},
                     {"A_uniform_AB", rep.A_uniform_AB}, {"A_uniform_BA", rep.A_uniform_BA},
                     {"B_uniform_AB", rep.B_uniform_AB}, {"B_uniform_BA", rep.B_uniform_BA}};
    return j;
}

namespace {

Json condition(const SlabCondition& c)
{
    Json j{{"holds", c.holds}};
    if (!c.witness.empty())
        j["witness"] = c.witness;
    return j;
}

} // namespace

Json to_json(const SlabVerdict& v, const ZmContext& ctx)
{
    return {{"direction", ctx.prime(v.direction)},
            {"index", v.direction},
            {"cond_i", condition(v.cond_i)},
            {"cond_ii", condition(v.cond_ii)},
            {"cond_iii", condition(v.cond_iii)},
            {"agree", v.agree()}};
}

Json to_json(const SplittingSlabVerdict& v, const ZmContext& ctx)
{
    return {{"direction", ctx.prime(v.direction)},
            {"index", v.direction},
            {"I", v.I},
            {"II", v.II},
            {"III", v.III},
            {"agree", v.agree()}};
}

Json to_json(const T2Certificate& cert)
{
    Json j;
    j["input"] = to_json(cert.input);
    j["largeprime"] = cert.largeprime;
    Json steps = Json::array();
    for (const CertificateStep& st : cert.steps) {
        Json s;
        s["kind"] = to_string(st.kind);
        if (st.kind == CertificateStep::Kind::Base) {
            s["primes"] = st.primes;
        } else {
            s["p"] = st.p;
            s["tile"] = st.on_B ? "B" : "A";
            s["shift"] = st.shift;
        }
        s["from"] = st.modulus_from;
        s["to"] = st.modulus_to;
        s["hypothesis"] = st.hypothesis;
        s["A"] = st.A_after;
        s["B"] = st.B_after;
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    j["success"] = cert.success;
    j["t2"] = {{"A", cert.t2_A}, {"B", cert.t2_B}};
    return j;
}

Int modulus_from_json(const Json& j)
{
    if (!j.is_object())
        throw InvalidInput("expected a JSON object");
    if (!j.contains("M"))
        throw InvalidInput("field \"M\": missing");
    const Json& m = j["M"];
    if (!m.is_number_integer())
        throw InvalidInput("field \"M\": expected an integer");
    const Int M = m.get<Int>();
    if (M < 1 || M > kMaxModulus)
        throw InvalidInput("field \"M\": " + std::to_string(M) + " out of range [1, " + std::to_string(kMaxModulus)
                           + "]");
    return M;
}

TileSet tileset_from_json(const Context& ctx, const Json& j, const char* field)
{
    const std::string f = std::string("field \"") + field + "\"";
    if (!j.contains(field))
        throw InvalidInput(f + ": missing");
    const Json& a = j[field];
    if (!a.is_array())
        throw InvalidInput(f + ": expected an array");
    if (a.empty())
        throw InvalidInput(f + ": empty set");
    std::vector<Int> v;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_number_integer())
            throw InvalidInput(f + "[" + std::to_string(k) + "]: expected an integer");
        const Int x = a[k].get<Int>();
        if (x < 0 || x >= ctx->modulus())
            throw InvalidInput(f + "[" + std::to_string(k) + "]: residue " + std::to_string(x) + " out of range [0, "
                               + std::to_string(ctx->modulus()) + ")");
        v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw InvalidInput(f + ": duplicate residue " + std::to_string(*std::adjacent_find(v.begin(), v.end())));
    return TileSet(ctx, std::move(v));
}

std::pair<TileSet, TileSet> tile_pair_from_json(const Json& j)
{
    Context ctx = factorize(modulus_from_json(j));
    return {tileset_from_json(ctx, j, "A"), tileset_from_json(ctx, j, "B")};
}

Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

std::string input_hash(const Json& j)
{
    const std::string s = j.dump();
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    if (EVP_Digest(s.data(), s.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 failed");
    std::string hex;
    char buf[3];
    for (unsigned k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", md[k]);
        hex += buf;
    }
    return hex;
}

} // namespace tilelab
