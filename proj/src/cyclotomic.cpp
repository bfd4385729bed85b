#include "tilelab/cyclotomic.hpp"

#include "tilelab/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace tilelab {

namespace {

Int checked_add(Int a, Int b)
{
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw InvariantViolation("integer overflow in polynomial arithmetic");
    return r;
}

Int checked_mul(Int a, Int b)
{
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw InvariantViolation("integer overflow in polynomial arithmetic");
    return r;
}

} // namespace

IntPoly IntPoly::monomial(Int coeff, std::size_t degree)
{
    std::vector<Int> c(degree + 1, 0);
    c[degree] = coeff;
    return IntPoly(std::move(c));
}

IntPoly IntPoly::x_pow_minus_one(std::size_t n)
{
    std::vector<Int> c(n + 1, 0);
    c[0] = -1;
    c[n] += 1;
    return IntPoly(std::move(c));
}

void IntPoly::trim()
{
    while (!coeffs.empty() && coeffs.back() == 0)
        coeffs.pop_back();
}

Int IntPoly::value_at_one() const
{
    Int v = 0;
    for (Int c : coeffs)
        v = checked_add(v, c);
    return v;
}

std::string IntPoly::to_string() const
{
    if (coeffs.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        Int c = coeffs[i];
        if (!c)
            continue;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        Int a = c < 0 ? -c : c;
        if (a != 1 || i == 0)
            os << a;
        if (i > 0)
            os << 'X';
        if (i > 1)
            os << '^' << i;
        first = false;
    }
    return os.str();
}

IntPoly operator*(const IntPoly& a, const IntPoly& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<Int> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (!a.coeffs[i])
            continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            c[i + j] = checked_add(c[i + j], checked_mul(a.coeffs[i], b.coeffs[j]));
    }
    return IntPoly(std::move(c));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b)
{
    std::vector<Int> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = checked_add(a.at(i), b.at(i));
    return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b)
{
    std::vector<Int> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = checked_add(a.at(i), -b.at(i));
    return IntPoly(std::move(c));
}

std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& divisor)
{
    if (divisor.is_zero() || divisor.leading() != 1)
        throw InvalidInput("divisor must be monic");
    std::vector<Int> r = a.coeffs;
    const int dd = divisor.degree();
    if (a.degree() < dd)
        return {IntPoly{}, a};
    std::vector<Int> q(static_cast<std::size_t>(a.degree() - dd + 1), 0);
    for (int k = a.degree(); k >= dd; --k) {
        Int lead = r[k];
        if (!lead)
            continue;
        q[k - dd] = lead;
        for (int t = 0; t <= dd; ++t)
            r[k - dd + t] = checked_add(r[k - dd + t], -checked_mul(lead, divisor.coeffs[t]));
    }
    r.resize(static_cast<std::size_t>(dd));
    return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

int moebius(Int n)
{
    int mu = 1;
    for (const auto& pp : prime_factorization(n)) {
        if (pp.n > 1)
            return 0;
        mu = -mu;
    }
    return mu;
}

bool is_prime_power(Int s, Int* base)
{
    if (s < 2)
        return false;
    auto f = prime_factorization(s);
    if (f.size() != 1)
        return false;
    if (base)
        *base = f[0].p;
    return true;
}

namespace {

// Exact quotient N / (X^d - 1); throws when the division is not exact.
IntPoly divide_by_binomial(const IntPoly& N, std::size_t d)
{
    const int n = N.degree();
    if (n < static_cast<int>(d))
        throw InvariantViolation("inexact binomial division");
    std::vector<Int> q(static_cast<std::size_t>(n) - d + 1, 0);
    for (int k = n - static_cast<int>(d); k >= 0; --k) {
        Int above = k + d < q.size() ? q[k + d] : 0;
        q[k] = checked_add(N.coeffs[k + d], above);
    }
    for (std::size_t k = 0; k < d; ++k)
        if (N.at(k) != (k < q.size() ? -q[k] : 0))
            throw InvariantViolation("inexact binomial division");
    return IntPoly(std::move(q));
}

IntPoly build_cyclotomic(Int s)
{
    // Φ_s = Π_{d|s} (X^d - 1)^{μ(s/d)}
    std::vector<Int> up, down;
    for (Int d = 1; d <= s; ++d) {
        if (s % d)
            continue;
        int mu = moebius(s / d);
        if (mu == 1)
            up.push_back(d);
        else if (mu == -1)
            down.push_back(d);
    }
    IntPoly P({1});
    for (Int d : up)
        P = P * IntPoly::x_pow_minus_one(static_cast<std::size_t>(d));
    for (Int d : down)
        P = divide_by_binomial(P, static_cast<std::size_t>(d));
    return P;
}

struct CycloEntry {
    IntPoly poly;
    // rows[e] = X^e mod Φ_s for e in [0, s), flattened with stride φ(s); empty if too large
    std::vector<Int> rows;
    bool rows_ready = false;
};

constexpr Int kRowBudget = Int{1} << 22;

class CycloMemo {
public:
    const CycloEntry& get(Int s)
    {
        {
            std::shared_lock lock(mu_);
            auto it = table_.find(s);
            if (it != table_.end() && it->second->rows_ready)
                return *it->second;
        }
        std::unique_lock lock(mu_);
        auto& slot = table_[s];
        if (!slot) {
            slot = std::make_unique<CycloEntry>();
            slot->poly = build_cyclotomic(s);
        }
        if (!slot->rows_ready) {
            fill_rows(s, *slot);
            slot->rows_ready = true;
        }
        return *slot;
    }

    void insert(Int s, IntPoly p)
    {
        std::unique_lock lock(mu_);
        auto& slot = table_[s];
        if (!slot) {
            slot = std::make_unique<CycloEntry>();
            slot->poly = std::move(p);
        }
    }

    std::map<Int, IntPoly> snapshot()
    {
        std::shared_lock lock(mu_);
        std::map<Int, IntPoly> out;
        for (auto& [s, e] : table_)
            out.emplace(s, e->poly);
        return out;
    }

    std::size_t size()
    {
        std::shared_lock lock(mu_);
        return table_.size();
    }

private:
    static void fill_rows(Int s, CycloEntry& e)
    {
        const int deg = e.poly.degree();
        if (deg < 1 || s * deg > kRowBudget)
            return;
        const std::size_t w = static_cast<std::size_t>(deg);
        e.rows.assign(static_cast<std::size_t>(s) * w, 0);
        std::vector<Int> cur(w, 0);
        cur[0] = 1;
        if (deg == 0)
            return;
        for (Int x = 0; x < s; ++x) {
            std::copy(cur.begin(), cur.end(), e.rows.begin() + x * w);
            // multiply by X and reduce with X^deg = -Σ c_t X^t
            Int top = cur[w - 1];
            for (std::size_t t = w - 1; t > 0; --t)
                cur[t] = cur[t - 1];
            cur[0] = 0;
            if (top)
                for (std::size_t t = 0; t < w; ++t)
                    cur[t] = checked_add(cur[t], -checked_mul(top, e.poly.coeffs[t]));
        }
    }

    std::shared_mutex mu_;
    std::map<Int, std::unique_ptr<CycloEntry>> table_;
};

CycloMemo& memo()
{
    static CycloMemo m;
    return m;
}

} // namespace

const IntPoly& cyclotomic_poly(Int s)
{
    if (s < 1)
        throw InvalidInput("cyclotomic index must be positive");
    return memo().get(s).poly;
}

Int phi_at_one(Int s)
{
    if (s <= 1)
        throw InvalidInput("phi_at_one requires s > 1");
    Int p = 0;
    return is_prime_power(s, &p) ? p : 1;
}

IntPoly mask_polynomial(const TileSet& A)
{
    std::vector<Int> c(static_cast<std::size_t>(A.modulus()), 0);
    for (Int a : A)
        c[a] += 1;
    return IntPoly(std::move(c));
}

IntPoly mask_remainder(Int s, const TileSet& A)
{
    const Int M = A.modulus();
    if (s < 1 || M % s)
        throw InvalidInput(std::to_string(s) + " does not divide " + std::to_string(M));
    const CycloEntry& e = memo().get(s);
    const int deg = e.poly.degree();
    if (deg == 0)
        return {};
    const std::size_t w = static_cast<std::size_t>(deg);
    if (!e.rows.empty()) {
        std::vector<Int> acc(w, 0);
        for (Int a : A) {
            const Int* row = e.rows.data() + (a % s) * w;
            for (std::size_t t = 0; t < w; ++t)
                acc[t] += row[t];
        }
        return IntPoly(std::move(acc));
    }
    // X^s ≡ 1 mod Φ_s, so fold exponents mod s before dividing
    std::vector<Int> folded(static_cast<std::size_t>(s), 0);
    for (Int a : A)
        folded[a % s] += 1;
    return divmod_monic(IntPoly(std::move(folded)), e.poly).second;
}

bool divides_mask(Int s, const TileSet& A)
{
    if (s <= 1)
        throw InvalidInput("divides_mask requires s > 1");
    const Int M = A.modulus();
    if (M % s)
        throw InvalidInput(std::to_string(s) + " does not divide " + std::to_string(M));
    const CycloEntry& e = memo().get(s);
    const std::size_t w = static_cast<std::size_t>(e.poly.degree());
    if (!e.rows.empty()) {
        Int acc[64];
        if (w <= 64) {
            std::fill(acc, acc + w, 0);
            for (Int a : A) {
                const Int* row = e.rows.data() + (a % s) * w;
                for (std::size_t t = 0; t < w; ++t)
                    acc[t] += row[t];
            }
            for (std::size_t t = 0; t < w; ++t)
                if (acc[t])
                    return false;
            return true;
        }
    }
    return mask_remainder(s, A).is_zero();
}

bool CycloProfile::divides(Int s) const
{
    return std::binary_search(divisors_of_mask.begin(), divisors_of_mask.end(), s);
}

CycloProfile cyclo_profile(const TileSet& A)
{
    if (A.empty())
        throw InvalidInput("cyclotomic profile of an empty set");
    CycloProfile p{A, {}, {}};
    for (Int s : A.ctx().divisors()) {
        if (s == 1 || !divides_mask(s, A))
            continue;
        p.divisors_of_mask.push_back(s);
        if (is_prime_power(s))
            p.s_set.push_back(s);
    }
    return p;
}

bool check_T1(const CycloProfile& profile)
{
    Int prod = 1;
    for (Int s : profile.s_set)
        prod *= phi_at_one(s);
    return prod == static_cast<Int>(profile.owner.size());
}

std::vector<Int> T2_witness(const CycloProfile& profile)
{
    // group S_A by prime; choose at most one power per prime
    std::map<Int, std::vector<Int>> by_prime;
    for (Int s : profile.s_set) {
        Int p = 0;
        is_prime_power(s, &p);
        by_prime[p].push_back(s);
    }
    std::vector<std::vector<Int>> groups;
    for (auto& [p, v] : by_prime)
        groups.push_back(v);
    std::vector<Int> chosen;
    std::vector<Int> witness;
    auto rec = [&](auto&& self, std::size_t g, Int prod) -> bool {
        if (g == groups.size()) {
            if (chosen.size() >= 2 && !profile.divides(prod)) {
                witness = chosen;
                return false;
            }
            return true;
        }
        if (!self(self, g + 1, prod))
            return false;
        for (Int s : groups[g]) {
            chosen.push_back(s);
            bool ok = self(self, g + 1, prod * s);
            chosen.pop_back();
            if (!ok)
                return false;
        }
        return true;
    };
    rec(rec, 0, 1);
    return witness;
}

bool check_T2(const CycloProfile& profile)
{
    return T2_witness(profile).empty();
}

bool check_T1(const TileSet& A)
{
    return check_T1(cyclo_profile(A));
}

bool check_T2(const TileSet& A)
{
    return check_T2(cyclo_profile(A));
}

void load_cyclotomic_cache(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        return;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return;
    }
    if (!j.is_object() || !j.contains("cyclotomic"))
        return;
    for (auto& [key, val] : j["cyclotomic"].items()) {
        Int s = std::stoll(key);
        IntPoly p(val.get<std::vector<Int>>());
        if (s < 1 || p.degree() != euler_phi(s) || p.leading() != 1)
            continue;
        memo().insert(s, std::move(p));
    }
}

void save_cyclotomic_cache(const std::string& path)
{
    nlohmann::json j;
    j["cyclotomic"] = nlohmann::json::object();
    for (auto& [s, p] : memo().snapshot())
        j["cyclotomic"][std::to_string(s)] = p.coeffs;
    std::ofstream out(path);
    out << j.dump() << '\n';
}

std::size_t cyclotomic_cache_size()
{
    return memo().size();
}

} // namespace tilelab
