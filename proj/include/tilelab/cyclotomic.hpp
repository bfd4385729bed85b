#pragma once

#include "tilelab/zm_core.hpp"

#include <string>
#include <vector>

namespace tilelab {

// Dense integer polynomial, constant term first. The zero polynomial has no coefficients.
struct IntPoly {
    std::vector<Int> coeffs;

    IntPoly() = default;
    explicit IntPoly(std::vector<Int> c) : coeffs(std::move(c)) { trim(); }

    static IntPoly monomial(Int coeff, std::size_t degree);
    // X^n - 1
    static IntPoly x_pow_minus_one(std::size_t n);

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Int leading() const { return coeffs.empty() ? 0 : coeffs.back(); }
    Int at(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }
    Int value_at_one() const;
    void trim();

    bool operator==(const IntPoly&) const = default;
    std::string to_string() const;
};

IntPoly operator*(const IntPoly& a, const IntPoly& b);
IntPoly operator-(const IntPoly& a, const IntPoly& b);
IntPoly operator+(const IntPoly& a, const IntPoly& b);
// Division by a monic polynomial; returns {quotient, remainder}.
std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& divisor);

int moebius(Int n);
// Φ_s, memoized per process.
const IntPoly& cyclotomic_poly(Int s);
Int phi_at_one(Int s);

IntPoly mask_polynomial(const TileSet& A);
// Remainder of A(X) modulo Φ_s, for s | M.
IntPoly mask_remainder(Int s, const TileSet& A);
bool divides_mask(Int s, const TileSet& A);

struct CycloProfile {
    TileSet owner;
    std::vector<Int> divisors_of_mask; // s | M, s > 1, Φ_s | A(X); increasing
    std::vector<Int> s_set;            // prime-power members

    bool divides(Int s) const;
};

CycloProfile cyclo_profile(const TileSet& A);
bool check_T1(const CycloProfile& profile);
bool check_T2(const CycloProfile& profile);
bool check_T1(const TileSet& A);
bool check_T2(const TileSet& A);
// The first prime-power combination whose product is missing, empty if (T2) holds.
std::vector<Int> T2_witness(const CycloProfile& profile);

bool is_prime_power(Int s, Int* base = nullptr);

// Optional persistence of the cyclotomic memo as a JSON file.
void load_cyclotomic_cache(const std::string& path);
void save_cyclotomic_cache(const std::string& path);
std::size_t cyclotomic_cache_size();

} // namespace tilelab
