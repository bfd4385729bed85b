#pragma once

#include "tilelab/json_io.hpp"
#include "tilelab/tiling.hpp"

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tilelab {

enum SweepFamily : unsigned {
    kCriteria = 1u << 0,       // three tiling criteria agree
    kParity = 1u << 1,         // totality of fiber parity
    kContainment = 1u << 2,    // plane containments of Σ-sets under each parity
    kTranslate = 1u << 3,      // parity under translation of A
    kSigma = 1u << 4,          // disjoint Σ_A, local distribution, A-uniform parity
    kIntersections = 1u << 5,  // plane consistency on Λ(z, M/p_i p_j) and its fibered variant
    kSlab = 1u << 6,           // three slab conditions
    kSplittingSlab = 1u << 7,  // (I), (II), (III)
    kImplications = 1u << 8,   // slabcor, plane bound, blowbound
    kTijdeman = 1u << 9,
    kBoxProduct = 1u << 10,    // ⟨𝔸[x], 𝔹[y]⟩ = 1 on Z_M × Z_M
    kGrid = 1u << 11,          // fibered-grid structure for three primes
    kT1T2 = 1u << 12,
    kPipeline = 1u << 13,
};

inline constexpr unsigned kLemmaFamilies = kCriteria | kParity | kContainment | kTranslate | kSigma | kIntersections
                                          | kSlab | kSplittingSlab | kImplications | kTijdeman | kBoxProduct | kGrid;
inline constexpr unsigned kT2Families = kT1T2 | kPipeline;

// "lemmas", "t2", "all" or a comma list of family names.
unsigned parse_families(const std::string& spec);
std::vector<std::string> family_names();

struct SweepOptions {
    unsigned families = kLemmaFamilies;
    unsigned jobs = 1;
    std::uint64_t limit = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<Int> size_of_A;
    std::uint64_t seed = 1;
    std::size_t max_records = 50;
};

struct CheckCounter {
    std::string name;
    std::uint64_t checked = 0;    // evaluations
    std::uint64_t applicable = 0; // hypotheses met
    std::uint64_t holds = 0;
    std::uint64_t violations = 0;
    bool log_only = false;        // observations, never violations
};

struct ViolationRecord {
    std::string check;
    Json tiling;
    std::string detail;
};

struct SweepSummary {
    Int M = 0;
    unsigned families = 0;
    std::uint64_t tilings = 0;
    bool complete = true;
    std::vector<CheckCounter> counters;
    std::vector<ViolationRecord> violations; // sorted, at most max_records
    double seconds = 0;

    const CheckCounter& counter(const std::string& name) const;
    std::uint64_t total_violations() const;
};

// Checks that run on a single tiling; the sweep aggregates them.
class TilingChecker {
public:
    TilingChecker(const Context& ctx, const SweepOptions& opts, unsigned worker);
    ~TilingChecker();
    TilingChecker(TilingChecker&&) noexcept;
    void run(const Tiling& T);
    void merge_into(SweepSummary& out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SweepSummary run_sweep(const Context& ctx, const SweepOptions& opts);
// Same checks over an explicit list of tilings.
SweepSummary run_checks(const Context& ctx, const std::vector<Tiling>& tilings, const SweepOptions& opts);

Json to_json(const SweepSummary& s);
std::string to_text(const SweepSummary& s);

} // namespace tilelab
