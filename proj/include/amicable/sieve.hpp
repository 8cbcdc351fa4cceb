#pragma once

#include <cstdint>
#include <vector>

#include "amicable/pair_record.hpp"

namespace amicable {

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kMaxTableLimit = 1'000'000'000;

// Worker count from AMICABLE_WORKERS, else hardware concurrency (at least 1).
unsigned default_workers();

struct SieveConfig {
    std::uint64_t limit = 2;
    std::uint64_t segment_size = kDefaultSegmentSize;
    unsigned workers = default_workers();
    // Also report pairs whose larger member exceeds limit.
    bool cross_limit = false;

    void validate() const;
};

struct SieveResult {
    std::vector<PairRecord> pairs;         // sorted by smaller member
    std::vector<std::uint64_t> perfect;    // s(n) = n, reported separately
};

// s(n) for n in [lo, hi], by divisor marking over internal segments.
std::vector<std::uint64_t> aliquot_table(std::uint64_t lo, std::uint64_t hi);

SieveResult find_amicable_pairs(const SieveConfig& config);

// Number of members of amicable pairs that are <= x; partners may exceed x.
std::uint64_t count_amicable(std::uint64_t x, unsigned workers = default_workers());

// x * exp(-sqrt(ln x * ln ln x)), x >= 16.
double pomerance_bound(std::uint64_t x);

} // namespace amicable
