#include "amicable/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <thread>

#include "amicable/arith.hpp"
#include "amicable/errors.hpp"
#include "parallel.hpp"

namespace amicable {
namespace {

using u64 = std::uint64_t;

u64 isqrt(u64 n)
{
    auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

// Writes s(n) for n in [lo, lo + out.size()) into out. Every divisor pair
// (d, n/d) with d <= sqrt(n) is marked once from the small side.
void fill_segment(u64 lo, std::span<u64> out)
{
    const u64 hi = lo + out.size() - 1;
    std::fill(out.begin(), out.end(), u64{0});
    const u64 root = isqrt(hi);
    for (u64 d = 1; d <= root; ++d) {
        u64 start = std::max(d * d, (lo + d - 1) / d * d);
        u64 cofactor = start / d;
        for (u64 n = start; n <= hi; n += d, ++cofactor) {
            out[n - lo] += cofactor == d ? d : d + cofactor;
        }
    }
    for (u64 i = 0; i < out.size(); ++i) {
        out[i] -= lo + i;
    }
}

struct SegmentFindings {
    std::vector<PairRecord> pairs;
    std::vector<u64> perfect;
};

SegmentFindings scan_segment(u64 lo, u64 hi, const SieveConfig& config)
{
    std::vector<u64> table(hi - lo + 1);
    fill_segment(lo, table);
    SegmentFindings found;
    for (u64 m = lo; m <= hi; ++m) {
        const u64 partner = table[m - lo];
        if (partner == m) {
            found.perfect.push_back(m);
            continue;
        }
        if (partner < m || (partner > config.limit && !config.cross_limit)) {
            continue;
        }
        std::optional<u64> back;
        if (partner <= hi) {
            back = table[partner - lo];
        } else {
            back = aliquot_u64(partner);
        }
        if (back && *back == m) {
            found.pairs.push_back({to_natural(m), to_natural(partner), to_natural(m) + partner,
                                   PairSource::sieve});
        }
    }
    return found;
}

} // namespace

unsigned default_workers()
{
    if (const char* env = std::getenv("AMICABLE_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void SieveConfig::validate() const
{
    if (limit < 2) {
        throw DomainError("sieve limit must be at least 2");
    }
    if (limit > kMaxTableLimit) {
        throw DomainError("sieve limit must not exceed 10^9");
    }
    if (segment_size < 2) {
        throw DomainError("segment size must be at least 2");
    }
    if (workers < 1) {
        throw DomainError("worker count must be at least 1");
    }
}

std::vector<std::uint64_t> aliquot_table(std::uint64_t lo, std::uint64_t hi)
{
    if (lo < 1 || lo > hi) {
        throw DomainError("aliquot_table: need 1 <= lo <= hi");
    }
    if (hi > kMaxTableLimit) {
        throw DomainError("aliquot_table: hi must not exceed 10^9");
    }
    std::vector<u64> out(hi - lo + 1);
    for (u64 start = lo; start <= hi; start += kDefaultSegmentSize) {
        const u64 end = std::min(hi, start + kDefaultSegmentSize - 1);
        fill_segment(start, std::span<u64>(out).subspan(start - lo, end - start + 1));
    }
    return out;
}

SieveResult find_amicable_pairs(const SieveConfig& config)
{
    config.validate();
    const u64 segments = (config.limit + config.segment_size - 1) / config.segment_size;
    std::vector<SegmentFindings> per_segment(segments);
    detail::parallel_for(segments, config.workers, [&](std::size_t i) {
        const u64 lo = 1 + i * config.segment_size;
        const u64 hi = std::min(config.limit, lo + config.segment_size - 1);
        per_segment[i] = scan_segment(lo, hi, config);
    });

    SieveResult result;
    for (auto& seg : per_segment) {
        std::move(seg.pairs.begin(), seg.pairs.end(), std::back_inserter(result.pairs));
        result.perfect.insert(result.perfect.end(), seg.perfect.begin(), seg.perfect.end());
    }
    std::sort(result.pairs.begin(), result.pairs.end(),
              [](const PairRecord& a, const PairRecord& b) { return a.smaller < b.smaller; });
    std::sort(result.perfect.begin(), result.perfect.end());
    return result;
}

std::uint64_t count_amicable(std::uint64_t x, unsigned workers)
{
    if (x < 2) {
        return 0;
    }
    SieveConfig config;
    config.limit = x;
    config.workers = workers;
    config.cross_limit = true;
    std::uint64_t members = 0;
    for (const auto& p : find_amicable_pairs(config).pairs) {
        members += 1 + (p.larger <= to_natural(x) ? 1 : 0);
    }
    return members;
}

double pomerance_bound(std::uint64_t x)
{
    if (x < 16) {
        throw DomainError("pomerance_bound: x must be at least 16");
    }
    const double lx = std::log(static_cast<double>(x));
    return static_cast<double>(x) * std::exp(-std::sqrt(lx * std::log(lx)));
}

} // namespace amicable
