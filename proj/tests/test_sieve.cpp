#include <doctest.h>

#include <cmath>
#include <vector>

#include "amicable/errors.hpp"
#include "amicable/sieve.hpp"
#include "oracle.hpp"

using namespace amicable;

namespace {

std::vector<std::pair<std::uint64_t, std::uint64_t>> as_u64(const std::vector<PairRecord>& pairs)
{
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (const auto& p : pairs) {
        out.emplace_back(*to_u64(p.smaller), *to_u64(p.larger));
    }
    return out;
}

SieveResult run(std::uint64_t limit, std::uint64_t segment = kDefaultSegmentSize, unsigned workers = 1,
                bool cross = false)
{
    SieveConfig c;
    c.limit = limit;
    c.segment_size = segment;
    c.workers = workers;
    c.cross_limit = cross;
    return find_amicable_pairs(c);
}

} // namespace

TEST_CASE("aliquot table examples")
{
    CHECK(aliquot_table(1, 6) == std::vector<std::uint64_t>{0, 1, 1, 3, 1, 6});
    CHECK(aliquot_table(220, 220) == std::vector<std::uint64_t>{284});
    CHECK(aliquot_table(1, 1) == std::vector<std::uint64_t>{0});
    CHECK_THROWS_AS(aliquot_table(0, 5), DomainError);
    CHECK_THROWS_AS(aliquot_table(10, 5), DomainError);
}

TEST_CASE("aliquot table matches divisor enumeration over offset windows")
{
    for (std::uint64_t lo : {1ULL, 2ULL, 997ULL, 65536ULL, 999000ULL}) {
        const auto table = aliquot_table(lo, lo + 3000);
        for (std::uint64_t i = 0; i < table.size(); ++i) {
            REQUIRE_MESSAGE(table[i] == oracle::aliquot(lo + i), (lo + i));
        }
    }
}

TEST_CASE("small limits")
{
    const auto r300 = run(300);
    REQUIRE(r300.pairs.size() == 1);
    CHECK(r300.pairs[0].smaller == 220);
    CHECK(r300.pairs[0].larger == 284);
    CHECK(r300.pairs[0].sigma_value == 504);
    CHECK(r300.pairs[0].source == PairSource::sieve);
    CHECK(run(200).pairs.empty());
    using P = std::pair<std::uint64_t, std::uint64_t>;
    CHECK(as_u64(run(3000).pairs) == std::vector<P>{{220, 284}, {1184, 1210}, {2620, 2924}});
    CHECK(run(2).pairs.empty());
}

TEST_CASE("sieve equals the quadratic brute force at 10^4")
{
    const auto expected = oracle::amicable_pairs(10000);
    CHECK(expected.size() == 5);
    CHECK(as_u64(run(10000).pairs) == expected);
}

TEST_CASE("cross-limit pairs match the oracle")
{
    for (std::uint64_t limit : {6300ULL, 20000ULL, 70000ULL}) {
        CHECK(as_u64(run(limit, 4096, 2, true).pairs) == oracle::amicable_pairs_cross(limit));
    }
    // (6232, 6368) straddles 6300
    const auto strict = as_u64(run(6300).pairs);
    CHECK(strict.back() == std::pair<std::uint64_t, std::uint64_t>{5020, 5564});
}

TEST_CASE("perfect numbers are reported separately")
{
    const auto r = run(10000);
    CHECK(r.perfect == std::vector<std::uint64_t>{6, 28, 496, 8128});
    for (const auto& p : r.pairs) {
        CHECK(p.smaller != p.larger);
    }
}

TEST_CASE("segment size and worker count do not change the result")
{
    const auto baseline = run(200000, kDefaultSegmentSize, 1, true);
    CHECK(as_u64(baseline.pairs) == oracle::amicable_pairs_cross(200000));
    for (std::uint64_t seg : {1ULL << 10, 4096ULL, 7777ULL, 1ULL << 20}) {
        for (unsigned w : {1u, 2u, 4u}) {
            const auto r = run(200000, seg, w, true);
            REQUIRE(r.pairs == baseline.pairs);
            REQUIRE(r.perfect == baseline.perfect);
        }
    }
}

TEST_CASE("configuration validation")
{
    SieveConfig c;
    c.limit = 1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.limit = 100;
    c.segment_size = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.segment_size = 64;
    c.workers = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.workers = 1;
    c.limit = kMaxTableLimit + 1;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("counting amicable numbers")
{
    CHECK(count_amicable(219) == 0);
    CHECK(count_amicable(284) == 2);
    CHECK(count_amicable(283) == 1);
    // Only 220 and 284 are at most 1000; 1184 and 1210 are not.
    CHECK(count_amicable(1000) == 2);
    std::uint64_t brute = 0;
    for (const auto& [a, b] : oracle::amicable_pairs_cross(10000)) {
        brute += (a <= 10000) + (b <= 10000);
    }
    CHECK(count_amicable(10000) == brute);
    CHECK(brute == 10);
}

TEST_CASE("A(x) is nondecreasing")
{
    std::uint64_t previous = 0;
    for (std::uint64_t x = 16; x <= 200000; x = x * 3 / 2) {
        const auto c = count_amicable(x, 1);
        REQUIRE(c >= previous);
        previous = c;
    }
}

TEST_CASE("Pomerance bound")
{
    const auto formula = [](double x) { return x * std::exp(-std::sqrt(std::log(x) * std::log(std::log(x)))); };
    CHECK(pomerance_bound(16) == doctest::Approx(formula(16.0)));
    CHECK(pomerance_bound(1000000) == doctest::Approx(formula(1e6)));
    CHECK(pomerance_bound(1000000) == doctest::Approx(2.42e3).epsilon(0.01));
    CHECK_THROWS_AS(pomerance_bound(15), DomainError);
    CHECK(count_amicable(100000) <= pomerance_bound(100000));
}
