#include <doctest.h>

#include <set>

#include "amicable/errors.hpp"
#include "amicable/rules.hpp"
#include "oracle.hpp"

using namespace amicable;

TEST_CASE("Thabit's rule examples")
{
    const RuleOutcome two = thabit(2);
    CHECK(two.candidates[0].value == 5);
    CHECK(two.candidates[1].value == 11);
    CHECK(two.candidates[2].value == 71);
    REQUIRE(two.hit());
    CHECK(two.pair->smaller == 220);
    CHECK(two.pair->larger == 284);
    CHECK(two.pair->source == PairSource::rule_thabit);
    CHECK(two.verified);

    const RuleOutcome three = thabit(3);
    CHECK(three.candidates[0].value == 11);
    CHECK(three.candidates[1].value == 23);
    CHECK(three.candidates[2].value == 287);
    CHECK_FALSE(three.candidates[2].verdict.prime);
    CHECK_FALSE(three.hit());

    REQUIRE(thabit(4).hit());
    CHECK(thabit(4).pair->smaller == 17296);
    CHECK(thabit(4).pair->larger == 18416);
    REQUIRE(thabit(7).hit());
    CHECK(thabit(7).pair->smaller == 9363584);
    CHECK(thabit(7).pair->larger == 9437056);

    CHECK_THROWS_AS(thabit(1), DomainError);
    CHECK_THROWS_AS(thabit(0), DomainError);
}

TEST_CASE("Thabit scan up to 20 hits exactly 2, 4 and 7")
{
    const RuleScan scan = scan_rule(Rule::thabit, 2, 20);
    CHECK(scan.outcomes.size() == 19);
    std::set<unsigned> hits;
    for (const auto& h : scan.hits) {
        hits.insert(h.n);
        CHECK(h.verified);
    }
    CHECK(hits == std::set<unsigned>{2, 4, 7});
    CHECK(scan_rule(Rule::thabit, 5, 6).hits.empty());
}

TEST_CASE("Euler's rule with m = n-1 reduces to Thabit's")
{
    for (unsigned n = 2; n <= 20; ++n) {
        const RuleOutcome t = thabit(n);
        const RuleOutcome e = euler_rule(n - 1, n);
        for (std::size_t i = 0; i < 3; ++i) {
            REQUIRE(t.candidates[i].value == e.candidates[i].value);
            REQUIRE(t.candidates[i].verdict.prime == e.candidates[i].verdict.prime);
        }
        REQUIRE(t.hit() == e.hit());
        if (t.hit()) {
            REQUIRE(t.pair->smaller == e.pair->smaller);
            REQUIRE(t.pair->larger == e.pair->larger);
        }
    }
}

TEST_CASE("Euler's rule examples and domain")
{
    REQUIRE(euler_rule(1, 2).hit());
    CHECK(euler_rule(1, 2).pair->smaller == 220);
    CHECK(euler_rule(1, 2).pair->source == PairSource::rule_euler);
    REQUIRE(euler_rule(3, 4).hit());
    CHECK(euler_rule(3, 4).pair->larger == 18416);
    CHECK_FALSE(euler_rule(2, 3).hit());
    CHECK_THROWS_AS(euler_rule(3, 3), DomainError);
    CHECK_THROWS_AS(euler_rule(0, 3), DomainError);

    const RuleScan scan = scan_rule(Rule::euler, 2, 8);
    std::set<std::pair<unsigned, unsigned>> hits;
    for (const auto& h : scan.hits) {
        hits.insert({*h.m, h.n});
    }
    CHECK(hits.count({1, 2}) == 1);
    CHECK(hits.count({3, 4}) == 1);
    // every m < n for n in [2, 8]
    CHECK(scan.outcomes.size() == 1 + 2 + 3 + 4 + 5 + 6 + 7);
}

TEST_CASE("every rule hit is amicable by divisor enumeration")
{
    for (Rule rule : {Rule::thabit, Rule::euler}) {
        for (const auto& h : scan_rule(rule, 2, 12).hits) {
            const auto a = *to_u64(h.pair->smaller);
            const auto b = *to_u64(h.pair->larger);
            CHECK(oracle::aliquot(a) == b);
            CHECK(oracle::aliquot(b) == a);
        }
    }
}

TEST_CASE("rule scans do not depend on the worker count")
{
    const RuleScan one = scan_rule(Rule::euler, 2, 30, 1);
    const RuleScan four = scan_rule(Rule::euler, 2, 30, 4);
    REQUIRE(one.outcomes.size() == four.outcomes.size());
    for (std::size_t i = 0; i < one.outcomes.size(); ++i) {
        CHECK(one.outcomes[i].n == four.outcomes[i].n);
        CHECK(one.outcomes[i].m == four.outcomes[i].m);
        CHECK(one.outcomes[i].pair == four.outcomes[i].pair);
    }
}

TEST_CASE("large Thabit parameters use probable-prime certificates")
{
    const RuleOutcome big = thabit(40);
    CHECK(big.candidates[2].value == 9 * (Natural(1) << 79) - 1);
    CHECK(big.candidates[2].verdict.probabilistic == big.candidates[2].verdict.prime);
}
