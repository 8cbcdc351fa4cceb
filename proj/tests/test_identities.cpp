#include <doctest.h>

#include <map>

#include "amicable/arith.hpp"
#include "amicable/catalog.hpp"
#include "amicable/errors.hpp"
#include "amicable/identities.hpp"
#include "amicable/sieve.hpp"

using namespace amicable;

namespace {

const Natural kA26("26989290624832");
const Natural kB26("26730182367808");

const Equation* find_equation(const IdentityReport& r, const std::string& label)
{
    for (const auto& e : r.equations) {
        if (e.label == label) {
            return &e;
        }
    }
    return nullptr;
}

// Sieve pairs below 10^6 plus the external list, built once.
const std::vector<PairRecord>& survey()
{
    static const std::vector<PairRecord> pairs = [] {
        Catalog cat;
        SieveConfig c;
        c.limit = 1000000;
        c.cross_limit = true;
        for (const auto& p : find_amicable_pairs(c).pairs) {
            cat.admit(make_entry(p.smaller, p.larger, PairSource::sieve));
        }
        const auto summary =
            cat.ingest_file(AMICABLE_TEST_DATA "/external_pairs.txt", IngestFormat::plain_pairs);
        REQUIRE(summary.rejected == 0);
        REQUIRE(summary.parse_errors == 0);
        return cat.pairs();
    }();
    return pairs;
}

} // namespace

TEST_CASE("classification examples")
{
    const PairShape s = classify(2620, 2924);
    CHECK(s.n == 2);
    CHECK(s.left_primes == std::vector<Natural>{5, 131});
    CHECK(s.right_primes == std::vector<Natural>{17, 43});
    CHECK(s.status == ShapeStatus::Shape2x2);
    CHECK(s.eligible());

    const PairShape t = classify(220, 284);
    CHECK(t.n == 2);
    CHECK(t.left_primes == std::vector<Natural>{5, 11});
    CHECK(t.right_primes == std::vector<Natural>{71});
    CHECK(t.status == ShapeStatus::Unsupported);
    CHECK_FALSE(t.reason.empty());

    const PairShape u = classify(185368, 203432);
    CHECK(u.n == 3);
    CHECK(u.left_primes == std::vector<Natural>{17, 29, 47});
    CHECK(u.right_primes == std::vector<Natural>{59, 431});
    CHECK(u.status == ShapeStatus::Shape3x2);
    CHECK(classify(203432, 185368).status == ShapeStatus::Shape2x3);

    CHECK(classify(kA26, kB26).status == ShapeStatus::Shape3x3);
    CHECK(classify(12707704, 14236136).status == ShapeStatus::Shape4x2);
    CHECK(classify(14236136, 12707704).status == ShapeStatus::Shape2x4);

    // gcd 12 is not a power of two
    const PairShape g = classify(12 * 5 * 7, 12 * 11 * 13);
    CHECK(g.status == ShapeStatus::Unsupported);
    CHECK(g.shared_primes == std::vector<Natural>{3});
    // different 2-adic valuations
    CHECK(classify(1184, 1210).status == ShapeStatus::Unsupported);
    // repeated odd prime
    CHECK_FALSE(classify(4 * 9 * 5, 4 * 7 * 11).squarefree);
    CHECK(classify(4 * 9 * 5, 4 * 7 * 11).status == ShapeStatus::Unsupported);
}

TEST_CASE("deficit examples")
{
    const Deficits d = deficits(classify(2620, 2924));
    CHECK(d.S == 2384);
    CHECK(d.x == 59);
    CHECK(d.y == 135);
    const Deficits e = deficits(classify(185368, 203432));
    CHECK(e.S == 182192);
    CHECK(e.x == 397);
    CHECK(e.y == 2655);
    const Deficits f = deficits(classify(kA26, kB26));
    CHECK(f.x == Integer("5311426093"));
    CHECK(f.y == Integer("1262859577"));
}

TEST_CASE("deficits swap with the members")
{
    for (const auto& p : survey()) {
        const PairShape ab = classify(p.smaller, p.larger);
        if (!ab.eligible()) {
            continue;
        }
        const Deficits d1 = deficits(ab);
        const Deficits d2 = deficits(classify(p.larger, p.smaller));
        REQUIRE(d1.S == d2.S);
        REQUIRE(d1.x == d2.y);
        REQUIRE(d1.y == d2.x);
    }
}

TEST_CASE("2x2 identity on the worked example")
{
    const IdentityReport r = check_theorem_2x2(2620, 2924);
    CHECK(r.all_hold());
    const Equation* ab = find_equation(r, "a+b = 2^-n(B-S)+1");
    REQUIRE(ab != nullptr);
    CHECK(ab->lhs == 136);
    CHECK(ab->rhs == 136);
    const Equation* cd = find_equation(r, "c+d = 2^-n(A-S)+1");
    REQUIRE(cd != nullptr);
    CHECK(cd->lhs == 60);
    const Equation* prod = find_equation(r, "(c+1)(d+1) = (a+1)(b+1)");
    REQUIRE(prod != nullptr);
    CHECK(prod->lhs == 792);
    CHECK(prod->rhs == 792);
}

TEST_CASE("2x2 identity fails on a non-amicable pair of the same shape")
{
    const Natural a = 4 * 5 * 131, b = 4 * 17 * 47;
    REQUIRE(classify(a, b).status == ShapeStatus::Shape2x2);
    bool failed = false;
    try {
        failed = !check_theorem_2x2(a, b).all_hold();
    } catch (const DivisibilityViolation&) {
        failed = true;
    }
    CHECK(failed);
}

TEST_CASE("shape gates")
{
    CHECK_THROWS_AS(check_theorem_2x2(220, 284), ShapeMismatch);
    CHECK_THROWS_AS(check_theorem_2x2(12 * 5 * 7, 12 * 11 * 13), ShapeMismatch);
    CHECK_THROWS_AS(check_theorem_3x2(2620, 2924), ShapeMismatch);
    CHECK_THROWS_AS(check_theorem_3x3(2620, 2924), ShapeMismatch);
    CHECK_THROWS_AS(check_conjecture_4x2(2620, 2924), ShapeMismatch);
    CHECK_THROWS_AS(check_conjecture_4x4(kA26, kB26), ShapeMismatch);
    CHECK_THROWS_AS(check_matching_theorem(220, 284), ShapeMismatch);
}

TEST_CASE("3x2 identity on the worked example and a perturbation")
{
    const IdentityReport r = check_theorem_3x2(185368, 203432);
    CHECK(r.all_hold());
    CHECK(r.deficits.y == 2655);
    CHECK(r.deficits.x == 397);
    CHECK(r.orientation == Orientation::as_stated);

    const IdentityReport s = check_theorem_3x2(203432, 185368);
    CHECK(s.orientation == Orientation::swapped);
    CHECK(s.shape.first == 185368);
    CHECK(s.all_hold());

    // one prime of A replaced: 47 -> 53
    const Natural a = 8 * 17 * 29 * 53, b = 8 * 59 * 431;
    bool failed = false;
    try {
        failed = !check_theorem_3x2(a, b).all_hold();
    } catch (const DivisibilityViolation&) {
        failed = true;
    }
    CHECK(failed);
}

TEST_CASE("3x3 identity on the worked example")
{
    const IdentityReport r = check_theorem_3x3(kA26, kB26);
    CHECK(r.all_hold());
    const Equation* x = find_equation(r, "2^-n(A-S)-1 = f(d+e)+de-(a+b+c)");
    REQUIRE(x != nullptr);
    CHECK(x->lhs == Integer("5311426092"));
    CHECK(x->rhs == Integer("5311426092"));
    const Equation* y = find_equation(r, "2^-n(B-S)-1 = c(a+b)+ab-(d+e+f)");
    REQUIRE(y != nullptr);
    CHECK(y->lhs == Integer("1262859576"));

    const IdentityReport swapped = check_theorem_3x3(kB26, kA26);
    CHECK(swapped.all_hold());
    CHECK(swapped.deficits.x == r.deficits.y);
    CHECK(swapped.deficits.y == r.deficits.x);
}

TEST_CASE("every covered pair in the survey satisfies its identity")
{
    std::map<ShapeStatus, int> seen;
    for (const auto& p : survey()) {
        const PairShape s = classify(p);
        if (s.status != ShapeStatus::Shape2x2 && s.status != ShapeStatus::Shape3x2 &&
            s.status != ShapeStatus::Shape2x3 && s.status != ShapeStatus::Shape3x3) {
            continue;
        }
        ++seen[s.status];
        for (bool swap : {false, true}) {
            const Natural& a = swap ? p.larger : p.smaller;
            const Natural& b = swap ? p.smaller : p.larger;
            const IdentityReport r = check_matching_theorem(a, b);
            REQUIRE_MESSAGE(r.all_hold(), a.get_str() << " " << b.get_str());
        }
    }
    CHECK(seen[ShapeStatus::Shape2x2] >= 3);
    CHECK(seen[ShapeStatus::Shape3x2] + seen[ShapeStatus::Shape2x3] >= 5);
    CHECK(seen[ShapeStatus::Shape3x3] >= 5);
}

TEST_CASE("sigma backbone holds for every eligible amicable pair")
{
    for (const auto& p : survey()) {
        const PairShape s = classify(p);
        if (!s.eligible()) {
            continue;
        }
        for (const auto& e : sigma_backbone(s)) {
            REQUIRE_MESSAGE(e.holds, p.smaller.get_str() << " " << e.label);
        }
    }
}

TEST_CASE("4x2 conjecture scanner emits the full verdict matrix")
{
    const IdentityReport r = check_conjecture_4x2(12707704, 14236136);
    CHECK(r.kind == IdentityKind::C4x2);
    CHECK(r.variants.size() == 4);
    CHECK(r.equations.size() == 2 * 4);
    for (const auto& e : r.equations) {
        CHECK(e.holds == (e.lhs == e.rhs));
    }
    const IdentityReport s = check_conjecture_4x2(14236136, 12707704);
    CHECK(s.orientation == Orientation::swapped);
    CHECK(s.variants.size() == 4);
}

TEST_CASE("general hypothesis needs a family")
{
    const std::vector<PairRecord> one{{Natural(2620), Natural(2924), Natural(5544), PairSource::sieve}};
    CHECK_THROWS_AS(general_hypothesis_report(2620, 2924, one), InsufficientData);
}

TEST_CASE("general hypothesis recovers the 2x2 and 3x2 identities")
{
    const auto pairs = survey();
    const IdentityReport r = general_hypothesis_report(2620, 2924, pairs);
    CHECK(r.family_size >= 5);
    bool found_y = false;
    for (const auto& f : r.fits) {
        if (f.deficit == 'y' && f.basis_side == 'A') {
            found_y = true;
            CHECK(f.fits());
            // y = e1(A) - 1 over the basis (e1(A), e1(B), 1)
            REQUIRE(f.coefficients.size() == 3);
            CHECK(f.coefficients[0] == 1);
            CHECK(f.coefficients[1] == 0);
            CHECK(f.coefficients[2] == -1);
        }
    }
    CHECK(found_y);

    const IdentityReport t = general_hypothesis_report(185368, 203432, pairs);
    bool found_qa = false;
    for (const auto& f : t.fits) {
        if (f.deficit == 'y' && f.basis_side == 'A') {
            found_qa = f.fits() && f.coefficients[0] == 1;
            for (std::size_t i = 1; i < f.coefficients.size(); ++i) {
                found_qa = found_qa && f.coefficients[i] == 0;
            }
        }
    }
    CHECK(found_qa);   // y = e2(A)
}
