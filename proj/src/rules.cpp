#include "amicable/rules.hpp"

#include "amicable/errors.hpp"
#include "parallel.hpp"

namespace amicable {
namespace {

Natural pow2(unsigned e)
{
    Natural out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
    return out;
}

RuleOutcome evaluate(Rule rule, unsigned n, std::optional<unsigned> m, Natural p, Natural q,
                     Natural r)
{
    RuleOutcome out;
    out.rule = rule;
    out.n = n;
    out.m = m;
    out.candidates = {RuleCandidate{'p', std::move(p), {}}, RuleCandidate{'q', std::move(q), {}},
                      RuleCandidate{'r', std::move(r), {}}};
    bool all_prime = true;
    for (auto& c : out.candidates) {
        c.verdict = primality(c.value);
        all_prime = all_prime && c.verdict.prime;
        out.probabilistic = out.probabilistic || (c.verdict.prime && c.verdict.probabilistic);
    }
    if (!all_prime) {
        return out;
    }
    const Natural scale = pow2(n);
    Natural first = scale * out.candidates[0].value * out.candidates[1].value;
    Natural second = scale * out.candidates[2].value;
    const PairVerification check = verify_pair(first, second);
    out.verified = check.amicable;
    out.probabilistic = out.probabilistic || check.probabilistic;
    if (first > second) {
        std::swap(first, second);
    }
    Natural total = first + second;
    out.pair = PairRecord{std::move(first), std::move(second), std::move(total),
                          rule == Rule::thabit ? PairSource::rule_thabit : PairSource::rule_euler};
    return out;
}

} // namespace

std::string_view to_string(Rule r) { return r == Rule::thabit ? "thabit" : "euler"; }

RuleOutcome thabit(unsigned n)
{
    if (n < 2) {
        throw DomainError("thabit: n must be at least 2 (n = 1 gives p = 2, an even prime, "
                          "and the candidate 2^1*2*5 = 20, 2^1*17 = 34 is not amicable)");
    }
    return evaluate(Rule::thabit, n, std::nullopt, 3 * pow2(n - 1) - 1, 3 * pow2(n) - 1,
                    9 * pow2(2 * n - 1) - 1);
}

RuleOutcome euler_rule(unsigned m, unsigned n)
{
    if (m < 1 || m >= n) {
        throw DomainError("euler_rule: need 1 <= m < n");
    }
    const Natural k = pow2(n - m) + 1;
    return evaluate(Rule::euler, n, m, pow2(m) * k - 1, pow2(n) * k - 1, pow2(n + m) * k * k - 1);
}

RuleScan scan_rule(Rule rule, unsigned n_from, unsigned n_to, unsigned workers)
{
    struct Point {
        unsigned m;
        unsigned n;
    };
    std::vector<Point> points;
    for (unsigned n = n_from; n <= n_to && n >= n_from; ++n) {
        if (rule == Rule::thabit) {
            if (n >= 2) {
                points.push_back({0, n});
            }
            continue;
        }
        for (unsigned m = 1; m < n; ++m) {
            points.push_back({m, n});
        }
    }
    RuleScan scan;
    scan.outcomes.resize(points.size());
    detail::parallel_for(points.size(), workers, [&](std::size_t i) {
        scan.outcomes[i] = rule == Rule::thabit ? thabit(points[i].n)
                                                : euler_rule(points[i].m, points[i].n);
    });
    for (const auto& o : scan.outcomes) {
        if (o.hit()) {
            scan.hits.push_back(o);
        }
    }
    return scan;
}

} // namespace amicable
