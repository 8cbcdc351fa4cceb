#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "amicable/arith.hpp"
#include "amicable/pair_record.hpp"

namespace amicable {

enum class Rule { thabit, euler };

std::string_view to_string(Rule r);

struct RuleCandidate {
    char name = '?';   // 'p', 'q' or 'r'
    Natural value;
    PrimalityVerdict verdict;
};

struct RuleOutcome {
    Rule rule = Rule::thabit;
    unsigned n = 0;
    std::optional<unsigned> m;              // Euler's rule only
    std::array<RuleCandidate, 3> candidates;
    // Present iff p, q and r all passed the primality test.
    std::optional<PairRecord> pair;
    // sigma(M) = sigma(N) = M + N, recomputed by factorization.
    bool verified = false;
    bool probabilistic = false;

    bool hit() const { return pair.has_value(); }
};

// p = 3*2^(n-1) - 1, q = 3*2^n - 1, r = 9*2^(2n-1) - 1; M = 2^n p q, N = 2^n r.
RuleOutcome thabit(unsigned n);

// p = 2^m (2^(n-m) + 1) - 1, q = 2^n (2^(n-m) + 1) - 1,
// r = 2^(n+m) (2^(n-m) + 1)^2 - 1; A = 2^n p q, B = 2^n r.
RuleOutcome euler_rule(unsigned m, unsigned n);

struct RuleScan {
    std::vector<RuleOutcome> outcomes;   // in parameter order
    std::vector<RuleOutcome> hits;
};

// Thabit: n in [n_from, n_to]. Euler: every 1 <= m < n with n in [n_from, n_to].
RuleScan scan_rule(Rule rule, unsigned n_from, unsigned n_to, unsigned workers = 1);

} // namespace amicable
