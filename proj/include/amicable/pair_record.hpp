#pragma once

#include <optional>
#include <string_view>

#include "amicable/natural.hpp"

namespace amicable {

enum class PairSource { sieve, rule_thabit, rule_euler, ingested };

std::string_view to_string(PairSource s);
std::optional<PairSource> parse_pair_source(std::string_view s);

// An ordered amicable pair: smaller < larger and
// sigma(smaller) = sigma(larger) = smaller + larger = sigma_value.
struct PairRecord {
    Natural smaller;
    Natural larger;
    Natural sigma_value;
    PairSource source = PairSource::sieve;

    friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

// Re-verifies amicability from scratch via factorization-based sigma.
struct PairVerification {
    bool amicable = false;
    bool probabilistic = false;
};
PairVerification verify_pair(const Natural& a, const Natural& b);

} // namespace amicable
