#include "amicable/pair_record.hpp"

#include <array>

#include "amicable/arith.hpp"

namespace amicable {

namespace {
constexpr std::array<std::pair<PairSource, std::string_view>, 4> kSourceNames{{
    {PairSource::sieve, "sieve"},
    {PairSource::rule_thabit, "rule_thabit"},
    {PairSource::rule_euler, "rule_euler"},
    {PairSource::ingested, "ingested"},
}};
}

std::string_view to_string(PairSource s)
{
    for (const auto& [value, name] : kSourceNames) {
        if (value == s) {
            return name;
        }
    }
    return "unknown";
}

std::optional<PairSource> parse_pair_source(std::string_view s)
{
    for (const auto& [value, name] : kSourceNames) {
        if (name == s) {
            return value;
        }
    }
    return std::nullopt;
}

PairVerification verify_pair(const Natural& a, const Natural& b)
{
    if (sgn(a) <= 0 || sgn(b) <= 0 || a == b) {
        return {};
    }
    const Factorization fa = factorize(a);
    const Factorization fb = factorize(b);
    const Natural total = a + b;
    return {sigma(fa) == total && sigma(fb) == total, fa.probabilistic || fb.probabilistic};
}

} // namespace amicable
