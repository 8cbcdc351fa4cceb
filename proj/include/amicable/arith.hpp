#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amicable/natural.hpp"

namespace amicable {

inline constexpr int kDefaultPrimalityRounds = 40;

struct PrimalityVerdict {
    bool prime = false;
    // Set when the verdict came from a probabilistic test (inputs >= 2^64).
    bool probabilistic = false;
};

struct PrimePower {
    Natural prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Canonical decomposition: primes strictly increasing, exponents >= 1,
// empty for value 1.
struct Factorization {
    Natural value{1};
    std::vector<PrimePower> factors;
    // True if any factor was certified only probabilistically.
    bool probabilistic = false;

    Natural product() const;
    bool is_squarefree() const;
    std::string to_string() const;   // "2^2 * 5 * 11"

    friend bool operator==(const Factorization& a, const Factorization& b)
    {
        return a.value == b.value && a.factors == b.factors;
    }
};

PrimalityVerdict primality(const Natural& n, int rounds = kDefaultPrimalityRounds);
bool is_prime(const Natural& n, int rounds = kDefaultPrimalityRounds);
// Deterministic Miller-Rabin over a fixed witness set; exact for all 64-bit n.
bool is_prime_u64(std::uint64_t n);

Factorization factorize(const Natural& n);
Factorization factorize_u64(std::uint64_t n);

Natural sigma(const Natural& n);
Natural sigma(const Factorization& f);
Natural aliquot(const Natural& n);
Natural phi(const Natural& n);
Natural phi(const Factorization& f);

// Bounded fast path for the sieve: nullopt on overflow, never wraps.
std::optional<std::uint64_t> sigma_u64(std::uint64_t n);
std::optional<std::uint64_t> aliquot_u64(std::uint64_t n);

// e_k of values; e_0 = 1.
Natural elementary_symmetric(std::span<const Natural> values, std::size_t k);

struct TwoAdicSplit {
    unsigned exponent = 0;
    Natural odd;
};
TwoAdicSplit two_adic_split(const Natural& n);

} // namespace amicable
