#pragma once
// Slow, obviously-correct reference implementations used as test oracles.
// Nothing here shares code with the library.

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

// Sum of divisors by enumerating d up to sqrt(n).
inline u64 sigma(u64 n)
{
    u64 total = 0;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            total += d;
            if (d != n / d) {
                total += n / d;
            }
        }
    }
    return total;
}

inline u64 aliquot(u64 n) { return n == 0 ? 0 : sigma(n) - n; }

// Aliquot sum by testing every candidate divisor below n (the quadratic form).
inline u64 aliquot_naive(u64 n)
{
    u64 total = 0;
    for (u64 d = 1; d < n; ++d) {
        if (n % d == 0) {
            total += d;
        }
    }
    return total;
}

inline u64 phi(u64 n)
{
    u64 count = 0;
    for (u64 k = 1; k <= n; ++k) {
        if (std::gcd(k, n) == 1) {
            ++count;
        }
    }
    return count;
}

inline bool is_prime(u64 n)
{
    if (n < 2) {
        return false;
    }
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

// Amicable pairs (a, b), a < b, with both members no larger than limit.
// Uses the quadratic aliquot sum for every n so it shares nothing with the sieve.
inline std::vector<std::pair<u64, u64>> amicable_pairs(u64 limit)
{
    std::vector<u64> s(limit + 1, 0);
    for (u64 n = 1; n <= limit; ++n) {
        s[n] = aliquot_naive(n);
    }
    std::vector<std::pair<u64, u64>> out;
    for (u64 a = 1; a <= limit; ++a) {
        const u64 b = s[a];
        if (b > a && b <= limit && s[b] == a) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

// Pairs whose smaller member is within limit, regardless of the larger one.
inline std::vector<std::pair<u64, u64>> amicable_pairs_cross(u64 limit)
{
    std::vector<std::pair<u64, u64>> out;
    for (u64 a = 1; a <= limit; ++a) {
        const u64 b = aliquot(a);
        if (b > a && aliquot(b) == a) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

} // namespace oracle
