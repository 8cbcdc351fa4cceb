#include "amicable/arith.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <sstream>

#include "amicable/errors.hpp"

namespace amicable {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr unsigned kTrialBound = 1024;

const std::vector<unsigned>& small_primes()
{
    static const std::vector<unsigned> primes = [] {
        std::vector<bool> composite(kTrialBound, false);
        std::vector<unsigned> out;
        for (unsigned i = 2; i < kTrialBound; ++i) {
            if (composite[i]) {
                continue;
            }
            out.push_back(i);
            for (unsigned j = i * i; j < kTrialBound; j += i) {
                composite[j] = true;
            }
        }
        return out;
    }();
    return primes;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) {
            result = mulmod(result, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_round(u64 n, u64 d, unsigned s, u64 a)
{
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) {
        return true;
    }
    for (unsigned r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) {
            return true;
        }
    }
    return false;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0.
u64 rho_u64(u64 n, u64 c, u64 seed)
{
    auto f = [&](u64 v) { return static_cast<u64>((static_cast<u128>(v) * v + c) % n); };
    u64 y = seed % n;
    u64 x = y;
    u64 ys = y;
    u64 g = 1;
    u64 q = 1;
    constexpr u64 batch = 128;
    for (u64 r = 1; g == 1 && r < (u64{1} << 26); r <<= 1) {
        x = y;
        for (u64 i = 0; i < r; ++i) {
            y = f(y);
        }
        for (u64 k = 0; k < r && g == 1; k += batch) {
            ys = y;
            for (u64 i = 0; i < std::min(batch, r - k); ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
    }
    if (g == n) {
        // Batched product collapsed; step back one value at a time.
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return (g == 1 || g == n) ? 0 : g;
}

u64 trial_split_u64(u64 n)
{
    for (u64 d = kTrialBound + 1; d <= n / d; d += 2) {
        if (n % d == 0) {
            return d;
        }
    }
    return 0;
}

u64 find_factor_u64(u64 n)
{
    std::mt19937_64 gen(0x5eed0000ULL ^ n);
    for (int attempt = 0; attempt < 64; ++attempt) {
        if (u64 d = rho_u64(n, gen() % (n - 1) + 1, gen()); d != 0) {
            return d;
        }
    }
    return trial_split_u64(n);
}

Natural rho_mpz(const Natural& n, const Natural& c, const Natural& seed)
{
    auto f = [&](Natural& v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    Natural y = seed % n;
    Natural x, ys, g = 1, q = 1, diff;
    constexpr unsigned long batch = 128;
    for (unsigned long r = 1; g == 1 && r < (1UL << 30); r <<= 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) {
            f(y);
        }
        for (unsigned long k = 0; k < r && g == 1; k += batch) {
            ys = y;
            for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
                f(y);
                diff = x - y;
                q = q * diff;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
    }
    if (g == n) {
        do {
            f(ys);
            diff = x - ys;
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g == 1 || g == n) {
        return 0;
    }
    return g;
}

Natural find_factor_mpz(const Natural& n)
{
    Natural root;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
        return root;
    }
    std::mt19937_64 gen(0x5eed0001ULL ^ mpz_get_ui(n.get_mpz_t()));
    for (int attempt = 0; attempt < 32; ++attempt) {
        Natural d = rho_mpz(n, to_natural(gen() | 1), to_natural(gen()));
        if (d != 0) {
            return d;
        }
    }
    // Deterministic fallback: exhaustive odd trial division.
    Natural limit;
    mpz_sqrt(limit.get_mpz_t(), n.get_mpz_t());
    for (Natural d = kTrialBound + 1; d <= limit; d += 2) {
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            return d;
        }
    }
    return n;
}

void collect_u64(u64 n, std::vector<u64>& out)
{
    if (n == 1) {
        return;
    }
    if (n < u64{kTrialBound} * kTrialBound || is_prime_u64(n)) {
        // Cofactors left after trial division below kTrialBound^2 are prime.
        out.push_back(n);
        return;
    }
    const u64 d = find_factor_u64(n);
    collect_u64(d, out);
    collect_u64(n / d, out);
}

struct Collector {
    std::vector<Natural> primes;
    bool probabilistic = false;

    void add(const Natural& n)
    {
        if (n == 1) {
            return;
        }
        if (auto small = to_u64(n)) {
            std::vector<u64> parts;
            collect_u64(*small, parts);
            for (u64 p : parts) {
                primes.push_back(to_natural(p));
            }
            return;
        }
        const PrimalityVerdict v = primality(n);
        if (v.prime) {
            probabilistic = probabilistic || v.probabilistic;
            primes.push_back(n);
            return;
        }
        const Natural d = find_factor_mpz(n);
        add(d);
        add(n / d);
    }
};

Factorization assemble(Natural value, std::vector<Natural> primes, bool probabilistic)
{
    std::sort(primes.begin(), primes.end());
    Factorization f;
    f.value = std::move(value);
    f.probabilistic = probabilistic;
    for (auto& p : primes) {
        if (!f.factors.empty() && f.factors.back().prime == p) {
            ++f.factors.back().exponent;
        } else {
            f.factors.push_back({std::move(p), 1});
        }
    }
    return f;
}

bool checked_mul(u64 a, u64 b, u64& out) { return !__builtin_mul_overflow(a, b, &out); }

} // namespace

bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) {
            return n == p;
        }
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is exact for every n < 3.3 * 10^24.
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (!miller_rabin_round(n, d, s, a)) {
            return false;
        }
    }
    return true;
}

PrimalityVerdict primality(const Natural& n, int rounds)
{
    if (auto small = to_u64(n)) {
        return {is_prime_u64(*small), false};
    }
    if (sgn(n) < 0) {
        return {false, false};
    }
    const int r = mpz_probab_prime_p(n.get_mpz_t(), std::max(rounds, 1));
    return {r != 0, r == 1};
}

bool is_prime(const Natural& n, int rounds) { return primality(n, rounds).prime; }

Factorization factorize_u64(std::uint64_t n)
{
    if (n == 0) {
        throw DomainError("factorize: n must be positive");
    }
    std::vector<u64> parts;
    u64 rest = n;
    for (unsigned p : small_primes()) {
        if (u64{p} * p > rest) {
            break;
        }
        while (rest % p == 0) {
            parts.push_back(p);
            rest /= p;
        }
    }
    collect_u64(rest, parts);
    std::vector<Natural> primes;
    primes.reserve(parts.size());
    for (u64 p : parts) {
        primes.push_back(to_natural(p));
    }
    return assemble(to_natural(n), std::move(primes), false);
}

Factorization factorize(const Natural& n)
{
    if (sgn(n) <= 0) {
        throw DomainError("factorize: n must be positive");
    }
    if (auto small = to_u64(n)) {
        return factorize_u64(*small);
    }
    Collector c;
    Natural rest = n;
    for (unsigned p : small_primes()) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            c.primes.push_back(p);
            rest /= p;
        }
    }
    c.add(rest);
    return assemble(n, std::move(c.primes), c.probabilistic);
}

Natural Factorization::product() const
{
    Natural out = 1;
    Natural pw;
    for (const auto& [p, e] : factors) {
        mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), e);
        out *= pw;
    }
    return out;
}

bool Factorization::is_squarefree() const
{
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& pp) { return pp.exponent == 1; });
}

std::string Factorization::to_string() const
{
    if (factors.empty()) {
        return "1";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i != 0) {
            os << " * ";
        }
        os << factors[i].prime.get_str();
        if (factors[i].exponent > 1) {
            os << '^' << factors[i].exponent;
        }
    }
    return os.str();
}

Natural sigma(const Factorization& f)
{
    Natural out = 1;
    Natural pw;
    for (const auto& [p, e] : f.factors) {
        mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), e + 1);
        out *= (pw - 1) / (p - 1);
    }
    return out;
}

Natural sigma(const Natural& n) { return sigma(factorize(n)); }

Natural aliquot(const Natural& n) { return sigma(n) - n; }

Natural phi(const Factorization& f)
{
    Natural out = 1;
    Natural pw;
    for (const auto& [p, e] : f.factors) {
        mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), e - 1);
        out *= pw * (p - 1);
    }
    return out;
}

Natural phi(const Natural& n) { return phi(factorize(n)); }

std::optional<std::uint64_t> sigma_u64(std::uint64_t n)
{
    const Factorization f = factorize_u64(n);
    u64 out = 1;
    for (const auto& [pn, e] : f.factors) {
        const u64 p = *to_u64(pn);
        // 1 + p + ... + p^e, accumulated with overflow checks.
        u64 term = 1;
        u64 pw = 1;
        for (unsigned i = 0; i < e; ++i) {
            if (!checked_mul(pw, p, pw) || __builtin_add_overflow(term, pw, &term)) {
                return std::nullopt;
            }
        }
        if (!checked_mul(out, term, out)) {
            return std::nullopt;
        }
    }
    return out;
}

std::optional<std::uint64_t> aliquot_u64(std::uint64_t n)
{
    auto s = sigma_u64(n);
    if (!s) {
        return std::nullopt;
    }
    return *s - n;
}

Natural elementary_symmetric(std::span<const Natural> values, std::size_t k)
{
    if (k > values.size()) {
        throw DomainError("elementary_symmetric: k exceeds the number of values");
    }
    std::vector<Natural> e(k + 1, 0);
    e[0] = 1;
    for (const Natural& v : values) {
        for (std::size_t j = k; j >= 1; --j) {
            e[j] += e[j - 1] * v;
        }
    }
    return e[k];
}

TwoAdicSplit two_adic_split(const Natural& n)
{
    if (sgn(n) <= 0) {
        throw DomainError("two_adic_split: n must be positive");
    }
    TwoAdicSplit out;
    out.exponent = static_cast<unsigned>(mpz_scan1(n.get_mpz_t(), 0));
    mpz_tdiv_q_2exp(out.odd.get_mpz_t(), n.get_mpz_t(), out.exponent);
    return out;
}

} // namespace amicable
