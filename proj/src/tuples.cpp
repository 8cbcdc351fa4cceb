#include "amicable/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "amicable/arith.hpp"
#include "amicable/errors.hpp"
#include "amicable/sieve.hpp"

namespace amicable {
namespace {

using u64 = std::uint64_t;

std::vector<Natural> sigmas(std::span<const Natural> members)
{
    std::vector<Natural> out;
    out.reserve(members.size());
    for (const auto& m : members) {
        out.push_back(sigma(m));
    }
    return out;
}

Natural total(std::span<const Natural> members)
{
    return std::accumulate(members.begin(), members.end(), Natural(0));
}

bool valid(std::span<const Natural> members)
{
    return members.size() >= 2 && !has_duplicates(members) &&
           std::all_of(members.begin(), members.end(), [](const Natural& v) { return sgn(v) > 0; });
}

// All sigma(n_i) equal to `scale`^-1 * sum; i.e. scale * sigma(n_i) = sum.
bool scaled_sigma_form(std::span<const Natural> members, unsigned long scale)
{
    const Natural sum = total(members);
    for (const auto& s : sigmas(members)) {
        if (s * scale != sum) {
            return false;
        }
    }
    return true;
}

std::vector<u64> sigma_table(u64 limit)
{
    std::vector<u64> table = aliquot_table(1, limit);
    for (u64 i = 0; i < table.size(); ++i) {
        table[i] += i + 1;
    }
    return table;
}

// Groups n in [1, limit] by sigma(n); buckets are ascending.
std::map<u64, std::vector<u64>> sigma_buckets(const std::vector<u64>& sig)
{
    std::map<u64, std::vector<u64>> buckets;
    for (u64 n = 1; n <= sig.size(); ++n) {
        buckets[sig[n - 1]].push_back(n);
    }
    return buckets;
}

TupleRecord record(std::vector<u64> members, TupleKind kind, Natural w1, Natural w2 = 0)
{
    std::sort(members.begin(), members.end());
    TupleRecord r;
    for (u64 m : members) {
        r.members.push_back(to_natural(m));
    }
    r.kind = kind;
    r.witness = std::move(w1);
    r.witness2 = std::move(w2);
    return r;
}

// Members of one bucket whose sum equals target, as pairs or triples.
void bucket_sums(const std::vector<u64>& bucket, u64 target, unsigned k,
                 std::vector<std::vector<u64>>& out)
{
    if (k == 2) {
        for (std::size_t i = 0; i < bucket.size(); ++i) {
            const u64 want = target - bucket[i];
            if (bucket[i] < target && want > bucket[i] &&
                std::binary_search(bucket.begin() + i + 1, bucket.end(), want)) {
                out.push_back({bucket[i], want});
            }
        }
        return;
    }
    for (std::size_t i = 0; i < bucket.size(); ++i) {
        for (std::size_t j = i + 1; j < bucket.size(); ++j) {
            if (bucket[i] + bucket[j] >= target) {
                break;
            }
            const u64 want = target - bucket[i] - bucket[j];
            if (want > bucket[j] && std::binary_search(bucket.begin() + j + 1, bucket.end(), want)) {
                out.push_back({bucket[i], bucket[j], want});
            }
        }
    }
}

struct Fraction {
    u64 num;
    u64 den;
    bool operator==(const Fraction&) const = default;
};

struct FractionHash {
    std::size_t operator()(const Fraction& f) const noexcept
    {
        return std::hash<u64>{}(f.num * 0x9E3779B97F4A7C15ULL ^ f.den);
    }
};

Fraction reduced(u64 num, u64 den)
{
    const u64 g = std::gcd(num, den);
    return {num / g, den / g};
}

std::vector<TupleRecord> search_feebly(u64 limit, unsigned k)
{
    const auto sig = sigma_table(limit);
    std::unordered_map<Fraction, std::vector<u64>, FractionHash> by_ratio;
    for (u64 n = 1; n <= limit; ++n) {
        by_ratio[reduced(n, sig[n - 1])].push_back(n);
    }
    std::vector<TupleRecord> out;
    auto lookup = [&](Fraction want, u64 above, std::vector<u64> prefix) {
        auto it = by_ratio.find(want);
        if (it == by_ratio.end()) {
            return;
        }
        for (u64 n : it->second) {
            if (n > above) {
                prefix.push_back(n);
                out.push_back(record(prefix, TupleKind::Feebly, 0));
                prefix.pop_back();
            }
        }
    };
    for (u64 a = 1; a <= limit; ++a) {
        const Fraction ra = reduced(a, sig[a - 1]);
        if (k == 2) {
            lookup(reduced(ra.den - ra.num, ra.den), a, {a});
            continue;
        }
        for (u64 b = a + 1; b <= limit; ++b) {
            const Fraction rb = reduced(b, sig[b - 1]);
            // 1 - ra - rb over the common denominator, in 128-bit.
            const unsigned __int128 den = static_cast<unsigned __int128>(ra.den) * rb.den;
            const unsigned __int128 used = static_cast<unsigned __int128>(ra.num) * rb.den +
                                           static_cast<unsigned __int128>(rb.num) * ra.den;
            if (used >= den) {
                continue;
            }
            const unsigned __int128 rest = den - used;
            unsigned __int128 x = rest, y = den;
            while (y != 0) {
                const unsigned __int128 t = x % y;
                x = y;
                y = t;
            }
            lookup({static_cast<u64>(rest / x), static_cast<u64>(den / x)}, b, {a, b});
        }
    }
    return out;
}

std::vector<TupleRecord> search_multiamicable(u64 limit)
{
    const auto sig = sigma_table(limit);
    std::vector<TupleRecord> out;
    auto s_of = [&](u64 n) -> u64 { return sig[n - 1] - n; };
    for (u64 m = 1; m <= limit; ++m) {
        const u64 sm = s_of(m);
        if (sm == 0) {
            continue;
        }
        const Factorization f = factorize_u64(sm);
        std::vector<u64> divisors{1};
        for (const auto& pp : f.factors) {
            const u64 p = *to_u64(pp.prime);
            const std::size_t base = divisors.size();
            u64 pw = 1;
            for (unsigned e = 0; e < pp.exponent; ++e) {
                pw *= p;
                for (std::size_t i = 0; i < base; ++i) {
                    divisors.push_back(divisors[i] * pw);
                }
            }
        }
        for (u64 n : divisors) {
            if (n <= m || n > limit) {
                continue;
            }
            const u64 sn = s_of(n);
            if (sn != 0 && sn % m == 0) {
                out.push_back(record({m, n}, TupleKind::Multiamicable, to_natural(sm / n),
                                     to_natural(sn / m)));
            }
        }
    }
    return out;
}

void require_search(bool ok, const std::string& msg)
{
    if (!ok) {
        throw DomainError(msg);
    }
}

} // namespace

std::string_view to_string(TupleKind k)
{
    switch (k) {
    case TupleKind::Dickson: return "dickson";
    case TupleKind::Yanney: return "yanney";
    case TupleKind::MultiplyAmicable: return "multiply";
    case TupleKind::Multiamicable: return "multi";
    case TupleKind::Feebly: return "feebly";
    }
    return "?";
}

std::optional<TupleKind> parse_tuple_kind(std::string_view s)
{
    for (TupleKind k : {TupleKind::Dickson, TupleKind::Yanney, TupleKind::MultiplyAmicable,
                        TupleKind::Multiamicable, TupleKind::Feebly}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

bool has_duplicates(std::span<const Natural> members)
{
    std::vector<Natural> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

bool dickson_sigma_form(std::span<const Natural> members) { return scaled_sigma_form(members, 1); }

bool dickson_aliquot_form(std::span<const Natural> members)
{
    if (members.size() != 3) {
        throw DomainError("aliquot form is defined for triples");
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (aliquot(members[i]) != members[(i + 1) % 3] + members[(i + 2) % 3]) {
            return false;
        }
    }
    return true;
}

bool yanney_sigma_form(std::span<const Natural> members) { return scaled_sigma_form(members, 2); }

bool yanney_aliquot_form(std::span<const Natural> members)
{
    if (members.size() != 3) {
        throw DomainError("aliquot form is defined for triples");
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (members[i] != aliquot(members[(i + 1) % 3]) + aliquot(members[(i + 2) % 3])) {
            return false;
        }
    }
    return true;
}

std::optional<Natural> is_dickson(std::span<const Natural> members)
{
    if (!valid(members)) {
        return std::nullopt;
    }
    const bool holds = dickson_sigma_form(members);
    if (members.size() == 3 && holds != dickson_aliquot_form(members)) {
        throw std::logic_error("Dickson sigma and aliquot forms disagree");
    }
    if (!holds) {
        return std::nullopt;
    }
    return total(members);
}

std::optional<Natural> is_yanney(std::span<const Natural> members, bool experimental_k)
{
    if (!valid(members)) {
        return std::nullopt;
    }
    if (members.size() != 3 && !experimental_k) {
        return std::nullopt;
    }
    const bool holds = scaled_sigma_form(members, static_cast<unsigned long>(members.size() - 1));
    if (members.size() == 3 && holds != yanney_aliquot_form(members)) {
        throw std::logic_error("Yanney sigma and aliquot forms disagree");
    }
    if (!holds) {
        return std::nullopt;
    }
    return total(members) / static_cast<unsigned long>(members.size() - 1);
}

std::optional<Natural> is_multiply_amicable(const Natural& m, const Natural& n)
{
    if (sgn(m) <= 0 || sgn(n) <= 0 || m == n) {
        return std::nullopt;
    }
    const Natural sm = sigma(m);
    if (sm != sigma(n)) {
        return std::nullopt;
    }
    const Natural sum = m + n;
    if (!mpz_divisible_p(sm.get_mpz_t(), sum.get_mpz_t())) {
        return std::nullopt;
    }
    return Natural(sm / sum);
}

std::optional<MultiamicableWitness> is_multiamicable(const Natural& m, const Natural& n)
{
    if (sgn(m) <= 0 || sgn(n) <= 0 || m == n) {
        return std::nullopt;
    }
    const Natural sm = aliquot(m);
    const Natural sn = aliquot(n);
    if (sgn(sm) == 0 || sgn(sn) == 0 || !mpz_divisible_p(sm.get_mpz_t(), n.get_mpz_t()) ||
        !mpz_divisible_p(sn.get_mpz_t(), m.get_mpz_t())) {
        return std::nullopt;
    }
    return MultiamicableWitness{sm / n, sn / m};
}

bool is_feebly_amicable(std::span<const Natural> members)
{
    if (!valid(members)) {
        return false;
    }
    Rational acc = 0;
    for (const auto& m : members) {
        Rational term(m, sigma(m));
        term.canonicalize();
        acc += term;
    }
    return acc == 1;
}

double tuple_search_cost(const TupleSearch& s)
{
    const double n = static_cast<double>(s.limit);
    constexpr double unbounded = 1e300;
    if (s.k < 2 || s.k > 3) {
        return unbounded;
    }
    switch (s.kind) {
    case TupleKind::Dickson:
    case TupleKind::Yanney:
        return n * 40.0;
    case TupleKind::MultiplyAmicable:
        return s.k == 2 ? n * 40.0 : unbounded;
    case TupleKind::Multiamicable:
        return s.k == 2 ? n * 400.0 : unbounded;
    case TupleKind::Feebly:
        return s.k == 2 ? n * 40.0 : n * n / 2.0 * 20.0;
    }
    return unbounded;
}

std::vector<TupleRecord> search_tuples(const TupleSearch& search)
{
    require_search(search.limit >= 1, "search_tuples: limit must be positive");
    const double cost = tuple_search_cost(search);
    if (cost > kMaxSearchCost || search.limit > 20'000'000) {
        std::ostringstream msg;
        msg << "search_tuples: " << to_string(search.kind) << " with k=" << search.k
            << " and limit=" << search.limit << " is infeasible";
        if (cost < 1e299) {
            msg << " (estimated " << cost << " steps, budget " << kMaxSearchCost << ")";
        } else {
            msg << " (supported: k in {2,3}; multiply and multi need k=2)";
        }
        throw DomainError(msg.str());
    }
    if (search.kind == TupleKind::Yanney && search.k != 3) {
        throw DomainError("search_tuples: Yanney tuples are defined for k=3");
    }

    std::vector<TupleRecord> out;
    switch (search.kind) {
    case TupleKind::Dickson:
    case TupleKind::Yanney:
    case TupleKind::MultiplyAmicable: {
        const auto buckets = sigma_buckets(sigma_table(search.limit));
        for (const auto& [sig, members] : buckets) {
            if (members.size() < search.k) {
                continue;
            }
            if (search.kind == TupleKind::MultiplyAmicable) {
                for (std::size_t i = 0; i < members.size(); ++i) {
                    for (std::size_t j = i + 1; j < members.size(); ++j) {
                        const u64 sum = members[i] + members[j];
                        if (sig % sum == 0) {
                            out.push_back(record({members[i], members[j]},
                                                 TupleKind::MultiplyAmicable, to_natural(sig / sum)));
                        }
                    }
                }
                continue;
            }
            const u64 target = search.kind == TupleKind::Dickson ? sig : 2 * sig;
            std::vector<std::vector<u64>> found;
            bucket_sums(members, target, search.k, found);
            for (auto& f : found) {
                out.push_back(record(std::move(f), search.kind, to_natural(sig)));
            }
        }
        break;
    }
    case TupleKind::Multiamicable:
        out = search_multiamicable(search.limit);
        break;
    case TupleKind::Feebly:
        out = search_feebly(search.limit, search.k);
        break;
    }
    std::sort(out.begin(), out.end(), [](const TupleRecord& a, const TupleRecord& b) {
        return std::lexicographical_compare(a.members.begin(), a.members.end(), b.members.begin(),
                                            b.members.end());
    });
    return out;
}

} // namespace amicable
