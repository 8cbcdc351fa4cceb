#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amicable/natural.hpp"

namespace amicable {

enum class TupleKind { Dickson, Yanney, MultiplyAmicable, Multiamicable, Feebly };

std::string_view to_string(TupleKind k);
std::optional<TupleKind> parse_tuple_kind(std::string_view s);   // dickson|yanney|multiply|multi|feebly

struct MultiamicableWitness {
    Natural alpha;
    Natural beta;
    friend bool operator==(const MultiamicableWitness&, const MultiamicableWitness&) = default;
};

struct TupleRecord {
    std::vector<Natural> members;   // ascending, distinct
    TupleKind kind = TupleKind::Dickson;
    // Dickson/Yanney: the common sigma. MultiplyAmicable: t. Multiamicable:
    // alpha and beta for (members[0], members[1]). Feebly: unused.
    Natural witness;
    Natural witness2;

    friend bool operator==(const TupleRecord&, const TupleRecord&) = default;
};

// Members must be distinct; duplicates make every checker return "no".
bool has_duplicates(std::span<const Natural> members);

// sigma(n_i) all equal to sum(n_i). For k = 3 the aliquot system
// s(n_1) = n_2 + n_3, ... is evaluated as well and must agree.
std::optional<Natural> is_dickson(std::span<const Natural> members);

// 2 sigma(n_i) = sum(n_i) for k = 3, cross-checked against
// n_1 = s(n_2) + s(n_3), ... With experimental_k set, other k use
// (k - 1) sigma(n_i) = sum(n_i), a reading the k = 3 case suggests.
std::optional<Natural> is_yanney(std::span<const Natural> members, bool experimental_k = false);

// sigma(m) = sigma(n) = t (m + n).
std::optional<Natural> is_multiply_amicable(const Natural& m, const Natural& n);

// s(m) = alpha n, s(n) = beta m, alpha and beta positive.
std::optional<MultiamicableWitness> is_multiamicable(const Natural& m, const Natural& n);

// sum n_i / sigma(n_i) = 1 in exact rationals.
bool is_feebly_amicable(std::span<const Natural> members);

// Component checks, exposed for the equivalence property tests.
bool dickson_sigma_form(std::span<const Natural> members);
bool dickson_aliquot_form(std::span<const Natural> members);   // k = 3 only
bool yanney_sigma_form(std::span<const Natural> members);
bool yanney_aliquot_form(std::span<const Natural> members);    // k = 3 only

struct TupleSearch {
    TupleKind kind = TupleKind::Dickson;
    std::uint64_t limit = 0;
    unsigned k = 2;
};

// Cost estimate in elementary steps; search_tuples refuses above kMaxSearchCost.
double tuple_search_cost(const TupleSearch& search);
inline constexpr double kMaxSearchCost = 5e9;

// Every tuple of the kind with members <= limit, sorted lexicographically.
// Dickson and Yanney use sigma buckets; Feebly buckets by n / sigma(n).
std::vector<TupleRecord> search_tuples(const TupleSearch& search);

} // namespace amicable
