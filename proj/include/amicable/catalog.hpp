#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amicable/arith.hpp"
#include "amicable/identities.hpp"
#include "amicable/pair_record.hpp"

namespace amicable {

inline constexpr std::string_view kCatalogFormatVersion = "1";

enum class VerificationStatus { verified, rejected, probable_prime_dependent };

std::string_view to_string(VerificationStatus s);

struct CatalogEntry {
    PairRecord pair;
    Factorization smaller_factors;
    Factorization larger_factors;
    PairShape shape;
    VerificationStatus status = VerificationStatus::verified;
};

enum class IngestFormat { plain_pairs, jsonl };

struct IngestIssue {
    std::size_t line = 0;
    std::string message;
};

struct IngestSummary {
    std::size_t admitted = 0;
    std::size_t merged = 0;     // duplicates of entries already present
    std::size_t rejected = 0;   // failed the sigma check
    std::size_t parse_errors = 0;
    std::vector<IngestIssue> issues;
};

struct StatsRow {
    std::uint64_t x = 0;
    std::uint64_t count = 0;    // A(x)
    double density = 0;         // A(x) / x
    double bound = 0;           // pomerance_bound(x)
    double ratio = 0;           // A(x) / bound
};

struct StatsReport {
    std::vector<StatsRow> rows;
};

// Re-verifies a pair and builds its full entry. status is `rejected` when
// the pair is not amicable.
CatalogEntry make_entry(const Natural& a, const Natural& b, PairSource source);

// In-memory catalog: entries unique by (smaller, larger), sorted by smaller.
class Catalog {
public:
    const std::vector<CatalogEntry>& entries() const { return entries_; }
    std::vector<PairRecord> pairs() const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    // Largest L such that every amicable pair with smaller member <= L is present.
    std::optional<std::uint64_t> complete_to() const { return complete_to_; }
    void mark_complete_to(std::uint64_t limit);

    // Adds a verified entry. Returns false if (smaller, larger) was present.
    bool admit(CatalogEntry entry);

    IngestSummary ingest(std::istream& in, IngestFormat format);
    IngestSummary ingest_file(const std::filesystem::path& path, IngestFormat format);

    // Catalog file: a header record then one JSON object per entry.
    void write_jsonl(std::ostream& out) const;
    void write_csv(std::ostream& out) const;

    static Catalog load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // A(x) recomputed from entries; refuses x beyond complete_to.
    std::uint64_t count_members(std::uint64_t x) const;
    StatsReport stats(std::span<const std::uint64_t> grid) const;

    friend bool operator==(const Catalog& a, const Catalog& b);

private:
    std::vector<CatalogEntry> entries_;
    std::optional<std::uint64_t> complete_to_;
};

inline constexpr std::string_view kCsvHeader =
    "smaller,larger,sigma,n,left_primes,right_primes,shape,source,status";

} // namespace amicable
