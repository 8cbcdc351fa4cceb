#include "amicable/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amicable/errors.hpp"
#include "amicable/sieve.hpp"

namespace amicable {
namespace {

using json = nlohmann::ordered_json;

std::string join(const std::vector<Natural>& values, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) {
            out.push_back(sep);
        }
        out += values[i].get_str();
    }
    return out;
}

json strings(const std::vector<Natural>& values)
{
    json arr = json::array();
    for (const auto& v : values) {
        arr.push_back(v.get_str());
    }
    return arr;
}

Natural json_natural(const json& v, const char* field)
{
    if (v.is_string()) {
        return parse_integer(v.get<std::string>());
    }
    if (v.is_number_unsigned()) {
        return to_natural(v.get<std::uint64_t>());
    }
    throw ParseError(std::string("field '") + field + "' must be a decimal string or integer");
}

bool entry_less(const CatalogEntry& a, const CatalogEntry& b)
{
    if (a.pair.smaller != b.pair.smaller) {
        return a.pair.smaller < b.pair.smaller;
    }
    return a.pair.larger < b.pair.larger;
}

} // namespace

std::string_view to_string(VerificationStatus s)
{
    switch (s) {
    case VerificationStatus::verified: return "verified";
    case VerificationStatus::rejected: return "rejected";
    case VerificationStatus::probable_prime_dependent: return "probable-prime-dependent";
    }
    return "?";
}

CatalogEntry make_entry(const Natural& a, const Natural& b, PairSource source)
{
    const Natural& smaller = a < b ? a : b;
    const Natural& larger = a < b ? b : a;
    CatalogEntry e;
    e.shape = classify(smaller, larger);
    e.smaller_factors = e.shape.first_factors;
    e.larger_factors = e.shape.second_factors;
    const Natural total = smaller + larger;
    e.pair = PairRecord{smaller, larger, total, source};
    const bool amicable = smaller != larger && sigma(e.smaller_factors) == total &&
                          sigma(e.larger_factors) == total;
    if (!amicable) {
        e.status = VerificationStatus::rejected;
    } else if (e.smaller_factors.probabilistic || e.larger_factors.probabilistic) {
        e.status = VerificationStatus::probable_prime_dependent;
    } else {
        e.status = VerificationStatus::verified;
    }
    return e;
}

std::vector<PairRecord> Catalog::pairs() const
{
    std::vector<PairRecord> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) {
        out.push_back(e.pair);
    }
    return out;
}

void Catalog::mark_complete_to(std::uint64_t limit)
{
    complete_to_ = std::max(complete_to_.value_or(0), limit);
}

bool Catalog::admit(CatalogEntry entry)
{
    if (entry.status == VerificationStatus::rejected) {
        throw CatalogError("refusing to admit an unverified pair " + entry.pair.smaller.get_str() +
                           "," + entry.pair.larger.get_str());
    }
    auto it = std::lower_bound(entries_.begin(), entries_.end(), entry, entry_less);
    if (it != entries_.end() && it->pair.smaller == entry.pair.smaller &&
        it->pair.larger == entry.pair.larger) {
        return false;
    }
    entries_.insert(it, std::move(entry));
    return true;
}

IngestSummary Catalog::ingest(std::istream& in, IngestFormat format)
{
    IngestSummary summary;
    std::string line;
    std::size_t lineno = 0;
    auto issue = [&](std::string msg) { summary.issues.push_back({lineno, std::move(msg)}); };
    auto consider = [&](const Natural& a, const Natural& b, PairSource source) {
        CatalogEntry entry = make_entry(a, b, source);
        if (entry.status == VerificationStatus::rejected) {
            ++summary.rejected;
            issue("(" + a.get_str() + ", " + b.get_str() + ") is not amicable");
            return;
        }
        if (admit(std::move(entry))) {
            ++summary.admitted;
        } else {
            ++summary.merged;
        }
    };

    while (std::getline(in, line)) {
        ++lineno;
        try {
            if (format == IngestFormat::plain_pairs) {
                if (auto hash = line.find('#'); hash != std::string::npos) {
                    line.erase(hash);
                }
                std::replace(line.begin(), line.end(), ',', ' ');
                std::istringstream fields(line);
                std::vector<std::string> tokens;
                for (std::string tok; fields >> tok;) {
                    tokens.push_back(tok);
                }
                if (tokens.empty()) {
                    continue;
                }
                if (tokens.size() != 2) {
                    throw ParseError("expected two integers, got " + std::to_string(tokens.size()) +
                                     " fields");
                }
                const Natural a = parse_integer(tokens[0]);
                const Natural b = parse_integer(tokens[1]);
                if (sgn(a) <= 0 || sgn(b) <= 0) {
                    throw ParseError("pair members must be positive");
                }
                consider(a, b, PairSource::ingested);
                continue;
            }

            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            const json rec = json::parse(line);
            if (!rec.is_object()) {
                throw ParseError("expected a JSON object");
            }
            if (rec.contains("version")) {
                if (rec["version"] != std::string(kCatalogFormatVersion)) {
                    throw ParseError("unsupported catalog version " + rec["version"].dump());
                }
                if (rec.contains("complete_to") && rec["complete_to"].is_number_unsigned()) {
                    mark_complete_to(rec["complete_to"].get<std::uint64_t>());
                }
                continue;
            }
            if (!rec.contains("smaller") || !rec.contains("larger")) {
                throw ParseError("missing 'smaller' or 'larger'");
            }
            PairSource source = PairSource::ingested;
            if (rec.contains("source")) {
                auto parsed = parse_pair_source(rec["source"].get<std::string>());
                if (!parsed) {
                    throw ParseError("unknown source " + rec["source"].dump());
                }
                source = *parsed;
            }
            const Natural a = json_natural(rec["smaller"], "smaller");
            const Natural b = json_natural(rec["larger"], "larger");
            if (sgn(a) <= 0 || sgn(b) <= 0) {
                throw ParseError("pair members must be positive");
            }
            consider(a, b, source);
        } catch (const ParseError& e) {
            ++summary.parse_errors;
            issue(std::string("parse error: ") + e.what());
        } catch (const json::exception& e) {
            ++summary.parse_errors;
            issue(std::string("parse error: ") + e.what());
        }
    }
    return summary;
}

IngestSummary Catalog::ingest_file(const std::filesystem::path& path, IngestFormat format)
{
    std::ifstream in(path);
    if (!in) {
        throw CatalogError("cannot open " + path.string());
    }
    return ingest(in, format);
}

void Catalog::write_jsonl(std::ostream& out) const
{
    json header;
    header["kind"] = "amicable-catalog";
    header["version"] = std::string(kCatalogFormatVersion);
    header["complete_to"] = complete_to_ ? json(*complete_to_) : json(nullptr);
    out << header.dump() << '\n';
    for (const auto& e : entries_) {
        json rec;
        rec["smaller"] = e.pair.smaller.get_str();
        rec["larger"] = e.pair.larger.get_str();
        rec["sigma"] = e.pair.sigma_value.get_str();
        rec["n"] = e.shape.n;
        rec["left_primes"] = strings(e.shape.left_primes);
        rec["right_primes"] = strings(e.shape.right_primes);
        rec["shape"] = std::string(to_string(e.shape.status));
        rec["source"] = std::string(to_string(e.pair.source));
        rec["status"] = std::string(to_string(e.status));
        out << rec.dump() << '\n';
    }
}

void Catalog::write_csv(std::ostream& out) const
{
    out << kCsvHeader << '\n';
    for (const auto& e : entries_) {
        out << e.pair.smaller.get_str() << ',' << e.pair.larger.get_str() << ','
            << e.pair.sigma_value.get_str() << ',' << e.shape.n << ','
            << join(e.shape.left_primes, ';') << ',' << join(e.shape.right_primes, ';') << ','
            << to_string(e.shape.status) << ',' << to_string(e.pair.source) << ','
            << to_string(e.status) << '\n';
    }
}

Catalog Catalog::load(const std::filesystem::path& path)
{
    Catalog c;
    const IngestSummary s = c.ingest_file(path, IngestFormat::jsonl);
    if (s.parse_errors != 0 || s.rejected != 0) {
        std::ostringstream msg;
        msg << path.string() << ": " << s.parse_errors << " parse errors, " << s.rejected
            << " rejected entries";
        if (!s.issues.empty()) {
            msg << " (first at line " << s.issues.front().line << ": " << s.issues.front().message
                << ")";
        }
        throw CatalogError(msg.str());
    }
    return c;
}

void Catalog::save(const std::filesystem::path& path) const
{
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw CatalogError("cannot write " + tmp.string());
        }
        write_jsonl(out);
        if (!out) {
            throw CatalogError("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t Catalog::count_members(std::uint64_t x) const
{
    if (!complete_to_ || x > *complete_to_) {
        throw CatalogError("catalog is complete only up to " +
                           (complete_to_ ? std::to_string(*complete_to_) : std::string("nothing")) +
                           "; A(" + std::to_string(x) +
                           ") needs a sieve run with --limit >= " + std::to_string(x));
    }
    const Natural bound = to_natural(x);
    std::uint64_t count = 0;
    for (const auto& e : entries_) {
        count += (e.pair.smaller <= bound ? 1 : 0) + (e.pair.larger <= bound ? 1 : 0);
    }
    return count;
}

StatsReport Catalog::stats(std::span<const std::uint64_t> grid) const
{
    StatsReport report;
    for (std::uint64_t x : grid) {
        StatsRow row;
        row.x = x;
        row.count = count_members(x);
        row.density = static_cast<double>(row.count) / static_cast<double>(x);
        row.bound = pomerance_bound(x);
        row.ratio = static_cast<double>(row.count) / row.bound;
        report.rows.push_back(row);
    }
    return report;
}

bool operator==(const Catalog& a, const Catalog& b)
{
    if (a.complete_to_ != b.complete_to_ || a.entries_.size() != b.entries_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        const auto& x = a.entries_[i];
        const auto& y = b.entries_[i];
        if (!(x.pair == y.pair) || x.status != y.status || x.shape.status != y.shape.status ||
            !(x.smaller_factors == y.smaller_factors) || !(x.larger_factors == y.larger_factors)) {
            return false;
        }
    }
    return true;
}

} // namespace amicable
