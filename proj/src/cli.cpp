#include "amicable/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "amicable/arith.hpp"
#include "amicable/catalog.hpp"
#include "amicable/errors.hpp"
#include "amicable/identities.hpp"
#include "amicable/rules.hpp"
#include "amicable/sieve.hpp"
#include "amicable/tuples.hpp"

namespace amicable::cli {
namespace {

using json = nlohmann::ordered_json;

// Usage errors discovered after CLI11 parsing (bad values, missing inputs).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string default_catalog_path()
{
    if (const char* env = std::getenv("AMICABLE_CATALOG")) {
        return env;
    }
    return "amicable-catalog.jsonl";
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const
    {
        std::vector<std::size_t> width(header_.size(), 0);
        for (std::size_t c = 0; c < header_.size(); ++c) {
            width[c] = header_[c].size();
            for (const auto& r : rows_) {
                width[c] = std::max(width[c], r[c].size());
            }
        }
        auto line = [&](const std::vector<std::string>& r) {
            std::string text;
            for (std::size_t c = 0; c < r.size(); ++c) {
                if (c != 0) {
                    text += "  ";
                }
                text += std::string(width[c] - r[c].size(), ' ') + r[c];
            }
            out << text << '\n';
        };
        line(header_);
        for (const auto& r : rows_) {
            line(r);
        }
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string sep(const Integer& v) { return with_separators(v); }

std::string list_text(const std::vector<Natural>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + v[i].get_str();
    }
    return out + "]";
}

json string_array(const std::vector<Natural>& v)
{
    json arr = json::array();
    for (const auto& x : v) {
        arr.push_back(x.get_str());
    }
    return arr;
}

std::uint64_t parse_u64_count(const std::string& text, const char* what)
{
    Natural v;
    try {
        v = parse_count(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
    auto small = to_u64(v);
    if (!small) {
        throw UsageError(std::string(what) + " is too large: " + text);
    }
    return *small;
}

std::pair<Natural, Natural> parse_pair_arg(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
        throw UsageError("--pair expects two integers separated by a comma, got '" + text + "'");
    }
    try {
        Natural a = parse_integer(text.substr(0, comma));
        Natural b = parse_integer(text.substr(comma + 1));
        if (sgn(a) <= 0 || sgn(b) <= 0) {
            throw UsageError("pair members must be positive: '" + text + "'");
        }
        return {a, b};
    } catch (const ParseError& e) {
        throw UsageError(std::string("--pair: ") + e.what());
    }
}

std::vector<Natural> parse_members(const std::string& text)
{
    std::vector<Natural> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            out.push_back(parse_integer(tok));
        } catch (const ParseError& e) {
            throw UsageError(std::string("--check: ") + e.what());
        }
        if (sgn(out.back()) <= 0) {
            throw UsageError("--check: members must be positive");
        }
    }
    if (out.size() < 2) {
        throw UsageError("--check expects at least two comma-separated members");
    }
    return out;
}

// Pairs from --pair, else the catalog (when a path was given), else stdin
// (two integers per line, whitespace- or comma-separated).
struct PairInput {
    std::vector<std::string> pair_args;
    std::string catalog_path;
    bool catalog_given = false;
};

std::vector<std::pair<Natural, Natural>> gather_pairs(const PairInput& input, std::istream& in)
{
    std::vector<std::pair<Natural, Natural>> out;
    if (!input.pair_args.empty()) {
        for (const auto& p : input.pair_args) {
            out.push_back(parse_pair_arg(p));
        }
        return out;
    }
    if (input.catalog_given) {
        const Catalog cat = Catalog::load(input.catalog_path);
        for (const auto& rec : cat.pairs()) {
            out.emplace_back(rec.smaller, rec.larger);
        }
        return out;
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
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
            throw ParseError("stdin line " + std::to_string(lineno) + ": expected two integers");
        }
        out.emplace_back(parse_integer(tokens[0]), parse_integer(tokens[1]));
    }
    return out;
}

bool json_format(const std::string& f) { return f == "json" || f == "jsonl"; }

// ---------------------------------------------------------------- search

struct SearchOptions {
    std::string limit;
    std::uint64_t segment_size = kDefaultSegmentSize;
    unsigned workers = default_workers();
    bool cross_limit = false;
    std::string format = "plain";
    std::string catalog;
};

void print_pairs(const std::vector<PairRecord>& pairs, const std::string& format, std::ostream& out)
{
    if (format == "plain") {
        for (const auto& p : pairs) {
            out << p.smaller.get_str() << ' ' << p.larger.get_str() << '\n';
        }
    } else if (format == "csv") {
        out << "smaller,larger,sigma,source\n";
        for (const auto& p : pairs) {
            out << p.smaller.get_str() << ',' << p.larger.get_str() << ',' << p.sigma_value.get_str()
                << ',' << to_string(p.source) << '\n';
        }
    } else if (json_format(format)) {
        for (const auto& p : pairs) {
            json rec;
            rec["smaller"] = p.smaller.get_str();
            rec["larger"] = p.larger.get_str();
            rec["sigma"] = p.sigma_value.get_str();
            rec["source"] = std::string(to_string(p.source));
            out << rec.dump() << '\n';
        }
    } else {
        TextTable t({"smaller", "larger", "sigma"});
        for (const auto& p : pairs) {
            t.add({sep(p.smaller), sep(p.larger), sep(p.sigma_value)});
        }
        t.print(out);
    }
}

int cmd_search(const SearchOptions& o, std::ostream& out, std::ostream& err)
{
    SieveConfig config;
    config.limit = parse_u64_count(o.limit, "--limit");
    config.segment_size = o.segment_size;
    config.workers = o.workers;
    // A stored catalog must hold every pair whose smaller member is in range.
    config.cross_limit = o.cross_limit || !o.catalog.empty();
    try {
        config.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    SieveResult result = find_amicable_pairs(config);

    std::vector<PairRecord> shown;
    const Natural limit = to_natural(config.limit);
    for (const auto& p : result.pairs) {
        if (o.cross_limit || p.larger <= limit) {
            shown.push_back(p);
        }
    }
    for (auto n : result.perfect) {
        err << "# perfect " << n << '\n';
    }
    print_pairs(shown, o.format, out);

    if (!o.catalog.empty()) {
        Catalog cat = std::filesystem::exists(o.catalog) ? Catalog::load(o.catalog) : Catalog{};
        std::size_t added = 0;
        for (const auto& p : result.pairs) {
            CatalogEntry e = make_entry(p.smaller, p.larger, PairSource::sieve);
            if (e.status == VerificationStatus::rejected) {
                err << "error: sieve emitted a pair that fails re-verification: " << p.smaller
                    << ' ' << p.larger << '\n';
                return kFinding;
            }
            added += cat.admit(std::move(e)) ? 1 : 0;
        }
        cat.mark_complete_to(config.limit);
        cat.save(o.catalog);
        err << "# catalog " << o.catalog << ": " << added << " added, " << cat.size()
            << " entries, complete to " << *cat.complete_to() << '\n';
    }
    return kSuccess;
}

// -------------------------------------------------------------- generate

struct GenerateOptions {
    std::string rule;
    unsigned n_min = 2;
    unsigned n_max = 20;
    unsigned workers = default_workers();
    std::string format = "table";
};

std::string verdict_text(const PrimalityVerdict& v)
{
    if (!v.prime) {
        return "composite";
    }
    return v.probabilistic ? "probable" : "prime";
}

int cmd_generate(const GenerateOptions& o, std::ostream& out)
{
    const Rule rule = o.rule == "thabit" ? Rule::thabit : Rule::euler;
    if (o.n_min > o.n_max) {
        throw UsageError("--n-min must not exceed --n-max");
    }
    const RuleScan scan = scan_rule(rule, o.n_min, o.n_max, o.workers);
    bool failed = false;
    if (json_format(o.format)) {
        for (const auto& oc : scan.outcomes) {
            json rec;
            rec["rule"] = std::string(to_string(oc.rule));
            if (oc.m) {
                rec["m"] = *oc.m;
            }
            rec["n"] = oc.n;
            for (const auto& c : oc.candidates) {
                rec[std::string(1, c.name)] = c.value.get_str();
                rec[std::string(1, c.name) + "_primality"] = verdict_text(c.verdict);
            }
            if (oc.pair) {
                rec["pair"] = json::array({oc.pair->smaller.get_str(), oc.pair->larger.get_str()});
                rec["verified"] = oc.verified;
            } else {
                rec["pair"] = nullptr;
            }
            rec["probabilistic"] = oc.probabilistic;
            out << rec.dump() << '\n';
        }
    } else {
        std::vector<std::string> header;
        if (rule == Rule::euler) {
            header.push_back("m");
        }
        for (const char* h : {"n", "p", "p?", "q", "q?", "r", "r?", "pair"}) {
            header.emplace_back(h);
        }
        TextTable t(header);
        for (const auto& oc : scan.outcomes) {
            std::vector<std::string> row;
            if (oc.m) {
                row.push_back(std::to_string(*oc.m));
            }
            row.push_back(std::to_string(oc.n));
            for (const auto& c : oc.candidates) {
                row.push_back(sep(c.value));
                row.push_back(verdict_text(c.verdict));
            }
            std::string pair_text;
            if (oc.pair) {
                pair_text = "(" + sep(oc.pair->smaller) + ", " + sep(oc.pair->larger) + ")";
                if (!oc.verified) {
                    pair_text += " NOT VERIFIED";
                }
                if (oc.probabilistic) {
                    pair_text += " probable";
                }
            }
            row.push_back(pair_text);
            t.add(std::move(row));
        }
        t.print(out);
        out << "hits: " << scan.hits.size() << '\n';
    }
    for (const auto& h : scan.hits) {
        failed = failed || !h.verified;
    }
    return failed ? kFinding : kSuccess;
}

// -------------------------------------------------------------- classify

json shape_json(const PairShape& s)
{
    json rec;
    rec["first"] = s.first.get_str();
    rec["second"] = s.second.get_str();
    rec["n"] = s.n;
    rec["left_primes"] = string_array(s.left_primes);
    rec["right_primes"] = string_array(s.right_primes);
    rec["shape"] = std::string(to_string(s.status));
    if (!s.reason.empty()) {
        rec["reason"] = s.reason;
    }
    if (!s.shared_primes.empty()) {
        rec["shared_primes"] = string_array(s.shared_primes);
    }
    return rec;
}

int cmd_classify(const PairInput& input, const std::string& format, std::istream& in,
                 std::ostream& out)
{
    const auto pairs = gather_pairs(input, in);
    std::map<std::string, std::size_t> tally;
    TextTable t({"A", "B", "n", "A odd primes", "B odd primes", "shape", "note"});
    for (const auto& [a, b] : pairs) {
        const PairShape s = classify(a, b);
        ++tally[std::string(to_string(s.status))];
        if (json_format(format)) {
            out << shape_json(s).dump() << '\n';
        } else {
            t.add({sep(a), sep(b), std::to_string(s.n), list_text(s.left_primes),
                   list_text(s.right_primes), std::string(to_string(s.status)), s.reason});
        }
    }
    const std::size_t covered = pairs.size() - tally["Unsupported"];
    if (json_format(format)) {
        json summary;
        summary["summary"] = "classify";
        summary["pairs"] = pairs.size();
        summary["covered"] = covered;
        json shapes = json::object();
        for (const auto& [k, v] : tally) {
            if (v != 0) {
                shapes[k] = v;
            }
        }
        summary["shapes"] = shapes;
        out << summary.dump() << '\n';
    } else {
        t.print(out);
        out << "covered by a theorem or conjecture shape: " << covered << " of " << pairs.size()
            << '\n';
    }
    return kSuccess;
}

// ------------------------------------------------------------ identities

json report_json(const IdentityReport& r, bool amicable)
{
    json rec;
    rec["pair"] = json::array({r.shape.first.get_str(), r.shape.second.get_str()});
    rec["check"] = std::string(to_string(r.kind));
    rec["orientation"] = std::string(to_string(r.orientation));
    rec["shape"] = std::string(to_string(r.shape.status));
    rec["n"] = r.shape.n;
    rec["left_primes"] = string_array(r.shape.left_primes);
    rec["right_primes"] = string_array(r.shape.right_primes);
    rec["amicable"] = amicable;
    rec["S"] = r.deficits.S.get_str();
    rec["x"] = r.deficits.x.get_str();
    rec["y"] = r.deficits.y.get_str();
    json eqs = json::array();
    for (const auto& e : r.equations) {
        eqs.push_back({{"label", e.label}, {"lhs", e.lhs.get_str()}, {"rhs", e.rhs.get_str()},
                       {"holds", e.holds}});
    }
    rec["equations"] = eqs;
    if (!r.variants.empty()) {
        json vars = json::array();
        for (const auto& v : r.variants) {
            vars.push_back({{"variant", v.label}, {"holds", v.holds}});
        }
        rec["variants"] = vars;
    }
    if (!r.fits.empty()) {
        rec["family_size"] = r.family_size;
        json fits = json::array();
        for (const auto& f : r.fits) {
            json coef = json::array();
            for (const auto& c : f.coefficients) {
                coef.push_back(c.get_str());
            }
            fits.push_back({{"deficit", std::string(1, f.deficit)},
                            {"basis_side", std::string(1, f.basis_side)},
                            {"basis", f.basis},
                            {"coefficients", coef},
                            {"exact", f.exact},
                            {"integral", f.integral},
                            {"observed", f.observed.get_str()},
                            {"predicted", f.predicted.get_str()},
                            {"residual", f.residual.get_str()},
                            {"fits", f.fits()}});
        }
        rec["fits"] = fits;
    }
    if (r.variants.empty() && r.fits.empty()) {
        rec["holds"] = r.all_hold();
    }
    return rec;
}

void print_report(const IdentityReport& r, bool amicable, std::ostream& out)
{
    out << "pair A=" << sep(r.shape.first) << " B=" << sep(r.shape.second) << "  check "
        << to_string(r.kind) << "  shape " << to_string(r.shape.status) << "  orientation "
        << to_string(r.orientation) << (amicable ? "" : "  NOT AMICABLE") << '\n';
    out << "  A = " << r.shape.first_factors.to_string() << "   B = "
        << r.shape.second_factors.to_string() << '\n';
    out << "  S = phi(A)+phi(B) = " << sep(r.deficits.S) << "   x = 2^-n(A-S) = "
        << sep(r.deficits.x) << "   y = 2^-n(B-S) = " << sep(r.deficits.y) << '\n';
    if (r.kind == IdentityKind::GeneralHypothesis) {
        out << "  family: " << r.family_size << " catalog pairs of the same shape\n";
        for (const auto& f : r.fits) {
            out << "  fit " << f.expression() << "  [basis " << f.basis_side << ": ";
            for (std::size_t i = 0; i < f.basis.size(); ++i) {
                out << (i ? ", " : "") << f.basis[i];
            }
            out << "]  " << (f.exact ? "exact" : "least-squares")
                << (f.integral ? ", integral" : ", rational") << "  residual " << f.residual.get_str()
                << "  " << (f.fits() ? "FITS" : "no fit") << '\n';
        }
        return;
    }
    TextTable t({"equation", "lhs", "rhs", "verdict"});
    for (const auto& e : r.equations) {
        t.add({e.label, sep(e.lhs), sep(e.rhs), e.holds ? "holds" : "FAILS"});
    }
    t.print(out);
    if (!r.variants.empty()) {
        for (const auto& v : r.variants) {
            out << "  variant " << v.label << ": " << (v.holds ? "holds" : "fails") << '\n';
        }
    }
}

void print_unsupported(const Natural& a, const Natural& b, const std::string& check,
                       const std::string& why, const std::string& format, std::ostream& out)
{
    if (json_format(format)) {
        json rec;
        rec["pair"] = json::array({a.get_str(), b.get_str()});
        rec["check"] = check;
        rec["status"] = "unsupported shape";
        rec["reason"] = why;
        out << rec.dump() << '\n';
    } else {
        out << "pair A=" << sep(a) << " B=" << sep(b) << "  check " << check
            << "  unsupported shape: " << why << '\n';
    }
}

int cmd_identities(const PairInput& input, const std::string& theorem, const std::string& format,
                   std::istream& in, std::ostream& out)
{
    const auto pairs = gather_pairs(input, in);
    std::size_t checked = 0, failures = 0, violations = 0, unsupported = 0, not_amicable = 0;
    for (const auto& [a, b] : pairs) {
        const bool amicable = verify_pair(a, b).amicable;
        not_amicable += amicable ? 0 : 1;
        try {
            IdentityReport r = theorem == "2x2"   ? check_theorem_2x2(a, b)
                               : theorem == "3x2" ? check_theorem_3x2(a, b)
                               : theorem == "3x3" ? check_theorem_3x3(a, b)
                                                  : check_matching_theorem(a, b);
            ++checked;
            failures += r.all_hold() ? 0 : 1;
            if (json_format(format)) {
                out << report_json(r, amicable).dump() << '\n';
            } else {
                print_report(r, amicable, out);
            }
        } catch (const ShapeMismatch& e) {
            ++unsupported;
            print_unsupported(a, b, theorem, e.what(), format, out);
        } catch (const DivisibilityViolation& e) {
            ++violations;
            if (json_format(format)) {
                json rec;
                rec["pair"] = json::array({a.get_str(), b.get_str()});
                rec["status"] = "divisibility violation";
                rec["side"] = std::string(1, e.side());
                rec["remainder"] = e.remainder().get_str();
                out << rec.dump() << '\n';
            } else {
                out << "pair A=" << sep(a) << " B=" << sep(b) << "  " << e.what() << '\n';
            }
        }
    }
    if (json_format(format)) {
        json s;
        s["summary"] = "identities";
        s["pairs"] = pairs.size();
        s["checked"] = checked;
        s["failures"] = failures;
        s["divisibility_violations"] = violations;
        s["unsupported"] = unsupported;
        s["not_amicable"] = not_amicable;
        out << s.dump() << '\n';
    } else {
        out << "summary: " << pairs.size() << " pairs, " << checked << " checked, " << failures
            << " failures, " << violations << " divisibility violations, " << unsupported
            << " unsupported, " << not_amicable << " not amicable\n";
    }
    return (failures || violations || not_amicable) ? kFinding : kSuccess;
}

// ----------------------------------------------------------- conjectures

int cmd_conjectures(const PairInput& input, const std::string& which, const std::string& format,
                    std::istream& in, std::ostream& out)
{
    std::vector<PairRecord> family_source;
    if (which == "hypothesis") {
        if (!input.catalog_given) {
            throw UsageError("--which hypothesis needs --catalog to supply the shape family");
        }
        family_source = Catalog::load(input.catalog_path).pairs();
    }

    std::vector<std::pair<Natural, Natural>> pairs;
    if (which == "hypothesis" && input.pair_args.empty()) {
        // One representative (the smallest pair) per eligible prime-count family.
        std::map<std::pair<std::size_t, std::size_t>, bool> seen;
        for (const auto& rec : family_source) {
            const PairShape s = classify(rec);
            if (!s.eligible()) {
                continue;
            }
            auto key = std::pair(s.left_primes.size(), s.right_primes.size());
            if (key.first < key.second) {
                std::swap(key.first, key.second);
            }
            if (!seen[key]) {
                seen[key] = true;
                pairs.emplace_back(rec.smaller, rec.larger);
            }
        }
    } else {
        pairs = gather_pairs(input, in);
    }

    std::size_t matched = 0, not_amicable = 0;
    for (const auto& [a, b] : pairs) {
        const bool amicable = verify_pair(a, b).amicable;
        try {
            IdentityReport r = which == "4x2"   ? check_conjecture_4x2(a, b)
                               : which == "4x4" ? check_conjecture_4x4(a, b)
                                                : general_hypothesis_report(a, b, family_source);
            ++matched;
            not_amicable += amicable ? 0 : 1;
            if (json_format(format)) {
                out << report_json(r, amicable).dump() << '\n';
            } else {
                print_report(r, amicable, out);
            }
        } catch (const ShapeMismatch& e) {
            if (!input.pair_args.empty()) {
                print_unsupported(a, b, which, e.what(), format, out);
            }
        } catch (const InsufficientData& e) {
            if (json_format(format)) {
                json rec;
                rec["pair"] = json::array({a.get_str(), b.get_str()});
                rec["check"] = which;
                rec["status"] = "insufficient data";
                rec["reason"] = e.what();
                out << rec.dump() << '\n';
            } else {
                out << "pair A=" << sep(a) << " B=" << sep(b) << "  insufficient data: " << e.what()
                    << '\n';
            }
        }
    }
    if (matched == 0) {
        if (json_format(format)) {
            json s;
            s["summary"] = "conjectures";
            s["which"] = which;
            s["status"] = "no matching shapes";
            s["pairs"] = pairs.size();
            out << s.dump() << '\n';
        } else {
            out << "no matching shapes: none of " << pairs.size() << " pairs fit " << which << '\n';
        }
    } else if (!json_format(format)) {
        out << "summary: " << matched << " of " << pairs.size() << " pairs evaluated\n";
    }
    return not_amicable ? kFinding : kSuccess;
}

// ---------------------------------------------------------------- tuples

struct TupleOptions {
    std::string kind;
    std::string check;
    bool search = false;
    std::string limit;
    unsigned k = 2;
    bool experimental_k = false;
    std::string format = "table";
};

json tuple_json(const TupleRecord& t)
{
    json rec;
    rec["kind"] = std::string(to_string(t.kind));
    rec["members"] = string_array(t.members);
    switch (t.kind) {
    case TupleKind::Dickson:
    case TupleKind::Yanney: rec["sigma"] = t.witness.get_str(); break;
    case TupleKind::MultiplyAmicable: rec["t"] = t.witness.get_str(); break;
    case TupleKind::Multiamicable:
        rec["alpha"] = t.witness.get_str();
        rec["beta"] = t.witness2.get_str();
        break;
    case TupleKind::Feebly: break;
    }
    return rec;
}

std::string witness_text(const TupleRecord& t)
{
    switch (t.kind) {
    case TupleKind::Dickson:
    case TupleKind::Yanney: return "sigma=" + t.witness.get_str();
    case TupleKind::MultiplyAmicable: return "t=" + t.witness.get_str();
    case TupleKind::Multiamicable:
        return "alpha=" + t.witness.get_str() + " beta=" + t.witness2.get_str();
    case TupleKind::Feebly: return "";
    }
    return "";
}

int cmd_tuples(const TupleOptions& o, std::ostream& out)
{
    const TupleKind kind = *parse_tuple_kind(o.kind);
    if (o.search == !o.check.empty()) {
        throw UsageError("tuples needs exactly one of --check or --search");
    }
    if (o.search) {
        if (o.limit.empty()) {
            throw UsageError("--search needs --limit");
        }
        TupleSearch s{kind, parse_u64_count(o.limit, "--limit"), o.k};
        std::vector<TupleRecord> found;
        try {
            found = search_tuples(s);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        if (json_format(o.format)) {
            for (const auto& t : found) {
                out << tuple_json(t).dump() << '\n';
            }
        } else {
            TextTable t({"members", "witness"});
            for (const auto& rec : found) {
                std::string members;
                for (std::size_t i = 0; i < rec.members.size(); ++i) {
                    members += (i ? ", " : "") + sep(rec.members[i]);
                }
                t.add({"(" + members + ")", witness_text(rec)});
            }
            t.print(out);
            out << "found: " << found.size() << '\n';
        }
        return kSuccess;
    }

    std::vector<Natural> members = parse_members(o.check);
    TupleRecord rec;
    rec.kind = kind;
    rec.members = members;
    std::sort(rec.members.begin(), rec.members.end());
    bool holds = false;
    if (has_duplicates(members)) {
        holds = false;
    } else if (kind == TupleKind::Dickson) {
        if (auto w = is_dickson(members)) {
            holds = true;
            rec.witness = *w;
        }
    } else if (kind == TupleKind::Yanney) {
        if (auto w = is_yanney(members, o.experimental_k)) {
            holds = true;
            rec.witness = *w;
        }
    } else if (kind == TupleKind::Feebly) {
        holds = is_feebly_amicable(members);
    } else {
        if (members.size() != 2) {
            throw UsageError("--kind " + o.kind + " checks pairs only");
        }
        if (kind == TupleKind::MultiplyAmicable) {
            if (auto t = is_multiply_amicable(members[0], members[1])) {
                holds = true;
                rec.witness = *t;
            }
        } else if (auto w = is_multiamicable(members[0], members[1])) {
            holds = true;
            rec.witness = w->alpha;
            rec.witness2 = w->beta;
        }
    }
    const bool duplicate = has_duplicates(members);
    if (json_format(o.format)) {
        json j = tuple_json(rec);
        if (!holds) {
            j.erase("sigma");
            j.erase("t");
            j.erase("alpha");
            j.erase("beta");
        }
        j["holds"] = holds;
        if (duplicate) {
            j["note"] = "duplicate members rejected";
        }
        out << j.dump() << '\n';
    } else {
        out << o.kind << " (";
        for (std::size_t i = 0; i < rec.members.size(); ++i) {
            out << (i ? ", " : "") << sep(rec.members[i]);
        }
        out << "): " << (holds ? "yes" : "no");
        if (holds && !witness_text(rec).empty()) {
            out << "  " << witness_text(rec);
        }
        if (duplicate) {
            out << "  (duplicate members rejected)";
        }
        out << '\n';
    }
    return kSuccess;
}

// ------------------------------------------------- ingest / export / stats

int cmd_ingest(const std::string& path, const std::string& format, const std::string& report,
               const std::string& catalog_path, std::ostream& out, std::ostream& err)
{
    Catalog cat = std::filesystem::exists(catalog_path) ? Catalog::load(catalog_path) : Catalog{};
    const IngestSummary s =
        cat.ingest_file(path, format == "jsonl" ? IngestFormat::jsonl : IngestFormat::plain_pairs);
    for (const auto& issue : s.issues) {
        err << path << ":" << issue.line << ": " << issue.message << '\n';
    }
    if (json_format(report)) {
        json rec;
        rec["path"] = path;
        rec["admitted"] = s.admitted;
        rec["merged"] = s.merged;
        rec["rejected"] = s.rejected;
        rec["parse_errors"] = s.parse_errors;
        out << rec.dump() << '\n';
    } else {
        out << "admitted " << s.admitted << ", merged " << s.merged << ", rejected " << s.rejected
            << ", parse errors " << s.parse_errors << '\n';
    }
    if (s.admitted == 0) {
        if (s.merged == 0) {
            err << "error: no pairs admitted from " << path << '\n';
        }
        return s.merged == 0 ? kIoError : kSuccess;
    }
    cat.save(catalog_path);
    return kSuccess;
}

int cmd_export(const std::string& format, const std::string& catalog_path, std::ostream& out)
{
    if (!std::filesystem::exists(catalog_path)) {
        throw CatalogError("no catalog at " + catalog_path);
    }
    const Catalog cat = Catalog::load(catalog_path);
    if (cat.empty()) {
        throw CatalogError("catalog " + catalog_path + " is empty");
    }
    if (format == "csv") {
        cat.write_csv(out);
    } else if (format == "table") {
        TextTable t({"smaller", "larger", "n", "shape", "source", "status"});
        for (const auto& e : cat.entries()) {
            t.add({sep(e.pair.smaller), sep(e.pair.larger), std::to_string(e.shape.n),
                   std::string(to_string(e.shape.status)), std::string(to_string(e.pair.source)),
                   std::string(to_string(e.status))});
        }
        t.print(out);
    } else {
        cat.write_jsonl(out);
    }
    return kSuccess;
}

int cmd_stats(const std::string& grid_text, const std::string& format,
              const std::string& catalog_path, std::ostream& out)
{
    std::vector<std::uint64_t> grid;
    std::stringstream ss(grid_text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        const auto x = parse_u64_count(tok, "--grid");
        if (x < 16) {
            throw UsageError("--grid values must be at least 16");
        }
        grid.push_back(x);
    }
    if (grid.empty()) {
        throw UsageError("--grid needs at least one value");
    }
    if (!std::filesystem::exists(catalog_path)) {
        throw CatalogError("no catalog at " + catalog_path +
                           "; build one with `search --limit N --catalog PATH`");
    }
    const Catalog cat = Catalog::load(catalog_path);
    const StatsReport report = cat.stats(grid);
    if (json_format(format)) {
        for (const auto& r : report.rows) {
            json rec;
            rec["x"] = r.x;
            rec["count"] = r.count;
            rec["density"] = format_double(r.density);
            rec["bound"] = format_double(r.bound);
            rec["ratio"] = format_double(r.ratio);
            out << rec.dump() << '\n';
        }
    } else {
        TextTable t({"x", "A(x)", "A(x)/x", "bound", "A(x)/bound"});
        for (const auto& r : report.rows) {
            t.add({sep(to_natural(r.x)), std::to_string(r.count), format_double(r.density),
                   format_double(r.bound), format_double(r.ratio)});
        }
        t.print(out);
    }
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err)
{
    CLI::App app{"Amicable pair toolkit: search, generate, classify and verify totient identities",
                 "amicable"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    app.footer("Environment: AMICABLE_WORKERS sets the default worker count, AMICABLE_CATALOG the "
               "default catalog path.\nExit codes: 0 ok, 1 usage error, 2 verification or "
               "identity failure, 3 I/O or parse failure.");

    const std::vector<std::string> table_json{"table", "json"};
    std::string catalog_path = default_catalog_path();

    SearchOptions search;
    auto* s = app.add_subcommand("search", "Sieve for amicable pairs up to a limit");
    s->add_option("--limit", search.limit, "Inclusive upper bound (1e6 notation accepted)")->required();
    s->add_option("--segment-size", search.segment_size, "Sieve segment length")
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
    s->add_option("--workers", search.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    s->add_flag("--cross-limit", search.cross_limit,
                "Also list pairs whose larger member exceeds the limit");
    s->add_option("--format", search.format, "Output format")
        ->check(CLI::IsMember({"plain", "table", "json", "jsonl", "csv"}));
    s->add_option("--catalog", search.catalog,
                  "Merge results into this catalog and mark it complete to the limit");

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Evaluate Thabit's or Euler's rule over a range");
    g->add_option("rule", gen.rule, "thabit or euler")
        ->required()
        ->check(CLI::IsMember({"thabit", "euler"}));
    g->add_option("--n-max,--to", gen.n_max, "Largest n")->required()->check(CLI::Range(1u, 2000u));
    g->add_option("--n-min,--from", gen.n_min, "Smallest n (default 2)")->check(CLI::Range(1u, 2000u));
    g->add_option("--workers", gen.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    g->add_option("--format", gen.format, "Output format")->check(CLI::IsMember(table_json));

    PairInput pin;
    std::string shape_format = "table";
    auto add_pair_input = [&](CLI::App* sub) {
        sub->add_option("--pair", pin.pair_args, "Pair as A,B (repeatable)");
        sub->add_option("--catalog", pin.catalog_path, "Read pairs from this catalog");
        sub->add_option("--format", shape_format, "Output format")->check(CLI::IsMember(table_json));
    };
    auto* c = app.add_subcommand("classify", "Classify pairs by odd-prime shape");
    add_pair_input(c);

    std::string theorem = "all";
    auto* id = app.add_subcommand("identities", "Check the totient-sum identities");
    id->add_option("--theorem", theorem, "2x2, 3x2, 3x3 or all")
        ->check(CLI::IsMember({"2x2", "3x2", "3x3", "all"}));
    add_pair_input(id);

    std::string which;
    auto* cj = app.add_subcommand("conjectures", "Probe the 4-term conjectures and the general hypothesis");
    cj->add_option("--which", which, "4x2, 4x4 or hypothesis")
        ->required()
        ->check(CLI::IsMember({"4x2", "4x4", "hypothesis"}));
    add_pair_input(cj);

    TupleOptions tup;
    auto* t = app.add_subcommand("tuples", "Check or search generalized amicable tuples");
    t->add_option("--kind", tup.kind, "dickson, yanney, multiply, multi or feebly")
        ->required()
        ->check(CLI::IsMember({"dickson", "yanney", "multiply", "multi", "feebly"}));
    t->add_option("--check", tup.check, "Comma-separated members to test");
    t->add_flag("--search", tup.search, "Enumerate tuples up to --limit");
    t->add_option("--limit", tup.limit, "Member bound for --search");
    t->add_option("--k", tup.k, "Tuple size for --search")->check(CLI::Range(2u, 8u));
    t->add_flag("--experimental-k", tup.experimental_k,
                "Yanney for k != 3 via (k-1)*sigma(n_i) = sum (not part of the original definition)");
    t->add_option("--format", tup.format, "Output format")->check(CLI::IsMember(table_json));

    std::string ingest_path, ingest_format = "plain", ingest_report = "table";
    auto* ing = app.add_subcommand("ingest", "Verify and merge an external pair list into the catalog");
    ing->add_option("path", ingest_path, "Input file")->required();
    ing->add_option("--format", ingest_format, "plain (two integers per line) or jsonl")
        ->check(CLI::IsMember({"plain", "jsonl"}));
    ing->add_option("--catalog", catalog_path, "Catalog file");
    ing->add_option("--report", ingest_report, "Summary format")->check(CLI::IsMember(table_json));

    std::string export_format = "jsonl";
    auto* ex = app.add_subcommand("export", "Write the catalog to stdout");
    ex->add_option("--format", export_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl", "json", "table"}));
    ex->add_option("--catalog", catalog_path, "Catalog file");

    std::string grid, stats_format = "table";
    auto* st = app.add_subcommand("stats", "A(x), density and the Pomerance bound over a grid");
    st->add_option("--grid", grid, "Comma-separated x values, e.g. 1e4,1e5,1e6")->required();
    st->add_option("--catalog", catalog_path, "Catalog file");
    st->add_option("--format", stats_format, "Output format")->check(CLI::IsMember(table_json));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for the full grammar.\n";
        return kUsageError;
    }

    for (auto* sub : {c, id, cj}) {
        if (sub->parsed() && sub->count("--catalog") != 0) {
            pin.catalog_given = true;
        }
    }

    try {
        if (s->parsed()) {
            return cmd_search(search, out, err);
        }
        if (g->parsed()) {
            return cmd_generate(gen, out);
        }
        if (c->parsed()) {
            return cmd_classify(pin, shape_format, in, out);
        }
        if (id->parsed()) {
            return cmd_identities(pin, theorem, shape_format, in, out);
        }
        if (cj->parsed()) {
            return cmd_conjectures(pin, which, shape_format, in, out);
        }
        if (t->parsed()) {
            return cmd_tuples(tup, out);
        }
        if (ing->parsed()) {
            return cmd_ingest(ingest_path, ingest_format, ingest_report, catalog_path, out, err);
        }
        if (ex->parsed()) {
            return cmd_export(export_format, catalog_path, out);
        }
        if (st->parsed()) {
            return cmd_stats(grid, stats_format, catalog_path, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kIoError;
    } catch (const CatalogError& e) {
        err << "catalog error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    }
    return kUsageError;
}

} // namespace amicable::cli
