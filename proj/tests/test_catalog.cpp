#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amicable/catalog.hpp"
#include "amicable/errors.hpp"
#include "amicable/sieve.hpp"

using namespace amicable;

namespace {

IngestSummary ingest_text(Catalog& cat, const std::string& text,
                          IngestFormat format = IngestFormat::plain_pairs)
{
    std::istringstream in(text);
    return cat.ingest(in, format);
}

Catalog sieved(std::uint64_t limit)
{
    Catalog cat;
    SieveConfig c;
    c.limit = limit;
    c.cross_limit = true;
    for (const auto& p : find_amicable_pairs(c).pairs) {
        cat.admit(make_entry(p.smaller, p.larger, PairSource::sieve));
    }
    cat.mark_complete_to(limit);
    return cat;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("amicable-test-" + name);
}

} // namespace

TEST_CASE("plain ingestion examples")
{
    Catalog a;
    auto s = ingest_text(a, "220 284\n1184 1210\n");
    CHECK(s.admitted == 2);
    CHECK(a.size() == 2);

    Catalog b;
    s = ingest_text(b, "220 285\n");
    CHECK(s.admitted == 0);
    CHECK(s.rejected == 1);
    CHECK(b.empty());

    Catalog c;
    s = ingest_text(c, "220 284\n220 284\n");
    CHECK(s.admitted == 1);
    CHECK(s.merged == 1);

    Catalog d;
    s = ingest_text(d, "# header\n\n284 220   # reversed\n2620,2924\n");
    CHECK(s.admitted == 2);
    CHECK(d.pairs()[0].smaller == 220);
}

TEST_CASE("parse errors are line-addressed and do not stop ingestion")
{
    Catalog cat;
    const auto s = ingest_text(cat, "220 284\nbogus\n1 2 3\n1184 1210\n");
    CHECK(s.admitted == 2);
    CHECK(s.parse_errors == 2);
    REQUIRE(s.issues.size() == 2);
    CHECK(s.issues[0].line == 2);
    CHECK(s.issues[1].line == 3);

    Catalog j;
    const auto t = ingest_text(j, "{\"smaller\":\"220\",\"larger\":\"284\"}\n{not json\n", IngestFormat::jsonl);
    CHECK(t.admitted == 1);
    CHECK(t.parse_errors == 1);
    CHECK(t.issues[0].line == 2);
}

TEST_CASE("entries are enriched and re-verified")
{
    const CatalogEntry e = make_entry(2924, 2620, PairSource::ingested);
    CHECK(e.pair.smaller == 2620);
    CHECK(e.pair.larger == 2924);
    CHECK(e.pair.sigma_value == 5544);
    CHECK(e.status == VerificationStatus::verified);
    CHECK(e.shape.status == ShapeStatus::Shape2x2);
    CHECK(e.smaller_factors.to_string() == "2^2 * 5 * 131");
    CHECK(make_entry(220, 285, PairSource::ingested).status == VerificationStatus::rejected);
    CHECK(make_entry(6, 6, PairSource::ingested).status == VerificationStatus::rejected);

    Catalog cat;
    CHECK_THROWS_AS(cat.admit(make_entry(220, 285, PairSource::ingested)), CatalogError);
}

TEST_CASE("csv export")
{
    Catalog cat;
    ingest_text(cat, "220 284\n");
    std::ostringstream out;
    cat.write_csv(out);
    std::istringstream lines(out.str());
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == kCsvHeader);
    CHECK(row == "220,284,504,2,5;11,71,Unsupported,ingested,verified");
    CHECK_FALSE(std::getline(lines, extra));
}

TEST_CASE("jsonl export and ingest round trip")
{
    Catalog cat = sieved(100000);
    ingest_text(cat, "26989290624832 26730182367808\n");
    std::ostringstream out;
    cat.write_jsonl(out);

    std::istringstream lines(out.str());
    for (std::string line; std::getline(lines, line);) {
        const auto value = nlohmann::json::parse(line);
        CHECK(value.is_object());
    }

    Catalog back;
    std::istringstream in(out.str());
    const auto s = back.ingest(in, IngestFormat::jsonl);
    CHECK(s.parse_errors == 0);
    CHECK(back == cat);
    CHECK(back.complete_to() == 100000);

    std::ostringstream again;
    back.write_jsonl(again);
    CHECK(again.str() == out.str());
}

TEST_CASE("save and load")
{
    const auto path = temp_file("save.jsonl");
    Catalog cat = sieved(20000);
    cat.save(path);
    const Catalog loaded = Catalog::load(path);
    CHECK(loaded == cat);

    // A tampered entry must not load silently.
    std::ofstream(path, std::ios::app) << "{\"smaller\":\"220\",\"larger\":\"285\"}\n";
    CHECK_THROWS_AS(Catalog::load(path), CatalogError);
    CHECK_THROWS_AS(Catalog::load(temp_file("does-not-exist.jsonl")), CatalogError);
    std::filesystem::remove(path);
}

TEST_CASE("statistics")
{
    const Catalog cat = sieved(300);
    const std::vector<std::uint64_t> grid{300};
    const StatsReport r = cat.stats(grid);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].count == 2);
    CHECK(r.rows[0].density == doctest::Approx(2.0 / 300));
    CHECK(r.rows[0].bound == doctest::Approx(pomerance_bound(300)));
    CHECK(r.rows[0].ratio == doctest::Approx(2.0 / pomerance_bound(300)));

    const std::vector<std::uint64_t> beyond{1000};
    CHECK_THROWS_AS(cat.stats(beyond), CatalogError);
    CHECK_THROWS_AS(cat.count_members(301), CatalogError);
}

TEST_CASE("A(10^6) respects the Pomerance bound and thins out")
{
    const Catalog cat = sieved(1000000);
    const std::vector<std::uint64_t> grid{10000, 1000000};
    const StatsReport r = cat.stats(grid);
    CHECK(r.rows[0].count == 10);
    CHECK(r.rows[1].count == count_amicable(1000000));
    CHECK(static_cast<double>(r.rows[1].count) <= r.rows[1].bound);
    CHECK(r.rows[1].density < r.rows[0].density);
}
