#include <doctest.h>

#include <algorithm>
#include <set>

#include "aiaudit/catalog.hpp"
#include "printed_cards.hpp"

using namespace aiaudit;

namespace {

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

int count_code(const std::vector<Finding>& findings, const std::string& code) {
    return static_cast<int>(std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; }));
}

}  // namespace

TEST_CASE("default catalog matches the printed card lists") {
    const auto& c = default_catalog();
    REQUIRE(c.businesses().size() == printed::businesses.size());
    REQUIRE(c.harms().size() == printed::harms.size());
    REQUIRE(c.features().size() == printed::features.size());
    for (const auto& row : printed::businesses) {
        CAPTURE(row.id);
        CHECK(c.business(row.id).title == printed::as_title(row.text));
        CHECK(as_set(c.business(row.id).vulnerable_harms) == row.harms);
    }
    for (const auto& row : printed::harms) {
        CAPTURE(row.id);
        CHECK(c.harm(row.id).title == printed::as_title(row.text));
    }
    for (const auto& row : printed::features) {
        CAPTURE(row.id);
        CHECK(c.feature(row.id).title == printed::as_title(row.text));
        CHECK(as_set(c.feature(row.id).counters) == row.harms);
    }
}

TEST_CASE("lookups") {
    const auto& c = default_catalog();
    CHECK(c.business(4).vulnerable_harms == std::vector<int>{3, 7, 8, 12});
    CHECK(c.feature(2).counters == std::vector<int>{5});
    CHECK(legal_harms(c, 3) == std::vector<int>{5, 6});
    CHECK(legal_harms(c, 10) == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(legal_harms(c, 99), CatalogError);
    try {
        c.business(99);
        FAIL("expected unknown id");
    } catch (const CatalogError& e) {
        CHECK(e.code() == CatalogErrc::unknown_id);
    }
    CHECK(c.find_harm(0) == nullptr);

    CHECK(can_counter(c, 2, 5));
    CHECK_FALSE(can_counter(c, 2, 1));
    CHECK(can_counter(c, 7, 8));
}

TEST_CASE("guide excerpts") {
    const auto& c = default_catalog();
    const auto bias = guide_excerpt(c, 4, 8);
    REQUIRE(bias);
    CHECK(bias->find("Lakisha") != std::string::npos);
    const auto jobs = guide_excerpt(c, 4, 7);
    REQUIRE(jobs);
    CHECK(jobs->find("recruiter") != std::string::npos);
    CHECK_FALSE(guide_excerpt(c, 3, 5));
}

TEST_CASE("every harm can be countered and only misdiagnosis is orphaned") {
    const auto& c = default_catalog();
    for (const auto& h : c.harms()) {
        const bool countered = std::any_of(c.features().begin(), c.features().end(), [&](const FeatureKind& f) {
            return std::find(f.counters.begin(), f.counters.end(), h.id) != f.counters.end();
        });
        CAPTURE(h.id);
        CHECK(countered);
    }
    const auto report = validate(c);
    CHECK(report.playable());
    CHECK(count_code(report.warnings, "orphan-harm") == 1);
    CHECK(count_code(report.warnings, "uncounterable-harm") == 0);
    const auto orphan = std::find_if(report.warnings.begin(), report.warnings.end(),
                                     [](const Finding& f) { return f.code == "orphan-harm"; });
    CHECK(orphan->message.find("harm 9") != std::string::npos);
}

TEST_CASE("badges are unique") {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& h : default_catalog().harms()) CHECK(seen.insert({h.color, h.shape}).second);
}

TEST_CASE("validation errors") {
    const auto& d = default_catalog();
    SUBCASE("empty counter set") {
        auto features = d.features();
        features[1].counters.clear();
        const auto report = validate(Catalog(d.businesses(), d.harms(), features, d.guide()));
        CHECK_FALSE(report.playable());
        CHECK(count_code(report.errors, "empty-counter-set") == 1);
    }
    SUBCASE("empty vulnerable set") {
        auto businesses = d.businesses();
        businesses[0].vulnerable_harms.clear();
        const auto report = validate(Catalog(businesses, d.harms(), d.features(), d.guide()));
        CHECK(count_code(report.errors, "empty-vulnerable-set") == 1);
    }
    SUBCASE("guide pairing must be legal") {
        auto guide = d.guide();
        guide.push_back({3, 1, "text"});
        const auto report = validate(Catalog(d.businesses(), d.harms(), d.features(), guide));
        CHECK(count_code(report.errors, "illegal-guide-pairing") == 1);
    }
    SUBCASE("uncounterable harm") {
        auto features = d.features();
        for (auto& f : features) std::erase(f.counters, 4);
        const auto report = validate(Catalog(d.businesses(), d.harms(), features, d.guide()));
        CHECK(report.playable());
        CHECK(count_code(report.warnings, "uncounterable-harm") == 1);
    }
}

TEST_CASE("structured text round trip") {
    const auto text = serialize_catalog(default_catalog());
    const Catalog back = load_catalog(text);
    CHECK(back == default_catalog());
    CHECK(catalog_fingerprint(back) == catalog_fingerprint(default_catalog()));
    CHECK(serialize_catalog(back) == text);
}

TEST_CASE("dangling and duplicate ids") {
    const auto text = serialize_catalog(default_catalog());
    const Catalog dangling = load_catalog(replace_once(text, "harms: [5, 6]", "harms: [5, 99]"));
    const auto report = validate(dangling);
    CHECK_FALSE(report.playable());
    CHECK(count_code(report.errors, "dangling-harm") == 1);
    CHECK(report.errors.front().message.find("99") != std::string::npos);

    const auto dup = replace_once(text, "  - id: 4\n", "  - id: 3\n");
    try {
        load_catalog(dup);
        FAIL("expected duplicate id");
    } catch (const CatalogError& e) {
        CHECK(e.code() == CatalogErrc::duplicate_id);
    }
    CHECK_THROWS_AS(load_catalog("businesses: [oops"), CatalogError);
    CHECK_THROWS_AS(load_catalog_file("/nonexistent/catalog.yaml"), CatalogError);
}
