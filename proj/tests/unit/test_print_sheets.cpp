#include <doctest.h>

#include <filesystem>
#include <regex>
#include <set>

#include "aiaudit/catalog.hpp"
#include "aiaudit/print_sheets.hpp"

using namespace aiaudit;

namespace {

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

const SheetDocument& doc(const std::vector<SheetDocument>& docs, const std::string& name) {
    for (const auto& d : docs) {
        if (d.filename == name) return d;
    }
    FAIL("missing " << name);
    throw;
}

}  // namespace

TEST_CASE("print sheets hold every card") {
    const auto docs = render_print_sheets(default_catalog(), PrintOptions{});
    CHECK(docs.size() == 5);
    CHECK(count(doc(docs, "businesses.svg").content, "class=\"card business\"") == 14);
    const auto& harms = doc(docs, "harms.svg").content;
    CHECK(count(harms, "class=\"card harm\"") == 3 * 13 + 1);
    for (int h = 1; h <= 13; ++h) {
        CAPTURE(h);
        CHECK(count(harms, "class=\"card harm\" data-kind=\"" + std::to_string(h) + "\"") == 3);
    }
    CHECK(count(doc(docs, "features.svg").content, "class=\"card feature\"") == 2 * 7 + 2);
    CHECK(doc(docs, "rules.svg").content.find("Wild card example") != std::string::npos);
    CHECK(doc(docs, "index.html").content.find("harms.svg") != std::string::npos);
}

TEST_CASE("copy counts follow the options") {
    PrintOptions o;
    o.harm_copies_per_kind = 1;
    o.wild_harm_copies = 0;
    o.expand_copies = false;
    o.feature_copies_per_kind = 4;
    const auto docs = render_print_sheets(default_catalog(), o);
    CHECK(count(doc(docs, "harms.svg").content, "class=\"card harm\"") == 13);
    const auto& features = doc(docs, "features.svg").content;
    CHECK(count(features, "class=\"card feature\"") == 8);
    CHECK(features.find("x 4") != std::string::npos);
}

TEST_CASE("harm badges are distinct") {
    std::set<std::string> rendered;
    for (const auto& h : default_catalog().harms()) {
        auto svg = harm_badge_svg(h, 10, 10, 5);
        svg = std::regex_replace(svg, std::regex("data-harm=\"\\d+\""), "");
        CHECK(rendered.insert(svg).second);
    }
}

TEST_CASE("business cards show their badges") {
    const auto& sheet = doc(render_print_sheets(default_catalog(), PrintOptions{}), "businesses.svg").content;
    int badges = 0;
    for (const auto& b : default_catalog().businesses()) badges += static_cast<int>(b.vulnerable_harms.size());
    CHECK(count(sheet, "class=\"badge\"") == badges);
}

TEST_CASE("invalid catalogs are refused") {
    const auto& d = default_catalog();
    auto features = d.features();
    features[0].counters = {42};
    CHECK_THROWS_AS(render_print_sheets(Catalog(d.businesses(), d.harms(), features, d.guide()), PrintOptions{}),
                    ExportError);
}

TEST_CASE("export writes files") {
    const auto dir = std::filesystem::temp_directory_path() / "aiaudit_export_test";
    std::filesystem::remove_all(dir);
    const auto paths = export_print_sheets(default_catalog(), PrintOptions{}, dir);
    CHECK(paths.size() == 5);
    for (const auto& p : paths) CHECK(std::filesystem::file_size(p) > 0);
    std::filesystem::remove_all(dir);
}
