#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiaudit/catalog.hpp"

namespace aiaudit {

struct PrintOptions {
    int harm_copies_per_kind = 3;
    int feature_copies_per_kind = 2;
    int wild_harm_copies = 1;
    int wild_feature_copies = 2;
    int columns = 4;
    // One card per copy when true; otherwise one card per kind labelled "x N".
    bool expand_copies = true;
};

struct SheetDocument {
    std::string filename;
    std::string content;
};

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SVG fragment for a harm badge: the shape filled with the harm's color.
std::string harm_badge_svg(const HarmKind& harm, double cx, double cy, double radius);

/// Renders business, harm and feature sheets, the rules page and an index page.
/// Throws ExportError when the catalog does not validate.
std::vector<SheetDocument> render_print_sheets(const Catalog& catalog, const PrintOptions& options);

/// Writes the rendered sheets into `out_dir` (created if needed) and returns
/// the paths written.
std::vector<std::filesystem::path> export_print_sheets(const Catalog& catalog,
                                                       const PrintOptions& options,
                                                       const std::filesystem::path& out_dir);

}  // namespace aiaudit
