#include "aiaudit/print_sheets.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace aiaudit {

namespace {

constexpr double kCardWidth = 180;
constexpr double kCardHeight = 252;
constexpr double kGap = 12;
constexpr double kMargin = 24;

const std::map<std::string, std::string>& color_table() {
    static const std::map<std::string, std::string> table{
        {"red", "#d62728"},    {"orange", "#ff7f0e"},  {"yellow", "#f2c500"}, {"green", "#2ca02c"},
        {"blue", "#1f77b4"},   {"purple", "#7b3fa0"},  {"brown", "#8c564b"},  {"black", "#222222"},
        {"gray", "#8a8a8a"},   {"teal", "#17becf"},    {"navy", "#1b2a6b"},   {"magenta", "#e020c0"},
        {"olive", "#808000"},
    };
    return table;
}

std::string fill_for(const std::string& color) {
    auto it = color_table().find(color);
    return it == color_table().end() ? color : it->second;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<std::string> wrap(const std::string& text, std::size_t width) {
    std::vector<std::string> lines;
    std::istringstream words(text);
    std::string word;
    std::string line;
    while (words >> word) {
        if (!line.empty() && line.size() + 1 + word.size() > width) {
            lines.push_back(line);
            line.clear();
        }
        if (!line.empty()) line += ' ';
        line += word;
    }
    if (!line.empty()) lines.push_back(line);
    return lines;
}

std::string text_block(const std::string& text, double x, double y, std::size_t width,
                       int font_size = 11) {
    std::ostringstream out;
    double line_y = y;
    for (const auto& line : wrap(text, width)) {
        out << "<text x=\"" << x << "\" y=\"" << line_y << "\" font-size=\"" << font_size
            << "\" font-family=\"sans-serif\">" << escape(line) << "</text>";
        line_y += font_size * 1.3;
    }
    return out.str();
}

std::string polygon(const std::vector<std::pair<double, double>>& points, const std::string& fill) {
    std::ostringstream out;
    out << "<polygon points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out << ' ';
        out << std::round(points[i].first * 100) / 100 << ',' << std::round(points[i].second * 100) / 100;
    }
    out << "\" fill=\"" << fill << "\" stroke=\"#000\" stroke-width=\"0.8\"/>";
    return out.str();
}

std::vector<std::pair<double, double>> regular(int sides, double cx, double cy, double r,
                                               double rotation) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < sides; ++i) {
        const double a = rotation + 2 * std::numbers::pi * i / sides;
        pts.emplace_back(cx + r * std::cos(a), cy + r * std::sin(a));
    }
    return pts;
}

std::string card_frame(double x, double y, const std::string& family, int kind, int copy,
                       const std::string& stroke) {
    std::ostringstream out;
    out << "<g class=\"card " << family << "\" data-kind=\"" << kind << "\" data-copy=\"" << copy
        << "\" transform=\"translate(" << x << ',' << y << ")\">";
    out << "<rect width=\"" << kCardWidth << "\" height=\"" << kCardHeight
        << "\" rx=\"10\" fill=\"#fff\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>";
    return out.str();
}

struct CardSpec {
    std::string family;
    int kind;
    int copy;
    std::string body;
};

std::string sheet(const std::string& heading, const std::vector<CardSpec>& cards, int columns) {
    const int rows = static_cast<int>((cards.size() + columns - 1) / columns);
    const double width = 2 * kMargin + columns * kCardWidth + (columns - 1) * kGap;
    const double height = 2 * kMargin + 30 + rows * kCardHeight + std::max(0, rows - 1) * kGap;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kMargin + 14
        << "\" font-size=\"18\" font-family=\"sans-serif\" font-weight=\"bold\">" << escape(heading)
        << "</text>\n";
    for (std::size_t i = 0; i < cards.size(); ++i) {
        const int col = static_cast<int>(i % columns);
        const int row = static_cast<int>(i / columns);
        const double x = kMargin + col * (kCardWidth + kGap);
        const double y = kMargin + 30 + row * (kCardHeight + kGap);
        out << card_frame(x, y, cards[i].family, cards[i].kind, cards[i].copy, "#333")
            << cards[i].body << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string badge_row(const Catalog& catalog, const std::vector<HarmId>& harms, double y) {
    std::ostringstream out;
    const double r = 9;
    double x = 16;
    for (HarmId id : harms) {
        const auto* harm = catalog.find_harm(id);
        if (harm == nullptr) continue;
        out << harm_badge_svg(*harm, x, y, r);
        out << "<text x=\"" << x << "\" y=\"" << y + r + 10
            << "\" font-size=\"8\" text-anchor=\"middle\" font-family=\"sans-serif\">" << id
            << "</text>";
        x += 2 * r + 6;
        if (x > kCardWidth - 12) {
            x = 16;
            y += 2 * r + 14;
        }
    }
    return out.str();
}

std::string copy_label(int copy, int copies, bool expand) {
    std::ostringstream out;
    out << "<text x=\"" << kCardWidth - 10 << "\" y=\"" << kCardHeight - 10
        << "\" font-size=\"9\" text-anchor=\"end\" font-family=\"sans-serif\">";
    if (expand) {
        out << "copy " << copy << " of " << copies;
    } else {
        out << "x " << copies;
    }
    out << "</text>";
    return out.str();
}

std::string family_label(const std::string& label, int id) {
    std::ostringstream out;
    out << "<text x=\"10\" y=\"20\" font-size=\"12\" font-weight=\"bold\" font-family=\"sans-serif\">"
        << escape(label);
    if (id > 0) out << ' ' << id;
    out << "</text>";
    return out.str();
}

void add_copies(std::vector<CardSpec>& cards, const std::string& family, int kind, int copies,
                bool expand, const std::string& body) {
    if (copies <= 0) return;
    if (!expand) {
        cards.push_back({family, kind, 1, body + copy_label(1, copies, false)});
        return;
    }
    for (int c = 1; c <= copies; ++c) {
        cards.push_back({family, kind, c, body + copy_label(c, copies, true)});
    }
}

std::string rules_page(const PrintOptions& options) {
    const std::vector<std::pair<std::string, std::string>> sections{
        {"Setup",
         "Deal every Business card evenly and put the leftovers back in the box. Shuffle the Harm "
         "and Feature decks and place them face down. Each player draws 2 Harm and 3 Feature cards "
         "(2 and 2 for a faster game), keeps them secret, and sets up one Business."},
        {"Your turn",
         "Either set up Businesses (one to three, then end the turn) or play one Harm against an "
         "opponent's running Business. A Harm fits a Business when its badge appears on that "
         "Business card. If you have no running Business you must set one up. If none of your Harm "
         "cards fit any Business, swap one Harm for the top card of the Harm deck; if nothing at "
         "all is possible, pass."},
        {"Defending",
         "The challenged player may answer with a Feature card showing the Harm's badge. A "
         "successful defense sends both cards to the bottom of their decks; the challenger draws a "
         "Harm and the defender draws a Feature. Without a defense the Business goes to the "
         "discard pile and the challenger draws a new Harm."},
        {"Wild cards",
         "A Wild Harm may be played against any Business and a Wild Feature against any Harm. The "
         "player explains their idea out loud; it only counts if a strict majority of the other "
         "players vote to accept it. Rejected wild cards are spent and replaced."},
        {"Wild card example",
         "Sam runs \"Social interactive robot\" and is challenged with \"Overly placing trust in "
         "imperfect technology\". Sam has no matching Feature, so Sam plays a Wild Feature: \"The "
         "robot announces how sure it is before every answer and tells kids to check with an adult "
         "when it is unsure.\" Three of the four other players vote yes, a majority, so the "
         "challenge fails."},
        {"Winning",
         "A player whose Businesses are all gone leaves the game. The last player with a surviving "
         "Business wins."},
    };

    const double width = 2 * kMargin + 4 * kCardWidth + 3 * kGap;
    std::ostringstream body;
    double y = kMargin + 14;
    body << "<text x=\"" << kMargin << "\" y=\"" << y
         << "\" font-size=\"20\" font-weight=\"bold\" font-family=\"sans-serif\">AI Audit: rules</text>";
    y += 30;
    for (const auto& [title, text] : sections) {
        body << "<text x=\"" << kMargin << "\" y=\"" << y
             << "\" font-size=\"14\" font-weight=\"bold\" font-family=\"sans-serif\">" << escape(title)
             << "</text>";
        y += 18;
        body << text_block(text, kMargin, y, 110, 12);
        y += static_cast<double>(wrap(text, 110).size()) * 12 * 1.3 + 14;
    }
    body << "<text x=\"" << kMargin << "\" y=\"" << y
         << "\" font-size=\"11\" font-family=\"sans-serif\">Deck: Harm " << options.harm_copies_per_kind
         << " of each kind + " << options.wild_harm_copies << " wild; Feature "
         << options.feature_copies_per_kind << " of each kind + " << options.wild_feature_copies
         << " wild.</text>";
    y += 30;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << y
        << "\" viewBox=\"0 0 " << width << ' ' << y << "\">\n"
        << body.str() << "\n</svg>\n";
    return out.str();
}

}  // namespace

std::string harm_badge_svg(const HarmKind& harm, double cx, double cy, double r) {
    const std::string fill = fill_for(harm.color);
    std::ostringstream out;
    out << "<g class=\"badge\" data-harm=\"" << harm.id << "\" data-color=\"" << escape(harm.color)
        << "\" data-shape=\"" << escape(harm.shape) << "\">";
    const double pi = std::numbers::pi;
    const std::string& s = harm.shape;
    if (s == "circle") {
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" fill=\"" << fill
            << "\" stroke=\"#000\" stroke-width=\"0.8\"/>";
    } else if (s == "square") {
        out << polygon(regular(4, cx, cy, r * 1.1, pi / 4), fill);
    } else if (s == "triangle") {
        out << polygon(regular(3, cx, cy, r * 1.15, -pi / 2), fill);
    } else if (s == "diamond") {
        out << polygon(regular(4, cx, cy, r * 1.1, 0), fill);
    } else if (s == "pentagon") {
        out << polygon(regular(5, cx, cy, r, -pi / 2), fill);
    } else if (s == "hexagon") {
        out << polygon(regular(6, cx, cy, r, 0), fill);
    } else if (s == "octagon") {
        out << polygon(regular(8, cx, cy, r, pi / 8), fill);
    } else if (s == "star") {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 10; ++i) {
            const double rr = (i % 2 == 0) ? r * 1.15 : r * 0.5;
            const double a = -pi / 2 + pi * i / 5;
            pts.emplace_back(cx + rr * std::cos(a), cy + rr * std::sin(a));
        }
        out << polygon(pts, fill);
    } else if (s == "cross") {
        const double a = r * 0.35;
        out << polygon({{cx - a, cy - r}, {cx + a, cy - r}, {cx + a, cy - a}, {cx + r, cy - a},
                        {cx + r, cy + a}, {cx + a, cy + a}, {cx + a, cy + r}, {cx - a, cy + r},
                        {cx - a, cy + a}, {cx - r, cy + a}, {cx - r, cy - a}, {cx - a, cy - a}},
                       fill);
    } else if (s == "arrow") {
        const double a = r * 0.35;
        out << polygon({{cx - r, cy - a}, {cx, cy - a}, {cx, cy - r}, {cx + r, cy}, {cx, cy + r},
                        {cx, cy + a}, {cx - r, cy + a}},
                       fill);
    } else if (s == "crescent") {
        out << "<path d=\"M " << cx << ' ' << cy - r << " A " << r << ' ' << r << " 0 1 0 " << cx
            << ' ' << cy + r << " A " << r * 0.75 << ' ' << r << " 0 1 1 " << cx << ' ' << cy - r
            << " Z\" fill=\"" << fill << "\" stroke=\"#000\" stroke-width=\"0.8\"/>";
    } else if (s == "heart") {
        out << "<path d=\"M " << cx << ' ' << cy + r << " C " << cx - r * 1.6 << ' ' << cy - r * 0.2
            << ' ' << cx - r * 0.6 << ' ' << cy - r * 1.4 << ' ' << cx << ' ' << cy - r * 0.4
            << " C " << cx + r * 0.6 << ' ' << cy - r * 1.4 << ' ' << cx + r * 1.6 << ' '
            << cy - r * 0.2 << ' ' << cx << ' ' << cy + r << " Z\" fill=\"" << fill
            << "\" stroke=\"#000\" stroke-width=\"0.8\"/>";
    } else if (s == "trapezoid") {
        out << polygon({{cx - r * 0.55, cy - r * 0.8}, {cx + r * 0.55, cy - r * 0.8},
                        {cx + r, cy + r * 0.8}, {cx - r, cy + r * 0.8}},
                       fill);
    } else {
        // Unknown shape names from custom catalogs: labelled circle.
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r << "\" fill=\"" << fill
            << "\" stroke=\"#000\" stroke-width=\"0.8\"/><text x=\"" << cx << "\" y=\"" << cy + 3
            << "\" font-size=\"7\" text-anchor=\"middle\">" << escape(s.substr(0, 2)) << "</text>";
    }
    out << "</g>";
    return out.str();
}

std::vector<SheetDocument> render_print_sheets(const Catalog& catalog, const PrintOptions& options) {
    const ValidationReport report = validate(catalog);
    if (!report.playable()) {
        throw ExportError("catalog has " + std::to_string(report.errors.size()) +
                          " validation error(s); first: " + report.errors.front().message);
    }
    const int columns = std::max(1, options.columns);

    std::vector<CardSpec> business_cards;
    for (const auto& b : catalog.businesses()) {
        const std::string body = family_label("Business", b.id) +
                                 text_block(b.title, 10, 42, 30, 11) +
                                 "<text x=\"10\" y=\"180\" font-size=\"9\" font-family=\"sans-serif\">Vulnerable to:</text>" +
                                 badge_row(catalog, b.vulnerable_harms, 200);
        add_copies(business_cards, "business", b.id, 1, options.expand_copies, body);
    }

    std::vector<CardSpec> harm_cards;
    for (const auto& h : catalog.harms()) {
        const std::string body = family_label("Harm", h.id) + harm_badge_svg(h, kCardWidth - 24, 18, 11) +
                                 text_block(h.title, 10, 60, 30, 12) +
                                 "<text x=\"10\" y=\"225\" font-size=\"9\" font-family=\"sans-serif\">" +
                                 escape(h.color + " " + h.shape) + "</text>";
        add_copies(harm_cards, "harm", h.id, options.harm_copies_per_kind, options.expand_copies, body);
    }
    add_copies(harm_cards, "harm", 0, options.wild_harm_copies, options.expand_copies,
               family_label("Wild Harm", 0) +
                   text_block("Name any harm this Business could cause and explain it. A strict "
                              "majority of the other players must accept it.",
                              10, 60, 30, 11));

    std::vector<CardSpec> feature_cards;
    for (const auto& f : catalog.features()) {
        const std::string body = family_label("Feature", f.id) + text_block(f.title, 10, 42, 30, 11) +
                                 "<text x=\"10\" y=\"180\" font-size=\"9\" font-family=\"sans-serif\">Counters:</text>" +
                                 badge_row(catalog, f.counters, 200);
        add_copies(feature_cards, "feature", f.id, options.feature_copies_per_kind,
                   options.expand_copies, body);
    }
    add_copies(feature_cards, "feature", 0, options.wild_feature_copies, options.expand_copies,
               family_label("Wild Feature", 0) +
                   text_block("Describe a feature that stops the Harm played against you. A strict "
                              "majority of the other players must accept it.",
                              10, 60, 30, 11));

    std::vector<SheetDocument> docs;
    docs.push_back({"businesses.svg", sheet("Business cards", business_cards, columns)});
    docs.push_back({"harms.svg", sheet("Harm cards", harm_cards, columns)});
    docs.push_back({"features.svg", sheet("Feature cards", feature_cards, columns)});
    docs.push_back({"rules.svg", rules_page(options)});

    std::ostringstream index;
    index << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>AI Audit print sheets</title></head>\n<body>\n"
          << "<h1>AI Audit print sheets</h1>\n<ul>\n";
    index << "<li><a href=\"businesses.svg\">Business cards</a> (" << business_cards.size() << ")</li>\n";
    index << "<li><a href=\"harms.svg\">Harm cards</a> (" << harm_cards.size() << ")</li>\n";
    index << "<li><a href=\"features.svg\">Feature cards</a> (" << feature_cards.size() << ")</li>\n";
    index << "<li><a href=\"rules.svg\">Rules and wild card example</a></li>\n";
    index << "</ul>\n</body></html>\n";
    docs.push_back({"index.html", index.str()});
    return docs;
}

std::vector<std::filesystem::path> export_print_sheets(const Catalog& catalog,
                                                       const PrintOptions& options,
                                                       const std::filesystem::path& out_dir) {
    const auto docs = render_print_sheets(catalog, options);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ExportError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    for (const auto& doc : docs) {
        const auto path = out_dir / doc.filename;
        std::ofstream out(path, std::ios::binary);
        out << doc.content;
        if (!out) throw ExportError("cannot write '" + path.string() + "'");
        written.push_back(path);
    }
    return written;
}

}  // namespace aiaudit
