#include "aiaudit/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "aiaudit/hash.hpp"
#include "yaml_util.hpp"

namespace aiaudit {

namespace {

void normalize(std::vector<int>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

bool contains(const std::vector<int>& sorted, int id) {
    return std::binary_search(sorted.begin(), sorted.end(), id);
}

template <typename Kind>
void index_by_id(const std::vector<Kind>& kinds, std::map<int, std::size_t>& index) {
    index.clear();
    for (std::size_t i = 0; i < kinds.size(); ++i) index.emplace(kinds[i].id, i);
}

}  // namespace

Catalog::Catalog(std::vector<BusinessKind> businesses, std::vector<HarmKind> harms,
                 std::vector<FeatureKind> features, std::vector<GuideEntry> guide)
    : businesses_(std::move(businesses)),
      harms_(std::move(harms)),
      features_(std::move(features)),
      guide_(std::move(guide)) {
    for (auto& b : businesses_) normalize(b.vulnerable_harms);
    for (auto& f : features_) normalize(f.counters);
    build_index();
}

void Catalog::build_index() {
    index_by_id(businesses_, business_index_);
    index_by_id(harms_, harm_index_);
    index_by_id(features_, feature_index_);
}

const BusinessKind* Catalog::find_business(BusinessId id) const noexcept {
    auto it = business_index_.find(id);
    return it == business_index_.end() ? nullptr : &businesses_[it->second];
}

const HarmKind* Catalog::find_harm(HarmId id) const noexcept {
    auto it = harm_index_.find(id);
    return it == harm_index_.end() ? nullptr : &harms_[it->second];
}

const FeatureKind* Catalog::find_feature(FeatureId id) const noexcept {
    auto it = feature_index_.find(id);
    return it == feature_index_.end() ? nullptr : &features_[it->second];
}

const BusinessKind& Catalog::business(BusinessId id) const {
    if (const auto* b = find_business(id)) return *b;
    throw CatalogError(CatalogErrc::unknown_id, "unknown business id " + std::to_string(id));
}

const HarmKind& Catalog::harm(HarmId id) const {
    if (const auto* h = find_harm(id)) return *h;
    throw CatalogError(CatalogErrc::unknown_id, "unknown harm id " + std::to_string(id));
}

const FeatureKind& Catalog::feature(FeatureId id) const {
    if (const auto* f = find_feature(id)) return *f;
    throw CatalogError(CatalogErrc::unknown_id, "unknown feature id " + std::to_string(id));
}

bool Catalog::vulnerable(BusinessId business, HarmId harm) const noexcept {
    const auto* b = find_business(business);
    return b != nullptr && contains(b->vulnerable_harms, harm);
}

bool Catalog::counters(FeatureId feature, HarmId harm) const noexcept {
    const auto* f = find_feature(feature);
    return f != nullptr && contains(f->counters, harm);
}

bool Catalog::operator==(const Catalog& other) const {
    return businesses_ == other.businesses_ && harms_ == other.harms_ &&
           features_ == other.features_ && guide_ == other.guide_;
}

// ---------------------------------------------------------------------------
// Structured-text form

namespace {

template <typename Kind>
void reject_duplicates(const YAML::Node& list, const std::vector<Kind>& kinds, const char* family) {
    std::set<int> seen;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (!seen.insert(kinds[i].id).second) {
            throw CatalogError(CatalogErrc::duplicate_id,
                               detail::location(list[i]) + ": duplicate " + family + " id " +
                                   std::to_string(kinds[i].id));
        }
    }
}

YAML::Node section(const YAML::Node& root, const char* key) {
    const YAML::Node node = root[key];
    if (!node.IsDefined() || node.IsNull()) return YAML::Node(YAML::NodeType::Sequence);
    if (!node.IsSequence()) {
        throw detail::StructuredTextError(detail::location(node) + ": section '" + key +
                                          "' must be a list");
    }
    return node;
}

}  // namespace

Catalog load_catalog(std::string_view source) {
    try {
        const YAML::Node root = detail::parse_yaml(source);
        if (!root.IsMap()) {
            throw detail::StructuredTextError(detail::location(root) +
                                              ": catalog document must be a mapping");
        }

        const YAML::Node business_list = section(root, "businesses");
        const YAML::Node harm_list = section(root, "harms");
        const YAML::Node feature_list = section(root, "features");
        const YAML::Node guide_list = section(root, "guide");

        std::vector<BusinessKind> businesses;
        for (std::size_t i = 0; i < business_list.size(); ++i) {
            const YAML::Node entry = business_list[i];
            const std::string ctx = "businesses[" + std::to_string(i) + "]";
            businesses.push_back({detail::field<int>(entry, "id", ctx),
                                  detail::field<std::string>(entry, "title", ctx),
                                  detail::field<std::vector<int>>(entry, "harms", ctx)});
        }
        std::vector<HarmKind> harms;
        for (std::size_t i = 0; i < harm_list.size(); ++i) {
            const YAML::Node entry = harm_list[i];
            const std::string ctx = "harms[" + std::to_string(i) + "]";
            harms.push_back({detail::field<int>(entry, "id", ctx),
                             detail::field<std::string>(entry, "title", ctx),
                             detail::field<std::string>(entry, "color", ctx),
                             detail::field<std::string>(entry, "shape", ctx)});
        }
        std::vector<FeatureKind> features;
        for (std::size_t i = 0; i < feature_list.size(); ++i) {
            const YAML::Node entry = feature_list[i];
            const std::string ctx = "features[" + std::to_string(i) + "]";
            features.push_back({detail::field<int>(entry, "id", ctx),
                                detail::field<std::string>(entry, "title", ctx),
                                detail::field<std::vector<int>>(entry, "counters", ctx)});
        }
        std::vector<GuideEntry> guide;
        for (std::size_t i = 0; i < guide_list.size(); ++i) {
            const YAML::Node entry = guide_list[i];
            const std::string ctx = "guide[" + std::to_string(i) + "]";
            guide.push_back({detail::field<int>(entry, "business", ctx),
                             detail::field<int>(entry, "harm", ctx),
                             detail::field<std::string>(entry, "text", ctx)});
        }

        reject_duplicates(business_list, businesses, "business");
        reject_duplicates(harm_list, harms, "harm");
        reject_duplicates(feature_list, features, "feature");

        return Catalog(std::move(businesses), std::move(harms), std::move(features),
                       std::move(guide));
    } catch (const detail::StructuredTextError& e) {
        throw CatalogError(CatalogErrc::parse, e.what());
    }
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError(CatalogErrc::io, "cannot read catalog file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_catalog(buffer.str());
    } catch (const CatalogError& e) {
        throw CatalogError(e.code(), path + ": " + e.what());
    }
}

std::string serialize_catalog(const Catalog& catalog) {
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "businesses" << YAML::Value << YAML::BeginSeq;
    for (const auto& b : catalog.businesses()) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << b.id;
        out << YAML::Key << "title" << YAML::Value << YAML::DoubleQuoted << b.title;
        out << YAML::Key << "harms" << YAML::Value << YAML::Flow << b.vulnerable_harms;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "harms" << YAML::Value << YAML::BeginSeq;
    for (const auto& h : catalog.harms()) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << h.id;
        out << YAML::Key << "title" << YAML::Value << YAML::DoubleQuoted << h.title;
        out << YAML::Key << "color" << YAML::Value << h.color;
        out << YAML::Key << "shape" << YAML::Value << h.shape;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "features" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : catalog.features()) {
        out << YAML::BeginMap << YAML::Key << "id" << YAML::Value << f.id;
        out << YAML::Key << "title" << YAML::Value << YAML::DoubleQuoted << f.title;
        out << YAML::Key << "counters" << YAML::Value << YAML::Flow << f.counters;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "guide" << YAML::Value << YAML::BeginSeq;
    for (const auto& g : catalog.guide()) {
        out << YAML::BeginMap << YAML::Key << "business" << YAML::Value << g.business_id;
        out << YAML::Key << "harm" << YAML::Value << g.harm_id;
        out << YAML::Key << "text" << YAML::Value << YAML::DoubleQuoted << g.text;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::uint64_t catalog_fingerprint(const Catalog& catalog) {
    return fnv1a64(serialize_catalog(catalog));
}

// ---------------------------------------------------------------------------
// Validation

namespace {

template <typename Kind>
void check_ids(const std::vector<Kind>& kinds, const char* family, ValidationReport& report) {
    std::set<int> seen;
    for (const auto& k : kinds) {
        if (k.id <= 0) {
            report.errors.push_back({"bad-id", std::string(family) + " id " + std::to_string(k.id) +
                                                   " must be positive"});
        }
        if (!seen.insert(k.id).second) {
            report.errors.push_back(
                {"duplicate-id", "duplicate " + std::string(family) + " id " + std::to_string(k.id)});
        }
    }
    if (kinds.empty()) {
        report.errors.push_back({"empty-family", std::string("catalog has no ") + family + " cards"});
    }
}

}  // namespace

ValidationReport validate(const Catalog& catalog) {
    ValidationReport report;
    check_ids(catalog.businesses(), "business", report);
    check_ids(catalog.harms(), "harm", report);
    check_ids(catalog.features(), "feature", report);

    std::set<std::pair<std::string, std::string>> badges;
    for (const auto& h : catalog.harms()) {
        if (!badges.insert({h.color, h.shape}).second) {
            report.errors.push_back({"duplicate-badge", "harm " + std::to_string(h.id) +
                                                            " repeats color/shape pair " + h.color +
                                                            "/" + h.shape});
        }
    }

    for (const auto& b : catalog.businesses()) {
        if (b.vulnerable_harms.empty()) {
            report.errors.push_back({"empty-vulnerable-set", "empty vulnerable set: business " +
                                                                 std::to_string(b.id)});
        }
        for (HarmId h : b.vulnerable_harms) {
            if (catalog.find_harm(h) == nullptr) {
                report.errors.push_back({"dangling-harm", "business " + std::to_string(b.id) +
                                                              " references unknown harm " +
                                                              std::to_string(h)});
            }
        }
    }
    for (const auto& f : catalog.features()) {
        if (f.counters.empty()) {
            report.errors.push_back(
                {"empty-counter-set", "empty counter set: feature " + std::to_string(f.id)});
        }
        for (HarmId h : f.counters) {
            if (catalog.find_harm(h) == nullptr) {
                report.errors.push_back({"dangling-harm", "feature " + std::to_string(f.id) +
                                                              " references unknown harm " +
                                                              std::to_string(h)});
            }
        }
    }
    for (const auto& g : catalog.guide()) {
        const auto* b = catalog.find_business(g.business_id);
        if (b == nullptr || catalog.find_harm(g.harm_id) == nullptr) {
            report.errors.push_back({"guide-unknown-id", "guide entry (" +
                                                             std::to_string(g.business_id) + ", " +
                                                             std::to_string(g.harm_id) +
                                                             ") names an unknown card"});
        } else if (!contains(b->vulnerable_harms, g.harm_id)) {
            report.errors.push_back({"illegal-guide-pairing",
                                     "guide entry pairs business " + std::to_string(g.business_id) +
                                         " with harm " + std::to_string(g.harm_id) +
                                         ", which it is not vulnerable to"});
        }
    }

    std::set<HarmId> on_business;
    std::set<HarmId> counterable;
    for (const auto& b : catalog.businesses()) on_business.insert(b.vulnerable_harms.begin(), b.vulnerable_harms.end());
    for (const auto& f : catalog.features()) counterable.insert(f.counters.begin(), f.counters.end());

    for (const auto& h : catalog.harms()) {
        if (!counterable.contains(h.id)) {
            report.warnings.push_back({"uncounterable-harm", "uncounterable harm: harm " +
                                                                 std::to_string(h.id) + " (\"" +
                                                                 h.title +
                                                                 "\") is countered by no feature"});
        }
        if (!on_business.contains(h.id)) {
            report.warnings.push_back({"orphan-harm", "orphan harm: harm " + std::to_string(h.id) +
                                                          " (\"" + h.title +
                                                          "\") appears in no business's vulnerable harms"});
        }
    }
    for (const auto& b : catalog.businesses()) {
        const bool defendable = std::any_of(b.vulnerable_harms.begin(), b.vulnerable_harms.end(),
                                            [&](HarmId h) { return counterable.contains(h); });
        if (!b.vulnerable_harms.empty() && !defendable) {
            report.warnings.push_back({"inert-business", "business " + std::to_string(b.id) +
                                                             " has no harm any feature can counter"});
        }
    }
    for (const auto& f : catalog.features()) {
        const bool useful = std::any_of(f.counters.begin(), f.counters.end(),
                                        [&](HarmId h) { return on_business.contains(h); });
        if (!f.counters.empty() && !useful) {
            report.warnings.push_back({"inert-feature", "feature " + std::to_string(f.id) +
                                                            " counters no harm any business can suffer"});
        }
    }
    return report;
}

std::vector<HarmId> legal_harms(const Catalog& catalog, BusinessId business_id) {
    return catalog.business(business_id).vulnerable_harms;
}

bool can_counter(const Catalog& catalog, FeatureId feature_id, HarmId harm_id) {
    const auto& f = catalog.feature(feature_id);
    catalog.harm(harm_id);
    return contains(f.counters, harm_id);
}

std::optional<std::string> guide_excerpt(const Catalog& catalog, BusinessId business_id,
                                         HarmId harm_id) {
    catalog.business(business_id);
    catalog.harm(harm_id);
    for (const auto& g : catalog.guide()) {
        if (g.business_id == business_id && g.harm_id == harm_id) return g.text;
    }
    return std::nullopt;
}

}  // namespace aiaudit
