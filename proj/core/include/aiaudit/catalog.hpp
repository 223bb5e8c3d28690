#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aiaudit {

using BusinessId = int;
using HarmId = int;
using FeatureId = int;

struct HarmKind {
    HarmId id = 0;
    std::string title;
    std::string color;
    std::string shape;

    bool operator==(const HarmKind&) const = default;
};

struct BusinessKind {
    BusinessId id = 0;
    std::string title;
    std::vector<HarmId> vulnerable_harms;  // sorted, unique

    bool operator==(const BusinessKind&) const = default;
};

struct FeatureKind {
    FeatureId id = 0;
    std::string title;
    std::vector<HarmId> counters;  // sorted, unique

    bool operator==(const FeatureKind&) const = default;
};

struct GuideEntry {
    BusinessId business_id = 0;
    HarmId harm_id = 0;
    std::string text;

    bool operator==(const GuideEntry&) const = default;
};

enum class CatalogErrc {
    unknown_id,
    parse,
    duplicate_id,
    invalid_catalog,
    io,
};

class CatalogError : public std::runtime_error {
public:
    CatalogError(CatalogErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    CatalogErrc code() const noexcept { return code_; }

private:
    CatalogErrc code_;
};

/// Immutable card catalog. Harm id sets are normalized (sorted, deduplicated)
/// on construction. Lookups by id use the first entry when ids repeat;
/// `validate` reports such duplicates.
class Catalog {
public:
    Catalog() = default;
    Catalog(std::vector<BusinessKind> businesses, std::vector<HarmKind> harms,
            std::vector<FeatureKind> features, std::vector<GuideEntry> guide);

    const std::vector<BusinessKind>& businesses() const noexcept { return businesses_; }
    const std::vector<HarmKind>& harms() const noexcept { return harms_; }
    const std::vector<FeatureKind>& features() const noexcept { return features_; }
    const std::vector<GuideEntry>& guide() const noexcept { return guide_; }

    const BusinessKind* find_business(BusinessId id) const noexcept;
    const HarmKind* find_harm(HarmId id) const noexcept;
    const FeatureKind* find_feature(FeatureId id) const noexcept;

    // Throwing variants (CatalogErrc::unknown_id).
    const BusinessKind& business(BusinessId id) const;
    const HarmKind& harm(HarmId id) const;
    const FeatureKind& feature(FeatureId id) const;

    /// Unchecked fast path used by the engine after validation.
    bool vulnerable(BusinessId business, HarmId harm) const noexcept;
    bool counters(FeatureId feature, HarmId harm) const noexcept;

    bool operator==(const Catalog& other) const;

private:
    void build_index();

    std::vector<BusinessKind> businesses_;
    std::vector<HarmKind> harms_;
    std::vector<FeatureKind> features_;
    std::vector<GuideEntry> guide_;

    std::map<BusinessId, std::size_t> business_index_;
    std::map<HarmId, std::size_t> harm_index_;
    std::map<FeatureId, std::size_t> feature_index_;
};

struct Finding {
    std::string code;
    std::string message;

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> errors;
    std::vector<Finding> warnings;

    bool playable() const noexcept { return errors.empty(); }
};

/// The published deck: 14 businesses, 13 harms, 7 features and the hiring
/// guide excerpts. Harm colors and shapes come from a fixed table.
const Catalog& default_catalog();

/// Parses the structured-text catalog schema. Semantic problems (dangling
/// references, empty sets) are left for `validate`; duplicate ids are rejected.
Catalog load_catalog(std::string_view source);
Catalog load_catalog_file(const std::string& path);
std::string serialize_catalog(const Catalog& catalog);

ValidationReport validate(const Catalog& catalog);

std::vector<HarmId> legal_harms(const Catalog& catalog, BusinessId business_id);
bool can_counter(const Catalog& catalog, FeatureId feature_id, HarmId harm_id);
std::optional<std::string> guide_excerpt(const Catalog& catalog, BusinessId business_id,
                                         HarmId harm_id);

/// Stable 64-bit fingerprint of the serialized catalog.
std::uint64_t catalog_fingerprint(const Catalog& catalog);

}  // namespace aiaudit
