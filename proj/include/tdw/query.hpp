#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/csv.hpp"
#include "tdw/model.hpp"
#include "tdw/warehouse.hpp"

namespace tdw {

struct NegativeThreshold : Error {
    using Error::Error;
};
struct UnknownKind : Error {
    using Error::Error;
};

enum class CellType { Text, Integer, Real };

using Cell = std::variant<std::string, std::int64_t, double>;

inline std::string to_string(const Cell& c) {
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<std::int64_t>(c))
        return csv::format_int(std::get<std::int64_t>(c));
    return csv::format_double(std::get<double>(c));
}

/// A relational query answer: typed columns, rows, and whether the row
/// order is meaningful.
struct QueryResult {
    struct Column {
        std::string name;
        CellType type = CellType::Text;

        friend bool operator==(const Column&, const Column&) = default;
    };

    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    std::string ordering = "unordered";  // or a sort spec, e.g. "trajectory_id asc"
    std::vector<std::string> warnings;   // not part of result identity

    friend bool operator==(const QueryResult& a, const QueryResult& b) {
        return a.columns == b.columns && a.rows == b.rows && a.ordering == b.ordering;
    }
};

/// Rows sorted lexicographically; the comparison form for results declared
/// unordered.
inline QueryResult canonical_sorted(QueryResult r) {
    std::sort(r.rows.begin(), r.rows.end());
    return r;
}

/// Grouped POI counts at country and/or delegation grain.
struct RollupResult {
    std::vector<std::string> levels;  // e.g. {"country", "delegation"}
    struct Group {
        std::vector<std::string> keys;  // names, one per level
        std::int64_t count = 0;

        friend bool operator==(const Group&, const Group&) = default;
        friend auto operator<=>(const Group&, const Group&) = default;
    };
    std::vector<Group> groups;  // sorted by keys
    std::int64_t grand_total = 0;

    friend bool operator==(const RollupResult&, const RollupResult&) = default;
};

namespace detail {

/// Join indexes over an immutable bundle, built per query call.
struct BundleIndex {
    const WarehouseBundle& b;
    std::map<TrajectoryId, const FactTrajectoryRow*> fact_by_natural;
    std::map<Key, const DimPoiRow*> poi_by_key;
    std::map<Key, const DimDelegationRow*> delegation_by_key;
    std::map<Key, const DimRegionalGovernmentRow*> rg_by_key;
    std::map<Key, const DimCountryRow*> country_by_key;

    explicit BundleIndex(const WarehouseBundle& bundle) : b(bundle) {
        for (const auto& f : b.fact_trajectory) fact_by_natural.emplace(f.trajectory_natural_id, &f);
        for (const auto& p : b.dim_poi) poi_by_key.emplace(p.poi_key, &p);
        for (const auto& d : b.dim_delegation) delegation_by_key.emplace(d.delegation_key, &d);
        for (const auto& r : b.dim_regional_government) rg_by_key.emplace(r.rg_key, &r);
        for (const auto& c : b.dim_country) country_by_key.emplace(c.country_key, &c);
    }

    const DimCountryRow* country_of_delegation(Key delegation_key) const {
        auto d = delegation_by_key.find(delegation_key);
        if (d == delegation_by_key.end()) return nullptr;
        auto r = rg_by_key.find(d->second->rg_key);
        if (r == rg_by_key.end()) return nullptr;
        auto c = country_by_key.find(r->second->country_key);
        return c == country_by_key.end() ? nullptr : c->second;
    }

    const PoiSubtypeRow* subtype_of(const DimPoiRow& poi) const {
        const auto kind = parse_poi_kind(poi.kind);
        if (!kind) return nullptr;
        for (const auto& s : b.dim_poi_subtype[static_cast<std::size_t>(*kind)])
            if (s.subtype_key == poi.subtype_key) return &s;
        return nullptr;
    }
};

}  // namespace detail

/// Locations of the touristic companies annotated along one trajectory,
/// restricted to the named country. Deduplicated, unordered.
inline QueryResult q1_touristic_places_on_trajectory(const WarehouseBundle& b,
                                                     TrajectoryId trajectory_id,
                                                     const std::string& country_name) {
    detail::BundleIndex ix(b);
    QueryResult res;
    res.columns = {{"location", CellType::Text}};
    auto fact = ix.fact_by_natural.find(trajectory_id);
    if (fact == ix.fact_by_natural.end()) {
        res.warnings.push_back("unknown trajectory " + std::to_string(trajectory_id));
        return res;
    }
    std::set<std::string> locations;
    for (Key pk : fact->second->poi_keys) {
        auto it = ix.poi_by_key.find(pk);
        if (it == ix.poi_by_key.end()) continue;
        const DimPoiRow& poi = *it->second;
        if (parse_poi_kind(poi.kind) != PoiKind::Touristic) continue;
        const DimCountryRow* country = ix.country_of_delegation(poi.delegation_key);
        if (!country || !name_eq(country->name, country_name)) continue;
        if (const PoiSubtypeRow* sub = ix.subtype_of(poi)) locations.insert(sub->location);
    }
    for (const auto& loc : locations) res.rows.push_back({Cell{loc}});
    return res;
}

/// Count of agriculture companies in the named delegation of the named
/// country.
inline std::int64_t q2_count_agriculture(const WarehouseBundle& b,
                                         const std::string& country_name,
                                         const std::string& delegation_name,
                                         std::vector<std::string>* warnings = nullptr) {
    detail::BundleIndex ix(b);
    bool delegation_known = false;
    std::int64_t count = 0;
    for (const auto& d : b.dim_delegation) {
        if (!name_eq(d.name, delegation_name)) continue;
        const DimCountryRow* country = ix.country_of_delegation(d.delegation_key);
        if (!country || !name_eq(country->name, country_name)) continue;
        delegation_known = true;
        for (const auto& p : b.dim_poi)
            if (p.delegation_key == d.delegation_key &&
                parse_poi_kind(p.kind) == PoiKind::Agricultural)
                ++count;
    }
    if (!delegation_known && warnings)
        warnings->push_back("unknown delegation " + delegation_name + " in " + country_name);
    return count;
}

/// Locations of the lakes annotated along one trajectory.
inline QueryResult q3_lakes_on_trajectory(const WarehouseBundle& b, TrajectoryId trajectory_id) {
    detail::BundleIndex ix(b);
    QueryResult res;
    res.columns = {{"location", CellType::Text}};
    auto fact = ix.fact_by_natural.find(trajectory_id);
    if (fact == ix.fact_by_natural.end()) {
        res.warnings.push_back("unknown trajectory " + std::to_string(trajectory_id));
        return res;
    }
    std::set<std::string> locations;
    for (Key pk : fact->second->poi_keys) {
        auto it = ix.poi_by_key.find(pk);
        if (it == ix.poi_by_key.end()) continue;
        const DimPoiRow& poi = *it->second;
        if (parse_poi_kind(poi.kind) != PoiKind::Lake) continue;
        if (const PoiSubtypeRow* sub = ix.subtype_of(poi)) locations.insert(sub->location);
    }
    for (const auto& loc : locations) res.rows.push_back({Cell{loc}});
    return res;
}

/// Trajectories linked to at least one sea and one touristic company,
/// ascending by natural trajectory id.
inline QueryResult q4_trajectories_with_sea_and_touristic(const WarehouseBundle& b) {
    detail::BundleIndex ix(b);
    QueryResult res;
    res.columns = {{"trajectory_id", CellType::Integer}};
    res.ordering = "trajectory_id asc";
    std::vector<TrajectoryId> ids;
    for (const auto& f : b.fact_trajectory) {
        bool sea = false, touristic = false;
        for (Key pk : f.poi_keys) {
            auto it = ix.poi_by_key.find(pk);
            if (it == ix.poi_by_key.end()) continue;
            const auto kind = parse_poi_kind(it->second->kind);
            sea = sea || kind == PoiKind::Sea;
            touristic = touristic || kind == PoiKind::Touristic;
        }
        if (sea && touristic) ids.push_back(f.trajectory_natural_id);
    }
    std::sort(ids.begin(), ids.end());
    for (TrajectoryId id : ids) res.rows.push_back({Cell{id}});
    return res;
}

/// (name, id) of the touristic companies matching category, type and
/// location, e.g. the 5-star hotels at Hammamet.
inline QueryResult q5_hotels(const WarehouseBundle& b, const std::string& location_name,
                             const std::string& category, const std::string& star_type) {
    QueryResult res;
    res.columns = {{"name", CellType::Text}, {"touristic_company_key", CellType::Integer}};
    for (const auto& s : b.dim_poi_subtype[static_cast<std::size_t>(PoiKind::Touristic)]) {
        if (s.category == category && s.type == star_type && name_eq(s.location, location_name))
            res.rows.push_back({Cell{s.name}, Cell{s.subtype_key}});
    }
    return res;
}

/// Trajectories with strictly more than `threshold` linked touristic
/// companies.
inline QueryResult q6_trajectories_min_touristic(const WarehouseBundle& b,
                                                 std::int64_t threshold) {
    if (threshold < 0)
        throw NegativeThreshold("threshold must be >= 0, got " + std::to_string(threshold));
    detail::BundleIndex ix(b);
    QueryResult res;
    res.columns = {{"trajectory_id", CellType::Integer}};
    res.ordering = "trajectory_id asc";
    std::vector<TrajectoryId> ids;
    for (const auto& f : b.fact_trajectory) {
        std::int64_t touristic = 0;
        for (Key pk : f.poi_keys) {
            auto it = ix.poi_by_key.find(pk);
            if (it != ix.poi_by_key.end() &&
                parse_poi_kind(it->second->kind) == PoiKind::Touristic)
                ++touristic;
        }
        if (touristic > threshold) ids.push_back(f.trajectory_natural_id);
    }
    std::sort(ids.begin(), ids.end());
    for (TrajectoryId id : ids) res.rows.push_back({Cell{id}});
    return res;
}

/// Counts POIs of one kind grouped at country and/or delegation grain.
/// Groups cover every dimension row (zero counts included); the grand
/// total is level-invariant.
inline RollupResult rollup_poi_count(const WarehouseBundle& b,
                                     const std::vector<std::string>& levels, PoiKind kind) {
    if (levels.empty()) throw Error("rollup requires at least one level");
    for (const auto& level : levels)
        if (level != "country" && level != "delegation")
            throw Error("unknown rollup level: " + level);
    if (levels.size() == 2 && levels[0] != "country")
        throw Error("rollup levels must run coarse to fine: country,delegation");

    detail::BundleIndex ix(b);
    RollupResult res;
    res.levels = levels;
    std::map<std::vector<std::string>, std::int64_t> counts;
    auto group_of = [&](Key delegation_key) -> std::optional<std::vector<std::string>> {
        const auto d = ix.delegation_by_key.find(delegation_key);
        if (d == ix.delegation_by_key.end()) return std::nullopt;
        const DimCountryRow* country = ix.country_of_delegation(delegation_key);
        if (!country) return std::nullopt;
        std::vector<std::string> g;
        for (const auto& level : levels)
            g.push_back(level == "country" ? country->name : d->second->name);
        return g;
    };
    for (const auto& d : b.dim_delegation)
        if (auto g = group_of(d.delegation_key)) counts.emplace(*g, 0);
    for (const auto& p : b.dim_poi) {
        if (parse_poi_kind(p.kind) != kind) continue;
        if (auto g = group_of(p.delegation_key)) ++counts[*g];
    }
    for (const auto& [keys, count] : counts) {
        res.groups.push_back(RollupResult::Group{keys, count});
        res.grand_total += count;
    }
    return res;
}

/// String-kind entry point for user-facing callers.
inline RollupResult rollup_poi_count(const WarehouseBundle& b,
                                     const std::vector<std::string>& levels,
                                     const std::string& kind_name) {
    const auto kind = parse_poi_kind(kind_name);
    if (!kind) throw UnknownKind("unknown POI kind: " + kind_name);
    return rollup_poi_count(b, levels, *kind);
}

}  // namespace tdw
