#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/csv.hpp"
#include "tdw/model.hpp"
#include "tdw/time.hpp"

namespace tdw {

/// Surrogate key. Dense integers from 1 in first-seen order; 0 means
/// "absent" and is only legal where the schema marks a key optional.
using Key = std::int64_t;

struct DuplicateNaturalId : Error {
    using Error::Error;
};
struct DanglingReference : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};
struct IoFailure : Error {
    using Error::Error;
};
struct ManifestMismatch : Error {
    using Error::Error;
};
struct SchemaVersionMismatch : Error {
    using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

// --- rows -------------------------------------------------------------------

struct FactTrajectoryRow {
    Key fact_id = 0;
    TrajectoryId trajectory_natural_id = 0;
    Key mic_key = 0;
    Key date_key = 0;  // of t_begin
    std::int64_t t_begin_s = 0;
    std::int64_t t_end_s = 0;
    std::int64_t duration_s = 0;
    Key country_key = 0;  // optional: 0 when no stop resolved a delegation
    std::vector<Key> stop_keys;
    std::vector<Key> move_keys;
    std::vector<Key> section_keys;
    std::vector<Key> poi_keys;

    friend bool operator==(const FactTrajectoryRow&, const FactTrajectoryRow&) = default;
};

struct DimMicRow {
    Key mic_key = 0;
    Id mic_id;
    std::string first_name;
    std::string last_name;

    friend bool operator==(const DimMicRow&, const DimMicRow&) = default;
};

struct DimDateRow {
    Key date_key = 0;
    int day = 1;   // day of month
    int hour = 0;  // hour of day
    Key month_key = 0;
    Key quarter_key = 0;
    Key dow_key = 0;

    friend bool operator==(const DimDateRow&, const DimDateRow&) = default;
};

struct DimMonthRow {
    Key month_key = 0;
    int month = 1;
    int year = 1970;

    friend bool operator==(const DimMonthRow&, const DimMonthRow&) = default;
};

struct DimQuarterRow {
    Key quarter_key = 0;
    int quarter = 1;
    int year = 1970;

    friend bool operator==(const DimQuarterRow&, const DimQuarterRow&) = default;
};

struct DimDayOfWeekRow {
    Key dow_key = 0;
    std::string name;

    friend bool operator==(const DimDayOfWeekRow&, const DimDayOfWeekRow&) = default;
};

struct DimStopRow {
    Key stop_key = 0;
    std::int64_t t_begin_s = 0;
    std::int64_t t_end_s = 0;
    double lat = 0.0;
    double lon = 0.0;
    std::string kind;
    Key delegation_key = 0;  // optional

    friend bool operator==(const DimStopRow&, const DimStopRow&) = default;
};

struct DimMoveRow {
    Key move_key = 0;
    std::int64_t t_begin_s = 0;
    std::int64_t t_end_s = 0;
    std::int64_t duration_s = 0;

    friend bool operator==(const DimMoveRow&, const DimMoveRow&) = default;
};

struct DimTrSectionRow {
    Key section_key = 0;
    Key stop_from_key = 0;
    Key move_key = 0;
    Key stop_to_key = 0;
    std::int64_t t_begin_s = 0;
    std::int64_t t_end_s = 0;

    friend bool operator==(const DimTrSectionRow&, const DimTrSectionRow&) = default;
};

struct DimCountryRow {
    Key country_key = 0;
    std::string name;
    std::int64_t population = 0;

    friend bool operator==(const DimCountryRow&, const DimCountryRow&) = default;
};

struct DimRegionalGovernmentRow {
    Key rg_key = 0;
    std::string name;
    Key country_key = 0;

    friend bool operator==(const DimRegionalGovernmentRow&, const DimRegionalGovernmentRow&) =
        default;
};

struct DimDelegationRow {
    Key delegation_key = 0;
    std::string name;
    std::int64_t population = 0;
    double surface_km2 = 0.0;
    std::string climate;
    Key rg_key = 0;

    friend bool operator==(const DimDelegationRow&, const DimDelegationRow&) = default;
};

struct DimPoiRow {
    Key poi_key = 0;
    Id poi_natural_id;
    std::string kind;
    Key delegation_key = 0;
    Key subtype_key = 0;  // into the subtype table matching `kind`

    friend bool operator==(const DimPoiRow&, const DimPoiRow&) = default;
};

/// One row of a POI subtype table. Natural kinds use name/location/
/// surface/length/depth; companies use name/location/activity/type;
/// touristic companies use name/category/type/location. Columns outside a
/// kind's set stay empty.
struct PoiSubtypeRow {
    Key subtype_key = 0;
    std::string name;
    std::string location;
    std::string surface;
    std::string length;
    std::string depth;
    std::string activity;
    std::string category;
    std::string type;

    friend bool operator==(const PoiSubtypeRow&, const PoiSubtypeRow&) = default;
};

struct BridgeRow {
    Key fact_key = 0;
    Key dim_key = 0;

    friend bool operator==(const BridgeRow&, const BridgeRow&) = default;
};

inline const char* poi_subtype_table(PoiKind k) {
    switch (k) {
        case PoiKind::Sea: return "dim_sea";
        case PoiKind::Lake: return "dim_lake";
        case PoiKind::Mountain: return "dim_mountain";
        case PoiKind::Desert: return "dim_desert";
        case PoiKind::Educational: return "dim_educational_company";
        case PoiKind::Industrial: return "dim_industrial_company";
        case PoiKind::Agricultural: return "dim_agriculture_company";
        case PoiKind::Transportation: return "dim_transportation_company";
        case PoiKind::Healthcare: return "dim_healthcare_company";
        case PoiKind::Touristic: return "dim_touristic_company";
        case PoiKind::CultArt: return "dim_cult_art_company";
        case PoiKind::Financial: return "dim_financial_company";
    }
    return "dim_sea";
}

/// The materialized snowflake: the trajectory fact table plus every
/// dimension, subtype and bridge table.
struct WarehouseBundle {
    int schema_version = kSchemaVersion;
    std::int64_t load_id = 0;  // content fingerprint, recomputed on read

    std::vector<FactTrajectoryRow> fact_trajectory;
    std::vector<DimMicRow> dim_mic;
    std::vector<DimDateRow> dim_date;
    std::vector<DimMonthRow> dim_month;
    std::vector<DimQuarterRow> dim_quarter;
    std::vector<DimDayOfWeekRow> dim_day_of_week;
    std::vector<DimStopRow> dim_stop;
    std::vector<DimMoveRow> dim_move;
    std::vector<DimTrSectionRow> dim_tr_section;
    std::vector<DimCountryRow> dim_country;
    std::vector<DimDelegationRow> dim_delegation;
    std::vector<DimRegionalGovernmentRow> dim_regional_government;
    std::vector<DimPoiRow> dim_poi;
    std::array<std::vector<PoiSubtypeRow>, kPoiKindCount> dim_poi_subtype;  // by PoiKind
    std::vector<BridgeRow> bridge_fact_stop;
    std::vector<BridgeRow> bridge_fact_move;
    std::vector<BridgeRow> bridge_fact_section;
    std::vector<BridgeRow> bridge_fact_poi;

    std::map<std::string, std::size_t> manifest;  // table name -> row count

    friend bool operator==(const WarehouseBundle&, const WarehouseBundle&) = default;
};

/// Every table of the schema, in serialization order.
inline std::vector<std::string> warehouse_table_names() {
    std::vector<std::string> names = {
        "fact_trajectory", "dim_mic",      "dim_date",       "dim_month",
        "dim_quarter",     "dim_day_of_week", "dim_stop",    "dim_move",
        "dim_tr_section",  "dim_country",  "dim_delegation", "dim_regional_government",
        "dim_poi"};
    for (int i = 0; i < kPoiKindCount; ++i)
        names.emplace_back(poi_subtype_table(static_cast<PoiKind>(i)));
    names.insert(names.end(), {"bridge_fact_stop", "bridge_fact_move", "bridge_fact_section",
                               "bridge_fact_poi"});
    return names;
}

namespace detail {

inline std::size_t table_row_count(const WarehouseBundle& b, const std::string& name) {
    if (name == "fact_trajectory") return b.fact_trajectory.size();
    if (name == "dim_mic") return b.dim_mic.size();
    if (name == "dim_date") return b.dim_date.size();
    if (name == "dim_month") return b.dim_month.size();
    if (name == "dim_quarter") return b.dim_quarter.size();
    if (name == "dim_day_of_week") return b.dim_day_of_week.size();
    if (name == "dim_stop") return b.dim_stop.size();
    if (name == "dim_move") return b.dim_move.size();
    if (name == "dim_tr_section") return b.dim_tr_section.size();
    if (name == "dim_country") return b.dim_country.size();
    if (name == "dim_delegation") return b.dim_delegation.size();
    if (name == "dim_regional_government") return b.dim_regional_government.size();
    if (name == "dim_poi") return b.dim_poi.size();
    if (name == "bridge_fact_stop") return b.bridge_fact_stop.size();
    if (name == "bridge_fact_move") return b.bridge_fact_move.size();
    if (name == "bridge_fact_section") return b.bridge_fact_section.size();
    if (name == "bridge_fact_poi") return b.bridge_fact_poi.size();
    for (int i = 0; i < kPoiKindCount; ++i)
        if (name == poi_subtype_table(static_cast<PoiKind>(i)))
            return b.dim_poi_subtype[static_cast<std::size_t>(i)].size();
    throw Error("unknown table: " + name);
}

inline void rebuild_manifest(WarehouseBundle& b) {
    b.manifest.clear();
    for (const auto& name : warehouse_table_names()) b.manifest[name] = table_row_count(b, name);
}

inline std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace detail

inline std::uint64_t bundle_fingerprint(const WarehouseBundle& b);

// --- load --------------------------------------------------------------------

namespace detail {

/// Interning map from a natural key to a dense surrogate key.
template <typename NaturalKey>
class KeyMap {
  public:
    Key intern(const NaturalKey& k) {
        auto [it, inserted] = map_.emplace(k, next_);
        if (inserted) ++next_;
        return it->second;
    }
    const Key* find(const NaturalKey& k) const {
        auto it = map_.find(k);
        return it == map_.end() ? nullptr : &it->second;
    }
    bool contains(const NaturalKey& k) const { return map_.count(k) > 0; }

  private:
    std::map<NaturalKey, Key> map_;
    Key next_ = 1;
};

}  // namespace detail

/// Materializes trajectories, collectors, the gazetteer and the
/// administrative hierarchy into the snowflake. Surrogate keys are dense
/// integers from 1 in first-seen order; dimension rows are deduplicated by
/// natural identity.
inline WarehouseBundle load(std::span<const Trajectory> trajectories, std::span<const Mic> mics,
                            std::span<const PointOfInterest> gazetteer,
                            std::span<const AdminPlace> admin_places) {
    WarehouseBundle b;

    detail::KeyMap<Id> mic_keys;
    detail::KeyMap<Id> delegation_keys;
    detail::KeyMap<Id> rg_keys;
    detail::KeyMap<Id> country_keys;
    detail::KeyMap<Id> poi_keys;
    std::array<Key, kPoiKindCount> subtype_next{};
    subtype_next.fill(1);

    // Collectors, in input order.
    for (const auto& mic : mics) {
        if (mic_keys.contains(mic.mic_id)) throw DuplicateNaturalId("mic " + mic.mic_id);
        const Key k = mic_keys.intern(mic.mic_id);
        b.dim_mic.push_back(DimMicRow{k, mic.mic_id, mic.first_name, mic.last_name});
    }

    // Administrative hierarchy: delegation -> regional government -> country.
    std::map<Id, AdminPlace> admin_by_delegation;
    for (const auto& place : admin_places) {
        if (auto it = admin_by_delegation.find(place.delegation.id);
            it != admin_by_delegation.end()) {
            if (!(it->second == place))
                throw DuplicateNaturalId("delegation " + place.delegation.id +
                                         " appears with conflicting attributes");
            continue;
        }
        admin_by_delegation.emplace(place.delegation.id, place);
        if (!country_keys.contains(place.country.id)) {
            const Key ck = country_keys.intern(place.country.id);
            b.dim_country.push_back(
                DimCountryRow{ck, place.country.name, place.country.population});
        }
        if (!rg_keys.contains(place.regional_government.id)) {
            const Key rk = rg_keys.intern(place.regional_government.id);
            b.dim_regional_government.push_back(DimRegionalGovernmentRow{
                rk, place.regional_government.name, *country_keys.find(place.country.id)});
        }
        const Key dk = delegation_keys.intern(place.delegation.id);
        b.dim_delegation.push_back(DimDelegationRow{
            dk, place.delegation.name, place.delegation.population, place.delegation.surface_km2,
            place.delegation.climate, *rg_keys.find(place.regional_government.id)});
    }
    // The same regional government must not be claimed by two countries.
    {
        std::map<Id, Id> rg_country;
        for (const auto& place : admin_places) {
            auto [it, inserted] =
                rg_country.emplace(place.regional_government.id, place.country.id);
            if (!inserted && it->second != place.country.id)
                throw InvariantViolation("regional government " + place.regional_government.id +
                                         " belongs to two countries");
        }
    }

    // Gazetteer, in input order; every POI gets a subtype row.
    std::map<Id, PoiKind> poi_kind_by_id;
    for (const auto& poi : gazetteer) {
        if (poi_keys.contains(poi.poi_id)) throw DuplicateNaturalId("poi " + poi.poi_id);
        const Key* dk = delegation_keys.find(poi.delegation_id);
        if (!dk)
            throw DanglingReference("poi " + poi.poi_id + " cites unknown delegation " +
                                    poi.delegation_id);
        const Key pk = poi_keys.intern(poi.poi_id);
        poi_kind_by_id.emplace(poi.poi_id, poi.kind);
        const auto kind_index = static_cast<std::size_t>(poi.kind);
        const Key sk = subtype_next[kind_index]++;
        auto attr = [&poi](const char* name) {
            auto it = poi.attrs.find(name);
            return it == poi.attrs.end() ? std::string() : it->second;
        };
        PoiSubtypeRow sub;
        sub.subtype_key = sk;
        sub.name = poi.name;
        sub.location = attr("location");
        if (is_natural(poi.kind)) {
            sub.surface = attr("surface");
            sub.length = attr("length");
            sub.depth = attr("depth");
        } else if (poi.kind == PoiKind::Touristic) {
            sub.category = attr("category");
            sub.type = attr("type");
        } else {
            sub.activity = attr("activity");
            sub.type = attr("type");
        }
        b.dim_poi_subtype[kind_index].push_back(std::move(sub));
        b.dim_poi.push_back(DimPoiRow{pk, poi.poi_id, to_string(poi.kind), *dk, sk});
    }

    // Trajectories: one fact row each, with stop/move/section dimensions,
    // the date of the departure, and bridges to every linked entity.
    detail::KeyMap<std::pair<std::int64_t, int>> date_keys;  // (day number, hour)
    detail::KeyMap<std::pair<int, int>> month_keys;          // (year, month)
    detail::KeyMap<std::pair<int, int>> quarter_keys;        // (year, quarter)
    detail::KeyMap<int> dow_keys;
    std::set<TrajectoryId> seen_trajectories;
    std::set<Id> seen_units;  // stop/move/section natural ids
    Key next_stop = 1, next_move = 1, next_section = 1, next_fact = 1;

    for (const auto& traj : trajectories) {
        if (!seen_trajectories.insert(traj.trajectory_id).second)
            throw DuplicateNaturalId("trajectory " + std::to_string(traj.trajectory_id));
        if (auto violations = validate_trajectory(traj); !violations.empty())
            throw InvariantViolation("trajectory " + std::to_string(traj.trajectory_id) + ": " +
                                     violations.front());
        const Key* mk = mic_keys.find(traj.mic_id);
        if (!mk)
            throw DanglingReference("trajectory " + std::to_string(traj.trajectory_id) +
                                    " cites unknown mic " + traj.mic_id);

        FactTrajectoryRow fact;
        fact.fact_id = next_fact++;
        fact.trajectory_natural_id = traj.trajectory_id;
        fact.mic_key = *mk;
        fact.t_begin_s = traj.interval.t_begin;
        fact.t_end_s = traj.interval.t_end;
        fact.duration_s = duration(traj.interval);

        // Date of t_begin, snowflaked into month / quarter / day-of-week.
        {
            const CivilDateTime c = civil_from_utc(traj.interval.t_begin);
            const std::int64_t day_number = floor_div(traj.interval.t_begin, 86400);
            if (!month_keys.contains({c.year, c.month})) {
                const Key k = month_keys.intern({c.year, c.month});
                b.dim_month.push_back(DimMonthRow{k, c.month, c.year});
            }
            const int q = quarter_of_month(c.month);
            if (!quarter_keys.contains({c.year, q})) {
                const Key k = quarter_keys.intern({c.year, q});
                b.dim_quarter.push_back(DimQuarterRow{k, q, c.year});
            }
            const int dow = day_of_week(traj.interval.t_begin);
            if (!dow_keys.contains(dow)) {
                const Key k = dow_keys.intern(dow);
                b.dim_day_of_week.push_back(DimDayOfWeekRow{k, day_of_week_name(dow)});
            }
            if (!date_keys.contains({day_number, c.hour})) {
                const Key k = date_keys.intern({day_number, c.hour});
                b.dim_date.push_back(DimDateRow{k, c.day, c.hour,
                                                *month_keys.find({c.year, c.month}),
                                                *quarter_keys.find({c.year, q}),
                                                *dow_keys.find(dow)});
            }
            fact.date_key = *date_keys.find({day_number, c.hour});
        }

        std::map<Id, Key> stop_key_by_id;
        for (const auto& stop : traj.stops) {
            if (!seen_units.insert(stop.stop_id).second)
                throw DuplicateNaturalId("stop " + stop.stop_id);
            Key dk = 0;
            if (!stop.delegation_id.empty()) {
                const Key* found = delegation_keys.find(stop.delegation_id);
                if (!found)
                    throw DanglingReference("stop " + stop.stop_id +
                                            " cites unknown delegation " + stop.delegation_id);
                dk = *found;
            }
            const Key sk = next_stop++;
            stop_key_by_id.emplace(stop.stop_id, sk);
            b.dim_stop.push_back(DimStopRow{sk, stop.interval.t_begin, stop.interval.t_end,
                                            stop.centroid.lat, stop.centroid.lon,
                                            to_string(stop.kind), dk});
            fact.stop_keys.push_back(sk);
            if (fact.country_key == 0 && dk != 0) {
                const AdminPlace& place = admin_by_delegation.at(stop.delegation_id);
                fact.country_key = *country_keys.find(place.country.id);
            }
        }
        std::map<Id, Key> move_key_by_id;
        for (const auto& move : traj.moves) {
            if (!seen_units.insert(move.move_id).second)
                throw DuplicateNaturalId("move " + move.move_id);
            const Key mk2 = next_move++;
            move_key_by_id.emplace(move.move_id, mk2);
            b.dim_move.push_back(DimMoveRow{mk2, move.interval.t_begin, move.interval.t_end,
                                            move_duration(move)});
            fact.move_keys.push_back(mk2);
        }
        for (const auto& sect : traj.sections) {
            if (!seen_units.insert(sect.section_id).second)
                throw DuplicateNaturalId("section " + sect.section_id);
            const Key xk = next_section++;
            b.dim_tr_section.push_back(DimTrSectionRow{
                xk, stop_key_by_id.at(sect.from_stop.stop_id),
                move_key_by_id.at(sect.move.move_id), stop_key_by_id.at(sect.to_stop.stop_id),
                sect.interval.t_begin, sect.interval.t_end});
            fact.section_keys.push_back(xk);
        }

        // Linked POIs: union of the stops' annotations, first-seen order.
        std::set<Id> seen_pois;
        for (const auto& stop : traj.stops) {
            for (const auto& poi_id : stop.nearby_poi_ids) {
                if (!seen_pois.insert(poi_id).second) continue;
                const Key* pk = poi_keys.find(poi_id);
                if (!pk)
                    throw DanglingReference("stop " + stop.stop_id + " cites unknown poi " +
                                            poi_id);
                fact.poi_keys.push_back(*pk);
            }
        }

        for (Key k : fact.stop_keys) b.bridge_fact_stop.push_back(BridgeRow{fact.fact_id, k});
        for (Key k : fact.move_keys) b.bridge_fact_move.push_back(BridgeRow{fact.fact_id, k});
        for (Key k : fact.section_keys)
            b.bridge_fact_section.push_back(BridgeRow{fact.fact_id, k});
        for (Key k : fact.poi_keys) b.bridge_fact_poi.push_back(BridgeRow{fact.fact_id, k});
        b.fact_trajectory.push_back(std::move(fact));
    }

    detail::rebuild_manifest(b);
    b.load_id = static_cast<std::int64_t>(bundle_fingerprint(b));
    return b;
}

// --- integrity ---------------------------------------------------------------

struct IntegrityViolation {
    std::string category;  // unresolved-key | duration-mismatch | hierarchy-break |
                           // manifest-drift | interval-order
    std::string table;
    Key row_key = 0;
    std::string detail;

    friend bool operator==(const IntegrityViolation&, const IntegrityViolation&) = default;
};

struct IntegrityReport {
    std::vector<IntegrityViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Exhaustive referential, duration, hierarchy and manifest checks.
/// Violations are report entries, never exceptions.
inline IntegrityReport integrity_check(const WarehouseBundle& b) {
    IntegrityReport report;
    auto add = [&report](std::string category, std::string table, Key row_key,
                         std::string detail) {
        report.violations.push_back(
            IntegrityViolation{std::move(category), std::move(table), row_key, std::move(detail)});
    };

    auto key_set = [](const auto& rows, auto member) {
        std::unordered_set<Key> keys;
        for (const auto& r : rows) keys.insert(r.*member);
        return keys;
    };
    const auto mic_set = key_set(b.dim_mic, &DimMicRow::mic_key);
    const auto date_set = key_set(b.dim_date, &DimDateRow::date_key);
    const auto month_set = key_set(b.dim_month, &DimMonthRow::month_key);
    const auto quarter_set = key_set(b.dim_quarter, &DimQuarterRow::quarter_key);
    const auto dow_set = key_set(b.dim_day_of_week, &DimDayOfWeekRow::dow_key);
    const auto stop_set = key_set(b.dim_stop, &DimStopRow::stop_key);
    const auto move_set = key_set(b.dim_move, &DimMoveRow::move_key);
    const auto section_set = key_set(b.dim_tr_section, &DimTrSectionRow::section_key);
    const auto country_set = key_set(b.dim_country, &DimCountryRow::country_key);
    const auto delegation_set = key_set(b.dim_delegation, &DimDelegationRow::delegation_key);
    const auto rg_set = key_set(b.dim_regional_government, &DimRegionalGovernmentRow::rg_key);
    const auto poi_set = key_set(b.dim_poi, &DimPoiRow::poi_key);
    const auto fact_set = key_set(b.fact_trajectory, &FactTrajectoryRow::fact_id);

    auto check_key = [&add](const std::unordered_set<Key>& set, Key k, const char* table,
                            Key row, const std::string& what, bool optional = false) {
        if (optional && k == 0) return;
        if (!set.count(k))
            add("unresolved-key", table, row, what + " = " + std::to_string(k));
    };

    for (const auto& f : b.fact_trajectory) {
        check_key(mic_set, f.mic_key, "fact_trajectory", f.fact_id, "mic_key");
        check_key(date_set, f.date_key, "fact_trajectory", f.fact_id, "date_key");
        check_key(country_set, f.country_key, "fact_trajectory", f.fact_id, "country_key", true);
        for (Key k : f.stop_keys)
            check_key(stop_set, k, "fact_trajectory", f.fact_id, "stop_key");
        for (Key k : f.move_keys)
            check_key(move_set, k, "fact_trajectory", f.fact_id, "move_key");
        for (Key k : f.section_keys)
            check_key(section_set, k, "fact_trajectory", f.fact_id, "section_key");
        for (Key k : f.poi_keys) check_key(poi_set, k, "fact_trajectory", f.fact_id, "poi_key");
        if (f.duration_s != f.t_end_s - f.t_begin_s)
            add("duration-mismatch", "fact_trajectory", f.fact_id,
                "duration_s = " + std::to_string(f.duration_s) + ", t_end - t_begin = " +
                    std::to_string(f.t_end_s - f.t_begin_s));
        if (f.t_begin_s > f.t_end_s)
            add("interval-order", "fact_trajectory", f.fact_id, "t_begin after t_end");
    }
    for (const auto& d : b.dim_date) {
        check_key(month_set, d.month_key, "dim_date", d.date_key, "month_key");
        check_key(quarter_set, d.quarter_key, "dim_date", d.date_key, "quarter_key");
        check_key(dow_set, d.dow_key, "dim_date", d.date_key, "dow_key");
    }
    for (const auto& s : b.dim_stop) {
        check_key(delegation_set, s.delegation_key, "dim_stop", s.stop_key, "delegation_key",
                  true);
        if (s.t_begin_s > s.t_end_s)
            add("interval-order", "dim_stop", s.stop_key, "t_begin after t_end");
    }
    for (const auto& m : b.dim_move) {
        if (m.duration_s != m.t_end_s - m.t_begin_s)
            add("duration-mismatch", "dim_move", m.move_key,
                "duration_s = " + std::to_string(m.duration_s) + ", t_end - t_begin = " +
                    std::to_string(m.t_end_s - m.t_begin_s));
        if (m.t_begin_s > m.t_end_s)
            add("interval-order", "dim_move", m.move_key, "t_begin after t_end");
    }
    for (const auto& x : b.dim_tr_section) {
        check_key(stop_set, x.stop_from_key, "dim_tr_section", x.section_key, "stop_from_key");
        check_key(move_set, x.move_key, "dim_tr_section", x.section_key, "move_key");
        check_key(stop_set, x.stop_to_key, "dim_tr_section", x.section_key, "stop_to_key");
        if (x.t_begin_s > x.t_end_s)
            add("interval-order", "dim_tr_section", x.section_key, "t_begin after t_end");
    }
    for (const auto& d : b.dim_delegation)
        check_key(rg_set, d.rg_key, "dim_delegation", d.delegation_key, "rg_key");
    for (const auto& r : b.dim_regional_government)
        check_key(country_set, r.country_key, "dim_regional_government", r.rg_key, "country_key");
    for (const auto& p : b.dim_poi) {
        check_key(delegation_set, p.delegation_key, "dim_poi", p.poi_key, "delegation_key");
        const auto kind = parse_poi_kind(p.kind);
        if (!kind) {
            add("hierarchy-break", "dim_poi", p.poi_key, "unknown kind '" + p.kind + "'");
            continue;
        }
        const auto& subs = b.dim_poi_subtype[static_cast<std::size_t>(*kind)];
        const bool found = std::any_of(subs.begin(), subs.end(), [&p](const PoiSubtypeRow& s) {
            return s.subtype_key == p.subtype_key;
        });
        if (!found)
            add("unresolved-key", "dim_poi", p.poi_key,
                std::string("subtype_key = ") + std::to_string(p.subtype_key) + " in " +
                    poi_subtype_table(*kind));
    }
    for (const auto* bridge :
         {&b.bridge_fact_stop, &b.bridge_fact_move, &b.bridge_fact_section, &b.bridge_fact_poi}) {
        const char* table = bridge == &b.bridge_fact_stop      ? "bridge_fact_stop"
                            : bridge == &b.bridge_fact_move    ? "bridge_fact_move"
                            : bridge == &b.bridge_fact_section ? "bridge_fact_section"
                                                                : "bridge_fact_poi";
        const auto& dim_set = bridge == &b.bridge_fact_stop      ? stop_set
                              : bridge == &b.bridge_fact_move    ? move_set
                              : bridge == &b.bridge_fact_section ? section_set
                                                                  : poi_set;
        for (const auto& row : *bridge) {
            check_key(fact_set, row.fact_key, table, row.fact_key, "fact_key");
            check_key(dim_set, row.dim_key, table, row.fact_key, "dim_key");
        }
    }
    for (const auto& name : warehouse_table_names()) {
        auto it = b.manifest.find(name);
        const std::size_t actual = detail::table_row_count(b, name);
        if (it == b.manifest.end())
            add("manifest-drift", name, 0, "table missing from manifest");
        else if (it->second != actual)
            add("manifest-drift", name, 0,
                "manifest says " + std::to_string(it->second) + ", table has " +
                    std::to_string(actual));
    }
    for (const auto& [name, count] : b.manifest) {
        bool known = false;
        for (const auto& n : warehouse_table_names())
            if (n == name) known = true;
        if (!known) add("manifest-drift", name, 0, "manifest lists an unknown table");
    }
    return report;
}

// --- serialization -------------------------------------------------------------
//
// One comma-delimited UTF-8 file per table, header row, LF line endings.
// Timestamp columns carry both integer seconds and an ISO-8601 rendering;
// the integer column is authoritative on read.

namespace detail {

inline std::string subtype_key_column(const std::string& table) {
    return table.substr(4) + "_key";  // dim_sea -> sea_key
}

inline csv::Table serialize_table(const WarehouseBundle& b, const std::string& name) {
    using csv::format_double;
    using csv::format_int;
    csv::Table t;
    auto row = [&t](std::vector<std::string> cells) { t.rows.push_back(std::move(cells)); };

    if (name == "fact_trajectory") {
        t.header = {"fact_id", "trajectory_natural_id", "mic_key", "date_key",
                    "t_begin_s", "t_begin_iso", "t_end_s", "t_end_iso", "duration_s",
                    "country_key"};
        for (const auto& f : b.fact_trajectory)
            row({format_int(f.fact_id), format_int(f.trajectory_natural_id),
                 format_int(f.mic_key), format_int(f.date_key), format_int(f.t_begin_s),
                 iso8601_utc(f.t_begin_s), format_int(f.t_end_s), iso8601_utc(f.t_end_s),
                 format_int(f.duration_s), format_int(f.country_key)});
    } else if (name == "dim_mic") {
        t.header = {"mic_key", "mic_id", "first_name", "last_name"};
        for (const auto& m : b.dim_mic)
            row({format_int(m.mic_key), m.mic_id, m.first_name, m.last_name});
    } else if (name == "dim_date") {
        t.header = {"date_key", "day", "hour", "month_key", "quarter_key", "dow_key"};
        for (const auto& d : b.dim_date)
            row({format_int(d.date_key), format_int(d.day), format_int(d.hour),
                 format_int(d.month_key), format_int(d.quarter_key), format_int(d.dow_key)});
    } else if (name == "dim_month") {
        t.header = {"month_key", "month", "year"};
        for (const auto& m : b.dim_month)
            row({format_int(m.month_key), format_int(m.month), format_int(m.year)});
    } else if (name == "dim_quarter") {
        t.header = {"quarter_key", "quarter", "year"};
        for (const auto& q : b.dim_quarter)
            row({format_int(q.quarter_key), format_int(q.quarter), format_int(q.year)});
    } else if (name == "dim_day_of_week") {
        t.header = {"dow_key", "name"};
        for (const auto& d : b.dim_day_of_week) row({format_int(d.dow_key), d.name});
    } else if (name == "dim_stop") {
        t.header = {"stop_key", "t_begin_s", "t_begin_iso", "t_end_s", "t_end_iso",
                    "lat_deg", "lon_deg", "kind", "delegation_key"};
        for (const auto& s : b.dim_stop)
            row({format_int(s.stop_key), format_int(s.t_begin_s), iso8601_utc(s.t_begin_s),
                 format_int(s.t_end_s), iso8601_utc(s.t_end_s), format_double(s.lat),
                 format_double(s.lon), s.kind, format_int(s.delegation_key)});
    } else if (name == "dim_move") {
        t.header = {"move_key", "t_begin_s", "t_begin_iso", "t_end_s", "t_end_iso",
                    "duration_s"};
        for (const auto& m : b.dim_move)
            row({format_int(m.move_key), format_int(m.t_begin_s), iso8601_utc(m.t_begin_s),
                 format_int(m.t_end_s), iso8601_utc(m.t_end_s), format_int(m.duration_s)});
    } else if (name == "dim_tr_section") {
        t.header = {"section_key", "stop_from_key", "move_key", "stop_to_key",
                    "t_begin_s", "t_begin_iso", "t_end_s", "t_end_iso"};
        for (const auto& x : b.dim_tr_section)
            row({format_int(x.section_key), format_int(x.stop_from_key), format_int(x.move_key),
                 format_int(x.stop_to_key), format_int(x.t_begin_s), iso8601_utc(x.t_begin_s),
                 format_int(x.t_end_s), iso8601_utc(x.t_end_s)});
    } else if (name == "dim_country") {
        t.header = {"country_key", "name", "population"};
        for (const auto& c : b.dim_country)
            row({format_int(c.country_key), c.name, format_int(c.population)});
    } else if (name == "dim_delegation") {
        t.header = {"delegation_key", "name", "population", "surface_km2", "climate", "rg_key"};
        for (const auto& d : b.dim_delegation)
            row({format_int(d.delegation_key), d.name, format_int(d.population),
                 format_double(d.surface_km2), d.climate, format_int(d.rg_key)});
    } else if (name == "dim_regional_government") {
        t.header = {"rg_key", "name", "country_key"};
        for (const auto& r : b.dim_regional_government)
            row({format_int(r.rg_key), r.name, format_int(r.country_key)});
    } else if (name == "dim_poi") {
        t.header = {"poi_key", "poi_id", "kind", "delegation_key", "subtype_key"};
        for (const auto& p : b.dim_poi)
            row({format_int(p.poi_key), p.poi_natural_id, p.kind, format_int(p.delegation_key),
                 format_int(p.subtype_key)});
    } else if (name == "bridge_fact_stop" || name == "bridge_fact_move" ||
               name == "bridge_fact_section" || name == "bridge_fact_poi") {
        const std::vector<BridgeRow>& rows = name == "bridge_fact_stop"      ? b.bridge_fact_stop
                                             : name == "bridge_fact_move"    ? b.bridge_fact_move
                                             : name == "bridge_fact_section" ? b.bridge_fact_section
                                                                             : b.bridge_fact_poi;
        const std::string dim = name.substr(std::string("bridge_fact_").size()) + "_key";
        t.header = {"fact_key", dim};
        for (const auto& r : rows) row({format_int(r.fact_key), format_int(r.dim_key)});
    } else {
        for (int i = 0; i < kPoiKindCount; ++i) {
            const PoiKind kind = static_cast<PoiKind>(i);
            if (name != poi_subtype_table(kind)) continue;
            const auto& rows = b.dim_poi_subtype[static_cast<std::size_t>(i)];
            const std::string key_col = subtype_key_column(name);
            if (is_natural(kind)) {
                t.header = {key_col, "name", "location", "surface", "length", "depth"};
                for (const auto& s : rows)
                    row({format_int(s.subtype_key), s.name, s.location, s.surface, s.length,
                         s.depth});
            } else if (kind == PoiKind::Touristic) {
                t.header = {key_col, "name", "category", "type", "location"};
                for (const auto& s : rows)
                    row({format_int(s.subtype_key), s.name, s.category, s.type, s.location});
            } else {
                t.header = {key_col, "name", "location", "activity", "type"};
                for (const auto& s : rows)
                    row({format_int(s.subtype_key), s.name, s.location, s.activity, s.type});
            }
            return t;
        }
        throw Error("unknown table: " + name);
    }
    return t;
}

inline void deserialize_table(WarehouseBundle& b, const std::string& name, const csv::Table& t) {
    using csv::parse_double;
    using csv::parse_int;
    auto col = [&t](const std::vector<std::string>& row, const char* c) -> const std::string& {
        return row[t.column(c)];
    };

    if (name == "fact_trajectory") {
        for (const auto& r : t.rows) {
            FactTrajectoryRow f;
            f.fact_id = parse_int(col(r, "fact_id"));
            f.trajectory_natural_id = parse_int(col(r, "trajectory_natural_id"));
            f.mic_key = parse_int(col(r, "mic_key"));
            f.date_key = parse_int(col(r, "date_key"));
            f.t_begin_s = parse_int(col(r, "t_begin_s"));
            f.t_end_s = parse_int(col(r, "t_end_s"));
            f.duration_s = parse_int(col(r, "duration_s"));
            f.country_key = parse_int(col(r, "country_key"));
            b.fact_trajectory.push_back(std::move(f));
        }
    } else if (name == "dim_mic") {
        for (const auto& r : t.rows)
            b.dim_mic.push_back(DimMicRow{parse_int(col(r, "mic_key")), col(r, "mic_id"),
                                          col(r, "first_name"), col(r, "last_name")});
    } else if (name == "dim_date") {
        for (const auto& r : t.rows)
            b.dim_date.push_back(DimDateRow{
                parse_int(col(r, "date_key")), static_cast<int>(parse_int(col(r, "day"))),
                static_cast<int>(parse_int(col(r, "hour"))), parse_int(col(r, "month_key")),
                parse_int(col(r, "quarter_key")), parse_int(col(r, "dow_key"))});
    } else if (name == "dim_month") {
        for (const auto& r : t.rows)
            b.dim_month.push_back(DimMonthRow{parse_int(col(r, "month_key")),
                                              static_cast<int>(parse_int(col(r, "month"))),
                                              static_cast<int>(parse_int(col(r, "year")))});
    } else if (name == "dim_quarter") {
        for (const auto& r : t.rows)
            b.dim_quarter.push_back(DimQuarterRow{parse_int(col(r, "quarter_key")),
                                                  static_cast<int>(parse_int(col(r, "quarter"))),
                                                  static_cast<int>(parse_int(col(r, "year")))});
    } else if (name == "dim_day_of_week") {
        for (const auto& r : t.rows)
            b.dim_day_of_week.push_back(
                DimDayOfWeekRow{parse_int(col(r, "dow_key")), col(r, "name")});
    } else if (name == "dim_stop") {
        for (const auto& r : t.rows)
            b.dim_stop.push_back(DimStopRow{
                parse_int(col(r, "stop_key")), parse_int(col(r, "t_begin_s")),
                parse_int(col(r, "t_end_s")), parse_double(col(r, "lat_deg")),
                parse_double(col(r, "lon_deg")), col(r, "kind"),
                parse_int(col(r, "delegation_key"))});
    } else if (name == "dim_move") {
        for (const auto& r : t.rows)
            b.dim_move.push_back(DimMoveRow{parse_int(col(r, "move_key")),
                                            parse_int(col(r, "t_begin_s")),
                                            parse_int(col(r, "t_end_s")),
                                            parse_int(col(r, "duration_s"))});
    } else if (name == "dim_tr_section") {
        for (const auto& r : t.rows)
            b.dim_tr_section.push_back(DimTrSectionRow{
                parse_int(col(r, "section_key")), parse_int(col(r, "stop_from_key")),
                parse_int(col(r, "move_key")), parse_int(col(r, "stop_to_key")),
                parse_int(col(r, "t_begin_s")), parse_int(col(r, "t_end_s"))});
    } else if (name == "dim_country") {
        for (const auto& r : t.rows)
            b.dim_country.push_back(DimCountryRow{parse_int(col(r, "country_key")),
                                                  col(r, "name"),
                                                  parse_int(col(r, "population"))});
    } else if (name == "dim_delegation") {
        for (const auto& r : t.rows)
            b.dim_delegation.push_back(DimDelegationRow{
                parse_int(col(r, "delegation_key")), col(r, "name"),
                parse_int(col(r, "population")), parse_double(col(r, "surface_km2")),
                col(r, "climate"), parse_int(col(r, "rg_key"))});
    } else if (name == "dim_regional_government") {
        for (const auto& r : t.rows)
            b.dim_regional_government.push_back(DimRegionalGovernmentRow{
                parse_int(col(r, "rg_key")), col(r, "name"), parse_int(col(r, "country_key"))});
    } else if (name == "dim_poi") {
        for (const auto& r : t.rows)
            b.dim_poi.push_back(DimPoiRow{parse_int(col(r, "poi_key")), col(r, "poi_id"),
                                          col(r, "kind"), parse_int(col(r, "delegation_key")),
                                          parse_int(col(r, "subtype_key"))});
    } else if (name == "bridge_fact_stop" || name == "bridge_fact_move" ||
               name == "bridge_fact_section" || name == "bridge_fact_poi") {
        std::vector<BridgeRow>& rows = name == "bridge_fact_stop"      ? b.bridge_fact_stop
                                       : name == "bridge_fact_move"    ? b.bridge_fact_move
                                       : name == "bridge_fact_section" ? b.bridge_fact_section
                                                                       : b.bridge_fact_poi;
        const std::string dim = name.substr(std::string("bridge_fact_").size()) + "_key";
        for (const auto& r : t.rows)
            rows.push_back(
                BridgeRow{parse_int(col(r, "fact_key")), parse_int(r[t.column(dim)])});
    } else {
        for (int i = 0; i < kPoiKindCount; ++i) {
            const PoiKind kind = static_cast<PoiKind>(i);
            if (name != poi_subtype_table(kind)) continue;
            auto& rows = b.dim_poi_subtype[static_cast<std::size_t>(i)];
            const std::string key_col = subtype_key_column(name);
            for (const auto& r : t.rows) {
                PoiSubtypeRow s;
                s.subtype_key = parse_int(r[t.column(key_col)]);
                s.name = col(r, "name");
                if (is_natural(kind)) {
                    s.location = col(r, "location");
                    s.surface = col(r, "surface");
                    s.length = col(r, "length");
                    s.depth = col(r, "depth");
                } else if (kind == PoiKind::Touristic) {
                    s.category = col(r, "category");
                    s.type = col(r, "type");
                    s.location = col(r, "location");
                } else {
                    s.location = col(r, "location");
                    s.activity = col(r, "activity");
                    s.type = col(r, "type");
                }
                rows.push_back(std::move(s));
            }
            return;
        }
        throw Error("unknown table: " + name);
    }
}

}  // namespace detail

/// Deterministic content fingerprint over every serialized table; used as
/// the bundle's load_id (recomputed on read, never persisted).
inline std::uint64_t bundle_fingerprint(const WarehouseBundle& b) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& name : warehouse_table_names()) {
        h = detail::fnv1a64(name, h);
        h = detail::fnv1a64(csv::to_string(detail::serialize_table(b, name)), h);
    }
    return h;
}

/// Writes the bundle directory: one CSV per table, `manifest.txt` with
/// `<table>,<row_count>` lines, and `schema_version.txt`.
inline void write_bundle(const WarehouseBundle& b, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
    try {
        std::string manifest;
        for (const auto& name : warehouse_table_names()) {
            const csv::Table t = detail::serialize_table(b, name);
            csv::write_file(dir / (name + ".csv"), csv::to_string(t));
            manifest += name + "," + std::to_string(t.rows.size()) + "\n";
        }
        csv::write_file(dir / "manifest.txt", manifest);
        csv::write_file(dir / "schema_version.txt", std::to_string(b.schema_version));
    } catch (const csv::IoFailure& e) {
        throw IoFailure(e.what());
    }
}

/// Reads a bundle directory back. Missing table files and row-count drift
/// raise ManifestMismatch; a wrong schema version raises
/// SchemaVersionMismatch.
inline WarehouseBundle read_bundle(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoFailure("not a warehouse directory: " + dir.string());
    std::string version_text;
    std::string manifest_text;
    try {
        version_text = csv::read_file(dir / "schema_version.txt");
        manifest_text = csv::read_file(dir / "manifest.txt");
    } catch (const csv::IoFailure& e) {
        throw IoFailure(e.what());
    }
    if (trim(version_text) != std::to_string(kSchemaVersion))
        throw SchemaVersionMismatch("schema version '" + trim(version_text) + "', expected " +
                                    std::to_string(kSchemaVersion));

    std::map<std::string, std::size_t> manifest;
    for (const auto& line : split(manifest_text, '\n')) {
        if (trim(line).empty()) continue;
        const auto parts = split(line, ',');
        if (parts.size() != 2) throw ManifestMismatch("malformed manifest line: " + line);
        try {
            manifest[parts[0]] = static_cast<std::size_t>(csv::parse_int(parts[1]));
        } catch (const csv::ParseError&) {
            throw ManifestMismatch("malformed manifest count: " + line);
        }
    }

    WarehouseBundle b;
    b.schema_version = kSchemaVersion;
    for (const auto& name : warehouse_table_names()) {
        const auto it = manifest.find(name);
        if (it == manifest.end())
            throw ManifestMismatch("manifest is missing table " + name);
        const auto path = dir / (name + ".csv");
        if (!std::filesystem::exists(path))
            throw ManifestMismatch("table file missing: " + name + ".csv");
        csv::Table t;
        try {
            t = csv::read_table(path);
        } catch (const csv::IoFailure& e) {
            throw IoFailure(e.what());
        }
        if (t.rows.size() != it->second)
            throw ManifestMismatch("table " + name + " has " + std::to_string(t.rows.size()) +
                                   " rows, manifest says " + std::to_string(it->second));
        detail::deserialize_table(b, name, t);
    }
    for (const auto& [name, count] : manifest) {
        bool known = false;
        for (const auto& n : warehouse_table_names())
            if (n == name) known = true;
        if (!known) throw ManifestMismatch("manifest lists unknown table " + name);
    }

    // Rebuild the facts' key vectors from the bridges (bridge order
    // preserves load order).
    std::map<Key, FactTrajectoryRow*> fact_by_key;
    for (auto& f : b.fact_trajectory) fact_by_key.emplace(f.fact_id, &f);
    auto scatter = [&fact_by_key](const std::vector<BridgeRow>& bridge,
                                  std::vector<Key> FactTrajectoryRow::*member) {
        for (const auto& row : bridge) {
            auto it = fact_by_key.find(row.fact_key);
            if (it != fact_by_key.end()) (it->second->*member).push_back(row.dim_key);
        }
    };
    scatter(b.bridge_fact_stop, &FactTrajectoryRow::stop_keys);
    scatter(b.bridge_fact_move, &FactTrajectoryRow::move_keys);
    scatter(b.bridge_fact_section, &FactTrajectoryRow::section_keys);
    scatter(b.bridge_fact_poi, &FactTrajectoryRow::poi_keys);

    b.manifest = std::move(manifest);
    b.load_id = static_cast<std::int64_t>(bundle_fingerprint(b));
    return b;
}

}  // namespace tdw
