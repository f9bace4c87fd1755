#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/model.hpp"
#include "tdw/query.hpp"

namespace tdw {

/// The pre-warehouse object graph the analytical oracle works on. The
/// oracle recomputes every query by naive nested loops over these domain
/// objects, bypassing the snowflake entirely; any disagreement with the
/// engine is a defect in one of the two.
struct ObjectGraph {
    std::vector<Trajectory> trajectories;
    std::vector<Mic> mics;
    std::vector<PointOfInterest> gazetteer;
    std::vector<AdminPlace> admin_places;
};

namespace oracle_detail {

inline const Trajectory* find_trajectory(const ObjectGraph& g, TrajectoryId id) {
    for (const auto& t : g.trajectories)
        if (t.trajectory_id == id) return &t;
    return nullptr;
}

inline const AdminPlace* find_admin(const ObjectGraph& g, const Id& delegation_id) {
    for (const auto& a : g.admin_places)
        if (a.delegation.id == delegation_id) return &a;
    return nullptr;
}

inline std::vector<Id> linked_poi_ids(const Trajectory& t) {
    std::vector<Id> ids;
    std::set<Id> seen;
    for (const auto& stop : t.stops)
        for (const auto& id : stop.nearby_poi_ids)
            if (seen.insert(id).second) ids.push_back(id);
    return ids;
}

inline const PointOfInterest* find_poi(const ObjectGraph& g, const Id& id) {
    for (const auto& p : g.gazetteer)
        if (p.poi_id == id) return &p;
    return nullptr;
}

inline std::string attr(const PointOfInterest& p, const char* name) {
    auto it = p.attrs.find(name);
    return it == p.attrs.end() ? std::string() : it->second;
}

}  // namespace oracle_detail

inline QueryResult oracle_q1(const ObjectGraph& g, TrajectoryId trajectory_id,
                             const std::string& country_name) {
    QueryResult res;
    res.columns = {{"location", CellType::Text}};
    const Trajectory* traj = oracle_detail::find_trajectory(g, trajectory_id);
    if (!traj) {
        res.warnings.push_back("unknown trajectory " + std::to_string(trajectory_id));
        return res;
    }
    std::set<std::string> locations;
    for (const auto& poi_id : oracle_detail::linked_poi_ids(*traj)) {
        const PointOfInterest* poi = oracle_detail::find_poi(g, poi_id);
        if (!poi || poi->kind != PoiKind::Touristic) continue;
        const AdminPlace* admin = oracle_detail::find_admin(g, poi->delegation_id);
        if (!admin || !name_eq(admin->country.name, country_name)) continue;
        locations.insert(oracle_detail::attr(*poi, "location"));
    }
    for (const auto& loc : locations) res.rows.push_back({Cell{loc}});
    return res;
}

inline std::int64_t oracle_q2(const ObjectGraph& g, const std::string& country_name,
                              const std::string& delegation_name) {
    std::int64_t count = 0;
    for (const auto& poi : g.gazetteer) {
        if (poi.kind != PoiKind::Agricultural) continue;
        const AdminPlace* admin = oracle_detail::find_admin(g, poi.delegation_id);
        if (!admin) continue;
        if (name_eq(admin->delegation.name, delegation_name) &&
            name_eq(admin->country.name, country_name))
            ++count;
    }
    return count;
}

inline QueryResult oracle_q3(const ObjectGraph& g, TrajectoryId trajectory_id) {
    QueryResult res;
    res.columns = {{"location", CellType::Text}};
    const Trajectory* traj = oracle_detail::find_trajectory(g, trajectory_id);
    if (!traj) {
        res.warnings.push_back("unknown trajectory " + std::to_string(trajectory_id));
        return res;
    }
    std::set<std::string> locations;
    for (const auto& poi_id : oracle_detail::linked_poi_ids(*traj)) {
        const PointOfInterest* poi = oracle_detail::find_poi(g, poi_id);
        if (poi && poi->kind == PoiKind::Lake)
            locations.insert(oracle_detail::attr(*poi, "location"));
    }
    for (const auto& loc : locations) res.rows.push_back({Cell{loc}});
    return res;
}

inline QueryResult oracle_q4(const ObjectGraph& g) {
    QueryResult res;
    res.columns = {{"trajectory_id", CellType::Integer}};
    res.ordering = "trajectory_id asc";
    std::vector<TrajectoryId> ids;
    for (const auto& traj : g.trajectories) {
        bool sea = false, touristic = false;
        for (const auto& poi_id : oracle_detail::linked_poi_ids(traj)) {
            const PointOfInterest* poi = oracle_detail::find_poi(g, poi_id);
            if (!poi) continue;
            sea = sea || poi->kind == PoiKind::Sea;
            touristic = touristic || poi->kind == PoiKind::Touristic;
        }
        if (sea && touristic) ids.push_back(traj.trajectory_id);
    }
    std::sort(ids.begin(), ids.end());
    for (TrajectoryId id : ids) res.rows.push_back({Cell{id}});
    return res;
}

/// The engine reports the touristic-company surrogate key; the oracle
/// derives the same key from first principles: dense keys from 1 over the
/// touristic POIs in gazetteer order.
inline QueryResult oracle_q5(const ObjectGraph& g, const std::string& location_name,
                             const std::string& category, const std::string& star_type) {
    QueryResult res;
    res.columns = {{"name", CellType::Text}, {"touristic_company_key", CellType::Integer}};
    std::int64_t touristic_key = 0;
    for (const auto& poi : g.gazetteer) {
        if (poi.kind != PoiKind::Touristic) continue;
        ++touristic_key;
        if (oracle_detail::attr(poi, "category") == category &&
            oracle_detail::attr(poi, "type") == star_type &&
            name_eq(oracle_detail::attr(poi, "location"), location_name))
            res.rows.push_back({Cell{poi.name}, Cell{touristic_key}});
    }
    return res;
}

inline QueryResult oracle_q6(const ObjectGraph& g, std::int64_t threshold) {
    if (threshold < 0)
        throw NegativeThreshold("threshold must be >= 0, got " + std::to_string(threshold));
    QueryResult res;
    res.columns = {{"trajectory_id", CellType::Integer}};
    res.ordering = "trajectory_id asc";
    std::vector<TrajectoryId> ids;
    for (const auto& traj : g.trajectories) {
        std::int64_t touristic = 0;
        for (const auto& poi_id : oracle_detail::linked_poi_ids(traj)) {
            const PointOfInterest* poi = oracle_detail::find_poi(g, poi_id);
            if (poi && poi->kind == PoiKind::Touristic) ++touristic;
        }
        if (touristic > threshold) ids.push_back(traj.trajectory_id);
    }
    std::sort(ids.begin(), ids.end());
    for (TrajectoryId id : ids) res.rows.push_back({Cell{id}});
    return res;
}

inline RollupResult oracle_rollup(const ObjectGraph& g, const std::vector<std::string>& levels,
                                  PoiKind kind) {
    if (levels.empty()) throw Error("rollup requires at least one level");
    RollupResult res;
    res.levels = levels;
    std::map<std::vector<std::string>, std::int64_t> counts;
    auto group_of = [&levels](const AdminPlace& admin) {
        std::vector<std::string> group;
        for (const auto& level : levels)
            group.push_back(level == "country" ? admin.country.name : admin.delegation.name);
        return group;
    };
    for (const auto& admin : g.admin_places) counts.emplace(group_of(admin), 0);
    for (const auto& poi : g.gazetteer) {
        if (poi.kind != kind) continue;
        const AdminPlace* admin = oracle_detail::find_admin(g, poi.delegation_id);
        if (admin) ++counts[group_of(*admin)];
    }
    for (const auto& [keys, count] : counts) {
        res.groups.push_back(RollupResult::Group{keys, count});
        res.grand_total += count;
    }
    return res;
}

}  // namespace tdw
