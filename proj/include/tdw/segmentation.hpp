#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/geo.hpp"
#include "tdw/itinerary.hpp"
#include "tdw/model.hpp"

namespace tdw {

/// Stop-detection thresholds. A stop is a maximal run of fixes within
/// eps_m of the run's first fix spanning at least tau_min_s; distance of
/// exactly eps_m counts as inside.
struct SegmentationParams {
    double eps_m = 50.0;
    std::int64_t tau_min_s = 300;
    double match_radius_m = 200.0;

    friend bool operator==(const SegmentationParams&, const SegmentationParams&) = default;
};

struct InvalidParams : Error {
    using Error::Error;
};
struct EmptyInput : Error {
    using Error::Error;
};
struct UnsortedInput : Error {
    using Error::Error;
};
struct MixedMicIds : Error {
    using Error::Error;
};

inline void validate(const SegmentationParams& p) {
    if (!(p.eps_m > 0)) throw InvalidParams("eps_m must be > 0");
    if (!(p.tau_min_s > 0)) throw InvalidParams("tau_min_s must be > 0");
    if (!(p.match_radius_m >= p.eps_m)) throw InvalidParams("match_radius_m must be >= eps_m");
}

namespace detail {

inline Stop stop_from_run(std::span<const GpsFix> fixes, std::size_t first, std::size_t last,
                          TrajectoryId trajectory_id, std::size_t ordinal) {
    Stop s;
    s.stop_id = "t" + std::to_string(trajectory_id) + "-s" + std::to_string(ordinal);
    s.interval = TimeInterval{fixes[first].t, fixes[last].t};
    double lat = 0, lon = 0;
    for (std::size_t i = first; i <= last; ++i) {
        lat += fixes[i].pos.lat;
        lon += fixes[i].pos.lon;
    }
    const double n = static_cast<double>(last - first + 1);
    s.centroid = GeoPoint{lat / n, lon / n};
    return s;
}

inline Stop synthetic_stop(const GpsFix& fix, TrajectoryId trajectory_id, std::size_t ordinal) {
    Stop s;
    s.stop_id = "t" + std::to_string(trajectory_id) + "-s" + std::to_string(ordinal);
    s.interval = TimeInterval{fix.t, fix.t};
    s.centroid = fix.pos;
    s.synthetic = true;
    return s;
}

}  // namespace detail

/// Index ranges of the detected stop runs, the core of the stop/move
/// heuristic: greedy left-to-right scan, first-fix-anchored maximal runs.
inline std::vector<std::pair<std::size_t, std::size_t>> detect_stop_runs(
    std::span<const GpsFix> fixes, const SegmentationParams& params) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t i = 0;
    while (i < fixes.size()) {
        std::size_t j = i;
        while (j + 1 < fixes.size() &&
               geo_distance(fixes[i].pos, fixes[j + 1].pos) <= params.eps_m)
            ++j;
        if (fixes[j].t - fixes[i].t >= params.tau_min_s) {
            runs.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;  // fix i belongs to a move
        }
    }
    return runs;
}

/// Segments one collector's time-ordered fixes into an alternation of
/// stops and moves. Traces that start or end mid-move are closed with
/// synthetic zero-dwell stops; a trace with no detected stop becomes one
/// move between synthetic endpoints (with a warning).
inline Trajectory segment(std::span<const GpsFix> fixes, const SegmentationParams& params,
                          TrajectoryId trajectory_id = 1,
                          std::vector<std::string>* warnings = nullptr) {
    validate(params);
    if (fixes.empty()) throw EmptyInput("no fixes");
    for (std::size_t i = 1; i < fixes.size(); ++i) {
        if (fixes[i].mic_id != fixes[0].mic_id)
            throw MixedMicIds("fixes mix " + fixes[0].mic_id + " and " + fixes[i].mic_id);
        if (fixes[i - 1].t >= fixes[i].t)
            throw UnsortedInput("timestamps not strictly increasing at index " +
                                std::to_string(i));
    }
    const Id mic_id = fixes[0].mic_id;
    auto warn = [warnings](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    if (fixes.size() == 1) {
        warn("single-fix trace for " + mic_id + ": one synthetic stop, no sections");
        return make_degenerate_trajectory(trajectory_id, mic_id,
                                          detail::synthetic_stop(fixes[0], trajectory_id, 0));
    }

    auto runs = detect_stop_runs(fixes, params);
    if (runs.empty()) {
        warn("no stops detected for " + mic_id +
             "; treating the trace as one move between synthetic endpoint stops");
        runs = {{0, 0}, {fixes.size() - 1, fixes.size() - 1}};
    } else {
        // Close open ends with zero-dwell synthetic stops owning the
        // boundary fix, so every fix lands in exactly one stop or move.
        if (runs.front().first > 0) runs.insert(runs.begin(), {0, 0});
        if (runs.back().second + 1 < fixes.size())
            runs.emplace_back(fixes.size() - 1, fixes.size() - 1);
    }

    std::vector<Stop> stops;
    stops.reserve(runs.size());
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto [first, last] = runs[k];
        const bool qualifying = fixes[last].t - fixes[first].t >= params.tau_min_s;
        stops.push_back(qualifying
                            ? detail::stop_from_run(fixes, first, last, trajectory_id, k)
                            : detail::synthetic_stop(fixes[first], trajectory_id, k));
    }

    if (stops.size() == 1) {
        return make_degenerate_trajectory(trajectory_id, mic_id, std::move(stops[0]));
    }

    std::vector<Move> moves;
    moves.reserve(runs.size() - 1);
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
        Move m;
        m.move_id = "t" + std::to_string(trajectory_id) + "-m" + std::to_string(k);
        const std::size_t a = runs[k].second + 1;
        const std::size_t b = runs[k + 1].first;  // exclusive
        m.path.assign(fixes.begin() + static_cast<std::ptrdiff_t>(a),
                      fixes.begin() + static_cast<std::ptrdiff_t>(b));
        m.interval = m.path.empty()
                         ? TimeInterval{fixes[runs[k].second].t, fixes[runs[k + 1].first].t}
                         : TimeInterval{m.path.front().t, m.path.back().t};
        moves.push_back(std::move(m));
    }

    return assemble_trajectory(trajectory_id, mic_id, std::move(stops), std::move(moves));
}

/// Stop kind precedence: Planned (near a destination or its registered
/// equivalent) > Unforeseen (a navigation event overlaps the dwell) >
/// Private.
inline StopKind classify_stop(const Stop& stop, const ItineraryState& itinerary,
                              std::span<const NavigationEvent> events,
                              const SegmentationParams& params) {
    for (const auto& d : itinerary.destinations)
        if (geo_distance(stop.centroid, d.pos) <= params.match_radius_m) return StopKind::Planned;
    for (const auto& [id, d] : itinerary.alternates)
        if (geo_distance(stop.centroid, d.pos) <= params.match_radius_m) return StopKind::Planned;
    for (const auto& ev : events)
        if (overlaps(ev.interval, stop.interval)) return StopKind::Unforeseen;
    return StopKind::Private;
}

/// Attaches every point of interest within match_radius_m of the stop
/// centroid, and the delegation of the nearest one.
inline Stop annotate_pois(Stop stop, std::span<const PointOfInterest> gazetteer,
                          const SegmentationParams& params) {
    stop.nearby_poi_ids.clear();
    double best = 0.0;
    Id best_poi_id;
    Id best_delegation;
    bool found = false;
    for (const auto& poi : gazetteer) {
        const double d = geo_distance(stop.centroid, poi.pos);
        if (d > params.match_radius_m) continue;
        stop.nearby_poi_ids.push_back(poi.poi_id);
        if (!found || d < best || (d == best && poi.poi_id < best_poi_id)) {
            best = d;
            best_poi_id = poi.poi_id;
            best_delegation = poi.delegation_id;
            found = true;
        }
    }
    std::sort(stop.nearby_poi_ids.begin(), stop.nearby_poi_ids.end());
    stop.nearby_poi_ids.erase(
        std::unique(stop.nearby_poi_ids.begin(), stop.nearby_poi_ids.end()),
        stop.nearby_poi_ids.end());
    if (found) stop.delegation_id = best_delegation;
    return stop;
}

/// Classifies and annotates every stop of a trajectory, then reassembles
/// it so the stop copies inside sections stay in sync.
inline Trajectory enrich_trajectory(const Trajectory& traj, const ItineraryState& itinerary,
                                    std::span<const NavigationEvent> events,
                                    std::span<const PointOfInterest> gazetteer,
                                    const SegmentationParams& params) {
    std::vector<Stop> stops = traj.stops;
    for (auto& s : stops) {
        s = annotate_pois(std::move(s), gazetteer, params);
        s.kind = classify_stop(s, itinerary, events, params);
    }
    if (traj.moves.empty())
        return make_degenerate_trajectory(traj.trajectory_id, traj.mic_id, std::move(stops[0]));
    return assemble_trajectory(traj.trajectory_id, traj.mic_id, std::move(stops), traj.moves);
}

}  // namespace tdw
