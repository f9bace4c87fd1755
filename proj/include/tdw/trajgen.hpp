#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/geo.hpp"
#include "tdw/itinerary.hpp"
#include "tdw/model.hpp"
#include "tdw/rng.hpp"
#include "tdw/time.hpp"

namespace tdw {

struct InvalidSpec : Error {
    using Error::Error;
};
struct InfeasibleParams : Error {
    using Error::Error;
};

/// Minimum displacement between consecutive dwells the generator will
/// realize; far above any sensible stop radius, so segmentation can
/// always separate neighboring stops.
inline constexpr double kMinLegM = 1500.0;

struct NetworkEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    double length_m = 0.0;

    friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

/// World shape: how many delegations, how many POIs each, and the section
/// graph the collectors travel on. An empty edge list asks the generator
/// for a connected ring-plus-chords topology.
struct NetworkSpec {
    std::uint64_t seed = 1;
    std::size_t n_delegations = 8;
    std::size_t n_pois_per_delegation = 6;
    std::vector<NetworkEdge> edges;
};

struct World {
    std::vector<AdminPlace> admin_places;
    std::vector<PointOfInterest> gazetteer;
    std::vector<NetworkEdge> network;
    std::vector<GeoPoint> delegation_centers;  // by delegation index
    std::vector<Id> delegation_ids;
};

/// Run shape: collectors, itinerary length, dwell and motion parameters.
/// Dwell jitter is uniform within noise_m of the destination; moves emit
/// exact on-path fixes. Leg durations are rounded up to the fix grid.
struct GenParams {
    std::uint64_t seed = 1;
    std::size_t n_mics = 4;
    std::size_t stops_per_itinerary = 5;
    std::int64_t dwell_s = 600;
    double cruise_speed_mps = 15.0;
    std::int64_t fix_period_s = 30;
    double noise_m = 0.0;
    double event_rate = 0.15;  // probability of a navigation event per leg
    std::int64_t t0 = 1247644800;  // 2009-07-15T08:00:00Z
};

/// Label of one generated fix: which true stop or move owns it.
struct FixLabel {
    bool is_stop = false;
    std::size_t ordinal = 0;

    friend bool operator==(const FixLabel&, const FixLabel&) = default;
};

struct MicGroundTruth {
    Id mic_id;
    TrajectoryId trajectory_id = 0;
    std::vector<GpsFix> fixes;
    std::vector<FixLabel> labels;  // parallel to fixes
    std::vector<std::pair<std::size_t, std::size_t>> stop_fix_ranges;
    Trajectory truth;

    friend bool operator==(const MicGroundTruth&, const MicGroundTruth&) = default;
};

struct GroundTruth {
    std::vector<MicGroundTruth> per_mic;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct SimOutput {
    std::vector<Mic> mics;
    std::vector<MeanOfTransport> transports;  // transports[i] belongs to mics[i]
    std::vector<ItineraryState> itineraries;  // static plans, one per mic
    std::vector<ItineraryState> final_states; // after simulated events
    std::vector<NavigationEvent> events;
    std::vector<GpsFix> fixes;  // all mics, ordered by (mic, t)
    GroundTruth ground_truth;

    friend bool operator==(const SimOutput&, const SimOutput&) = default;
};

namespace gen_detail {

inline std::string zero_pad(std::size_t n, int width) {
    std::string s = std::to_string(n);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

inline const std::vector<std::string>& delegation_names() {
    static const std::vector<std::string> names = {
        "sousse",   "Hammamet", "Carthage", "Monastir", "Bizerte",  "Kairouan",
        "Tozeur",   "Djerba",   "Sfax",     "Nabeul",   "Mahdia",   "Gabes",
        "Tataouine", "Zaghouan", "Beja",     "Siliana"};
    return names;
}

inline std::string delegation_name(std::size_t i) {
    const auto& base = delegation_names();
    std::string name = base[i % base.size()];
    if (i >= base.size()) name += "-" + std::to_string(i / base.size() + 1);
    return name;
}

inline bool connected(std::size_t n, const std::vector<NetworkEdge>& edges) {
    if (n <= 1) return true;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue = {0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t u = queue.back();
        queue.pop_back();
        for (std::size_t v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                queue.push_back(v);
            }
    }
    return reached == n;
}

inline std::vector<std::vector<std::size_t>> adjacency(std::size_t n,
                                                       const std::vector<NetworkEdge>& edges) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& nbrs : adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return adj;
}

}  // namespace gen_detail

/// Deterministic world builder: the administrative hierarchy, the POI
/// gazetteer (all twelve kinds, placed inside delegations) and the section
/// graph. The same seed always yields the identical world.
inline World gen_world(const NetworkSpec& spec) {
    if (spec.n_delegations < 1) throw InvalidSpec("need at least one delegation");
    if (spec.n_pois_per_delegation < 1) throw InvalidSpec("need at least one poi per delegation");
    for (const auto& e : spec.edges) {
        if (e.a >= spec.n_delegations || e.b >= spec.n_delegations || e.a == e.b)
            throw InvalidSpec("edge endpoints out of range");
        if (!(e.length_m > 0)) throw InvalidSpec("edge lengths must be positive");
    }

    Rng master(spec.seed);
    Rng r_place = master.fork();
    Rng r_attrs = master.fork();
    Rng r_net = master.fork();

    World w;
    const std::size_t n = spec.n_delegations;

    // Delegation centers on a jittered grid; cells are far enough apart
    // that inter-delegation legs dominate any stop radius.
    const GeoPoint base{35.5, 9.5};
    const std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const double cell_deg = 0.06;  // ~6.6 km latitude
    for (std::size_t i = 0; i < n; ++i) {
        const auto grid_row = static_cast<double>(i / cols);
        const auto grid_col = static_cast<double>(i % cols);
        const double jlat = r_place.next_real(-0.008, 0.008);
        const double jlon = r_place.next_real(-0.008, 0.008);
        w.delegation_centers.push_back(GeoPoint{base.lat + grid_row * cell_deg + jlat,
                                                base.lon + grid_col * cell_deg + jlon});
        w.delegation_ids.push_back("del-" + gen_detail::zero_pad(i + 1, 3));
    }

    // Hierarchy: every three delegations share a regional government,
    // every six a country (at least one of each).
    const std::size_t n_rg = (n + 2) / 3;
    const std::size_t n_country = (n + 5) / 6;
    static const char* climates[] = {"arid", "semi-arid", "mediterranean", "temperate"};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t rg = i / 3;
        const std::size_t country = rg * n_country / n_rg;
        AdminPlace place;
        place.delegation.id = w.delegation_ids[i];
        place.delegation.name = gen_detail::delegation_name(i);
        place.delegation.surface_km2 = std::floor(r_attrs.next_real(50.0, 900.0));
        place.delegation.population = r_attrs.next_int(10000, 500000);
        place.delegation.climate = climates[r_attrs.next_int(0, 3)];
        place.regional_government.id = "rg-" + gen_detail::zero_pad(rg + 1, 3);
        place.regional_government.name = "governorate-" + gen_detail::zero_pad(rg + 1, 3);
        place.country.id = "country-" + gen_detail::zero_pad(country + 1, 2);
        place.country.name = country == 0 ? "Tunisia" : "country-" + std::to_string(country + 1);
        place.country.population = 1000000 * static_cast<std::int64_t>(country + 10);
        w.admin_places.push_back(std::move(place));
    }

    // POIs: kinds cycle with a per-delegation offset so all twelve kinds
    // appear; positions stay well inside the delegation cell.
    static const char* hotel_categories[] = {"hotel", "museum", "resort"};
    static const char* star_types[] = {"3stars", "4stars", "5stars"};
    static const char* activities[] = {"manufacturing", "services", "research", "trade"};
    std::size_t poi_counter = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < spec.n_pois_per_delegation; ++p) {
            PointOfInterest poi;
            poi.poi_id = "poi-" + gen_detail::zero_pad(++poi_counter, 5);
            poi.kind = static_cast<PoiKind>((i + p) % kPoiKindCount);
            poi.delegation_id = w.delegation_ids[i];
            const double angle = r_attrs.next_real(0.0, 2.0 * kPi);
            const double radius = r_attrs.next_real(0.0, 400.0);
            poi.pos = geo_offset(w.delegation_centers[i], angle, radius);
            const std::string place_name = gen_detail::delegation_name(i);
            poi.name = std::string(to_string(poi.kind)) + " " + place_name + " " +
                       std::to_string(p + 1);
            poi.attrs["location"] = place_name;
            if (is_natural(poi.kind)) {
                poi.attrs["surface"] = std::to_string(r_attrs.next_int(1, 500));
                poi.attrs["length"] = std::to_string(r_attrs.next_int(1, 200));
                poi.attrs["depth"] = std::to_string(r_attrs.next_int(1, 50));
            } else if (poi.kind == PoiKind::Touristic) {
                poi.attrs["category"] = hotel_categories[r_attrs.next_int(0, 2)];
                poi.attrs["type"] = star_types[r_attrs.next_int(0, 2)];
            } else {
                poi.attrs["activity"] = activities[r_attrs.next_int(0, 3)];
                poi.attrs["type"] = r_attrs.next_bool(0.5) ? "sme" : "large";
            }
            w.gazetteer.push_back(std::move(poi));
        }
    }

    // Section graph: as specified, or a ring plus random chords.
    if (!spec.edges.empty()) {
        if (!gen_detail::connected(n, spec.edges))
            throw InvalidSpec("section graph is not connected");
        w.network = spec.edges;
    } else if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            if (n == 2 && i == 1) break;  // avoid the duplicate 1-0 edge
            w.network.push_back(NetworkEdge{
                i, j, geo_distance(w.delegation_centers[i], w.delegation_centers[j])});
        }
        if (n >= 4) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!r_net.next_bool(0.3)) continue;
                const std::size_t j =
                    (i + 2 + static_cast<std::size_t>(r_net.next_int(
                                 0, static_cast<std::int64_t>(n) - 4))) % n;
                if (j == i) continue;
                w.network.push_back(NetworkEdge{
                    i, j, geo_distance(w.delegation_centers[i], w.delegation_centers[j])});
            }
        }
    }
    return w;
}

namespace gen_detail {

inline const std::vector<std::string>& first_names() {
    static const std::vector<std::string> names = {"Amira", "Karim", "Selma", "Mehdi",
                                                   "Rania", "Youssef", "Nour", "Sami"};
    return names;
}

inline const std::vector<std::string>& last_names() {
    static const std::vector<std::string> names = {"Trabelsi", "Haddad",   "Gharbi", "Mansouri",
                                                   "Chaabane", "Bouazizi", "Jebali", "Khelifi"};
    return names;
}

inline const std::vector<Id>& pois_of_delegation(
    std::map<Id, std::vector<Id>>& cache, const World& world, std::size_t delegation_index) {
    const Id& del = world.delegation_ids[delegation_index];
    auto it = cache.find(del);
    if (it != cache.end()) return it->second;
    std::vector<Id> ids;
    for (const auto& poi : world.gazetteer)
        if (poi.delegation_id == del) ids.push_back(poi.poi_id);
    return cache.emplace(del, std::move(ids)).first->second;
}

}  // namespace gen_detail

/// Simulates every collector's run over the world: dwell at each planned
/// destination, travel along the section graph, inject navigation events,
/// and record the exact ground truth for every emitted fix.
inline SimOutput gen_runs(const World& world, const GenParams& params) {
    if (params.n_mics < 1) throw InfeasibleParams("need at least one mic");
    if (params.stops_per_itinerary < 1) throw InfeasibleParams("need at least one stop");
    if (params.fix_period_s <= 0) throw InfeasibleParams("fix period must be positive");
    if (params.dwell_s < params.fix_period_s)
        throw InfeasibleParams("dwell shorter than one fix period");
    if (params.dwell_s < 300)
        throw InfeasibleParams("dwell must cover the default minimum stop dwell (300 s)");
    if (!(params.cruise_speed_mps > 0)) throw InfeasibleParams("cruise speed must be positive");
    if (params.noise_m < 0) throw InfeasibleParams("noise must be non-negative");
    if (params.event_rate < 0 || params.event_rate > 1)
        throw InfeasibleParams("event rate must be within [0, 1]");
    if (params.stops_per_itinerary > 1 && world.delegation_centers.size() < 2)
        throw InfeasibleParams("multi-stop itineraries need at least two delegations");

    const std::size_t n_delegations = world.delegation_centers.size();
    const auto adj = gen_detail::adjacency(n_delegations, world.network);
    const std::int64_t period = params.fix_period_s;
    const std::int64_t eff_dwell = (params.dwell_s / period) * period;

    std::map<Id, std::vector<Id>> poi_cache;
    std::map<Id, const PointOfInterest*> poi_by_id;
    std::map<Id, std::size_t> delegation_index;
    for (const auto& poi : world.gazetteer) poi_by_id.emplace(poi.poi_id, &poi);
    for (std::size_t i = 0; i < n_delegations; ++i)
        delegation_index.emplace(world.delegation_ids[i], i);

    SimOutput out;
    Rng master(params.seed);

    for (std::size_t m = 0; m < params.n_mics; ++m) {
        Rng rng = master.fork();
        const Id mic_id = "mic-" + gen_detail::zero_pad(m + 1, 3);

        // Collector and transport.
        Mic mic;
        mic.mic_id = mic_id;
        mic.first_name = gen_detail::first_names()[m % gen_detail::first_names().size()];
        mic.last_name = gen_detail::last_names()[(m / gen_detail::first_names().size() + m) %
                                                 gen_detail::last_names().size()];
        mic.pda_id = "pda-" + gen_detail::zero_pad(m + 1, 3);
        char key[17];
        std::snprintf(key, sizeof(key), "%016llx",
                      static_cast<unsigned long long>(rng.next_u64()));
        mic.auth_key = key;
        mic.auth_history.push_back(AuthAttempt{params.t0 - 60, true});
        mic.capability = Capability{static_cast<int>(rng.next_int(0, 100)),
                                    static_cast<int>(rng.next_int(0, 100)),
                                    static_cast<int>(rng.next_int(0, 100))};

        MeanOfTransport transport;
        transport.transport_id = "tr-" + gen_detail::zero_pad(m + 1, 3);
        static const char* colors[] = {"white", "blue", "red", "grey"};
        transport.color = colors[rng.next_int(0, 3)];
        transport.v_min_mps = params.cruise_speed_mps * rng.next_real(0.3, 0.45);
        transport.v_max_mps = params.cruise_speed_mps * rng.next_real(1.3, 1.5);

        // Walk over the section graph, one destination per delegation,
        // never returning straight to where we came from.
        std::vector<std::size_t> walk;
        std::size_t current = static_cast<std::size_t>(
            rng.next_int(0, static_cast<std::int64_t>(n_delegations) - 1));
        std::size_t previous = n_delegations;  // sentinel: none
        walk.push_back(current);
        for (std::size_t k = 1; k < params.stops_per_itinerary; ++k) {
            const auto& nbrs = adj[current];
            if (nbrs.empty()) throw InfeasibleParams("delegation with no section edges");
            std::vector<std::size_t> candidates;
            for (std::size_t v : nbrs)
                if (v != previous) candidates.push_back(v);
            if (candidates.empty()) candidates = nbrs;
            const std::size_t next =
                candidates[static_cast<std::size_t>(rng.next_int(
                    0, static_cast<std::int64_t>(candidates.size()) - 1))];
            previous = current;
            current = next;
            walk.push_back(current);
        }

        // Destinations at concrete POIs; alternates in neighbor
        // delegations that the plan does not touch around the same leg.
        std::vector<Destination> plan;
        std::vector<Destination> alternates;
        EquivalenceMap equivalences;
        auto pick_poi = [&](std::size_t delegation) -> const PointOfInterest* {
            const auto& ids = gen_detail::pois_of_delegation(poi_cache, world, delegation);
            const Id& id = ids[static_cast<std::size_t>(
                rng.next_int(0, static_cast<std::int64_t>(ids.size()) - 1))];
            return poi_by_id.at(id);
        };
        auto make_destination = [&](const Id& dest_id, const PointOfInterest& poi,
                                    TimeInterval window) {
            Destination d;
            d.destination_id = dest_id;
            d.delegation_id = poi.delegation_id;
            d.pos = poi.pos;
            d.planned_window = window;
            int task_no = 0;
            for (TaskKind kind : {TaskKind::Observe, TaskKind::Collect, TaskKind::Send})
                d.tasks.push_back(Task{dest_id + "-task" + std::to_string(++task_no), kind,
                                       dest_id, TaskStatus::Pending});
            return d;
        };

        // Nominal schedule for the planned windows.
        std::vector<const PointOfInterest*> plan_pois;
        for (std::size_t k = 0; k < walk.size(); ++k) plan_pois.push_back(pick_poi(walk[k]));
        std::int64_t t_nominal = params.t0;
        for (std::size_t k = 0; k < walk.size(); ++k) {
            const Id dest_id = mic_id + "-d" + std::to_string(k + 1);
            plan.push_back(make_destination(
                dest_id, *plan_pois[k], TimeInterval{t_nominal, t_nominal + eff_dwell}));
            t_nominal += eff_dwell;
            if (k + 1 < walk.size()) {
                const double dist = geo_distance(plan_pois[k]->pos, plan_pois[k + 1]->pos);
                const std::int64_t raw =
                    static_cast<std::int64_t>(std::ceil(dist / params.cruise_speed_mps));
                t_nominal += std::max<std::int64_t>(period, ((raw + period - 1) / period) * period);
            }
        }
        for (std::size_t k = 0; k < walk.size(); ++k) {
            // Candidate alternate delegations: neighbors of this leg's
            // delegation that the surrounding legs do not visit.
            std::set<std::size_t> excluded = {walk[k]};
            if (k > 0) excluded.insert(walk[k - 1]);
            if (k + 1 < walk.size()) excluded.insert(walk[k + 1]);
            std::vector<std::size_t> candidates;
            for (std::size_t v : adj[walk[k]])
                if (!excluded.count(v)) candidates.push_back(v);
            if (candidates.empty()) continue;
            const std::size_t alt_delegation = candidates[static_cast<std::size_t>(
                rng.next_int(0, static_cast<std::int64_t>(candidates.size()) - 1))];
            const Id alt_id = mic_id + "-d" + std::to_string(k + 1) + "-alt";
            alternates.push_back(
                make_destination(alt_id, *pick_poi(alt_delegation), TimeInterval{0, 0}));
            equivalences[plan[k].destination_id] = {alt_id};
        }

        ItineraryState initial = plan_static(mic_id, plan, equivalences, alternates);
        ItineraryState state = initial;

        // Simulate: dwell, advance, maybe an event, travel.
        MicGroundTruth truth;
        truth.mic_id = mic_id;
        truth.trajectory_id = static_cast<TrajectoryId>(m + 1);
        std::vector<Stop> true_stops;
        std::vector<Move> true_moves;
        std::vector<NavigationEvent> mic_events;
        std::int64_t t = params.t0;
        GeoPoint pos{};
        int event_counter = 0;

        auto emit_fix = [&](std::int64_t when, GeoPoint where, FixLabel label) {
            truth.fixes.push_back(GpsFix{mic_id, when, where});
            truth.labels.push_back(label);
        };

        for (;;) {
            const Destination current = *next_destination(state);

            // Dwell: jittered fixes on the fix grid across [t, t + eff_dwell].
            const std::size_t stop_ordinal = true_stops.size();
            const std::size_t first_fix = truth.fixes.size();
            for (std::int64_t tf = t; tf <= t + eff_dwell; tf += period) {
                GeoPoint p = current.pos;
                if (params.noise_m > 0) {
                    const double angle = rng.next_real(0.0, 2.0 * kPi);
                    const double radius = rng.next_real(0.0, params.noise_m);
                    p = geo_offset(p, angle, radius);
                }
                emit_fix(tf, p, FixLabel{true, stop_ordinal});
            }
            const std::size_t last_fix = truth.fixes.size() - 1;
            truth.stop_fix_ranges.emplace_back(first_fix, last_fix);
            Stop stop;
            stop.stop_id = "t" + std::to_string(truth.trajectory_id) + "-s" +
                           std::to_string(stop_ordinal);
            stop.interval = TimeInterval{t, t + eff_dwell};
            double lat = 0, lon = 0;
            for (std::size_t i = first_fix; i <= last_fix; ++i) {
                lat += truth.fixes[i].pos.lat;
                lon += truth.fixes[i].pos.lon;
            }
            const double nfix = static_cast<double>(last_fix - first_fix + 1);
            stop.centroid = GeoPoint{lat / nfix, lon / nfix};
            stop.kind = StopKind::Planned;
            stop.delegation_id = current.delegation_id;
            true_stops.push_back(std::move(stop));
            t += eff_dwell;
            pos = current.pos;

            std::set<Id> task_ids;
            for (const auto& task : state.destinations[state.cursor].tasks)
                task_ids.insert(task.task_id);
            state = advance_itinerary(state, task_ids);
            if (!next_destination(state)) break;

            // A navigation event may block the upcoming destination. An
            // event is withheld when its reroute/skip would land the
            // collector within kMinLegM of where it already sits; realized
            // legs stay above the stop-displacement floor.
            if (rng.next_bool(params.event_rate)) {
                static const char* kinds[] = {"breakdown", "bad weather", "road closed"};
                NavigationEvent ev;
                ev.event_id = mic_id + "-ev" + std::to_string(++event_counter);
                ev.kind = kinds[rng.next_int(0, 2)];
                ev.interval = TimeInterval{t, t + 600};
                ev.at_destination_id = next_destination(state)->destination_id;
                const ApplyEventResult applied = apply_event(state, ev);
                const auto after = next_destination(applied.state);
                if (!after || geo_distance(pos, after->pos) >= kMinLegM) {
                    state = applied.state;
                    mic_events.push_back(std::move(ev));
                    if (!after) break;  // final destination skipped
                }
            }

            // Travel to the (possibly substituted) next destination on the
            // fix grid; interior fixes belong to the move.
            const Destination target = *next_destination(state);
            const double dist = geo_distance(pos, target.pos);
            const std::int64_t raw =
                static_cast<std::int64_t>(std::ceil(dist / params.cruise_speed_mps));
            const std::int64_t leg =
                std::max<std::int64_t>(period, ((raw + period - 1) / period) * period);
            const std::size_t move_ordinal = true_moves.size();
            Move move;
            move.move_id =
                "t" + std::to_string(truth.trajectory_id) + "-m" + std::to_string(move_ordinal);
            for (std::int64_t tf = t + period; tf <= t + leg - period; tf += period) {
                const double frac =
                    static_cast<double>(tf - t) / static_cast<double>(leg);
                const GeoPoint p = geo_interpolate(pos, target.pos, frac);
                emit_fix(tf, p, FixLabel{false, move_ordinal});
                move.path.push_back(truth.fixes.back());
            }
            move.interval = move.path.empty()
                                ? TimeInterval{t, t + leg}
                                : TimeInterval{move.path.front().t, move.path.back().t};
            true_moves.push_back(std::move(move));
            t += leg;
        }

        truth.truth =
            true_moves.empty()
                ? make_degenerate_trajectory(truth.trajectory_id, mic_id, true_stops.front())
                : assemble_trajectory(truth.trajectory_id, mic_id, true_stops, true_moves);

        out.mics.push_back(std::move(mic));
        out.transports.push_back(std::move(transport));
        out.itineraries.push_back(std::move(initial));
        out.final_states.push_back(std::move(state));
        for (auto& ev : mic_events) out.events.push_back(std::move(ev));
        for (const auto& fix : truth.fixes) out.fixes.push_back(fix);
        out.ground_truth.per_mic.push_back(std::move(truth));
    }
    return out;
}

}  // namespace tdw
