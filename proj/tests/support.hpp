#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles
// here recompute results by brute force and must stay decoupled from the
// library code paths they check.

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "tdw/tdw.hpp"

namespace tdw::test {

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("tdw-test-" + tag + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

// --- segmentation oracle -----------------------------------------------------
//
// O(n^2) window enumeration: for every anchor, every candidate window is
// re-checked against the radius predicate from scratch; a window becomes a
// stop when it also spans the minimum dwell. Greedy left-to-right, same
// tie-break (distance exactly eps is inside).

inline std::vector<std::pair<std::size_t, std::size_t>> oracle_stop_runs(
    std::span<const GpsFix> fixes, const SegmentationParams& params) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t i = 0;
    const std::size_t n = fixes.size();
    while (i < n) {
        std::ptrdiff_t best = -1;
        for (std::size_t j = i; j < n; ++j) {
            bool all_inside = true;
            for (std::size_t k = i; k <= j; ++k)
                if (geo_distance(fixes[i].pos, fixes[k].pos) > params.eps_m) all_inside = false;
            if (all_inside) best = static_cast<std::ptrdiff_t>(j);
        }
        if (best >= 0 && fixes[static_cast<std::size_t>(best)].t - fixes[i].t >= params.tau_min_s) {
            runs.emplace_back(i, static_cast<std::size_t>(best));
            i = static_cast<std::size_t>(best) + 1;
        } else {
            ++i;
        }
    }
    return runs;
}

/// Ownership of every input fix, recovered from a segmented trajectory:
/// (is_stop, ordinal) per fix. Move ownership comes from the stored paths;
/// everything else must land in exactly one stop interval.
inline std::vector<FixLabel> fix_partition(const Trajectory& traj,
                                           std::span<const GpsFix> fixes) {
    std::vector<FixLabel> labels(fixes.size(), FixLabel{false, static_cast<std::size_t>(-1)});
    std::vector<bool> owned(fixes.size(), false);
    auto index_of = [&fixes](std::int64_t t) -> std::size_t {
        for (std::size_t i = 0; i < fixes.size(); ++i)
            if (fixes[i].t == t) return i;
        throw Error("fix timestamp not found: " + std::to_string(t));
    };
    for (std::size_t m = 0; m < traj.moves.size(); ++m) {
        for (const auto& fix : traj.moves[m].path) {
            const std::size_t i = index_of(fix.t);
            if (owned[i]) throw Error("fix owned twice");
            owned[i] = true;
            labels[i] = FixLabel{false, m};
        }
    }
    for (std::size_t s = 0; s < traj.stops.size(); ++s) {
        const TimeInterval& iv = traj.stops[s].interval;
        for (std::size_t i = 0; i < fixes.size(); ++i) {
            if (fixes[i].t < iv.t_begin || fixes[i].t > iv.t_end || owned[i]) continue;
            owned[i] = true;
            labels[i] = FixLabel{true, s};
        }
    }
    for (std::size_t i = 0; i < fixes.size(); ++i)
        if (!owned[i]) throw Error("fix " + std::to_string(i) + " not owned by any stop or move");
    return labels;
}

// --- random end-to-end fixtures -------------------------------------------------

struct RandomFixture {
    World world;
    SimOutput sim;
    ObjectGraph graph;
    WarehouseBundle bundle;
    SegmentationParams params;
};

/// A small simulated world run through segment + enrich + load; the
/// substrate for engine/oracle equivalence and integrity properties.
inline RandomFixture make_random_fixture(std::uint64_t seed, std::size_t n_mics = 2,
                                         std::size_t stops = 3, double noise_m = 10.0,
                                         double event_rate = 0.2) {
    RandomFixture fx;
    NetworkSpec spec;
    spec.seed = seed;
    spec.n_delegations = 5;
    spec.n_pois_per_delegation = 5;
    fx.world = gen_world(spec);

    GenParams params;
    params.seed = seed ^ 0x9e3779b9;
    params.n_mics = n_mics;
    params.stops_per_itinerary = stops;
    params.dwell_s = 360;
    params.fix_period_s = 60;
    params.cruise_speed_mps = 15.0;
    params.noise_m = noise_m;
    params.event_rate = event_rate;
    fx.sim = gen_runs(fx.world, params);

    fx.params = SegmentationParams{50.0, 300, 200.0};
    for (std::size_t m = 0; m < fx.sim.ground_truth.per_mic.size(); ++m) {
        const auto& mic = fx.sim.ground_truth.per_mic[m];
        Trajectory traj =
            segment(mic.fixes, fx.params, static_cast<TrajectoryId>(m + 1), nullptr);
        traj = enrich_trajectory(traj, fx.sim.itineraries[m], fx.sim.events, fx.world.gazetteer,
                                 fx.params);
        fx.graph.trajectories.push_back(std::move(traj));
    }
    fx.graph.mics = fx.sim.mics;
    fx.graph.gazetteer = fx.world.gazetteer;
    fx.graph.admin_places = fx.world.admin_places;
    fx.bundle = load(fx.graph.trajectories, fx.graph.mics, fx.graph.gazetteer,
                     fx.graph.admin_places);
    return fx;
}

// --- the curated analysis fixture ------------------------------------------------
//
// Hand-built world reproducing the reference analytical questions:
//   country "Tunisia" (plus "Algeria" to exercise country filters),
//   delegations sousse / Hammamet / Carthage / Bizerte / Annaba.
// POI placements:
//   trajectory  7: 11 touristic companies + a sea at Carthage
//   trajectory 20: the lake "Ichkeul" near Bizerte
//   trajectory 34: hotel+sea at Hammamet, resort at sousse, hotel at
//                  Annaba (Algeria; country filter must drop it)
//   trajectory 50: a sea only (conjunction filter must drop it)
//   trajectory 60: exactly 10 touristic companies (strict > must drop it)
//   agriculture: 3 at sousse, 1 at Hammamet; industrial: 2 sousse,
//   1 Hammamet, 1 Annaba.

inline ObjectGraph make_analysis_graph() {
    ObjectGraph g;

    auto admin = [](const Id& did, const std::string& dname, const Id& rgid,
                    const std::string& rgname, const Id& cid, const std::string& cname,
                    std::int64_t cpop) {
        AdminPlace a;
        a.delegation = {did, dname, 50.0, 100000, "mediterranean"};
        a.regional_government = {rgid, rgname};
        a.country = {cid, cname, cpop};
        return a;
    };
    g.admin_places = {
        admin("del-sousse", "sousse", "rg-sousse", "Sousse Governorate", "c-tn", "Tunisia",
              11818619),
        admin("del-hammamet", "Hammamet", "rg-nabeul", "Nabeul Governorate", "c-tn", "Tunisia",
              11818619),
        admin("del-carthage", "Carthage", "rg-tunis", "Tunis Governorate", "c-tn", "Tunisia",
              11818619),
        admin("del-bizerte", "Bizerte", "rg-bizerte", "Bizerte Governorate", "c-tn", "Tunisia",
              11818619),
        admin("del-annaba", "Annaba", "rg-annaba", "Annaba Province", "c-dz", "Algeria",
              44700000),
    };

    const GeoPoint hammamet{36.4000, 10.6160};
    const GeoPoint sousse{35.8256, 10.6367};
    const GeoPoint carthage{36.8528, 10.3233};
    const GeoPoint bizerte{37.1600, 9.6800};
    const GeoPoint annaba{36.9000, 7.7667};

    auto poi = [&g](const Id& id, PoiKind kind, const std::string& name, GeoPoint pos,
                    const Id& delegation, std::map<std::string, std::string> attrs) {
        g.gazetteer.push_back(PointOfInterest{id, kind, name, pos, delegation, std::move(attrs)});
    };

    // Touristic companies (subtype keys follow this order).
    poi("poi-h1", PoiKind::Touristic, "Hotel Azur Royal", hammamet, "del-hammamet",
        {{"category", "hotel"}, {"type", "5stars"}, {"location", "Hammamet"}});
    poi("poi-h2", PoiKind::Touristic, "Hotel Palm Beach", hammamet, "del-hammamet",
        {{"category", "hotel"}, {"type", "5stars"}, {"location", "Hammamet"}});
    poi("poi-mus", PoiKind::Touristic, "Medina Museum", hammamet, "del-hammamet",
        {{"category", "museum"}, {"type", "gallery"}, {"location", "Hammamet"}});
    poi("poi-smr", PoiKind::Touristic, "Sousse Marina Resort", sousse, "del-sousse",
        {{"category", "hotel"}, {"type", "5stars"}, {"location", "sousse"}});
    for (int i = 1; i <= 11; ++i)
        poi("poi-c" + std::string(i < 10 ? "0" : "") + std::to_string(i), PoiKind::Touristic,
            "Carthage Lodge " + std::to_string(i), carthage, "del-carthage",
            {{"category", i % 2 ? "hotel" : "museum"},
             {"type", i % 2 ? "3stars" : "gallery"},
             {"location", "Carthage"}});
    for (int i = 1; i <= 10; ++i)
        poi("poi-s" + std::string(i < 10 ? "0" : "") + std::to_string(i), PoiKind::Touristic,
            "Sousse Pension " + std::to_string(i), sousse, "del-sousse",
            {{"category", "hotel"}, {"type", "3stars"}, {"location", "sousse"}});
    poi("poi-alg", PoiKind::Touristic, "Hotel Saint Cloud", annaba, "del-annaba",
        {{"category", "hotel"}, {"type", "5stars"}, {"location", "Annaba"}});

    // Natural features.
    poi("poi-lake", PoiKind::Lake, "Lake Ichkeul", bizerte, "del-bizerte",
        {{"location", "Ichkeul"}, {"surface", "89"}, {"depth", "3"}});
    poi("poi-sea1", PoiKind::Sea, "Gulf of Hammamet", hammamet, "del-hammamet",
        {{"location", "Hammamet"}});
    poi("poi-sea2", PoiKind::Sea, "Gulf of Tunis", carthage, "del-carthage",
        {{"location", "Carthage"}});
    poi("poi-sea3", PoiKind::Sea, "Sousse Shoreline", sousse, "del-sousse",
        {{"location", "sousse"}});

    // Agriculture and industrial companies for the counting queries.
    for (int i = 1; i <= 3; ++i)
        poi("poi-ag" + std::to_string(i), PoiKind::Agricultural,
            "Olive Grove " + std::to_string(i), sousse, "del-sousse",
            {{"activity", "olives"}, {"location", "sousse"}});
    poi("poi-ag4", PoiKind::Agricultural, "Citrus Farm", hammamet, "del-hammamet",
        {{"activity", "citrus"}, {"location", "Hammamet"}});
    poi("poi-ind1", PoiKind::Industrial, "Sousse Textile Works", sousse, "del-sousse",
        {{"activity", "textile"}, {"location", "sousse"}});
    poi("poi-ind2", PoiKind::Industrial, "Sousse Cannery", sousse, "del-sousse",
        {{"activity", "food"}, {"location", "sousse"}});
    poi("poi-ind3", PoiKind::Industrial, "Hammamet Ceramics", hammamet, "del-hammamet",
        {{"activity", "ceramics"}, {"location", "Hammamet"}});
    poi("poi-ind4", PoiKind::Industrial, "Annaba Steel", annaba, "del-annaba",
        {{"activity", "steel"}, {"location", "Annaba"}});

    g.mics.push_back(Mic{"mic-a", "Selma", "Trabelsi", "k1", {}, {}, "pda-a"});
    g.mics.push_back(Mic{"mic-b", "Karim", "Gharbi", "k2", {}, {}, "pda-b"});

    const std::int64_t t0 = utc_from_civil({2009, 7, 15, 8, 0, 0});
    auto simple_trajectory = [](TrajectoryId id, const Id& mic, std::int64_t t0,
                                std::vector<std::pair<GeoPoint, std::vector<Id>>> dwells) {
        std::vector<Stop> stops;
        std::vector<Move> moves;
        std::int64_t t = t0;
        for (std::size_t i = 0; i < dwells.size(); ++i) {
            Stop s;
            s.stop_id = "f" + std::to_string(id) + "-s" + std::to_string(i);
            s.interval = {t, t + 600};
            s.centroid = dwells[i].first;
            s.kind = StopKind::Planned;
            s.delegation_id = "";
            s.nearby_poi_ids = dwells[i].second;
            std::sort(s.nearby_poi_ids.begin(), s.nearby_poi_ids.end());
            stops.push_back(std::move(s));
            t += 600;
            if (i + 1 < dwells.size()) {
                Move m;
                m.move_id = "f" + std::to_string(id) + "-m" + std::to_string(i);
                m.interval = {t + 60, t + 540};
                moves.push_back(std::move(m));
                t += 600;
            }
        }
        return assemble_trajectory(id, mic, std::move(stops), std::move(moves));
    };

    std::vector<Id> eleven, ten;
    for (int i = 1; i <= 11; ++i)
        eleven.push_back("poi-c" + std::string(i < 10 ? "0" : "") + std::to_string(i));
    for (int i = 1; i <= 10; ++i)
        ten.push_back("poi-s" + std::string(i < 10 ? "0" : "") + std::to_string(i));

    auto with_delegations = [&g](Trajectory traj, std::vector<Id> delegations) {
        std::vector<Stop> stops = traj.stops;
        for (std::size_t i = 0; i < stops.size(); ++i) stops[i].delegation_id = delegations[i];
        if (traj.moves.empty())
            return make_degenerate_trajectory(traj.trajectory_id, traj.mic_id, stops[0]);
        return assemble_trajectory(traj.trajectory_id, traj.mic_id, std::move(stops), traj.moves);
    };

    g.trajectories.push_back(with_delegations(
        simple_trajectory(7, "mic-a", t0,
                          {{carthage, [&] {
                                auto ids = eleven;
                                ids.push_back("poi-sea2");
                                return ids;
                            }()},
                           {carthage, {}}}),
        {"del-carthage", "del-carthage"}));
    g.trajectories.push_back(with_delegations(
        simple_trajectory(20, "mic-a", t0 + 86400, {{bizerte, {"poi-lake"}}, {bizerte, {}}}),
        {"del-bizerte", "del-bizerte"}));
    g.trajectories.push_back(with_delegations(
        simple_trajectory(34, "mic-b", t0 + 2 * 86400,
                          {{hammamet, {"poi-h1", "poi-sea1"}},
                           {annaba, {"poi-alg"}},
                           {sousse, {"poi-smr"}}}),
        {"del-hammamet", "del-annaba", "del-sousse"}));
    g.trajectories.push_back(with_delegations(
        simple_trajectory(50, "mic-b", t0 + 3 * 86400, {{sousse, {"poi-sea3"}}, {sousse, {}}}),
        {"del-sousse", "del-sousse"}));
    g.trajectories.push_back(with_delegations(
        simple_trajectory(60, "mic-b", t0 + 4 * 86400, {{sousse, ten}, {sousse, {}}}),
        {"del-sousse", "del-sousse"}));
    return g;
}

inline std::string query_result_csv(const QueryResult& res) {
    csv::Table t;
    for (const auto& col : res.columns) t.header.push_back(col.name);
    const QueryResult sorted = canonical_sorted(res);
    for (const auto& row : sorted.rows) {
        std::vector<std::string> cells;
        for (const auto& cell : row) cells.push_back(to_string(cell));
        t.rows.push_back(std::move(cells));
    }
    return csv::to_string(t);
}

inline std::string rollup_csv(const RollupResult& res) {
    csv::Table t;
    t.header = res.levels;
    t.header.push_back("count");
    for (const auto& gr : res.groups) {
        std::vector<std::string> cells = gr.keys;
        cells.push_back(std::to_string(gr.count));
        t.rows.push_back(std::move(cells));
    }
    std::vector<std::string> total(res.levels.size(), "(all)");
    total.push_back(std::to_string(res.grand_total));
    t.rows.push_back(std::move(total));
    return csv::to_string(t);
}

}  // namespace tdw::test
