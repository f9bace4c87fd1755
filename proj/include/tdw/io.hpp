#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/csv.hpp"
#include "tdw/itinerary.hpp"
#include "tdw/model.hpp"
#include "tdw/trajgen.hpp"

namespace tdw::io {

using csv::format_double;
using csv::format_int;
using csv::parse_double;
using csv::parse_int;

// --- fixes -------------------------------------------------------------------

inline void write_fixes_csv(const std::filesystem::path& path, std::span<const GpsFix> fixes) {
    csv::Table t;
    t.header = {"mic_id", "t_utc_s", "lat_deg", "lon_deg"};
    for (const auto& f : fixes)
        t.rows.push_back(
            {f.mic_id, format_int(f.t), format_double(f.pos.lat), format_double(f.pos.lon)});
    csv::write_file(path, csv::to_string(t));
}

inline std::vector<GpsFix> read_fixes_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_table(path);
    const auto mic = t.column("mic_id"), ts = t.column("t_utc_s");
    const auto lat = t.column("lat_deg"), lon = t.column("lon_deg");
    std::vector<GpsFix> fixes;
    for (const auto& r : t.rows)
        fixes.push_back(
            GpsFix{r[mic], parse_int(r[ts]), GeoPoint{parse_double(r[lat]), parse_double(r[lon])}});
    return fixes;
}

// --- gazetteer -----------------------------------------------------------------

inline std::string pack_attrs(const std::map<std::string, std::string>& attrs) {
    std::vector<std::string> parts;
    for (const auto& [k, v] : attrs) parts.push_back(k + "=" + v);
    return join(parts, ';');
}

inline std::map<std::string, std::string> unpack_attrs(const std::string& packed) {
    std::map<std::string, std::string> attrs;
    if (trim(packed).empty()) return attrs;
    for (const auto& part : split(packed, ';')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw csv::ParseError("bad attr (expected key=value): " + part);
        attrs[part.substr(0, eq)] = part.substr(eq + 1);
    }
    return attrs;
}

inline void write_gazetteer_csv(const std::filesystem::path& path,
                                std::span<const PointOfInterest> gazetteer) {
    csv::Table t;
    t.header = {"poi_id", "kind", "name", "lat_deg", "lon_deg", "delegation_id", "attrs"};
    for (const auto& p : gazetteer)
        t.rows.push_back({p.poi_id, to_string(p.kind), p.name, format_double(p.pos.lat),
                          format_double(p.pos.lon), p.delegation_id, pack_attrs(p.attrs)});
    csv::write_file(path, csv::to_string(t));
}

inline std::vector<PointOfInterest> read_gazetteer_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_table(path);
    const auto id = t.column("poi_id"), kind = t.column("kind"), name = t.column("name");
    const auto lat = t.column("lat_deg"), lon = t.column("lon_deg");
    const auto del = t.column("delegation_id"), attrs = t.column("attrs");
    std::vector<PointOfInterest> out;
    for (const auto& r : t.rows) {
        PointOfInterest p;
        p.poi_id = r[id];
        const auto k = parse_poi_kind(r[kind]);
        if (!k) throw csv::ParseError("unknown poi kind: " + r[kind]);
        p.kind = *k;
        p.name = r[name];
        p.pos = GeoPoint{parse_double(r[lat]), parse_double(r[lon])};
        p.delegation_id = r[del];
        p.attrs = unpack_attrs(r[attrs]);
        out.push_back(std::move(p));
    }
    return out;
}

// --- administrative places ------------------------------------------------------

inline void write_admin_csv(const std::filesystem::path& path,
                            std::span<const AdminPlace> places) {
    csv::Table t;
    t.header = {"delegation_id", "delegation_name", "surface_km2",  "population",
                "climate",       "regional_government_id", "rg_name", "country_id",
                "country_name",  "country_population"};
    for (const auto& a : places)
        t.rows.push_back({a.delegation.id, a.delegation.name, format_double(a.delegation.surface_km2),
                          format_int(a.delegation.population), a.delegation.climate,
                          a.regional_government.id, a.regional_government.name, a.country.id,
                          a.country.name, format_int(a.country.population)});
    csv::write_file(path, csv::to_string(t));
}

inline std::vector<AdminPlace> read_admin_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_table(path);
    std::vector<AdminPlace> out;
    for (const auto& r : t.rows) {
        AdminPlace a;
        a.delegation.id = r[t.column("delegation_id")];
        a.delegation.name = r[t.column("delegation_name")];
        a.delegation.surface_km2 = parse_double(r[t.column("surface_km2")]);
        a.delegation.population = parse_int(r[t.column("population")]);
        a.delegation.climate = r[t.column("climate")];
        a.regional_government.id = r[t.column("regional_government_id")];
        a.regional_government.name = r[t.column("rg_name")];
        a.country.id = r[t.column("country_id")];
        a.country.name = r[t.column("country_name")];
        a.country.population = parse_int(r[t.column("country_population")]);
        out.push_back(std::move(a));
    }
    return out;
}

// --- collectors ------------------------------------------------------------------

inline void write_mics_csv(const std::filesystem::path& path, std::span<const Mic> mics,
                           std::span<const MeanOfTransport> transports) {
    csv::Table t;
    t.header = {"mic_id", "first_name", "last_name", "pda_id",
                "transport_id", "transport_color", "v_min_mps", "v_max_mps"};
    for (std::size_t i = 0; i < mics.size(); ++i) {
        const MeanOfTransport& tr = transports[i];
        t.rows.push_back({mics[i].mic_id, mics[i].first_name, mics[i].last_name, mics[i].pda_id,
                          tr.transport_id, tr.color, format_double(tr.v_min_mps),
                          format_double(tr.v_max_mps)});
    }
    csv::write_file(path, csv::to_string(t));
}

inline std::pair<std::vector<Mic>, std::vector<MeanOfTransport>> read_mics_csv(
    const std::filesystem::path& path) {
    const csv::Table t = csv::read_table(path);
    std::vector<Mic> mics;
    std::vector<MeanOfTransport> transports;
    for (const auto& r : t.rows) {
        Mic m;
        m.mic_id = r[t.column("mic_id")];
        m.first_name = r[t.column("first_name")];
        m.last_name = r[t.column("last_name")];
        m.pda_id = r[t.column("pda_id")];
        mics.push_back(std::move(m));
        transports.push_back(MeanOfTransport{r[t.column("transport_id")],
                                             r[t.column("transport_color")],
                                             parse_double(r[t.column("v_min_mps")]),
                                             parse_double(r[t.column("v_max_mps")])});
    }
    return {std::move(mics), std::move(transports)};
}

// --- itineraries -------------------------------------------------------------------
//
// One row per destination. Planned destinations carry their window;
// alternates (reroute targets outside the static plan) leave both window
// fields empty. equivalent_ids is pipe-separated.

inline void write_itinerary_csv(const std::filesystem::path& path,
                                std::span<const ItineraryState> itineraries) {
    csv::Table t;
    t.header = {"mic_id", "destination_id", "delegation_id", "lat_deg", "lon_deg",
                "window_begin_s", "window_end_s", "equivalent_ids"};
    for (const auto& st : itineraries) {
        auto emit = [&t, &st](const Destination& d, bool planned) {
            std::vector<std::string> equivalents;
            if (auto it = st.equivalences.find(d.destination_id); it != st.equivalences.end())
                equivalents = it->second;
            t.rows.push_back({st.mic_id, d.destination_id, d.delegation_id,
                              format_double(d.pos.lat), format_double(d.pos.lon),
                              planned ? format_int(d.planned_window.t_begin) : std::string(),
                              planned ? format_int(d.planned_window.t_end) : std::string(),
                              join(equivalents, '|')});
        };
        for (const auto& d : st.destinations) emit(d, true);
        for (const auto& [id, d] : st.alternates) emit(d, false);
    }
    csv::write_file(path, csv::to_string(t));
}

inline std::vector<ItineraryState> read_itinerary_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_table(path);
    const auto mic = t.column("mic_id"), dest = t.column("destination_id");
    const auto del = t.column("delegation_id"), lat = t.column("lat_deg"),
               lon = t.column("lon_deg");
    const auto wb = t.column("window_begin_s"), we = t.column("window_end_s");
    const auto eq = t.column("equivalent_ids");

    std::vector<Id> mic_order;
    std::map<Id, std::vector<Destination>> plans;
    std::map<Id, std::vector<Destination>> alternates;
    std::map<Id, EquivalenceMap> equivalences;
    for (const auto& r : t.rows) {
        const Id& mic_id = r[mic];
        if (!plans.count(mic_id)) {
            mic_order.push_back(mic_id);
            plans[mic_id];
            alternates[mic_id];
            equivalences[mic_id];
        }
        Destination d;
        d.destination_id = r[dest];
        d.delegation_id = r[del];
        d.pos = GeoPoint{parse_double(r[lat]), parse_double(r[lon])};
        const bool planned = !trim(r[wb]).empty() || !trim(r[we]).empty();
        if (planned) d.planned_window = TimeInterval{parse_int(r[wb]), parse_int(r[we])};
        int task_no = 0;
        for (TaskKind kind : {TaskKind::Observe, TaskKind::Collect, TaskKind::Send})
            d.tasks.push_back(Task{d.destination_id + "-task" + std::to_string(++task_no), kind,
                                   d.destination_id, TaskStatus::Pending});
        if (!trim(r[eq]).empty())
            equivalences[mic_id][d.destination_id] = split(r[eq], '|');
        (planned ? plans : alternates)[mic_id].push_back(std::move(d));
    }
    std::vector<ItineraryState> out;
    for (const auto& mic_id : mic_order)
        out.push_back(plan_static(mic_id, plans[mic_id], equivalences[mic_id],
                                  alternates[mic_id]));
    return out;
}

// --- navigation events ----------------------------------------------------------

inline void write_events_csv(const std::filesystem::path& path,
                             std::span<const NavigationEvent> events) {
    csv::Table t;
    t.header = {"event_id", "kind", "begin_s", "end_s", "at_destination_id"};
    for (const auto& e : events)
        t.rows.push_back({e.event_id, e.kind, format_int(e.interval.t_begin),
                          format_int(e.interval.t_end),
                          e.at_destination_id ? *e.at_destination_id : std::string()});
    csv::write_file(path, csv::to_string(t));
}

inline std::vector<NavigationEvent> read_events_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_table(path);
    std::vector<NavigationEvent> out;
    for (const auto& r : t.rows) {
        NavigationEvent e;
        e.event_id = r[t.column("event_id")];
        e.kind = r[t.column("kind")];
        e.interval = TimeInterval{parse_int(r[t.column("begin_s")]),
                                  parse_int(r[t.column("end_s")])};
        const std::string& at = r[t.column("at_destination_id")];
        if (!trim(at).empty()) e.at_destination_id = at;
        out.push_back(std::move(e));
    }
    return out;
}

// --- ground truth ---------------------------------------------------------------

inline void write_ground_truth_csv(const std::filesystem::path& path, const GroundTruth& gt) {
    csv::Table t;
    t.header = {"mic_id", "fix_index", "t_utc_s", "label", "ordinal"};
    for (const auto& mic : gt.per_mic)
        for (std::size_t i = 0; i < mic.fixes.size(); ++i)
            t.rows.push_back({mic.mic_id, format_int(static_cast<std::int64_t>(i)),
                              format_int(mic.fixes[i].t),
                              mic.labels[i].is_stop ? "stop" : "move",
                              format_int(static_cast<std::int64_t>(mic.labels[i].ordinal))});
    csv::write_file(path, csv::to_string(t));
}

/// Everything `simulate` emits, in the pipeline's input formats.
inline void write_sim_dir(const std::filesystem::path& dir, const World& world,
                          const SimOutput& sim) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw csv::IoFailure("cannot create " + dir.string() + ": " + ec.message());
    write_fixes_csv(dir / "fixes.csv", sim.fixes);
    write_gazetteer_csv(dir / "gazetteer.csv", world.gazetteer);
    write_admin_csv(dir / "admin.csv", world.admin_places);
    write_mics_csv(dir / "mics.csv", sim.mics, sim.transports);
    write_itinerary_csv(dir / "itinerary.csv", sim.itineraries);
    write_events_csv(dir / "events.csv", sim.events);
    write_ground_truth_csv(dir / "ground_truth.csv", sim.ground_truth);
}

// --- trajectory files -------------------------------------------------------------
//
// The hand-off format between `segment` and `load`: one directory holding
// trajectories.csv, stops.csv, moves.csv, move_paths.csv and sections.csv.

inline void write_trajectory_dir(const std::filesystem::path& dir,
                                 std::span<const Trajectory> trajectories) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw csv::IoFailure("cannot create " + dir.string() + ": " + ec.message());

    csv::Table trajs, stops, moves, paths, sections;
    trajs.header = {"trajectory_id", "mic_id", "t_begin_s", "t_end_s"};
    stops.header = {"trajectory_id", "stop_id", "t_begin_s", "t_end_s", "lat_deg",
                    "lon_deg", "kind", "delegation_id", "synthetic", "nearby_poi_ids"};
    moves.header = {"trajectory_id", "move_id", "t_begin_s", "t_end_s"};
    paths.header = {"move_id", "t_utc_s", "lat_deg", "lon_deg"};
    sections.header = {"trajectory_id", "section_id", "from_stop_id", "move_id", "to_stop_id",
                       "t_begin_s", "t_end_s"};
    for (const auto& traj : trajectories) {
        const std::string tid = format_int(traj.trajectory_id);
        trajs.rows.push_back(
            {tid, traj.mic_id, format_int(traj.interval.t_begin), format_int(traj.interval.t_end)});
        for (const auto& s : traj.stops)
            stops.rows.push_back({tid, s.stop_id, format_int(s.interval.t_begin),
                                  format_int(s.interval.t_end), format_double(s.centroid.lat),
                                  format_double(s.centroid.lon), to_string(s.kind),
                                  s.delegation_id, s.synthetic ? "1" : "0",
                                  join(s.nearby_poi_ids, '|')});
        for (const auto& m : traj.moves) {
            moves.rows.push_back({tid, m.move_id, format_int(m.interval.t_begin),
                                  format_int(m.interval.t_end)});
            for (const auto& f : m.path)
                paths.rows.push_back({m.move_id, format_int(f.t), format_double(f.pos.lat),
                                      format_double(f.pos.lon)});
        }
        for (const auto& x : traj.sections)
            sections.rows.push_back({tid, x.section_id, x.from_stop.stop_id, x.move.move_id,
                                     x.to_stop.stop_id, format_int(x.interval.t_begin),
                                     format_int(x.interval.t_end)});
    }
    csv::write_file(dir / "trajectories.csv", csv::to_string(trajs));
    csv::write_file(dir / "stops.csv", csv::to_string(stops));
    csv::write_file(dir / "moves.csv", csv::to_string(moves));
    csv::write_file(dir / "move_paths.csv", csv::to_string(paths));
    csv::write_file(dir / "sections.csv", csv::to_string(sections));
}

inline std::vector<Trajectory> read_trajectory_dir(const std::filesystem::path& dir) {
    const csv::Table trajs = csv::read_table(dir / "trajectories.csv");
    const csv::Table stops = csv::read_table(dir / "stops.csv");
    const csv::Table moves = csv::read_table(dir / "moves.csv");
    const csv::Table paths = csv::read_table(dir / "move_paths.csv");
    const csv::Table sections = csv::read_table(dir / "sections.csv");

    std::map<std::string, std::vector<GpsFix>> path_by_move;
    {
        const auto mid = paths.column("move_id"), ts = paths.column("t_utc_s");
        const auto lat = paths.column("lat_deg"), lon = paths.column("lon_deg");
        for (const auto& r : paths.rows)
            path_by_move[r[mid]].push_back(GpsFix{
                "", parse_int(r[ts]), GeoPoint{parse_double(r[lat]), parse_double(r[lon])}});
    }

    std::map<std::string, std::vector<Stop>> stops_by_traj;
    {
        const auto tid = stops.column("trajectory_id"), sid = stops.column("stop_id");
        const auto tb = stops.column("t_begin_s"), te = stops.column("t_end_s");
        const auto lat = stops.column("lat_deg"), lon = stops.column("lon_deg");
        const auto kind = stops.column("kind"), del = stops.column("delegation_id");
        const auto syn = stops.column("synthetic"), near = stops.column("nearby_poi_ids");
        for (const auto& r : stops.rows) {
            Stop s;
            s.stop_id = r[sid];
            s.interval = TimeInterval{parse_int(r[tb]), parse_int(r[te])};
            s.centroid = GeoPoint{parse_double(r[lat]), parse_double(r[lon])};
            const auto k = parse_stop_kind(r[kind]);
            if (!k) throw csv::ParseError("unknown stop kind: " + r[kind]);
            s.kind = *k;
            s.delegation_id = r[del];
            s.synthetic = r[syn] == "1";
            if (!trim(r[near]).empty()) s.nearby_poi_ids = split(r[near], '|');
            stops_by_traj[r[tid]].push_back(std::move(s));
        }
    }
    std::map<std::string, std::vector<Move>> moves_by_traj;
    {
        const auto tid = moves.column("trajectory_id"), mid = moves.column("move_id");
        const auto tb = moves.column("t_begin_s"), te = moves.column("t_end_s");
        for (const auto& r : moves.rows) {
            Move m;
            m.move_id = r[mid];
            m.interval = TimeInterval{parse_int(r[tb]), parse_int(r[te])};
            if (auto it = path_by_move.find(m.move_id); it != path_by_move.end())
                m.path = it->second;
            moves_by_traj[r[tid]].push_back(std::move(m));
        }
    }
    // sections.csv is derivable; a count check guards against truncation.
    std::map<std::string, std::size_t> section_count;
    {
        const auto tid = sections.column("trajectory_id");
        for (const auto& r : sections.rows) ++section_count[r[tid]];
    }

    std::vector<Trajectory> out;
    const auto tid = trajs.column("trajectory_id"), mic = trajs.column("mic_id");
    for (const auto& r : trajs.rows) {
        const TrajectoryId id = parse_int(r[tid]);
        const Id& mic_id = r[mic];
        auto traj_stops = stops_by_traj[r[tid]];
        auto traj_moves = moves_by_traj[r[tid]];
        if (traj_stops.empty())
            throw csv::ParseError("trajectory " + r[tid] + " has no stops");
        for (auto& m : traj_moves)
            for (auto& f : m.path) f.mic_id = mic_id;
        if (section_count[r[tid]] != traj_moves.size())
            throw csv::ParseError("trajectory " + r[tid] + " section/move count mismatch");
        out.push_back(traj_moves.empty()
                          ? make_degenerate_trajectory(id, mic_id, std::move(traj_stops[0]))
                          : assemble_trajectory(id, mic_id, std::move(traj_stops),
                                                std::move(traj_moves)));
    }
    return out;
}

}  // namespace tdw::io
