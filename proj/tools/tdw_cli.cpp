// tdw: simulate -> segment -> load -> query/rollup/check pipeline driver.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdw/tdw.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out.append(width[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    };
    emit(header);
    std::vector<std::string> rule;
    for (std::size_t c = 0; c < header.size(); ++c) rule.push_back(std::string(width[c], '-'));
    emit(rule);
    for (const auto& row : rows) emit(row);
    return out;
}

void print_query_result(const tdw::QueryResult& res, bool as_csv) {
    std::vector<std::string> header;
    for (const auto& col : res.columns) header.push_back(col.name);
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : res.rows) {
        std::vector<std::string> cells;
        for (const auto& cell : row) cells.push_back(tdw::to_string(cell));
        rows.push_back(std::move(cells));
    }
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    if (as_csv) {
        tdw::csv::Table t;
        t.header = header;
        t.rows = rows;
        std::cout << tdw::csv::to_string(t);
    } else {
        std::cout << render_table(header, rows);
        std::cout << "(" << rows.size() << " row" << (rows.size() == 1 ? "" : "s") << ")\n";
    }
}

int run_simulate(std::uint64_t seed, std::size_t mics, const std::string& out_dir,
                 std::size_t delegations, std::size_t pois, std::size_t stops,
                 std::int64_t dwell, double speed, std::int64_t fix_period, double noise,
                 double event_rate, bool verbose) {
    tdw::NetworkSpec spec;
    spec.seed = seed;
    spec.n_delegations = delegations;
    spec.n_pois_per_delegation = pois;
    const tdw::World world = tdw::gen_world(spec);

    tdw::GenParams params;
    params.seed = seed;
    params.n_mics = mics;
    params.stops_per_itinerary = stops;
    params.dwell_s = dwell;
    params.cruise_speed_mps = speed;
    params.fix_period_s = fix_period;
    params.noise_m = noise;
    params.event_rate = event_rate;
    const tdw::SimOutput sim = tdw::gen_runs(world, params);

    tdw::io::write_sim_dir(out_dir, world, sim);
    if (verbose)
        std::cerr << "simulated " << sim.fixes.size() << " fixes for " << mics << " mics into "
                  << out_dir << "\n";
    return kExitOk;
}

int run_segment(const std::string& fixes_file, const std::string& itinerary_file,
                const std::string& events_file, const std::string& gazetteer_file,
                const tdw::SegmentationParams& params, const std::string& out_dir,
                bool verbose) {
    tdw::validate(params);
    std::vector<tdw::GpsFix> fixes = tdw::io::read_fixes_csv(fixes_file);
    if (fixes.empty()) throw tdw::EmptyInput("no fixes in " + fixes_file);
    std::stable_sort(fixes.begin(), fixes.end(),
                     [](const tdw::GpsFix& a, const tdw::GpsFix& b) {
                         return a.mic_id != b.mic_id ? a.mic_id < b.mic_id : a.t < b.t;
                     });

    std::map<tdw::Id, tdw::ItineraryState> itineraries;
    if (!itinerary_file.empty())
        for (auto& st : tdw::io::read_itinerary_csv(itinerary_file))
            itineraries.emplace(st.mic_id, std::move(st));
    std::vector<tdw::NavigationEvent> events;
    if (!events_file.empty()) events = tdw::io::read_events_csv(events_file);
    std::vector<tdw::PointOfInterest> gazetteer;
    if (!gazetteer_file.empty()) gazetteer = tdw::io::read_gazetteer_csv(gazetteer_file);

    std::vector<tdw::Trajectory> trajectories;
    std::vector<std::string> warnings;
    tdw::TrajectoryId next_id = 1;
    std::size_t begin = 0;
    while (begin < fixes.size()) {
        std::size_t end = begin;
        while (end < fixes.size() && fixes[end].mic_id == fixes[begin].mic_id) ++end;
        const std::span<const tdw::GpsFix> mic_fixes(fixes.data() + begin, end - begin);
        tdw::Trajectory traj = tdw::segment(mic_fixes, params, next_id++, &warnings);
        const auto it = itineraries.find(traj.mic_id);
        const tdw::ItineraryState empty_itinerary;
        traj = tdw::enrich_trajectory(traj, it == itineraries.end() ? empty_itinerary : it->second,
                                      events, gazetteer, params);
        trajectories.push_back(std::move(traj));
        begin = end;
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    tdw::io::write_trajectory_dir(out_dir, trajectories);
    if (verbose)
        std::cerr << "segmented " << trajectories.size() << " trajectories into " << out_dir
                  << "\n";
    return kExitOk;
}

int run_load(const std::string& traj_dir, const std::string& gazetteer_file,
             const std::string& admin_file, const std::string& mics_file,
             const std::string& out_dir, bool verbose) {
    const std::vector<tdw::Trajectory> trajectories = tdw::io::read_trajectory_dir(traj_dir);
    const std::vector<tdw::PointOfInterest> gazetteer =
        tdw::io::read_gazetteer_csv(gazetteer_file);
    const std::vector<tdw::AdminPlace> admin = tdw::io::read_admin_csv(admin_file);
    const auto [mics, transports] = tdw::io::read_mics_csv(mics_file);
    const tdw::WarehouseBundle bundle = tdw::load(trajectories, mics, gazetteer, admin);
    tdw::write_bundle(bundle, out_dir);
    if (verbose) {
        std::cerr << "loaded " << bundle.fact_trajectory.size() << " fact rows into " << out_dir
                  << "\n";
        for (const auto& [table, count] : bundle.manifest)
            std::cerr << "  " << table << ": " << count << "\n";
    }
    return kExitOk;
}

int run_check(const std::string& warehouse_dir) {
    const tdw::WarehouseBundle bundle = tdw::read_bundle(warehouse_dir);
    const tdw::IntegrityReport report = tdw::integrity_check(bundle);
    for (const auto& v : report.violations)
        std::cout << v.category << " " << v.table << " key=" << v.row_key << ": " << v.detail
                  << "\n";
    std::cout << report.violations.size() << " violations\n";
    return report.ok() ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trajectory data warehouse toolkit"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "progress output on stderr");

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a synthetic world and GPS runs");
    std::uint64_t seed = 1;
    std::size_t mics = 4, delegations = 8, pois = 6, stops = 5;
    std::int64_t dwell = 600, fix_period = 30;
    double speed = 15.0, noise = 0.0, event_rate = 0.15;
    std::string sim_out;
    sim->add_option("--seed", seed, "random seed");
    sim->add_option("--mics", mics, "number of collectors");
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--delegations", delegations, "number of delegations");
    sim->add_option("--pois-per-delegation", pois, "points of interest per delegation");
    sim->add_option("--stops", stops, "destinations per itinerary");
    sim->add_option("--dwell", dwell, "dwell per destination, seconds");
    sim->add_option("--speed", speed, "cruise speed, m/s");
    sim->add_option("--fix-period", fix_period, "seconds between fixes");
    sim->add_option("--noise", noise, "dwell jitter radius, meters");
    sim->add_option("--event-rate", event_rate, "navigation event probability per leg");

    // segment
    auto* seg = app.add_subcommand("segment", "turn fixes into stop/move trajectories");
    std::string fixes_file, itinerary_file, events_file, gazetteer_file, seg_out;
    tdw::SegmentationParams seg_params;
    seg->add_option("--fixes", fixes_file, "fixes csv")->required();
    seg->add_option("--itinerary", itinerary_file, "itinerary csv");
    seg->add_option("--events", events_file, "navigation events csv");
    seg->add_option("--gazetteer", gazetteer_file, "gazetteer csv");
    seg->add_option("--eps", seg_params.eps_m, "stop radius, meters");
    seg->add_option("--tau", seg_params.tau_min_s, "minimum dwell, seconds");
    seg->add_option("--match-radius", seg_params.match_radius_m,
                    "destination/poi matching radius, meters");
    seg->add_option("--out", seg_out, "output directory")->required();

    // load
    auto* load_cmd = app.add_subcommand("load", "materialize the warehouse bundle");
    std::string traj_dir, load_gazetteer, admin_file, mics_file, warehouse_out;
    load_cmd->add_option("--trajectories", traj_dir, "trajectory directory")->required();
    load_cmd->add_option("--gazetteer", load_gazetteer, "gazetteer csv")->required();
    load_cmd->add_option("--admin", admin_file, "administrative places csv")->required();
    load_cmd->add_option("--mics", mics_file, "collectors csv")->required();
    load_cmd->add_option("--out", warehouse_out, "warehouse directory")->required();

    // query
    auto* query = app.add_subcommand("query", "run one of the analytical queries q1..q6");
    std::string which, warehouse_dir, country, delegation, location, category, star_type;
    std::int64_t trajectory_id = 0, threshold = 10;
    bool as_csv = false;
    bool have_trajectory = false;
    query->add_option("which", which, "one of q1 q2 q3 q4 q5 q6")->required();
    query->add_option("--warehouse", warehouse_dir, "warehouse directory")->required();
    auto* traj_opt = query->add_option("--trajectory", trajectory_id, "trajectory id");
    query->add_option("--country", country, "country name");
    query->add_option("--delegation", delegation, "delegation name");
    query->add_option("--location", location, "location name");
    query->add_option("--category", category, "touristic category, e.g. hotel");
    query->add_option("--type", star_type, "touristic type, e.g. 5stars");
    query->add_option("--threshold", threshold, "minimum touristic count (q6, strict >)");
    query->add_flag("--csv", as_csv, "emit csv instead of an aligned table");

    // rollup
    auto* rollup = app.add_subcommand("rollup", "grouped poi counts over the hierarchy");
    std::string rollup_warehouse, by = "country,delegation", kind_name;
    bool rollup_csv = false;
    rollup->add_option("--warehouse", rollup_warehouse, "warehouse directory")->required();
    rollup->add_option("--by", by, "country or country,delegation");
    rollup->add_option("--kind", kind_name, "poi kind, e.g. Industrial")->required();
    rollup->add_flag("--csv", rollup_csv, "emit csv instead of an aligned table");

    // check
    auto* check = app.add_subcommand("check", "integrity-check a warehouse bundle");
    std::string check_warehouse;
    check->add_option("--warehouse", check_warehouse, "warehouse directory")->required();

    for (auto* sub : {sim, seg, load_cmd, query, rollup, check}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sim->parsed())
            return run_simulate(seed, mics, sim_out, delegations, pois, stops, dwell, speed,
                                fix_period, noise, event_rate, verbose);
        if (seg->parsed())
            return run_segment(fixes_file, itinerary_file, events_file, gazetteer_file,
                               seg_params, seg_out, verbose);
        if (load_cmd->parsed())
            return run_load(traj_dir, load_gazetteer, admin_file, mics_file, warehouse_out,
                            verbose);
        if (check->parsed()) return run_check(check_warehouse);

        if (rollup->parsed()) {
            std::vector<std::string> levels = tdw::split(by, ',');
            for (auto& level : levels) level = tdw::trim(level);
            const auto kind = tdw::parse_poi_kind(kind_name);
            if (!kind) throw UsageError("unknown poi kind: " + kind_name);
            for (const auto& level : levels)
                if (level != "country" && level != "delegation")
                    throw UsageError("unknown rollup level: " + level);
            if (levels.empty() || (levels.size() == 2 && levels[0] != "country") ||
                levels.size() > 2)
                throw UsageError("--by must be country, delegation or country,delegation");
            const tdw::WarehouseBundle bundle = tdw::read_bundle(rollup_warehouse);
            const tdw::RollupResult res = tdw::rollup_poi_count(bundle, levels, *kind);
            std::vector<std::string> header = levels;
            header.push_back("count");
            std::vector<std::vector<std::string>> rows;
            for (const auto& g : res.groups) {
                std::vector<std::string> row = g.keys;
                row.push_back(std::to_string(g.count));
                rows.push_back(std::move(row));
            }
            std::vector<std::string> total(levels.size(), "(all)");
            total.push_back(std::to_string(res.grand_total));
            rows.push_back(std::move(total));
            if (rollup_csv) {
                tdw::csv::Table t;
                t.header = header;
                t.rows = rows;
                std::cout << tdw::csv::to_string(t);
            } else {
                std::cout << render_table(header, rows);
            }
            return kExitOk;
        }

        if (query->parsed()) {
            have_trajectory = traj_opt->count() > 0;
            if (which != "q1" && which != "q2" && which != "q3" && which != "q4" &&
                which != "q5" && which != "q6")
                throw UsageError("unknown query: " + which);
            if ((which == "q1" || which == "q3") && !have_trajectory)
                throw UsageError(which + " requires --trajectory");
            if ((which == "q1" || which == "q2") && country.empty())
                throw UsageError(which + " requires --country");
            if (which == "q2" && delegation.empty()) throw UsageError("q2 requires --delegation");
            if (which == "q5" && (location.empty() || category.empty() || star_type.empty()))
                throw UsageError("q5 requires --location, --category and --type");
            if (which == "q6" && threshold < 0)
                throw UsageError("--threshold must be >= 0");

            const tdw::WarehouseBundle bundle = tdw::read_bundle(warehouse_dir);
            if (which == "q1") {
                print_query_result(
                    tdw::q1_touristic_places_on_trajectory(bundle, trajectory_id, country),
                    as_csv);
            } else if (which == "q2") {
                std::vector<std::string> warnings;
                const std::int64_t count =
                    tdw::q2_count_agriculture(bundle, country, delegation, &warnings);
                for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
                std::cout << count << "\n";
            } else if (which == "q3") {
                print_query_result(tdw::q3_lakes_on_trajectory(bundle, trajectory_id), as_csv);
            } else if (which == "q4") {
                print_query_result(tdw::q4_trajectories_with_sea_and_touristic(bundle), as_csv);
            } else if (which == "q5") {
                print_query_result(tdw::q5_hotels(bundle, location, category, star_type), as_csv);
            } else {
                print_query_result(tdw::q6_trajectories_min_touristic(bundle, threshold), as_csv);
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tdw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
