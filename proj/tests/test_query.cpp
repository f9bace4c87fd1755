#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "support.hpp"
#include "tdw/oracle.hpp"
#include "tdw/query.hpp"

using namespace tdw;
using test::make_analysis_graph;
using test::make_random_fixture;
using test::query_result_csv;
using test::rollup_csv;

namespace {

std::string golden(const std::string& name) {
    return csv::read_file(std::filesystem::path(TDW_GOLDEN_DIR) / name);
}

struct Fixture {
    ObjectGraph graph = make_analysis_graph();
    WarehouseBundle bundle =
        load(graph.trajectories, graph.mics, graph.gazetteer, graph.admin_places);
};

/// Random case mangling: the name-matching convention must not care.
std::string mangle_case(std::string s, Rng& rng) {
    for (auto& c : s)
        if (rng.next_bool(0.5))
            c = static_cast<char>(rng.next_bool(0.5) ? std::toupper(static_cast<unsigned char>(c))
                                                     : std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

TEST_CASE("the reference fixture reproduces the golden answers") {
    const Fixture fx;

    // engine vs frozen goldens
    CHECK(query_result_csv(q1_touristic_places_on_trajectory(fx.bundle, 34, "Tunisia")) ==
          golden("q1.csv"));
    CHECK(std::to_string(q2_count_agriculture(fx.bundle, "tunisia", "sousse")) + "\n" ==
          golden("q2.txt"));
    CHECK(query_result_csv(q3_lakes_on_trajectory(fx.bundle, 20)) == golden("q3.csv"));
    CHECK(query_result_csv(q4_trajectories_with_sea_and_touristic(fx.bundle)) ==
          golden("q4.csv"));
    CHECK(query_result_csv(q5_hotels(fx.bundle, "Hammamet", "hotel", "5stars")) ==
          golden("q5.csv"));
    CHECK(query_result_csv(q6_trajectories_min_touristic(fx.bundle, 10)) == golden("q6.csv"));
    CHECK(rollup_csv(rollup_poi_count(fx.bundle, {"country", "delegation"},
                                      PoiKind::Industrial)) == golden("rollup_industrial.csv"));

    // and the independent oracle agrees with the same goldens
    CHECK(query_result_csv(oracle_q1(fx.graph, 34, "Tunisia")) == golden("q1.csv"));
    CHECK(std::to_string(oracle_q2(fx.graph, "tunisia", "sousse")) + "\n" == golden("q2.txt"));
    CHECK(query_result_csv(oracle_q3(fx.graph, 20)) == golden("q3.csv"));
    CHECK(query_result_csv(oracle_q4(fx.graph)) == golden("q4.csv"));
    CHECK(query_result_csv(oracle_q5(fx.graph, "Hammamet", "hotel", "5stars")) ==
          golden("q5.csv"));
    CHECK(query_result_csv(oracle_q6(fx.graph, 10)) == golden("q6.csv"));
    CHECK(rollup_csv(oracle_rollup(fx.graph, {"country", "delegation"}, PoiKind::Industrial)) ==
          golden("rollup_industrial.csv"));
}

TEST_CASE("q1 edge cases") {
    const Fixture fx;
    SECTION("unknown trajectory: empty result plus a warning") {
        const QueryResult res = q1_touristic_places_on_trajectory(fx.bundle, 999, "Tunisia");
        CHECK(res.rows.empty());
        REQUIRE(res.warnings.size() == 1);
    }
    SECTION("a trajectory without touristic pois is empty") {
        CHECK(q1_touristic_places_on_trajectory(fx.bundle, 50, "Tunisia").rows.empty());
    }
    SECTION("country filter drops foreign pois") {
        const QueryResult res = q1_touristic_places_on_trajectory(fx.bundle, 34, "Algeria");
        REQUIRE(res.rows.size() == 1);  // only the Annaba hotel
        CHECK(std::get<std::string>(res.rows[0][0]) == "Annaba");
    }
    SECTION("country name matching is case-insensitive") {
        CHECK(query_result_csv(q1_touristic_places_on_trajectory(fx.bundle, 34, "  TUNISIA ")) ==
              golden("q1.csv"));
    }
}

TEST_CASE("q2 edge cases") {
    const Fixture fx;
    CHECK(q2_count_agriculture(fx.bundle, "Tunisia", "Sousse") == 3);  // case-insensitive
    CHECK(q2_count_agriculture(fx.bundle, "Tunisia", "Hammamet") == 1);
    CHECK(q2_count_agriculture(fx.bundle, "Tunisia", "Carthage") == 0);
    std::vector<std::string> warnings;
    CHECK(q2_count_agriculture(fx.bundle, "Tunisia", "atlantis", &warnings) == 0);
    CHECK(warnings.size() == 1);
    // delegation exists but in the other country
    warnings.clear();
    CHECK(q2_count_agriculture(fx.bundle, "Algeria", "sousse", &warnings) == 0);
    CHECK(warnings.size() == 1);
}

TEST_CASE("q3 edge cases") {
    const Fixture fx;
    CHECK(q3_lakes_on_trajectory(fx.bundle, 34).rows.empty());
    const QueryResult unknown = q3_lakes_on_trajectory(fx.bundle, 12345);
    CHECK(unknown.rows.empty());
    CHECK(unknown.warnings.size() == 1);
}

TEST_CASE("q4 conjunction and ordering") {
    const Fixture fx;
    const QueryResult res = q4_trajectories_with_sea_and_touristic(fx.bundle);
    REQUIRE(res.rows.size() == 2);
    CHECK(std::get<std::int64_t>(res.rows[0][0]) == 7);
    CHECK(std::get<std::int64_t>(res.rows[1][0]) == 34);
    CHECK(res.ordering == "trajectory_id asc");

    const WarehouseBundle empty;
    CHECK(q4_trajectories_with_sea_and_touristic(empty).rows.empty());
}

TEST_CASE("q5 filters category, type and location") {
    const Fixture fx;
    CHECK(q5_hotels(fx.bundle, "Hammamet", "hotel", "4stars").rows.empty());
    CHECK(q5_hotels(fx.bundle, "nowhere", "hotel", "5stars").rows.empty());
    CHECK(q5_hotels(fx.bundle, "hammamet", "hotel", "5stars").rows.size() == 2);
    CHECK(q5_hotels(fx.bundle, "sousse", "hotel", "5stars").rows.size() == 1);
}

TEST_CASE("q6 strictness, monotonicity and validation") {
    const Fixture fx;
    CHECK(q6_trajectories_min_touristic(fx.bundle, 10).rows.size() == 1);  // 11 > 10
    CHECK(q6_trajectories_min_touristic(fx.bundle, 11).rows.empty());     // 11 is not > 11
    // 60 holds exactly 10 touristic pois: strict > excludes it at 10
    const QueryResult at9 = q6_trajectories_min_touristic(fx.bundle, 9);
    REQUIRE(at9.rows.size() == 2);
    CHECK(std::get<std::int64_t>(at9.rows[0][0]) == 7);
    CHECK(std::get<std::int64_t>(at9.rows[1][0]) == 60);
    CHECK_THROWS_AS(q6_trajectories_min_touristic(fx.bundle, -1), NegativeThreshold);

    std::size_t previous = q6_trajectories_min_touristic(fx.bundle, 0).rows.size();
    for (std::int64_t threshold = 1; threshold <= 12; ++threshold) {
        const std::size_t now = q6_trajectories_min_touristic(fx.bundle, threshold).rows.size();
        REQUIRE(now <= previous);  // result set shrinks as the threshold grows
        previous = now;
    }
}

TEST_CASE("rollup additivity and level invariance") {
    const Fixture fx;
    for (int k = 0; k < kPoiKindCount; ++k) {
        const PoiKind kind = static_cast<PoiKind>(k);
        const RollupResult fine = rollup_poi_count(fx.bundle, {"country", "delegation"}, kind);
        const RollupResult coarse = rollup_poi_count(fx.bundle, {"country"}, kind);
        CHECK(fine.grand_total == coarse.grand_total);
        for (const auto& cg : coarse.groups) {
            std::int64_t sum = 0;
            for (const auto& fg : fine.groups)
                if (fg.keys[0] == cg.keys[0]) sum += fg.count;
            REQUIRE(sum == cg.count);
        }
    }
    // a kind with zero pois still enumerates every group
    const RollupResult zero = rollup_poi_count(fx.bundle, {"country", "delegation"},
                                               PoiKind::Desert);
    CHECK(zero.grand_total == 0);
    CHECK(zero.groups.size() == 5);
    for (const auto& g : zero.groups) CHECK(g.count == 0);

    CHECK_THROWS_AS(rollup_poi_count(fx.bundle, {"country"}, "volcano"), UnknownKind);
    CHECK_THROWS_AS(rollup_poi_count(fx.bundle, {}, PoiKind::Sea), Error);
    CHECK(rollup_poi_count(fx.bundle, {"country"}, "industrial").grand_total == 4);
}

TEST_CASE("queries leave the bundle untouched") {
    const Fixture fx;
    const WarehouseBundle before = fx.bundle;
    (void)q1_touristic_places_on_trajectory(fx.bundle, 34, "Tunisia");
    (void)q2_count_agriculture(fx.bundle, "tunisia", "sousse");
    (void)q3_lakes_on_trajectory(fx.bundle, 20);
    (void)q4_trajectories_with_sea_and_touristic(fx.bundle);
    (void)q5_hotels(fx.bundle, "Hammamet", "hotel", "5stars");
    (void)q6_trajectories_min_touristic(fx.bundle, 10);
    (void)rollup_poi_count(fx.bundle, {"country", "delegation"}, PoiKind::Industrial);
    CHECK(fx.bundle == before);
}

TEST_CASE("engine matches the object-graph oracle on randomized fixtures") {
    Rng rng(555);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto fx = make_random_fixture(1000 + seed);
        const auto& g = fx.graph;
        const auto& b = fx.bundle;

        std::vector<std::string> delegations, countries, locations;
        for (const auto& a : g.admin_places) {
            delegations.push_back(a.delegation.name);
            countries.push_back(a.country.name);
        }
        for (const auto& p : g.gazetteer)
            if (auto it = p.attrs.find("location"); it != p.attrs.end())
                locations.push_back(it->second);
        auto pick = [&rng](const std::vector<std::string>& pool) {
            return pool[static_cast<std::size_t>(
                rng.next_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
        };

        for (int round = 0; round < 4; ++round) {
            const TrajectoryId tid = rng.next_int(1, 4);  // sometimes absent
            const std::string country = mangle_case(pick(countries), rng);
            const std::string delegation = mangle_case(pick(delegations), rng);
            const std::string location = mangle_case(pick(locations), rng);
            const std::string category = rng.next_bool(0.7) ? "hotel" : "museum";
            const std::string star = rng.next_bool(0.7) ? "5stars" : "3stars";
            const std::int64_t threshold = rng.next_int(0, 4);
            const PoiKind kind = static_cast<PoiKind>(rng.next_int(0, kPoiKindCount - 1));
            const std::vector<std::string> levels =
                rng.next_bool(0.5) ? std::vector<std::string>{"country", "delegation"}
                                   : std::vector<std::string>{"country"};

            REQUIRE(query_result_csv(q1_touristic_places_on_trajectory(b, tid, country)) ==
                    query_result_csv(oracle_q1(g, tid, country)));
            REQUIRE(q2_count_agriculture(b, country, delegation) ==
                    oracle_q2(g, country, delegation));
            REQUIRE(query_result_csv(q3_lakes_on_trajectory(b, tid)) ==
                    query_result_csv(oracle_q3(g, tid)));
            REQUIRE(query_result_csv(q4_trajectories_with_sea_and_touristic(b)) ==
                    query_result_csv(oracle_q4(g)));
            REQUIRE(query_result_csv(q5_hotels(b, location, category, star)) ==
                    query_result_csv(oracle_q5(g, location, category, star)));
            REQUIRE(query_result_csv(q6_trajectories_min_touristic(b, threshold)) ==
                    query_result_csv(oracle_q6(g, threshold)));
            REQUIRE(rollup_csv(rollup_poi_count(b, levels, kind)) ==
                    rollup_csv(oracle_rollup(g, levels, kind)));
        }
    }
}
