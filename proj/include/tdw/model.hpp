#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/geo.hpp"
#include "tdw/time.hpp"

namespace tdw {

/// One timestamped geoposition reported by a collector's device.
struct GpsFix {
    Id mic_id;
    std::int64_t t = 0;  // UTC seconds
    GeoPoint pos;

    friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

enum class StopKind { Planned, Private, Unforeseen };

inline const char* to_string(StopKind k) {
    switch (k) {
        case StopKind::Planned: return "Planned";
        case StopKind::Private: return "Private";
        case StopKind::Unforeseen: return "Unforeseen";
    }
    return "Private";
}

inline std::optional<StopKind> parse_stop_kind(const std::string& s) {
    if (s == "Planned") return StopKind::Planned;
    if (s == "Private") return StopKind::Private;
    if (s == "Unforeseen") return StopKind::Unforeseen;
    return std::nullopt;
}

/// A part of a trajectory where the collector has effectively not moved.
/// `delegation_id` is empty when no delegation could be assigned; a
/// synthetic stop is a zero-dwell endpoint closing a trace that starts or
/// ends mid-move.
struct Stop {
    Id stop_id;
    TimeInterval interval;
    GeoPoint centroid;
    StopKind kind = StopKind::Private;
    Id delegation_id;
    std::vector<Id> nearby_poi_ids;  // sorted ascending, unique
    bool synthetic = false;

    friend bool operator==(const Stop&, const Stop&) = default;
};

/// The displacement between two successive stops. The path holds the raw
/// fixes of the move; it may be empty when two stops are back to back, in
/// which case the interval spans the gap between them.
struct Move {
    Id move_id;
    TimeInterval interval;
    std::vector<GpsFix> path;

    friend bool operator==(const Move&, const Move&) = default;
};

/// Duration attribute of a move: its life cycle length.
inline std::int64_t move_duration(const Move& m) { return duration(m.interval); }

/// Two stops and the one move between them.
struct TrajectorySection {
    Id section_id;
    Stop from_stop;
    Move move;
    Stop to_stop;
    TimeInterval interval;  // from_stop.t_begin .. to_stop.t_end

    friend bool operator==(const TrajectorySection&, const TrajectorySection&) = default;
};

/// An ordered alternation of stops and moves; the concatenation of its
/// sections. A degenerate trajectory has one stop and no sections.
struct Trajectory {
    TrajectoryId trajectory_id = 0;
    Id mic_id;
    std::vector<Stop> stops;    // k + 1 stops for k sections
    std::vector<Move> moves;    // k moves
    std::vector<TrajectorySection> sections;
    TimeInterval interval;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct AuthAttempt {
    std::int64_t t = 0;
    bool success = false;

    friend bool operator==(const AuthAttempt&, const AuthAttempt&) = default;
};

struct Capability {
    int moving = 0;         // 0..100
    int communication = 0;  // 0..100
    int knowledge = 0;      // 0..100

    friend bool operator==(const Capability&, const Capability&) = default;
};

/// A mobile information collector.
struct Mic {
    Id mic_id;
    std::string first_name;
    std::string last_name;
    std::string auth_key;
    std::vector<AuthAttempt> auth_history;
    Capability capability;
    Id pda_id;

    friend bool operator==(const Mic&, const Mic&) = default;
};

inline constexpr int kMaxAuthAttempts = 3;

/// A session allows at most three consecutive failed authentications.
inline bool auth_history_valid(const std::vector<AuthAttempt>& history) {
    int run = 0;
    for (const auto& a : history) {
        run = a.success ? 0 : run + 1;
        if (run > kMaxAuthAttempts) return false;
    }
    return true;
}

inline bool auth_locked_out(const std::vector<AuthAttempt>& history) {
    int run = 0;
    for (const auto& a : history) run = a.success ? 0 : run + 1;
    return run >= kMaxAuthAttempts;
}

struct MeanOfTransport {
    Id transport_id;
    std::string color;
    double v_min_mps = 0.0;
    double v_max_mps = 0.0;

    friend bool operator==(const MeanOfTransport&, const MeanOfTransport&) = default;
};

inline bool valid(const MeanOfTransport& t) {
    return 0.0 <= t.v_min_mps && t.v_min_mps <= t.v_max_mps;
}

/// One delegation together with its regional government and country; the
/// administrative hierarchy is strict (delegation -> regional government
/// -> country).
struct AdminPlace {
    struct Delegation {
        Id id;
        std::string name;
        double surface_km2 = 0.0;
        std::int64_t population = 0;
        std::string climate;

        friend bool operator==(const Delegation&, const Delegation&) = default;
    };
    struct RegionalGovernment {
        Id id;
        std::string name;

        friend bool operator==(const RegionalGovernment&, const RegionalGovernment&) = default;
    };
    struct Country {
        Id id;
        std::string name;
        std::int64_t population = 0;

        friend bool operator==(const Country&, const Country&) = default;
    };

    Delegation delegation;
    RegionalGovernment regional_government;
    Country country;

    friend bool operator==(const AdminPlace&, const AdminPlace&) = default;
};

enum class PoiKind {
    Sea,
    Lake,
    Mountain,
    Desert,
    Educational,
    Industrial,
    Agricultural,
    Transportation,
    Healthcare,
    Touristic,
    CultArt,
    Financial,
};

inline constexpr int kPoiKindCount = 12;

inline const char* to_string(PoiKind k) {
    switch (k) {
        case PoiKind::Sea: return "Sea";
        case PoiKind::Lake: return "Lake";
        case PoiKind::Mountain: return "Mountain";
        case PoiKind::Desert: return "Desert";
        case PoiKind::Educational: return "Educational";
        case PoiKind::Industrial: return "Industrial";
        case PoiKind::Agricultural: return "Agricultural";
        case PoiKind::Transportation: return "Transportation";
        case PoiKind::Healthcare: return "Healthcare";
        case PoiKind::Touristic: return "Touristic";
        case PoiKind::CultArt: return "CultArt";
        case PoiKind::Financial: return "Financial";
    }
    return "Sea";
}

inline std::optional<PoiKind> parse_poi_kind(const std::string& s) {
    const std::string n = to_lower(trim(s));
    for (int i = 0; i < kPoiKindCount; ++i) {
        const PoiKind k = static_cast<PoiKind>(i);
        if (n == to_lower(to_string(k))) return k;
    }
    return std::nullopt;
}

/// Natural features are the first four kinds; the rest are artificial
/// company categories.
inline bool is_natural(PoiKind k) {
    return k == PoiKind::Sea || k == PoiKind::Lake || k == PoiKind::Mountain ||
           k == PoiKind::Desert;
}

/// A spatial feature of the world the collector annotates around stops.
/// `attrs` carries kind-specific attributes (for a touristic company:
/// category="hotel", type="5stars", location="Hammamet").
struct PointOfInterest {
    Id poi_id;
    PoiKind kind = PoiKind::Sea;
    std::string name;
    GeoPoint pos;
    Id delegation_id;
    std::map<std::string, std::string> attrs;

    friend bool operator==(const PointOfInterest&, const PointOfInterest&) = default;
};

// --- trajectory assembly ---------------------------------------------------

struct AlternationViolation : Error {
    using Error::Error;
};
struct EmptyTrajectory : Error {
    using Error::Error;
};

/// Pairs consecutive stops with the move between them. Requires
/// |stops| = |moves| + 1 with consistent alternation timestamps.
inline Trajectory assemble_trajectory(TrajectoryId trajectory_id, const Id& mic_id,
                                      std::vector<Stop> stops, std::vector<Move> moves) {
    if (moves.empty()) throw EmptyTrajectory("trajectory needs at least one move");
    if (stops.size() != moves.size() + 1)
        throw AlternationViolation("expected " + std::to_string(moves.size() + 1) + " stops, got " +
                                   std::to_string(stops.size()));
    for (std::size_t i = 0; i < moves.size(); ++i) {
        const bool ok = stops[i].interval.t_end <= moves[i].interval.t_begin &&
                        moves[i].interval.t_begin <= moves[i].interval.t_end &&
                        moves[i].interval.t_end <= stops[i + 1].interval.t_begin;
        if (!ok)
            throw AlternationViolation("stop/move timestamps overlap at section " +
                                       std::to_string(i));
    }

    Trajectory traj;
    traj.trajectory_id = trajectory_id;
    traj.mic_id = mic_id;
    traj.interval = TimeInterval{stops.front().interval.t_begin, stops.back().interval.t_end};
    traj.sections.reserve(moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
        TrajectorySection sect;
        sect.section_id = "t" + std::to_string(trajectory_id) + "-x" + std::to_string(i);
        sect.from_stop = stops[i];
        sect.move = moves[i];
        sect.to_stop = stops[i + 1];
        sect.interval = TimeInterval{stops[i].interval.t_begin, stops[i + 1].interval.t_end};
        traj.sections.push_back(std::move(sect));
    }
    traj.stops = std::move(stops);
    traj.moves = std::move(moves);
    return traj;
}

/// A trajectory with exactly one stop and no moves (single dwell trace).
inline Trajectory make_degenerate_trajectory(TrajectoryId trajectory_id, const Id& mic_id,
                                             Stop stop) {
    Trajectory traj;
    traj.trajectory_id = trajectory_id;
    traj.mic_id = mic_id;
    traj.interval = stop.interval;
    traj.stops.push_back(std::move(stop));
    return traj;
}

/// Flattened stop/move alternation: stop, move, stop, ..., stop.
/// Entries are (is_stop, index into stops/moves).
inline std::vector<std::pair<bool, std::size_t>> flatten(const Trajectory& traj) {
    std::vector<std::pair<bool, std::size_t>> seq;
    for (std::size_t i = 0; i < traj.stops.size(); ++i) {
        seq.emplace_back(true, i);
        if (i < traj.moves.size()) seq.emplace_back(false, i);
    }
    return seq;
}

/// Checks every trajectory invariant; returns human-readable violations
/// (empty means the trajectory is well formed).
inline std::vector<std::string> validate_trajectory(const Trajectory& traj) {
    std::vector<std::string> out;
    if (traj.stops.empty()) {
        out.push_back("trajectory has no stops");
        return out;
    }
    if (traj.moves.size() + 1 != traj.stops.size())
        out.push_back("stop count is not move count + 1");
    if (traj.sections.size() != traj.moves.size())
        out.push_back("section count differs from move count");
    if (traj.interval.t_begin != traj.stops.front().interval.t_begin ||
        traj.interval.t_end != traj.stops.back().interval.t_end)
        out.push_back("trajectory interval does not span first stop begin to last stop end");
    for (const auto& s : traj.stops)
        if (!valid(s.interval)) out.push_back("stop " + s.stop_id + " has an invalid interval");
    for (std::size_t i = 0; i < traj.moves.size(); ++i) {
        const Move& m = traj.moves[i];
        if (!valid(m.interval)) out.push_back("move " + m.move_id + " has an invalid interval");
        if (!m.path.empty()) {
            if (m.path.front().t != m.interval.t_begin || m.path.back().t != m.interval.t_end)
                out.push_back("move " + m.move_id + " path endpoints do not match its interval");
            for (std::size_t j = 1; j < m.path.size(); ++j)
                if (m.path[j - 1].t >= m.path[j].t) {
                    out.push_back("move " + m.move_id + " path is not time ordered");
                    break;
                }
        }
        if (i + 1 < traj.stops.size()) {
            const bool ok = traj.stops[i].interval.t_end <= m.interval.t_begin &&
                            m.interval.t_end <= traj.stops[i + 1].interval.t_begin;
            if (!ok) out.push_back("alternation broken around move " + m.move_id);
        }
    }
    for (std::size_t i = 0; i < traj.sections.size(); ++i) {
        const TrajectorySection& sect = traj.sections[i];
        if (!(sect.from_stop == traj.stops[i]) || !(sect.to_stop == traj.stops[i + 1]) ||
            !(sect.move == traj.moves[i]))
            out.push_back("section " + sect.section_id + " is out of sync with stops/moves");
        if (i + 1 < traj.sections.size() &&
            !(traj.sections[i].to_stop == traj.sections[i + 1].from_stop))
            out.push_back("sections " + std::to_string(i) + "/" + std::to_string(i + 1) +
                          " do not share their boundary stop");
        if (sect.interval.t_begin != sect.from_stop.interval.t_begin ||
            sect.interval.t_end != sect.to_stop.interval.t_end)
            out.push_back("section " + sect.section_id + " interval does not span its stops");
    }
    return out;
}

}  // namespace tdw
