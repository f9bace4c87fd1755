#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tdw/common.hpp"
#include "tdw/geo.hpp"
#include "tdw/time.hpp"

namespace tdw {

enum class TaskKind { Observe, Collect, Send };
enum class TaskStatus { Pending, Done, Skipped };

inline const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::Observe: return "Observe";
        case TaskKind::Collect: return "Collect";
        case TaskKind::Send: return "Send";
    }
    return "Observe";
}

inline const char* to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::Pending: return "Pending";
        case TaskStatus::Done: return "Done";
        case TaskStatus::Skipped: return "Skipped";
    }
    return "Pending";
}

/// One of the three per-stop duties: observe points of interest, collect
/// information, send trajectory data.
struct Task {
    Id task_id;
    TaskKind kind = TaskKind::Observe;
    Id destination_id;
    TaskStatus status = TaskStatus::Pending;

    friend bool operator==(const Task&, const Task&) = default;
};

/// A place the collector is sent to, with its planned visit window and the
/// tasks to perform there. Alternates (reroute targets that are not part
/// of the static plan) carry a zero window.
struct Destination {
    Id destination_id;
    Id delegation_id;
    GeoPoint pos;
    TimeInterval planned_window;
    std::vector<Task> tasks;

    friend bool operator==(const Destination&, const Destination&) = default;
};

/// An unexpected disruption (breakdown, bad weather, ...) during travel.
/// Unknown kinds are accepted and logged; the event list is updatable in
/// the field.
struct NavigationEvent {
    Id event_id;
    std::string kind;
    TimeInterval interval;
    std::optional<Id> at_destination_id;

    friend bool operator==(const NavigationEvent&, const NavigationEvent&) = default;
};

/// Per-destination ordered list of equivalent places to fall back to.
using EquivalenceMap = std::map<Id, std::vector<Id>>;

struct RerouteRecord {
    Id event_id;
    Id from_destination_id;
    Id to_destination_id;

    friend bool operator==(const RerouteRecord&, const RerouteRecord&) = default;
};

struct EmptyPlan : Error {
    using Error::Error;
};
struct OverlappingWindows : Error {
    using Error::Error;
};
struct DuplicateDestination : Error {
    using Error::Error;
};
struct PlanExhausted : Error {
    using Error::Error;
};
struct InvalidEquivalence : Error {
    using Error::Error;
};

/// The dynamic itinerary of one collector: the working plan, the catalog
/// of known reroute targets, and the event/reroute history.
struct ItineraryState {
    Id mic_id;
    std::vector<Destination> destinations;  // working plan, order of visit
    std::size_t cursor = 0;                 // index of the next destination
    EquivalenceMap equivalences;
    std::vector<NavigationEvent> event_log;
    std::vector<RerouteRecord> reroute_log;
    std::map<Id, Destination> alternates;  // reroute targets outside the plan
    std::set<Id> activated;                // every id that has been current
    std::set<Id> blocked;                  // ids hit by a logged event

    friend bool operator==(const ItineraryState&, const ItineraryState&) = default;
};

namespace detail {

inline const Destination* find_destination(const ItineraryState& st, const Id& id) {
    for (const auto& d : st.destinations)
        if (d.destination_id == id) return &d;
    auto it = st.alternates.find(id);
    return it == st.alternates.end() ? nullptr : &it->second;
}

}  // namespace detail

/// Builds the static travel plan. Windows must be time ordered and
/// non-overlapping; equivalents must name known destinations and never the
/// destination itself.
inline ItineraryState plan_static(const Id& mic_id, std::vector<Destination> destinations,
                                  EquivalenceMap equivalences = {},
                                  std::vector<Destination> alternates = {}) {
    if (destinations.empty()) throw EmptyPlan("itinerary has no destinations");
    for (std::size_t i = 1; i < destinations.size(); ++i) {
        const TimeInterval& prev = destinations[i - 1].planned_window;
        const TimeInterval& cur = destinations[i].planned_window;
        if (prev.t_end >= cur.t_begin)
            throw OverlappingWindows("windows of " + destinations[i - 1].destination_id + " and " +
                                     destinations[i].destination_id + " overlap");
    }
    ItineraryState st;
    st.mic_id = mic_id;
    st.destinations = std::move(destinations);
    std::set<Id> ids;
    for (const auto& d : st.destinations)
        if (!ids.insert(d.destination_id).second)
            throw DuplicateDestination("destination " + d.destination_id + " appears twice");
    for (auto& alt : alternates) {
        if (!ids.insert(alt.destination_id).second)
            throw DuplicateDestination("destination " + alt.destination_id + " appears twice");
        st.alternates.emplace(alt.destination_id, std::move(alt));
    }
    st.equivalences = std::move(equivalences);
    for (const auto& [id, eqs] : st.equivalences) {
        for (const auto& eq : eqs) {
            if (eq == id) throw InvalidEquivalence(id + " lists itself as an equivalent");
            if (!detail::find_destination(st, eq))
                throw InvalidEquivalence("equivalent " + eq + " of " + id + " is unknown");
        }
    }
    st.cursor = 0;
    st.activated.insert(st.destinations.front().destination_id);
    return st;
}

/// Destination at the cursor, or none when the plan is complete.
inline std::optional<Destination> next_destination(const ItineraryState& st) {
    if (st.cursor >= st.destinations.size()) return std::nullopt;
    return st.destinations[st.cursor];
}

enum class EventOutcome {
    LoggedOnly,           // global event, or a non-current destination was blocked
    Rerouted,             // current destination replaced by an equivalent
    SkippedNoEquivalent,  // no equivalent left: tasks skipped, cursor advanced
};

struct ApplyEventResult {
    ItineraryState state;
    EventOutcome outcome = EventOutcome::LoggedOnly;

    friend bool operator==(const ApplyEventResult&, const ApplyEventResult&) = default;
};

namespace detail {

/// Move the cursor forward, skipping plan slots whose destination was
/// already active earlier (it was pulled forward by a reroute).
inline void advance_cursor(ItineraryState& st) {
    ++st.cursor;
    while (st.cursor < st.destinations.size() &&
           st.activated.count(st.destinations[st.cursor].destination_id))
        ++st.cursor;
    if (st.cursor < st.destinations.size())
        st.activated.insert(st.destinations[st.cursor].destination_id);
}

inline void skip_tasks(Destination& d) {
    for (auto& task : d.tasks)
        if (task.status == TaskStatus::Pending) task.status = TaskStatus::Skipped;
}

}  // namespace detail

/// Applies a navigation event. Targeted events block their destination;
/// when the target is the current destination the first equivalent that is
/// neither visited nor blocked substitutes for it. With no equivalent
/// available the destination's tasks are skipped and the cursor advances.
inline ApplyEventResult apply_event(const ItineraryState& state, const NavigationEvent& event) {
    ApplyEventResult res;
    res.state = state;
    ItineraryState& st = res.state;
    st.event_log.push_back(event);
    if (!event.at_destination_id) {
        res.outcome = EventOutcome::LoggedOnly;  // informational only
        return res;
    }
    const Id target = *event.at_destination_id;
    st.blocked.insert(target);
    if (st.cursor >= st.destinations.size() ||
        st.destinations[st.cursor].destination_id != target) {
        res.outcome = EventOutcome::LoggedOnly;
        return res;
    }

    Destination& current = st.destinations[st.cursor];
    const auto eq_it = st.equivalences.find(current.destination_id);
    if (eq_it != st.equivalences.end()) {
        for (const Id& candidate : eq_it->second) {
            if (st.activated.count(candidate) || st.blocked.count(candidate)) continue;
            const Destination* sub = detail::find_destination(st, candidate);
            if (!sub) continue;
            st.reroute_log.push_back(
                RerouteRecord{event.event_id, current.destination_id, candidate});
            current = *sub;
            st.activated.insert(candidate);
            res.outcome = EventOutcome::Rerouted;
            return res;
        }
    }

    // NoEquivalentAvailable: the destination is skipped rather than
    // aborting the itinerary.
    detail::skip_tasks(current);
    detail::advance_cursor(st);
    res.outcome = EventOutcome::SkippedNoEquivalent;
    return res;
}

/// Marks the listed tasks of the current destination Done and moves on.
inline ItineraryState advance_itinerary(const ItineraryState& state,
                                         const std::set<Id>& completed_tasks) {
    if (state.cursor >= state.destinations.size())
        throw PlanExhausted("advance past the end of the plan");
    ItineraryState st = state;
    for (auto& task : st.destinations[st.cursor].tasks)
        if (task.status == TaskStatus::Pending && completed_tasks.count(task.task_id))
            task.status = TaskStatus::Done;
    detail::advance_cursor(st);
    return st;
}

}  // namespace tdw
