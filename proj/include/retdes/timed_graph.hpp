#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "retdes/event.hpp"
#include "retdes/generator.hpp"

namespace retdes {

/// Activity plus the countdown timer of every activity event.
struct TimedState {
    State activity = 0;
    /// Aligned with TimedGenerator::timed_events.
    std::vector<unsigned> timers;

    friend bool operator==(const TimedState&, const TimedState&) = default;
    friend auto operator<=>(const TimedState&, const TimedState&) = default;
};

/// Timed transition graph over Sigma_act plus tick.
struct TimedGenerator {
    Generator graph;
    EventTable events;
    /// The activity events carrying timers, ascending.
    std::vector<Event> timed_events;
    /// TimedState behind each graph state.
    std::vector<TimedState> states;

    unsigned timer(State s, Event e) const;
    std::string describe(State s) const;
};

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// Explicit-state timed graph of an activity transition graph.
///
/// Tick is eligible unless an enabled prospective event has reached timer 0;
/// it decrements the timers of enabled events (remote timers stop at 0).
/// A prospective event is eligible once its timer is at most u - l, a remote
/// one once its timer is 0. On an event, timers of events enabled both
/// before and after survive; all others, and the event's own, reset.
/// States whose activity is marked are marked.
TimedGenerator timed_graph(const Generator& atg, const EventTable& events,
                           std::size_t state_cap = kDefaultStateCap);

/// Events with a defined outgoing transition at `s`.
EventSet eligible(const TimedGenerator& ttg, State s);

}  // namespace retdes
