#include "retdes/timed_graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace retdes {

unsigned TimedGenerator::timer(State s, Event e) const {
    auto it = std::lower_bound(timed_events.begin(), timed_events.end(), e);
    if (it == timed_events.end() || *it != e) throw Error("event " + event_name(e) + " has no timer");
    return states.at(s).timers[static_cast<std::size_t>(it - timed_events.begin())];
}

std::string TimedGenerator::describe(State s) const {
    const auto& ts = states.at(s);
    std::ostringstream os;
    os << "a=" << ts.activity << " t=(";
    for (std::size_t i = 0; i < ts.timers.size(); ++i) {
        if (i) os << ',';
        os << timed_events[i] << ':' << ts.timers[i];
    }
    os << ')';
    return os.str();
}

TimedGenerator timed_graph(const Generator& atg, const EventTable& events, std::size_t state_cap) {
    if (atg.alphabet().count(kTick)) throw Error("timed_graph: tick must not appear in the ATG alphabet");
    TimedGenerator ttg;
    ttg.events = events;
    ttg.timed_events.assign(atg.alphabet().begin(), atg.alphabet().end());
    std::vector<EventDef> defs;
    for (Event e : ttg.timed_events) {
        if (!events.contains(e)) throw Error("timed_graph: missing event definition for " + event_name(e));
        defs.push_back(events.at(e));
    }
    EventSet alphabet = atg.alphabet();
    alphabet.insert(kTick);
    if (atg.empty()) {
        ttg.graph = Generator::empty_language(alphabet);
        return ttg;
    }

    const std::size_t n = defs.size();
    auto index_of = [&](Event e) {
        return static_cast<std::size_t>(
            std::lower_bound(ttg.timed_events.begin(), ttg.timed_events.end(), e) -
            ttg.timed_events.begin());
    };
    auto enabled_mask = [&](State activity) {
        std::vector<char> mask(n, 0);
        for (const auto& t : atg.out(activity)) mask[index_of(t.event)] = 1;
        return mask;
    };

    TimedState init{atg.initial(), std::vector<unsigned>(n)};
    for (std::size_t i = 0; i < n; ++i) init.timers[i] = defs[i].default_timer();

    std::map<TimedState, State> index{{init, 0}};
    ttg.states.push_back(init);
    ttg.graph = Generator(1, alphabet, 0);

    auto intern = [&](TimedState ts) {
        auto [it, fresh] = index.try_emplace(ts, static_cast<State>(ttg.states.size()));
        if (fresh) {
            if (ttg.states.size() >= state_cap)
                throw Error("timed_graph: state cap of " + std::to_string(state_cap) + " exceeded");
            ttg.states.push_back(std::move(ts));
            ttg.graph.add_state();
        }
        return it->second;
    };

    for (State cur = 0; cur < ttg.states.size(); ++cur) {
        const TimedState ts = ttg.states[cur];
        ttg.graph.set_marked(cur, atg.is_marked(ts.activity));
        const auto before = enabled_mask(ts.activity);

        bool tick_ok = true;
        for (std::size_t i = 0; i < n; ++i)
            if (before[i] && defs[i].prospective() && ts.timers[i] == 0) tick_ok = false;
        if (tick_ok) {
            TimedState next = ts;
            for (std::size_t i = 0; i < n; ++i) {
                if (before[i]) {
                    if (next.timers[i] > 0) --next.timers[i];
                } else {
                    next.timers[i] = defs[i].default_timer();
                }
            }
            ttg.graph.add_transition(cur, kTick, intern(std::move(next)));
        }

        for (const auto& t : atg.out(ts.activity)) {
            const std::size_t k = index_of(t.event);
            const EventDef& d = defs[k];
            const bool ok = d.prospective() ? ts.timers[k] <= *d.upper - d.lower : ts.timers[k] == 0;
            if (!ok) continue;
            const auto after = enabled_mask(t.target);
            TimedState next{t.target, ts.timers};
            for (std::size_t i = 0; i < n; ++i)
                if (i == k || !(before[i] && after[i])) next.timers[i] = defs[i].default_timer();
            ttg.graph.add_transition(cur, t.event, intern(std::move(next)));
        }
    }
    return ttg;
}

EventSet eligible(const TimedGenerator& ttg, State s) {
    if (s >= ttg.graph.size()) throw Error("eligible: unknown state " + std::to_string(s));
    EventSet out;
    for (const auto& t : ttg.graph.out(s)) out.insert(t.event);
    return out;
}

}  // namespace retdes
