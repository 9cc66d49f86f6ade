#include "random_models.hpp"

#include <algorithm>
#include <vector>

namespace retdes::testkit {

namespace {

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

EventTable random_events(Rng& rng, const EventShape& shape) {
    EventTable table;
    for (std::size_t i = 1; i <= shape.count; ++i) {
        EventDef d;
        d.label = static_cast<Event>(i);
        d.control = chance(rng, shape.prohibitible) ? Control::prohibitible : Control::uncontrollable;
        d.forcible = chance(rng, shape.forcible);
        d.lower = static_cast<unsigned>(pick(rng, shape.max_bound + 1));
        if (!chance(rng, shape.remote))
            d.upper = d.lower + static_cast<unsigned>(pick(rng, shape.max_bound - d.lower + 1));
        table.add(d);
    }
    return table;
}

Generator random_generator(Rng& rng, std::size_t states, const EventSet& alphabet,
                           double extra_density, double marked) {
    Generator g(states, alphabet, 0);
    if (alphabet.empty()) {
        g.set_marked(0);
        return g;
    }
    const std::vector<Event> events(alphabet.begin(), alphabet.end());
    auto try_add = [&](State from, State to) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Event e = events[pick(rng, events.size())];
            if (!g.next(from, e)) {
                g.add_transition(from, e, to);
                return true;
            }
        }
        return false;
    };
    // Spanning tree: every state after the first hangs off an earlier one.
    std::size_t linked = 1;
    for (State s = 1; s < states; ++s, ++linked) {
        std::vector<State> open;
        for (State p = 0; p < s; ++p)
            if (g.out(p).size() < events.size()) open.push_back(p);
        if (open.empty()) break;
        State parent = open[pick(rng, open.size())];
        while (!try_add(parent, s)) {
        }
    }
    if (linked < states) {
        std::vector<bool> keep(states, false);
        std::fill(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(linked), true);
        g = restrict_states(g, keep);
        states = linked;
    }
    const auto extra = static_cast<std::size_t>(extra_density * static_cast<double>(states * events.size()));
    for (std::size_t i = 0; i < extra; ++i)
        try_add(static_cast<State>(pick(rng, states)), static_cast<State>(pick(rng, states)));
    bool any = false;
    for (State s = 0; s < states; ++s)
        if (chance(rng, marked)) {
            g.set_marked(s);
            any = true;
        }
    if (!any) g.set_marked(static_cast<State>(pick(rng, states)));
    return g;
}

std::optional<TimedInstance> random_timed_instance(Rng& rng, const InstanceShape& shape) {
    TimedInstance inst;
    inst.events = random_events(rng, shape.events);
    EventSet labels;
    for (const auto& [label, d] : inst.events.defs()) labels.insert(label);
    inst.atg = random_generator(rng, shape.activities, labels, shape.density);
    inst.plant = timed_graph(inst.atg, inst.events);

    EventSet restricted;
    for (Event e : labels)
        if (inst.events.prohibitible(e)) restricted.insert(e);
    Generator spec = random_generator(rng, shape.spec_states, restricted, 0.6, 0.6);
    for (State s = 0; s < spec.size(); ++s) {
        spec.add_event(kTick);
        spec.add_transition(s, kTick, s);
        for (Event e : labels)
            if (!inst.events.prohibitible(e)) {
                spec.add_event(e);
                spec.add_transition(s, e, s);
            }
    }
    inst.spec = spec;
    inst.supervisor = supcon(inst.plant, inst.spec);
    if (inst.supervisor.graph.empty()) return std::nullopt;
    return inst;
}

std::optional<ReconfigProblem> random_problem(Rng& rng, const Supervisor& sup) {
    const Generator& g = sup.graph;
    if (g.empty()) return std::nullopt;
    std::vector<std::pair<State, Event>> targets;
    for (State s = 0; s < g.size(); ++s)
        for (const auto& t : g.out(s))
            if (t.event != kTick && sup.events.prohibitible(t.event)) targets.emplace_back(s, t.event);
    if (targets.empty()) return std::nullopt;
    auto [target, event] = targets[pick(rng, targets.size())];
    return ReconfigProblem{static_cast<State>(pick(rng, g.size())), target, event};
}

Supervisor random_supervisor(Rng& rng, std::size_t states, const EventShape& shape, double density) {
    EventTable events = random_events(rng, shape);
    EventSet alphabet{kTick};
    for (const auto& [label, d] : events.defs()) alphabet.insert(label);
    return Supervisor::from_generator(random_generator(rng, states, alphabet, density), events);
}

}  // namespace retdes::testkit
