#include "retdes/supervisor.hpp"

#include <map>
#include <sstream>

namespace retdes {

Supervisor Supervisor::from_generator(Generator g, EventTable events) {
    Supervisor s;
    s.graph = std::move(g);
    s.events = std::move(events);
    return s;
}

std::string Supervisor::describe(State s) const {
    if (s >= timed_states.size()) return {};
    const auto& ts = timed_states[s];
    std::ostringstream os;
    os << "a=" << ts.activity << " t=(";
    for (std::size_t i = 0; i < ts.timers.size(); ++i) {
        if (i) os << ',';
        os << timed_events[i] << ':' << ts.timers[i];
    }
    os << ')';
    return os.str();
}

namespace {

void fill_control_data(Supervisor& sup, const Generator& plant) {
    const std::size_t n = sup.graph.size();
    sup.disabled.assign(n, {});
    sup.tick_preempted.assign(n, false);
    for (State x = 0; x < n; ++x) {
        for (const auto& t : plant.out(sup.plant_state[x])) {
            if (sup.graph.has_event(x, t.event)) continue;
            if (t.event == kTick)
                sup.tick_preempted[x] = true;
            else if (sup.events.prohibitible(t.event))
                sup.disabled[x].insert(t.event);
        }
    }
}

}  // namespace

void attach_plant(Supervisor& sup, const Generator& plant) {
    sup.plant_state.clear();
    if (sup.graph.empty()) return;
    if (plant.empty()) throw Error("attach_plant: empty plant");
    const State unset = static_cast<State>(-1);
    std::vector<State> map(sup.graph.size(), unset);
    std::vector<State> stack{sup.graph.initial()};
    map[sup.graph.initial()] = plant.initial();
    while (!stack.empty()) {
        State x = stack.back();
        stack.pop_back();
        for (const auto& t : sup.graph.out(x)) {
            auto p = plant.next(map[x], t.event);
            if (!p) throw Error("attach_plant: supervisor string leaves the plant language");
            if (map[t.target] == unset) {
                map[t.target] = *p;
                stack.push_back(t.target);
            } else if (map[t.target] != *p) {
                throw Error("attach_plant: supervisor state " + std::to_string(t.target) +
                            " tracks two plant states");
            }
        }
    }
    for (State& m : map)
        if (m == unset) throw Error("attach_plant: supervisor has unreachable states");
    sup.plant_state = std::move(map);
    fill_control_data(sup, plant);
}

ControllabilityResult controllable(const Generator& candidate, const Generator& plant,
                                   const EventTable& events) {
    ControllabilityResult result;
    if (candidate.empty() || plant.empty()) return result;
    std::map<std::pair<State, State>, bool> seen;
    std::vector<std::pair<State, State>> stack{{candidate.initial(), plant.initial()}};
    seen[stack[0]] = true;
    while (!stack.empty()) {
        auto [c, p] = stack.back();
        stack.pop_back();
        bool tick_missing = false;
        for (const auto& t : plant.out(p)) {
            if (candidate.has_event(c, t.event)) continue;
            if (t.event == kTick) {
                tick_missing = true;
            } else if (!events.prohibitible(t.event)) {
                result.controllable = false;
                result.witness = ControllabilityWitness{c, p, t.event};
                return result;
            }
        }
        if (tick_missing) {
            bool forced = false;
            for (const auto& t : candidate.out(c))
                if (t.event != kTick && plant.has_event(p, t.event) && events.forcible(t.event))
                    forced = true;
            if (!forced) {
                result.controllable = false;
                result.witness = ControllabilityWitness{c, p, kTick};
                return result;
            }
        }
        for (const auto& t : candidate.out(c)) {
            auto np = plant.next(p, t.event);
            if (!np) continue;
            std::pair<State, State> key{t.target, *np};
            if (seen.emplace(key, true).second) stack.push_back(key);
        }
    }
    return result;
}

Supervisor supcon(const Generator& plant, const Generator& spec, const EventTable& events) {
    auto [product, pairs] = meet_with_pairs(plant, spec);
    Supervisor sup;
    sup.events = events;
    if (product.empty()) {
        sup.graph = Generator::empty_language(product.alphabet());
        return sup;
    }

    const std::size_t n = product.size();
    std::vector<bool> alive(n, true);
    auto keeps = [&](State x, Event e) {
        auto nx = product.next(x, e);
        return nx && alive[*nx];
    };
    auto preds = predecessors(product);

    for (bool changed = true; changed;) {
        changed = false;
        for (State x = 0; x < n; ++x) {
            if (!alive[x]) continue;
            const State p = pairs[x].first;
            bool bad = false;
            bool tick_lost = false;
            for (const auto& t : plant.out(p)) {
                if (keeps(x, t.event)) continue;
                if (t.event == kTick)
                    tick_lost = true;
                else if (!events.prohibitible(t.event))
                    bad = true;
            }
            if (!bad && tick_lost) {
                bool forced = false;
                for (const auto& t : product.out(x))
                    if (t.event != kTick && events.forcible(t.event) && alive[t.target]) forced = true;
                bad = !forced;
            }
            if (bad) {
                alive[x] = false;
                changed = true;
            }
        }

        std::vector<bool> coreach(n, false);
        std::vector<State> stack;
        for (State x = 0; x < n; ++x)
            if (alive[x] && product.is_marked(x)) {
                coreach[x] = true;
                stack.push_back(x);
            }
        while (!stack.empty()) {
            State x = stack.back();
            stack.pop_back();
            for (auto [p, e] : preds[x])
                if (alive[p] && !coreach[p]) {
                    coreach[p] = true;
                    stack.push_back(p);
                }
        }
        for (State x = 0; x < n; ++x)
            if (alive[x] && !coreach[x]) {
                alive[x] = false;
                changed = true;
            }
    }

    std::vector<State> origin;
    sup.graph = restrict_states(product, alive, &origin);
    sup.plant_state.resize(origin.size());
    for (std::size_t i = 0; i < origin.size(); ++i) sup.plant_state[i] = pairs[origin[i]].first;
    if (!sup.graph.empty()) fill_control_data(sup, plant);
    return sup;
}

Supervisor supcon(const TimedGenerator& plant, const Generator& spec) {
    Supervisor sup = supcon(plant.graph, spec, plant.events);
    sup.timed_events = plant.timed_events;
    for (State p : sup.plant_state) sup.timed_states.push_back(plant.states[p]);
    return sup;
}

EventSet private_events(std::span<const Generator> component_atgs, const Generator& reconfig_spec) {
    EventSet used;
    for (const auto& c : component_atgs) used.insert(c.alphabet().begin(), c.alphabet().end());
    EventSet out;
    for (Event e : reconfig_spec.alphabet())
        if (!used.count(e)) out.insert(e);
    return out;
}

TcrsResult synthesize_tcrs(std::span<const Generator> component_atgs,
                           const Generator& reconfig_spec, const Generator& behavioral_spec,
                           const EventTable& events, EventSet reconfig_events,
                           std::size_t state_cap) {
    if (reconfig_events.empty()) reconfig_events = private_events(component_atgs, reconfig_spec);
    for (Event e : reconfig_events) {
        if (!reconfig_spec.alphabet().count(e))
            throw Error("reconfiguration event " + event_name(e) + " does not occur in R");
        if (!events.contains(e))
            throw Error("reconfiguration event " + event_name(e) + " has no event definition");
        if (!events.prohibitible(e))
            throw Error("reconfiguration event " + event_name(e) + " must be prohibitible");
    }
    std::vector<Generator> parts(component_atgs.begin(), component_atgs.end());
    parts.push_back(reconfig_spec);

    TcrsResult r;
    r.mode_atg = sync_product(parts);
    r.plant = timed_graph(r.mode_atg, events, state_cap);
    const Generator spec_parts[] = {allevents(r.plant.graph), behavioral_spec};
    r.global_spec = sync_product(spec_parts);
    r.supervisor = supcon(r.plant, r.global_spec);
    if (r.supervisor.graph.empty()) r.warnings.push_back("no admissible behavior");
    return r;
}

}  // namespace retdes
