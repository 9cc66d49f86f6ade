#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retdes/event.hpp"
#include "retdes/generator.hpp"
#include "retdes/timed_graph.hpp"

namespace retdes {

/// A supervisor realized as a trimmed product automaton.
///
/// When a plant is attached, each state records the plant state it tracks,
/// the prohibitible events it disables there, and whether it preempts tick.
struct Supervisor {
    Generator graph;
    EventTable events;
    std::vector<State> plant_state;
    std::vector<EventSet> disabled;
    std::vector<bool> tick_preempted;
    /// Timer annotations, present when the plant was a timed graph.
    std::vector<TimedState> timed_states;
    std::vector<Event> timed_events;

    /// Wraps an arbitrary generator; no plant information.
    static Supervisor from_generator(Generator g, EventTable events);

    bool has_plant() const { return plant_state.size() == graph.size() && !graph.empty(); }
    std::string describe(State s) const;
};

/// Computes plant_state, disabled and tick_preempted by walking the
/// supervisor against the plant. Throws Error if a supervisor string leaves
/// the plant or one supervisor state tracks two plant states.
void attach_plant(Supervisor& sup, const Generator& plant);

struct ControllabilityWitness {
    State candidate_state;
    State plant_state;
    Event event;
};

struct ControllabilityResult {
    bool controllable = true;
    std::optional<ControllabilityWitness> witness;
    explicit operator bool() const { return controllable; }
};

/// Timed controllability of L(candidate) with respect to the plant: at
/// every synchronized state every plant-eligible uncontrollable event stays
/// eligible, and tick may only be disabled where a forcible event is
/// eligible in the candidate.
ControllabilityResult controllable(const Generator& candidate, const Generator& plant,
                                   const EventTable& events);

/// Supremal controllable nonblocking sublanguage of E meet Lm(G), as the
/// greatest fixpoint over the states of meet(plant, spec). An empty
/// supervisor is a valid result.
Supervisor supcon(const Generator& plant, const Generator& spec, const EventTable& events);
Supervisor supcon(const TimedGenerator& plant, const Generator& spec);

struct TcrsResult {
    Generator mode_atg;
    TimedGenerator plant;
    Generator global_spec;
    Supervisor supervisor;
    std::vector<std::string> warnings;
};

/// compose(components..., R) -> timed_graph -> supcon(TTG, allevents(TTG) || E).
///
/// `reconfig_events` names the reconfiguration events; each must occur in
/// R and be prohibitible. Left empty, it defaults to the events of R that
/// no component uses.
TcrsResult synthesize_tcrs(std::span<const Generator> component_atgs,
                           const Generator& reconfig_spec, const Generator& behavioral_spec,
                           const EventTable& events, EventSet reconfig_events = {},
                           std::size_t state_cap = kDefaultStateCap);

/// Events of the reconfiguration spec that no component uses.
EventSet private_events(std::span<const Generator> component_atgs, const Generator& reconfig_spec);

}  // namespace retdes
