#pragma once

#include <set>
#include <vector>

#include "retdes/generator.hpp"
#include "retdes/reconfig.hpp"
#include "retdes/supervisor.hpp"

namespace retdes {

/// (G, TCRS, EV): plant, centralized supervisor, and the events the
/// localization is based on.
struct DecentralizationPackage {
    Generator plant;
    Supervisor supervisor;
    EventSet event_list;
};

/// Attaches the plant to the supervisor and checks EV against its alphabet.
/// An empty `event_list` selects every prohibitible or forcible event.
DecentralizationPackage make_package(Generator plant, Supervisor supervisor,
                                     EventSet event_list = {});

enum class ControllerKind { tick, event };

struct LocalController {
    Event owner = 0;
    ControllerKind kind = ControllerKind::event;
    Generator graph;
    /// Cell of every supervisor state.
    std::vector<State> cell_of;
};

struct LocalizedSupervisor {
    /// One per forcible event of EV, ascending by owner.
    std::vector<LocalController> tick_controllers;
    /// One per prohibitible event of EV, ascending by owner.
    std::vector<LocalController> event_controllers;
    Generator loc_p;
    Generator loc_c;
    Generator tdrs;
    bool fallback = false;
};

enum class Execution { serial, parallel };

/// Per-event local controllers from a greedy control congruence, checked
/// against L(G) meet L(TDRS) = L(TCRS) (closed and marked). Falls back to
/// copies of the full supervisor if the check fails.
LocalizedSupervisor timed_localize(const DecentralizationPackage& pkg,
                                   Execution exec = Execution::parallel);

/// Every controller is the full supervisor.
LocalizedSupervisor trivial_localization(const DecentralizationPackage& pkg);

/// Assembles loc_p, loc_c and tdrs from the controller lists.
void compose_localization(LocalizedSupervisor& loc);

/// Closed loop of the plant under TDRS: sync_product(G, TDRS).
Generator closed_loop(const DecentralizationPackage& pkg, const LocalizedSupervisor& loc);

bool verify_localization(const DecentralizationPackage& pkg, const LocalizedSupervisor& loc);

struct SolutionEquivalenceReport {
    std::set<std::vector<Event>> centralized;
    std::set<std::vector<Event>> decentralized;
    bool identical = false;
    State mapped_source = 0;
    State mapped_target = 0;
    bool reconfig_event_in_loc_p = false;
    bool reconfig_event_in_loc_c = false;
    /// Every centralized path, projected, ends where LOC^P enables sigma_r.
    bool eligible_in_loc_p = false;
    bool eligible_in_loc_c = false;
    /// Every centralized path continues a string of L(TDRS).
    bool paths_in_tdrs = false;

    bool holds() const {
        return identical && eligible_in_loc_p && eligible_in_loc_c && paths_in_tdrs;
    }
};

/// Supervisor realized by the localization acting on the plant, together
/// with the map from TCRS states to its states.
struct ClosedLoopCorrespondence {
    Supervisor supervisor;
    std::vector<State> image;
};

/// Throws Error("correspondence not established") if a TCRS string is
/// missing from the closed loop or a TCRS state maps to two states.
ClosedLoopCorrespondence correspond(const DecentralizationPackage& pkg,
                                    const LocalizedSupervisor& loc);

SolutionEquivalenceReport verify_solution_equivalence(const DecentralizationPackage& pkg,
                                                      const LocalizedSupervisor& loc,
                                                      const ReconfigProblem& problem);

/// Tick-projection commutativity on the decentralized supervisor.
CommutativityReport verify_projection_commutativity_decentralized(
    const DecentralizationPackage& pkg, const LocalizedSupervisor& loc,
    const ReconfigProblem& problem);

}  // namespace retdes
