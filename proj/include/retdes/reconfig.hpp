#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "retdes/event.hpp"
#include "retdes/generator.hpp"
#include "retdes/supervisor.hpp"

namespace retdes {

/// Drive the supervisor from `source` to `target`, where
/// `reconfig_event` is defined.
struct ReconfigProblem {
    State source = 0;
    State target = 0;
    Event reconfig_event = 0;
};

/// Throws Error if the target does not enable the reconfiguration event or
/// either state is not a reachable supervisor state.
void validate(const Supervisor& sup, const ReconfigProblem& problem);

/// Backtracking step test for the transition q' --e--> q: e is forcible, or
/// every other event leaving q' toward a state other than q is prohibitible.
/// tick counts as neither forcible nor prohibitible.
bool backtrackable(const Supervisor& sup, State from, Event e, State to);

/// Predecessor entries (q', e) of an anchor state that pass the
/// backtracking step test.
struct EligibilitySet {
    State anchor = 0;
    std::vector<std::pair<State, Event>> entries;  // sorted

    /// First components of the entries.
    std::set<State> selector() const;
};

EligibilitySet eligibility_set(const Supervisor& sup, State q);

/// Backtracking forcibility tree, rooted at the target. Each non-root node
/// is a predecessor of its parent through an eligibility-set entry; `label`
/// is the event leading from the node to its parent.
struct BftNode {
    State state;
    int parent;  // -1 for the root
    Event label;
    std::size_t depth;
};

struct Bft {
    std::vector<BftNode> nodes;  // parents precede children

    bool empty() const { return nodes.empty(); }
    std::size_t size() const { return nodes.size(); }
    std::vector<std::size_t> leaves() const;
};

inline constexpr std::size_t kDefaultBftNodeCap = 5'000'000;

/// Depth-first expansion from the target. A branch stops at the source,
/// or when no eligibility-set entry leads to a state not already on it.
Bft build_bft(const Supervisor& sup, const ReconfigProblem& problem,
              std::size_t node_cap = kDefaultBftNodeCap);

/// Largest subtree whose leaves all carry `source`; empty if none does.
Bft prune_to_pbft(const Bft& tree, State source);

std::set<State> attraction_field(const Bft& pbft);

enum class PathKind { direct, branching };

struct ForciblePath {
    std::vector<Event> events;
    PathKind kind = PathKind::direct;

    std::size_t length() const { return events.size(); }
    std::size_t ticks() const;
};

enum class SolveStatus { solved, unsolvable };

struct ForciblePathSet {
    SolveStatus status = SolveStatus::unsolvable;
    /// Sorted by length, then tick count, then event order.
    std::vector<ForciblePath> paths;
    std::set<State> attraction_field;
    std::size_t bft_nodes = 0;
    std::size_t pbft_nodes = 0;

    bool solved() const { return status == SolveStatus::solved; }
    std::set<std::vector<Event>> strings() const;
};

/// Timed reconfiguration solver: build the tree, prune it, read the direct
/// paths, then add the remaining simple paths through the attraction field
/// whose every step passes the backtracking test. Loops are excluded, so
/// the set is finite.
ForciblePathSet trs(const Supervisor& sup, const ReconfigProblem& problem,
                    std::size_t node_cap = kDefaultBftNodeCap);

enum class Optimality { min_ticks, min_length };

/// Throws Error("no solution") on an empty set.
const ForciblePath& select_optimal(const ForciblePathSet& set, Optimality criterion);

/// Comma separated labels, tick spelled `tick`; the empty path is "".
std::string format_path(std::span<const Event> path);
std::vector<Event> parse_path(const std::string& text);

struct CommutativityReport {
    /// Tick-erased images of the timed solutions.
    std::set<std::vector<Event>> project_after_solve;
    /// Solutions of the tick-projected problem.
    std::set<std::vector<Event>> solve_after_project;
    bool equal = false;
    double seconds_project_after_solve = 0;
    double seconds_solve_after_project = 0;
    State projected_source = 0;
    State projected_target = 0;
    std::size_t projected_states = 0;
    std::size_t projected_transitions = 0;
};

/// Maps a supervisor state to the projected state reached by the erased
/// image of its shortest access string. Throws Error("state lost under
/// projection") if that subset does not contain the state.
State project_state(const Generator& g, const Projection& proj, const EventSet& erase, State q);

/// Runs the solver before and after erasing tick and compares the two
/// tick-free string sets, timing each order.
CommutativityReport verify_projection_commutativity(const Supervisor& sup,
                                                    const ReconfigProblem& problem);

}  // namespace retdes
