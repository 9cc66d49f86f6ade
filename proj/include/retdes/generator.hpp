#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "retdes/event.hpp"

namespace retdes {

struct Transition {
    Event event;
    State target;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Finite deterministic generator (Q, Sigma, delta, q0, Qm).
///
/// States are dense indices. A generator with zero states represents the
/// empty language; every other generator has a valid initial state.
/// Outgoing transitions of a state are kept sorted by event label.
class Generator {
public:
    Generator() = default;
    Generator(std::size_t num_states, EventSet alphabet, State initial = 0);

    /// Generator with no states over the given alphabet.
    static Generator empty_language(EventSet alphabet);

    std::size_t size() const { return out_.size(); }
    bool empty() const { return out_.empty(); }
    State initial() const { return initial_; }
    const EventSet& alphabet() const { return alphabet_; }

    State add_state(bool marked = false);
    void add_transition(State from, Event event, State to);
    void set_marked(State s, bool marked = true);
    void add_event(Event e) { alphabet_.insert(e); }

    bool is_marked(State s) const { return marked_[s] != 0; }
    std::span<const Transition> out(State s) const { return out_[s]; }
    std::optional<State> next(State s, Event e) const;
    /// Replays a string from `from`; nullopt if it leaves the language.
    std::optional<State> run(State from, std::span<const Event> word) const;
    bool has_event(State s, Event e) const { return next(s, e).has_value(); }

    std::size_t num_transitions() const;
    std::vector<State> marked_states() const;

    friend bool operator==(const Generator&, const Generator&) = default;

private:
    void check_state(State s) const;

    std::vector<std::vector<Transition>> out_;
    std::vector<char> marked_;
    EventSet alphabet_;
    State initial_ = 0;
};

/// Synchronous composition: shared events synchronize, private events
/// interleave. Reachable part only, BFS numbering.
Generator sync_product(std::span<const Generator> components);
Generator sync_product(const Generator& a, const Generator& b);

/// Product over the union alphabet in which every event must be defined by
/// both operands. Equal alphabets give L(A) intersected with L(B).
Generator meet(const Generator& a, const Generator& b);

/// Same as meet, also returning the (a, b) state pair behind each state.
std::pair<Generator, std::vector<std::pair<State, State>>> meet_with_pairs(
    const Generator& a, const Generator& b);

struct Projection {
    Generator graph;
    /// Source states making up each subset state, sorted.
    std::vector<std::vector<State>> subsets;
};

/// Natural projection erasing `erase`, determinized by subset construction.
/// A subset state is marked iff it contains a marked state.
Projection project_with_subsets(const Generator& g, const EventSet& erase);
Generator project(const Generator& g, const EventSet& erase);

/// One marked state with a self-loop on every event of g's alphabet.
Generator allevents(const Generator& g);
Generator allevents(const EventSet& alphabet);

std::vector<bool> reachable_states(const Generator& g);
std::vector<bool> coreachable_states(const Generator& g);

/// Keeps the states flagged in `keep` that stay reachable through kept
/// states. BFS renumbering; the empty generator if the initial state is
/// dropped. `old_index`, when given, receives the source state of each
/// surviving state.
Generator restrict_states(const Generator& g, const std::vector<bool>& keep,
                          std::vector<State>* old_index = nullptr);

Generator trim(const Generator& g);
/// Reachable part in BFS order.
Generator canonical(const Generator& g);

bool is_nonblocking(const Generator& g);

/// L and Lm coincide. Throws Error if the alphabets differ.
bool language_equal(const Generator& a, const Generator& b);
/// L(a) is a subset of L(b) and Lm(a) is a subset of Lm(b).
bool language_included(const Generator& a, const Generator& b);

/// Shortest access string of every state, ties broken by event order.
std::vector<std::vector<Event>> access_strings(const Generator& g);

std::vector<Event> erase_events(std::span<const Event> word, const EventSet& erase);

/// Reverse adjacency: for each state the (source, event) pairs entering it.
std::vector<std::vector<std::pair<State, Event>>> predecessors(const Generator& g);

}  // namespace retdes
