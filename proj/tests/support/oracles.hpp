#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "retdes/generator.hpp"
#include "retdes/reconfig.hpp"
#include "retdes/supervisor.hpp"
#include "retdes/timed_graph.hpp"

// Reference implementations for tests. They trade speed for obviousness and
// share no algorithmic code with the library routine they check.
namespace retdes::testkit {

using Word = std::vector<Event>;

/// Every string of L(g) (or Lm(g)) with at most max_len events.
std::set<Word> strings_upto(const Generator& g, std::size_t max_len, bool marked_only = false);

/// Closed and marked languages agree on all strings up to max_len.
bool bounded_equal(const Generator& a, const Generator& b, std::size_t max_len);

/// Supremal controllable nonblocking sublanguage by exhaustive search over
/// subsets of the plant x spec product states. Requires a product of at
/// most `max_states` states; nullopt otherwise.
std::optional<Generator> brute_force_supcon(const Generator& plant, const Generator& spec,
                                            const EventTable& events, std::size_t max_states = 16);

/// Forward enumeration of all simple source-to-target paths whose every
/// step is forcible or leaves only prohibitible alternatives.
std::set<Word> forward_paths(const Supervisor& sup, const ReconfigProblem& problem,
                             std::size_t cap = 2'000'000);

/// Walks the timed graph in lockstep with an elapsed-tick model of the ATG
/// (counters count ticks since enablement instead of counting down) and
/// reports the first disagreement: eligible sets, deadline soundness, bound
/// soundness, or a timed state reached under two elapsed-tick histories.
std::optional<std::string> check_timed_graph(const Generator& atg, const EventTable& events,
                                             const TimedGenerator& ttg);

/// Replays a path from the source and checks the solver's soundness
/// conditions. Returns a description of the first violation.
std::optional<std::string> check_path(const Supervisor& sup, const ReconfigProblem& problem,
                                      const std::set<State>& attraction_field, const Word& path);

}  // namespace retdes::testkit
