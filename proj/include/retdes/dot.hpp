#pragma once

#include <functional>
#include <ostream>
#include <string>

#include "retdes/generator.hpp"

namespace retdes {

/// Optional extra text appended to a node label.
using StateLabeler = std::function<std::string(State)>;

/// Graphviz rendering: one node per state, double circle for marked states,
/// an arrow from an invisible point into the initial state. Nodes and edges
/// are emitted in index order.
void write_dot(std::ostream& os, const Generator& g, const std::string& name,
               const StateLabeler& labeler = {});

std::string to_dot(const Generator& g, const std::string& name, const StateLabeler& labeler = {});

}  // namespace retdes
