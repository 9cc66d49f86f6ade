#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "retdes/localize.hpp"
#include "retdes/reconfig.hpp"

namespace retdes {

/// Events as JSON values; tick becomes the string "tick".
nlohmann::json path_json(std::span<const Event> path);

nlohmann::json to_json(const ForciblePathSet& set);
nlohmann::json to_json(const CommutativityReport& report);
nlohmann::json to_json(const SolutionEquivalenceReport& report);

/// One path per line, `format_path` form.
std::string path_lines(const std::set<std::vector<Event>>& paths);

}  // namespace retdes
