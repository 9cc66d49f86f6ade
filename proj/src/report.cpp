#include "retdes/report.hpp"

namespace retdes {

using nlohmann::json;

json path_json(std::span<const Event> path) {
    json arr = json::array();
    for (Event e : path) {
        if (e == kTick)
            arr.push_back("tick");
        else
            arr.push_back(e);
    }
    return arr;
}

namespace {

json string_set(const std::set<std::vector<Event>>& paths) {
    json arr = json::array();
    for (const auto& p : paths) arr.push_back(path_json(p));
    return arr;
}

}  // namespace

json to_json(const ForciblePathSet& set) {
    json j;
    j["status"] = set.solved() ? "solved" : "unsolvable";
    j["bft_nodes"] = set.bft_nodes;
    j["pbft_nodes"] = set.pbft_nodes;
    j["attraction_field"] = set.attraction_field;
    j["paths"] = json::array();
    for (const auto& p : set.paths)
        j["paths"].push_back({{"events", path_json(p.events)},
                              {"length", p.length()},
                              {"ticks", p.ticks()},
                              {"kind", p.kind == PathKind::direct ? "direct" : "branching"}});
    return j;
}

json to_json(const CommutativityReport& r) {
    return {{"equal", r.equal},
            {"project_after_solve", string_set(r.project_after_solve)},
            {"solve_after_project", string_set(r.solve_after_project)},
            {"seconds_project_after_solve", r.seconds_project_after_solve},
            {"seconds_solve_after_project", r.seconds_solve_after_project},
            {"projected_source", r.projected_source},
            {"projected_target", r.projected_target},
            {"projected_states", r.projected_states},
            {"projected_transitions", r.projected_transitions}};
}

json to_json(const SolutionEquivalenceReport& r) {
    return {{"identical", r.identical},
            {"centralized", string_set(r.centralized)},
            {"decentralized", string_set(r.decentralized)},
            {"mapped_source", r.mapped_source},
            {"mapped_target", r.mapped_target},
            {"reconfig_event_in_loc_p", r.reconfig_event_in_loc_p},
            {"reconfig_event_in_loc_c", r.reconfig_event_in_loc_c},
            {"eligible_in_loc_p", r.eligible_in_loc_p},
            {"eligible_in_loc_c", r.eligible_in_loc_c},
            {"paths_in_tdrs", r.paths_in_tdrs}};
}

std::string path_lines(const std::set<std::vector<Event>>& paths) {
    std::string out;
    for (const auto& p : paths) out += format_path(p) + "\n";
    return out;
}

}  // namespace retdes
