// Batch front end: every subcommand reads a scenario file and prints model
// blocks, paths or reports on stdout. Exit codes: 0 success, 1 error,
// 2 unsolvable reconfiguration problem.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "retdes/dot.hpp"
#include "retdes/localize.hpp"
#include "retdes/model.hpp"
#include "retdes/reconfig.hpp"
#include "retdes/report.hpp"
#include "retdes/supervisor.hpp"
#include "retdes/timed_graph.hpp"

using namespace retdes;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnsolvable = 2;

struct Output {
    std::string path;

    void write(const std::string& text) const {
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path);
        out << text;
    }
};

Generator compose_blocks(const ModelFile& model, const std::vector<std::string>& names) {
    if (names.empty()) throw Error("no blocks named");
    std::vector<Generator> parts;
    for (const auto& n : names) parts.push_back(model.at(n));
    return parts.size() == 1 ? parts.front() : sync_product(parts);
}

// Options shared by every command that synthesizes the supervisor itself.
struct Scenario {
    std::vector<std::string> components;
    std::string reconfig;
    std::vector<std::string> specs;
    std::vector<Event> reconfig_events;
    std::size_t state_cap = kDefaultStateCap;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--component", components, "Component ATG block (repeatable)")->required();
        cmd->add_option("--reconfig", reconfig, "Reconfiguration spec block R")->required();
        cmd->add_option("--spec", specs, "Behavioral spec block (repeatable; composed)")->required();
        cmd->add_option("--reconfig-events", reconfig_events,
                        "Reconfiguration events (default: events private to R)")
            ->delimiter(',');
        cmd->add_option("--state-cap", state_cap, "Timed graph state limit");
    }

    TcrsResult synthesize(const ModelFile& model) const {
        std::vector<Generator> parts;
        for (const auto& c : components) parts.push_back(model.at(c));
        const EventSet chosen(reconfig_events.begin(), reconfig_events.end());
        auto r = synthesize_tcrs(parts, model.at(reconfig), compose_blocks(model, specs), model.events,
                                 chosen, state_cap);
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
        return r;
    }
};

std::vector<std::string> timed_comments(const Supervisor& sup) {
    std::vector<std::string> out;
    for (State s = 0; s < sup.graph.size(); ++s) out.push_back(sup.describe(s));
    return out;
}

std::vector<std::string> timed_comments(const TimedGenerator& ttg) {
    std::vector<std::string> out;
    for (State s = 0; s < ttg.graph.size(); ++s) out.push_back(ttg.describe(s));
    return out;
}

std::string render_atg(const EventTable& events, const std::string& name, const Generator& g,
                       const std::vector<std::string>& comments = {}) {
    return render_events(events) + "\n" + render_block({name, BlockKind::atg, g}, comments);
}

// A state is an index or `@` followed by an access string from the initial
// state, e.g. `@tick,11,tick`.
State resolve_state(const Generator& g, const std::string& ref) {
    if (!ref.empty() && ref[0] == '@') {
        auto s = g.run(g.initial(), parse_path(ref.substr(1)));
        if (!s) throw Error("access string '" + ref.substr(1) + "' is not in the supervisor");
        return *s;
    }
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(ref, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (ref.empty() || used != ref.size()) throw Error("bad state reference '" + ref + "'");
    return static_cast<State>(v);
}

struct ProblemOptions {
    std::string from;
    std::string to;
    Event event = 0;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--from", from, "Source state: index or @access,string")->required();
        cmd->add_option("--to", to, "Target state: index or @access,string")->required();
        cmd->add_option("--event", event, "Reconfiguration event")->required();
    }

    ReconfigProblem resolve(const Generator& g) const {
        return {resolve_state(g, from), resolve_state(g, to), event};
    }
};

// Either a supervisor block stored in the file or one synthesized from a
// scenario.
struct SupervisorSource {
    std::string block;
    Scenario scenario;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--supervisor", block, "Supervisor block stored in the file");
        cmd->add_option("--component", scenario.components, "Component ATG block (repeatable)");
        cmd->add_option("--reconfig", scenario.reconfig, "Reconfiguration spec block R");
        cmd->add_option("--spec", scenario.specs, "Behavioral spec block (repeatable)");
        cmd->add_option("--reconfig-events", scenario.reconfig_events, "Reconfiguration events")
            ->delimiter(',');
        cmd->add_option("--state-cap", scenario.state_cap, "Timed graph state limit");
    }

    Supervisor load(const ModelFile& model) const {
        if (!block.empty()) return Supervisor::from_generator(model.at(block), model.events);
        if (scenario.components.empty() || scenario.reconfig.empty() || scenario.specs.empty())
            throw Error("give --supervisor, or --component, --reconfig and --spec");
        return scenario.synthesize(model).supervisor;
    }
};

void print_paths(const ForciblePathSet& set, std::optional<Optimality> optimal) {
    if (optimal) {
        const auto& best = select_optimal(set, *optimal);
        std::cout << format_path(best.events) << '\n';
    }
    for (const auto& p : set.paths) {
        if (optimal && &p == &select_optimal(set, *optimal)) continue;
        std::cout << format_path(p.events) << '\n';
    }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timed reconfiguration supervisors: synthesis, solving, localization"};
    app.require_subcommand(1);
    std::string file;
    Output out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "Scenario file")->required();
        cmd->add_option("-o,--output", out.path, "Write the result here instead of stdout");
    };

    // compose
    std::vector<std::string> blocks;
    std::string name = "G";
    std::string ttg_name = "TTG";
    std::string sup_name = "SUP";
    std::string tcrs_name = "TCRS";
    std::string proj_name;
    auto* compose_cmd = app.add_subcommand("compose", "Synchronous product of ATG blocks");
    add_common(compose_cmd);
    compose_cmd->add_option("--block", blocks, "Block to compose (repeatable)")->required();
    compose_cmd->add_option("--name", name, "Name of the result block");
    compose_cmd->callback([&] {
        auto model = load_model(file);
        out.write(render_atg(model.events, name, compose_blocks(model, blocks)));
    });

    // timed-graph
    std::size_t state_cap = kDefaultStateCap;
    auto* ttg_cmd = app.add_subcommand("timed-graph", "Timed transition graph of an ATG (composed if several)");
    add_common(ttg_cmd);
    ttg_cmd->add_option("--block", blocks, "ATG block (repeatable)")->required();
    ttg_cmd->add_option("--name", ttg_name, "Name of the result block");
    ttg_cmd->add_option("--state-cap", state_cap, "State limit");
    ttg_cmd->callback([&] {
        auto model = load_model(file);
        auto ttg = timed_graph(compose_blocks(model, blocks), model.events, state_cap);
        out.write(render_atg(model.events, ttg_name, ttg.graph, timed_comments(ttg)));
    });

    // supcon
    std::vector<std::string> plants;
    std::vector<std::string> specs;
    bool timed = false;
    auto* supcon_cmd = app.add_subcommand("supcon", "Supremal controllable nonblocking supervisor");
    add_common(supcon_cmd);
    supcon_cmd->add_option("--plant", plants, "Plant block (repeatable; composed)")->required();
    supcon_cmd->add_option("--spec", specs, "Spec block (repeatable; composed)")->required();
    supcon_cmd->add_flag("--timed", timed, "Build the timed graph of the plant first");
    supcon_cmd->add_option("--name", sup_name, "Name of the result block");
    supcon_cmd->callback([&] {
        auto model = load_model(file);
        Generator plant = compose_blocks(model, plants);
        Supervisor sup;
        if (timed) {
            sup = supcon(timed_graph(plant, model.events), compose_blocks(model, specs));
        } else {
            sup = supcon(plant, compose_blocks(model, specs), model.events);
        }
        if (sup.graph.empty()) std::cerr << "warning: no admissible behavior\n";
        out.write(render_atg(model.events, sup_name, sup.graph, timed_comments(sup)));
    });

    // synth-tcrs
    Scenario scenario;
    auto* synth_cmd = app.add_subcommand("synth-tcrs", "Timed centralized reconfiguration supervisor");
    add_common(synth_cmd);
    scenario.add_options(synth_cmd);
    synth_cmd->add_option("--name", tcrs_name, "Name of the result block");
    synth_cmd->callback([&] {
        auto model = load_model(file);
        auto r = scenario.synthesize(model);
        std::cerr << "timed graph: " << r.plant.graph.size() << " states, supervisor: "
                  << r.supervisor.graph.size() << " states\n";
        out.write(render_atg(model.events, tcrs_name, r.supervisor.graph, timed_comments(r.supervisor)));
    });

    // solve
    SupervisorSource solve_src;
    ProblemOptions problem_opts;
    std::string optimal;
    bool json = false;
    auto* solve_cmd = app.add_subcommand("solve", "Timed forcible paths from source to target");
    add_common(solve_cmd);
    solve_src.add_options(solve_cmd);
    problem_opts.add_options(solve_cmd);
    solve_cmd->add_option("--optimal", optimal, "Print the optimal path first")
        ->check(CLI::IsMember({"ticks", "length"}));
    solve_cmd->add_flag("--json", json, "JSON report");
    int solve_status = 0;
    solve_cmd->callback([&] {
        auto model = load_model(file);
        auto sup = solve_src.load(model);
        auto problem = problem_opts.resolve(sup.graph);
        auto set = trs(sup, problem);
        if (json) {
            auto j = to_json(set);
            if (set.solved() && !optimal.empty())
                j["optimal"] = path_json(
                    select_optimal(set, optimal == "ticks" ? Optimality::min_ticks : Optimality::min_length)
                        .events);
            std::cout << j.dump(2) << '\n';
        } else if (set.solved()) {
            std::optional<Optimality> opt;
            if (!optimal.empty()) opt = optimal == "ticks" ? Optimality::min_ticks : Optimality::min_length;
            print_paths(set, opt);
        } else {
            std::cout << "unsolvable\n";
        }
        if (!set.solved()) solve_status = kExitUnsolvable;
    });

    // project
    std::string block;
    std::vector<Event> erase{kTick};
    auto* project_cmd = app.add_subcommand("project", "Natural projection (tick erased by default)");
    add_common(project_cmd);
    project_cmd->add_option("--block", block, "Block to project")->required();
    project_cmd->add_option("--erase", erase, "Events to erase (0 is tick)")->delimiter(',');
    project_cmd->add_option("--name", proj_name, "Name of the result block");
    project_cmd->callback([&] {
        auto model = load_model(file);
        auto p = project(model.at(block), EventSet(erase.begin(), erase.end()));
        out.write(render_atg(model.events, proj_name.empty() ? "P" + block : proj_name, p));
    });

    // localize
    Scenario loc_scenario;
    std::vector<Event> event_list;
    std::optional<Event> loc_event;
    bool serial = false;
    auto* localize_cmd = app.add_subcommand("localize", "Local controllers of the synthesized supervisor");
    add_common(localize_cmd);
    loc_scenario.add_options(localize_cmd);
    localize_cmd->add_option("--events", event_list, "EV: events to localize for")->delimiter(',');
    localize_cmd->add_option("--event", loc_event, "Reconfiguration event the result must support");
    localize_cmd->add_flag("--serial", serial, "Build controllers on one thread");
    localize_cmd->callback([&] {
        auto model = load_model(file);
        if (loc_event && !(model.events.prohibitible(*loc_event) && model.events.forcible(*loc_event)))
            throw Error("reconfiguration event " + event_name(*loc_event) +
                        " must be both prohibitible and forcible for decentralized solving");
        auto r = loc_scenario.synthesize(model);
        auto pkg = make_package(r.plant.graph, r.supervisor,
                                EventSet(event_list.begin(), event_list.end()));
        auto loc = timed_localize(pkg, serial ? Execution::serial : Execution::parallel);
        if (loc.fallback) std::cerr << "warning: localization check failed; using full copies\n";
        std::string text = render_events(model.events);
        for (const auto& c : loc.tick_controllers)
            text += "\n" + render_block({"TICK" + std::to_string(c.owner), BlockKind::atg, c.graph});
        for (const auto& c : loc.event_controllers)
            text += "\n" + render_block({"LOC" + std::to_string(c.owner), BlockKind::atg, c.graph});
        out.write(text);
        std::cerr << "tdrs: " << loc.tdrs.size() << " states, verified: "
                  << yes_no(verify_localization(pkg, loc)) << '\n';
    });

    // verify-commutativity
    SupervisorSource comm_src;
    ProblemOptions comm_problem;
    auto* comm_cmd = app.add_subcommand("verify-commutativity",
                                        "Compare solving before and after erasing tick");
    add_common(comm_cmd);
    comm_src.add_options(comm_cmd);
    comm_problem.add_options(comm_cmd);
    comm_cmd->add_flag("--json", json, "JSON report");
    comm_cmd->callback([&] {
        auto model = load_model(file);
        auto sup = comm_src.load(model);
        auto report = verify_projection_commutativity(sup, comm_problem.resolve(sup.graph));
        if (json) {
            std::cout << to_json(report).dump(2) << '\n';
            return;
        }
        std::cout << "projected supervisor: " << report.projected_states << " states, "
                  << report.projected_transitions << " transitions\n"
                  << "solve then project: " << report.seconds_project_after_solve << " s, "
                  << report.project_after_solve.size() << " strings\n"
                  << "project then solve: " << report.seconds_solve_after_project << " s, "
                  << report.solve_after_project.size() << " strings\n"
                  << "equal: " << yes_no(report.equal) << '\n';
        if (!report.equal) {
            std::cout << "-- solve then project\n" << path_lines(report.project_after_solve);
            std::cout << "-- project then solve\n" << path_lines(report.solve_after_project);
        }
    });

    // verify-decentralized
    Scenario dec_scenario;
    ProblemOptions dec_problem;
    auto* dec_cmd = app.add_subcommand("verify-decentralized",
                                       "Compare centralized and localized solutions");
    add_common(dec_cmd);
    dec_scenario.add_options(dec_cmd);
    dec_problem.add_options(dec_cmd);
    dec_cmd->add_option("--events", event_list, "EV: events to localize for")->delimiter(',');
    dec_cmd->add_flag("--json", json, "JSON report");
    dec_cmd->callback([&] {
        auto model = load_model(file);
        if (!(model.events.prohibitible(dec_problem.event) && model.events.forcible(dec_problem.event)))
            throw Error("reconfiguration event " + event_name(dec_problem.event) +
                        " must be both prohibitible and forcible for decentralized solving");
        auto r = dec_scenario.synthesize(model);
        auto pkg = make_package(r.plant.graph, r.supervisor,
                                EventSet(event_list.begin(), event_list.end()));
        auto loc = timed_localize(pkg);
        auto problem = dec_problem.resolve(r.supervisor.graph);
        const bool lang = verify_localization(pkg, loc);
        auto eq = verify_solution_equivalence(pkg, loc, problem);
        auto comm = verify_projection_commutativity_decentralized(pkg, loc, problem);
        if (json) {
            nlohmann::json j;
            j["closed_loop_equal"] = lang;
            j["fallback"] = loc.fallback;
            j["solutions"] = to_json(eq);
            j["commutativity"] = to_json(comm);
            std::cout << j.dump(2) << '\n';
            return;
        }
        std::cout << "closed loop equals supervisor: " << yes_no(lang) << '\n'
                  << "fallback controllers: " << yes_no(loc.fallback) << '\n'
                  << "identical solutions: " << yes_no(eq.identical) << " ("
                  << eq.centralized.size() << " centralized, " << eq.decentralized.size()
                  << " decentralized)\n"
                  << "event enabled by LOC^P / LOC^C at path ends: " << yes_no(eq.eligible_in_loc_p)
                  << " / " << yes_no(eq.eligible_in_loc_c) << '\n'
                  << "paths in L(TDRS): " << yes_no(eq.paths_in_tdrs) << '\n'
                  << "projection commutes on TDRS: " << yes_no(comm.equal) << '\n';
    });

    // export-dot
    SupervisorSource dot_src;
    bool annotate = false;
    auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of a block or of the TCRS");
    add_common(dot_cmd);
    dot_cmd->add_option("--block", block, "Block to render");
    dot_src.add_options(dot_cmd);
    dot_cmd->add_flag("--timers", annotate, "Label TCRS states with activity and timers");
    dot_cmd->callback([&] {
        auto model = load_model(file);
        if (!block.empty()) {
            out.write(to_dot(model.at(block), block));
            return;
        }
        auto sup = dot_src.load(model);
        StateLabeler labeler;
        if (annotate) labeler = [&](State s) { return sup.describe(s); };
        out.write(to_dot(sup.graph, "TCRS", labeler));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return solve_status;
}
