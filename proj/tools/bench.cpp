// Timing harness: the factory pipeline, both orders of solving and
// projecting, and serial against parallel localization (whose results must
// be identical).
#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "factory.hpp"
#include "json.hpp"
#include "random_models.hpp"
#include "retdes/localize.hpp"
#include "retdes/reconfig.hpp"

using namespace retdes;
using namespace retdes::testkit;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_once(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double median_time(int repeat, F&& f) {
    std::vector<double> t;
    for (int i = 0; i < repeat; ++i) t.push_back(time_once(f));
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

bool same(const LocalizedSupervisor& a, const LocalizedSupervisor& b) {
    auto graphs = [](const std::vector<LocalController>& cs) {
        std::vector<Generator> out;
        for (const auto& c : cs) out.push_back(c.graph);
        return out;
    };
    return a.tdrs == b.tdrs && a.fallback == b.fallback &&
           graphs(a.tick_controllers) == graphs(b.tick_controllers) &&
           graphs(a.event_controllers) == graphs(b.event_controllers);
}

struct LocalizeRow {
    std::string name;
    std::size_t states;
    double serial;
    double parallel;
    bool identical;
};

LocalizeRow bench_localize(const std::string& name, const DecentralizationPackage& pkg, int repeat) {
    LocalizedSupervisor s, p;
    const double ts = median_time(repeat, [&] { s = timed_localize(pkg, Execution::serial); });
    const double tp = median_time(repeat, [&] { p = timed_localize(pkg, Execution::parallel); });
    return {name, pkg.supervisor.graph.size(), ts, tp, same(s, p)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"retdes timing harness"};
    int repeat = 5;
    int instances = 10;
    unsigned seed = 7;
    bool json = false;
    app.add_option("--repeat", repeat, "Runs per measurement (median reported)")->check(CLI::PositiveNumber);
    app.add_option("--instances", instances, "Random supervisors of at least 200 states");
    app.add_option("--seed", seed, "Seed for the random instances");
    app.add_flag("--json", json, "Emit JSON instead of a table");
    CLI11_PARSE(app, argc, argv);

    nlohmann::json out;
#ifdef _OPENMP
    out["threads"] = omp_get_max_threads();
#else
    out["threads"] = 1;
#endif

    Factory f;
    out["factory"]["load_and_synthesize_s"] = time_once([&] { f = load_factory(); });
    out["factory"]["tcrs_states"] = f.tcrs.supervisor.graph.size();
    out["factory"]["trs_s"] = median_time(repeat, [&] { trs(f.tcrs.supervisor, f.problem); });
    auto comm = verify_projection_commutativity(f.tcrs.supervisor, f.problem);
    out["factory"]["solve_then_project_s"] = comm.seconds_project_after_solve;
    out["factory"]["project_then_solve_s"] = comm.seconds_solve_after_project;

    std::vector<LocalizeRow> rows;
    rows.push_back(bench_localize("factory", make_package(f.tcrs.plant.graph, f.tcrs.supervisor), repeat));

    Rng rng(seed);
    std::vector<double> ratios;
    for (int found = 0, attempts = 0; found < instances && attempts < 40000; ++attempts) {
        InstanceShape shape;
        shape.activities = 6 + attempts % 3;
        shape.events.count = 6;
        shape.events.max_bound = 4;
        auto inst = random_timed_instance(rng, shape);
        if (!inst || inst->supervisor.graph.size() < 200) continue;
        auto problem = random_problem(rng, inst->supervisor);
        if (!problem) continue;
        try {
            if (!trs(inst->supervisor, *problem).solved()) continue;
            auto r = verify_projection_commutativity(inst->supervisor, *problem);
            ratios.push_back(r.seconds_solve_after_project / std::max(r.seconds_project_after_solve, 1e-9));
        } catch (const Error&) {
            continue;
        }
        rows.push_back(bench_localize("random " + std::to_string(found), make_package(inst->plant.graph, inst->supervisor),
                                      repeat));
        ++found;
    }
    std::sort(ratios.begin(), ratios.end());
    out["random"]["instances"] = ratios.size();
    out["random"]["median_project_then_solve_over_solve_then_project"] =
        ratios.empty() ? 0.0 : ratios[ratios.size() / 2];

    bool all_identical = true;
    for (const auto& r : rows) {
        out["localize"].push_back({{"name", r.name},
                                   {"states", r.states},
                                   {"serial_s", r.serial},
                                   {"parallel_s", r.parallel},
                                   {"identical", r.identical}});
        all_identical = all_identical && r.identical;
    }

    if (json) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << "threads " << out["threads"] << "\n\n"
                  << "factory: TCRS " << f.tcrs.supervisor.graph.size() << " states, load+synthesize "
                  << out["factory"]["load_and_synthesize_s"] << " s, trs " << out["factory"]["trs_s"] << " s\n"
                  << "  solve then project " << comm.seconds_project_after_solve << " s, project then solve "
                  << comm.seconds_solve_after_project << " s\n"
                  << "random (" << ratios.size() << " instances): median project-then-solve / solve-then-project "
                  << out["random"]["median_project_then_solve_over_solve_then_project"] << "\n\n"
                  << std::left << std::setw(12) << "localize" << std::right << std::setw(8) << "states"
                  << std::setw(12) << "serial s" << std::setw(12) << "parallel s" << std::setw(11) << "identical"
                  << '\n';
        for (const auto& r : rows)
            std::cout << std::left << std::setw(12) << r.name << std::right << std::setw(8) << r.states
                      << std::setw(12) << std::setprecision(4) << r.serial << std::setw(12) << r.parallel
                      << std::setw(11) << (r.identical ? "yes" : "NO") << '\n';
    }
    return all_identical ? 0 : 1;
}
