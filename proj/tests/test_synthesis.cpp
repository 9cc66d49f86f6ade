#include "doctest.h"
#include "factory.hpp"
#include "oracles.hpp"
#include "random_models.hpp"
#include "retdes/supervisor.hpp"

using namespace retdes;
using namespace retdes::testkit;

namespace {

EventTable table(std::initializer_list<std::tuple<Event, Control, bool>> rows) {
    EventTable t;
    for (auto [label, control, forcible] : rows) {
        EventDef d;
        d.label = label;
        d.control = control;
        d.forcible = forcible;
        t.add(d);
    }
    return t;
}

constexpr auto hib = Control::prohibitible;
constexpr auto unc = Control::uncontrollable;

// 0 -1-> 1 -2(unc)-> 2 (dead end), 1 -3-> 0, 0 -4-> 3 -5-> 4 -6-> 0; 0 marked.
Generator bad_branch_plant() {
    Generator g(5, {1, 2, 3, 4, 5, 6}, 0);
    g.add_transition(0, 1, 1);
    g.add_transition(1, 2, 2);
    g.add_transition(1, 3, 0);
    g.add_transition(0, 4, 3);
    g.add_transition(3, 5, 4);
    g.add_transition(4, 6, 0);
    g.set_marked(0);
    return g;
}

EventTable bad_branch_events() {
    return table({{1, hib, false}, {2, unc, false}, {3, hib, false},
                  {4, hib, false}, {5, hib, false}, {6, hib, false}});
}

}  // namespace

TEST_CASE("the plant is controllable with respect to itself") {
    auto plant = bad_branch_plant();
    CHECK(controllable(plant, plant, bad_branch_events()));
}

TEST_CASE("dropping an uncontrollable transition is uncontrollable") {
    auto plant = bad_branch_plant();
    Generator cand(2, plant.alphabet(), 0);
    cand.add_transition(0, 1, 1);
    cand.add_transition(1, 3, 0);
    auto r = controllable(cand, plant, bad_branch_events());
    CHECK_FALSE(r);
    REQUIRE(r.witness);
    CHECK(r.witness->event == 2);
    CHECK(r.witness->plant_state == 1);
}

TEST_CASE("tick may only be disabled where a forcible event is eligible") {
    // Plant: 0 -tick-> 1, 0 -7-> 2. The candidate keeps only 7.
    Generator plant(3, {kTick, 7}, 0);
    plant.add_transition(0, kTick, 1);
    plant.add_transition(0, 7, 2);
    Generator cand(2, {kTick, 7}, 0);
    cand.add_transition(0, 7, 1);

    auto r = controllable(cand, plant, table({{7, hib, false}}));
    CHECK_FALSE(r);
    REQUIRE(r.witness);
    CHECK(r.witness->event == kTick);
    CHECK(r.witness->plant_state == 0);

    CHECK(controllable(cand, plant, table({{7, hib, true}})));
    // Forcible but not eligible in the candidate does not help.
    Generator idle(1, {kTick, 7}, 0);
    CHECK_FALSE(controllable(idle, plant, table({{7, hib, true}})));
}

TEST_CASE("supcon with an all-events spec keeps a nonblocking plant") {
    Generator plant(3, {kTick, 1, 2}, 0);
    plant.add_transition(0, 1, 1);
    plant.add_transition(1, kTick, 2);
    plant.add_transition(2, 2, 0);
    plant.add_transition(0, kTick, 0);
    plant.set_marked(0);
    auto sup = supcon(plant, allevents(plant), table({{1, hib, false}, {2, unc, false}}));
    CHECK(language_equal(sup.graph, plant));
    CHECK(sup.has_plant());
}

TEST_CASE("supcon with an empty spec is empty") {
    auto plant = bad_branch_plant();
    auto sup = supcon(plant, Generator::empty_language(plant.alphabet()), bad_branch_events());
    CHECK(sup.graph.empty());
    CHECK_FALSE(sup.has_plant());
}

TEST_CASE("supcon disables the controllable entry to an uncontrollable bad branch") {
    auto plant = bad_branch_plant();
    auto events = bad_branch_events();
    auto sup = supcon(plant, allevents(plant), events);
    CHECK(sup.graph.size() == 3);
    CHECK_FALSE(sup.graph.has_event(0, 1));
    CHECK(sup.disabled[0] == EventSet{1});
    auto oracle = brute_force_supcon(plant, allevents(plant), events);
    REQUIRE(oracle);
    CHECK(language_equal(sup.graph, *oracle));
    CHECK(strings_upto(sup.graph, 6, true) == std::set<Word>{{}, {4, 5, 6}, {4, 5, 6, 4, 5, 6}});
}

TEST_CASE("supcon matches the brute-force supremal sublanguage on small instances") {
    Rng rng(31);
    int nonempty = 0;
    for (int i = 0; i < 150; ++i) {
        EventShape shape;
        shape.count = 3;
        auto events = random_events(rng, shape);
        EventSet alphabet{kTick, 1, 2, 3};
        auto plant = random_generator(rng, 2 + static_cast<std::size_t>(i % 5), alphabet, 0.35, 0.4);
        auto spec = random_generator(rng, 2, alphabet, 0.6, 0.6);
        auto oracle = brute_force_supcon(plant, spec, events, 16);
        if (!oracle) continue;
        auto sup = supcon(plant, spec, events);
        CHECK(language_equal(sup.graph, *oracle));
        nonempty += !sup.graph.empty();
    }
    CHECK(nonempty > 5);
}

TEST_CASE("supcon output is controllable, nonblocking and idempotent") {
    Rng rng(32);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        auto inst = random_timed_instance(rng, InstanceShape{});
        if (!inst) continue;
        ++checked;
        const auto& sup = inst->supervisor;
        CHECK(controllable(sup.graph, inst->plant.graph, inst->events));
        CHECK(is_nonblocking(sup.graph));
        CHECK(language_included(sup.graph, inst->plant.graph));
        auto again = supcon(inst->plant, sup.graph);
        CHECK(language_equal(again.graph, sup.graph));
    }
    CHECK(checked > 50);
}

TEST_CASE("supcon is monotone in the spec") {
    Rng rng(33);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        auto inst = random_timed_instance(rng, InstanceShape{});
        if (!inst) continue;
        auto extra = random_generator(rng, 3, inst->spec.alphabet(), 0.8, 0.7);
        auto smaller = meet(inst->spec, extra);
        if (smaller.empty()) continue;
        REQUIRE(language_included(smaller, inst->spec));
        auto s1 = supcon(inst->plant, smaller);
        auto s2 = supcon(inst->plant, inst->spec);
        if (s1.graph.empty()) continue;
        CHECK(language_included(s1.graph, s2.graph));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("control data records disabled events and tick preemption") {
    Rng rng(34);
    for (int i = 0; i < 40; ++i) {
        auto inst = random_timed_instance(rng, InstanceShape{});
        if (!inst) continue;
        const auto& sup = inst->supervisor;
        REQUIRE(sup.has_plant());
        for (State s = 0; s < sup.graph.size(); ++s) {
            const State p = sup.plant_state[s];
            EventSet off;
            bool tick_off = false;
            for (const auto& t : inst->plant.graph.out(p)) {
                if (sup.graph.has_event(s, t.event)) continue;
                if (t.event == kTick)
                    tick_off = true;
                else
                    off.insert(t.event);
            }
            CHECK(sup.disabled[s] == off);
            CHECK(sup.tick_preempted[s] == tick_off);
            CHECK(sup.timed_states[s] == inst->plant.states[p]);
        }
    }
}

TEST_CASE("TCRS of one component under permissive specs is its timed graph") {
    auto f = load_factory();
    const Generator& m1 = f.model.at("M1");
    std::vector<Generator> parts{m1};
    auto r = synthesize_tcrs(parts, allevents(m1), allevents(EventSet{kTick, 11, 12, 13}), f.model.events);
    auto ttg = timed_graph(m1, f.model.events);
    CHECK(language_equal(r.supervisor.graph, ttg.graph));
    CHECK(r.warnings.empty());
}

TEST_CASE("synthesize_tcrs checks the reconfiguration events") {
    auto f = load_factory();
    const auto& R = f.model.at("R");
    CHECK(private_events(f.components, R) == EventSet{30, 31, 32, 33, 91});
    CHECK_THROWS_WITH_AS(synthesize_tcrs(f.components, R, f.spec, f.model.events, {13}),
                         doctest::Contains("does not occur in R"), Error);
    CHECK_THROWS_WITH_AS(synthesize_tcrs(f.components, R, f.spec, f.model.events, {32}),
                         doctest::Contains("must be prohibitible"), Error);
    EventTable partial;
    for (const auto& [label, d] : f.model.events.defs())
        if (label != 91) partial.add(d);
    CHECK_THROWS_WITH_AS(synthesize_tcrs(f.components, R, f.spec, partial, {91}),
                         doctest::Contains("no event definition"), Error);
}

TEST_CASE("an unsatisfiable spec yields an empty TCRS with a warning") {
    auto f = load_factory();
    auto r = synthesize_tcrs(f.components, f.model.at("R"), Generator::empty_language(f.spec.alphabet()),
                             f.model.events, {91});
    CHECK(r.supervisor.graph.empty());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0] == "no admissible behavior");
}

TEST_CASE("factory TCRS is nonblocking and controllable") {
    auto f = load_factory();
    const auto& sup = f.tcrs.supervisor;
    REQUIRE_FALSE(sup.graph.empty());
    CHECK(is_nonblocking(sup.graph));
    CHECK(controllable(sup.graph, f.tcrs.plant.graph, f.model.events));

    // Every string up to depth 8 extends to a marked string: search forward
    // from each end state with a plain BFS.
    std::map<State, bool> reaches;
    auto reaches_marked = [&](State from) {
        auto [it, fresh] = reaches.try_emplace(from, false);
        if (!fresh) return it->second;
        std::vector<bool> seen(sup.graph.size(), false);
        std::vector<State> queue{from};
        seen[from] = true;
        for (std::size_t i = 0; i < queue.size(); ++i) {
            if (sup.graph.is_marked(queue[i])) return it->second = true;
            for (const auto& t : sup.graph.out(queue[i]))
                if (!seen[t.target]) {
                    seen[t.target] = true;
                    queue.push_back(t.target);
                }
        }
        return false;
    };
    for (const auto& w : strings_upto(sup.graph, 8)) CHECK(reaches_marked(*sup.graph.run(0, w)));
}
