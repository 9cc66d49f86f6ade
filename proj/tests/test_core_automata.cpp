#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "factory.hpp"
#include "oracles.hpp"
#include "random_models.hpp"
#include "retdes/dot.hpp"
#include "retdes/generator.hpp"

using namespace retdes;
using namespace retdes::testkit;

namespace {

Generator chain(std::initializer_list<Event> word, bool mark_end = true) {
    EventSet alphabet(word.begin(), word.end());
    Generator g(word.size() + 1, alphabet, 0);
    State s = 0;
    for (Event e : word) {
        g.add_transition(s, e, s + 1);
        ++s;
    }
    if (mark_end) g.set_marked(s);
    return g;
}

}  // namespace

TEST_CASE("generator rejects nondeterminism and foreign events") {
    Generator g(2, {1, 2}, 0);
    g.add_transition(0, 1, 1);
    CHECK_THROWS_AS(g.add_transition(0, 1, 0), Error);
    CHECK_THROWS_AS(g.add_transition(0, 7, 1), Error);
    CHECK_THROWS_AS(Generator(0, {}, 0), Error);
    CHECK(Generator::empty_language({1}).empty());
    CHECK(g.next(0, 1) == State{1});
    CHECK_FALSE(g.next(1, 1));
    CHECK(g.run(0, std::vector<Event>{1}) == State{1});
}

TEST_CASE("sync_product of a single component is the component") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        auto g = random_generator(rng, 5, {1, 2, 3});
        std::vector<Generator> one{g};
        CHECK(language_equal(sync_product(one), g));
    }
}

TEST_CASE("sync_product of an empty list is an error") {
    std::vector<Generator> none;
    CHECK_THROWS_WITH_AS(sync_product(none), "no components", Error);
}

TEST_CASE("disjoint two-state generators interleave into four states") {
    Generator a(2, {1}, 0);
    a.add_transition(0, 1, 1);
    a.set_marked(1);
    Generator b(2, {2}, 0);
    b.add_transition(0, 2, 1);
    b.set_marked(1);
    auto p = sync_product(a, b);
    CHECK(p.size() == 4);
    CHECK(p.num_transitions() == 4);
    CHECK(p.marked_states().size() == 1);
    // Brute force: strings are the shuffles of "1" and "2".
    std::set<Word> expected{{}, {1}, {2}, {1, 2}, {2, 1}};
    CHECK(strings_upto(p, 4) == expected);
    CHECK(strings_upto(p, 4, true) == std::set<Word>{{1, 2}, {2, 1}});
}

TEST_CASE("sync_product over shared events synchronizes") {
    auto a = chain({1, 2});
    auto b = chain({2, 3});
    auto p = sync_product(a, b);
    CHECK(strings_upto(p, 5, true) == std::set<Word>{{1, 2, 3}});
}

TEST_CASE("meet of chains sharing one event keeps the shared path") {
    // Both chains start with event 1; afterwards they disagree.
    Generator a(3, {1, 2, 3}, 0);
    a.add_transition(0, 1, 1);
    a.add_transition(1, 2, 2);
    a.set_marked(1);
    Generator b(3, {1, 2, 3}, 0);
    b.add_transition(0, 1, 1);
    b.add_transition(1, 3, 2);
    b.set_marked(1);
    auto m = meet(a, b);
    // Oracle: intersection of the enumerated languages.
    std::set<Word> both;
    auto la = strings_upto(a, 4);
    auto lb = strings_upto(b, 4);
    std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::inserter(both, both.end()));
    CHECK(strings_upto(m, 4) == both);
    CHECK(both == std::set<Word>{{}, {1}});
    CHECK(m.size() == 2);
}

TEST_CASE("meet with itself and with allevents is the identity") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        auto g = random_generator(rng, 6, {0, 1, 2, 3});
        CHECK(language_equal(meet(g, g), g));
        CHECK(language_equal(meet(g, allevents(g)), g));
    }
}

TEST_CASE("allevents has one marked state and a loop per event") {
    Generator one(1, {4}, 0);
    auto a = allevents(one);
    CHECK(a.size() == 1);
    CHECK(a.is_marked(0));
    CHECK(a.num_transitions() == 1);
    auto e = allevents(EventSet{});
    CHECK(e.size() == 1);
    CHECK(e.is_marked(0));
    CHECK(e.num_transitions() == 0);
}

TEST_CASE("allevents of the factory timed plant loops every event and tick") {
    auto f = load_factory();
    auto a = allevents(f.tcrs.plant.graph);
    CHECK(a.size() == 1);
    CHECK(a.num_transitions() == f.tcrs.plant.graph.alphabet().size());
    CHECK(a.has_event(0, kTick));
}

TEST_CASE("nonblocking") {
    Generator single(1, {}, 0);
    single.set_marked(0);
    CHECK(is_nonblocking(single));
    Generator dead(2, {1}, 0);
    dead.set_marked(0);
    dead.add_transition(0, 1, 1);
    CHECK_FALSE(is_nonblocking(dead));
}

TEST_CASE("language_equal") {
    Rng rng(13);
    auto g = random_generator(rng, 6, {1, 2, 3}, 0.5);
    CHECK(language_equal(g, g));
    // Remove one transition by rebuilding without it.
    Generator h(g.size(), g.alphabet(), g.initial());
    bool dropped = false;
    for (State s = 0; s < g.size(); ++s) {
        h.set_marked(s, g.is_marked(s));
        for (const auto& t : g.out(s)) {
            if (!dropped) {
                dropped = true;
                continue;
            }
            h.add_transition(s, t.event, t.target);
        }
    }
    REQUIRE(dropped);
    CHECK_FALSE(language_equal(g, h));
    CHECK_THROWS_AS(language_equal(g, Generator(1, {9}, 0)), Error);
}

TEST_CASE("language_equal agrees with bounded enumeration on random pairs") {
    Rng rng(14);
    int equal = 0;
    for (int i = 0; i < 200; ++i) {
        auto a = random_generator(rng, 3, {1, 2}, 0.5);
        auto b = random_generator(rng, 3, {1, 2}, 0.5);
        if (i % 2) {
            // Same automaton with its states listed in reverse.
            const State n = static_cast<State>(a.size());
            b = Generator(n, a.alphabet(), n - 1 - a.initial());
            for (State s = 0; s < n; ++s) {
                b.set_marked(n - 1 - s, a.is_marked(s));
                for (const auto& t : a.out(s)) b.add_transition(n - 1 - s, t.event, n - 1 - t.target);
            }
        }
        // Three-state generators are distinguished by strings of length <= 6.
        const bool oracle = bounded_equal(a, b, 6);
        CHECK(language_equal(a, b) == oracle);
        equal += oracle;
    }
    CHECK(equal >= 100);
}

TEST_CASE("projection with nothing erased preserves the language") {
    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        auto g = random_generator(rng, 1 + i % 9, {0, 1, 2, 3}, 0.4);
        CHECK(language_equal(project(g, {}), g));
    }
}

TEST_CASE("projection of tick sigma tick is epsilon and sigma") {
    auto g = chain({kTick, 5, kTick});
    auto p = project(g, {kTick});
    CHECK(strings_upto(p, 3) == std::set<Word>{{}, {5}});
    CHECK(p.alphabet() == EventSet{5});
}

TEST_CASE("projection agrees with an erased-closure simulation of the original") {
    Rng rng(16);
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 10) * 5;
        auto g = random_generator(rng, n, {0, 1, 2, 3}, 0.25);
        const EventSet erase{0, static_cast<Event>(1 + i % 3)};
        auto p = project(g, erase);

        // Nondeterministic reading of g: states reachable by some string
        // whose erased image is the word read so far.
        auto closure = [&](std::set<State> s) {
            std::vector<State> work(s.begin(), s.end());
            while (!work.empty()) {
                State x = work.back();
                work.pop_back();
                for (const auto& t : g.out(x))
                    if (erase.count(t.event) && s.insert(t.target).second) work.push_back(t.target);
            }
            return s;
        };
        auto read = [&](const Word& w) {
            auto s = closure({g.initial()});
            for (Event e : w) {
                std::set<State> next;
                for (State x : s)
                    if (auto y = g.next(x, e)) next.insert(*y);
                s = closure(next);
            }
            return s;
        };
        for (const auto& w : strings_upto(p, 5)) {
            auto s = read(w);
            CHECK_FALSE(s.empty());
            const bool marked = std::any_of(s.begin(), s.end(), [&](State x) { return g.is_marked(x); });
            CHECK(p.is_marked(*p.run(p.initial(), w)) == marked);
        }
        for (const auto& w : strings_upto(g, 6)) CHECK(p.run(p.initial(), erase_events(w, erase)));
    }
}

TEST_CASE("projected marking is the existential subset marking") {
    Generator g(3, {0, 1}, 0);
    g.add_transition(0, 0, 1);
    g.add_transition(0, 1, 2);
    g.set_marked(1);
    auto pr = project_with_subsets(g, {0});
    CHECK(pr.graph.is_marked(pr.graph.initial()));
    CHECK(pr.subsets[0] == std::vector<State>{0, 1});
}

TEST_CASE("sync_product is associative up to language") {
    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
        auto a = random_generator(rng, 3, {1, 2});
        auto b = random_generator(rng, 3, {2, 3});
        auto c = random_generator(rng, 3, {3, 1, 4});
        std::vector<Generator> parts{a, b, c};
        auto reference = sync_product(sync_product(a, b), c);
        std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
            return x.alphabet() < y.alphabet();
        });
        do {
            auto left = sync_product(sync_product(parts[0], parts[1]), parts[2]);
            auto right = sync_product(parts[0], sync_product(parts[1], parts[2]));
            CHECK(language_equal(left, reference));
            CHECK(language_equal(right, reference));
            CHECK(language_equal(sync_product(parts), reference));
        } while (std::next_permutation(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
            return x.alphabet() < y.alphabet();
        }));
    }
}

TEST_CASE("trim") {
    Generator g(4, {1, 2}, 0);
    g.add_transition(0, 1, 1);
    g.add_transition(1, 2, 0);
    g.add_transition(0, 2, 2);  // dead end
    g.set_marked(0);
    // state 3 is unreachable
    auto t = trim(g);
    CHECK(t.size() == 2);
    CHECK(is_nonblocking(t));
    CHECK(strings_upto(t, 6, true) == strings_upto(g, 6, true));
    CHECK(language_equal(trim(t), t));
    CHECK(trim(t) == t);
}

TEST_CASE("trim keeps the marked language on random generators") {
    Rng rng(18);
    for (int i = 0; i < 100; ++i) {
        auto g = random_generator(rng, 6, {1, 2, 3}, 0.3, 0.2);
        auto t = trim(g);
        CHECK(t.size() <= g.size());
        CHECK(strings_upto(t, 7, true) == strings_upto(g, 7, true));
        if (!t.empty()) CHECK(is_nonblocking(t));
    }
}

TEST_CASE("access strings are shortest and replay to their state") {
    Rng rng(19);
    auto g = random_generator(rng, 12, {1, 2, 3});
    auto acc = access_strings(g);
    for (State s = 0; s < g.size(); ++s) {
        CHECK(g.run(g.initial(), acc[s]) == s);
        for (const auto& w : strings_upto(g, acc[s].size() - (acc[s].empty() ? 0 : 1)))
            if (w.size() < acc[s].size()) CHECK(g.run(g.initial(), w) != s);
    }
}

TEST_CASE("dot export lists states in index order") {
    auto g = chain({1, 2});
    std::string dot = to_dot(g, "chain", [](State s) { return s == 2 ? "end" : ""; });
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    auto first = dot.find("0 -> 1");
    auto second = dot.find("1 -> 2");
    CHECK(first != std::string::npos);
    CHECK(second != std::string::npos);
    CHECK(first < second);
    CHECK(dot.find("end") != std::string::npos);
}
