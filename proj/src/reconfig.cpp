#include "retdes/reconfig.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <deque>
#include <sstream>
#include <tuple>

namespace retdes {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Lambda sets of every state, computed once per solve.
std::vector<std::vector<std::pair<State, Event>>> all_eligibility_sets(const Supervisor& sup) {
    auto preds = predecessors(sup.graph);
    for (State q = 0; q < preds.size(); ++q) {
        auto& row = preds[q];
        std::erase_if(row, [&](const auto& entry) {
            return !backtrackable(sup, entry.first, entry.second, q);
        });
        std::sort(row.begin(), row.end());
    }
    return preds;
}

std::vector<Event> shortest_access_string(const Generator& g, State q) {
    const State unset = static_cast<State>(-1);
    std::vector<State> parent(g.size(), unset);
    std::vector<Event> via(g.size(), 0);
    std::deque<State> queue{g.initial()};
    parent[g.initial()] = g.initial();
    while (!queue.empty() && parent[q] == unset) {
        State s = queue.front();
        queue.pop_front();
        for (const auto& t : g.out(s))
            if (parent[t.target] == unset) {
                parent[t.target] = s;
                via[t.target] = t.event;
                queue.push_back(t.target);
            }
    }
    if (parent[q] == unset) throw Error("state " + std::to_string(q) + " is unreachable");
    std::vector<Event> word;
    for (State s = q; s != g.initial(); s = parent[s]) word.push_back(via[s]);
    std::reverse(word.begin(), word.end());
    return word;
}

}  // namespace

void validate(const Supervisor& sup, const ReconfigProblem& problem) {
    const auto& g = sup.graph;
    if (g.empty()) throw Error("the supervisor is empty");
    if (problem.source >= g.size() || problem.target >= g.size())
        throw Error("problem state out of range");
    auto reach = reachable_states(g);
    if (!reach[problem.source] || !reach[problem.target])
        throw Error("problem states must be reachable");
    if (!g.has_event(problem.target, problem.reconfig_event))
        throw Error("reconfiguration event " + event_name(problem.reconfig_event) +
                    " is not defined at the target state");
}

bool backtrackable(const Supervisor& sup, State from, Event e, State to) {
    if (sup.events.forcible(e)) return true;
    for (const auto& t : sup.graph.out(from))
        if (t.target != to && !sup.events.prohibitible(t.event)) return false;
    return true;
}

std::set<State> EligibilitySet::selector() const {
    std::set<State> out;
    for (const auto& [q, e] : entries) out.insert(q);
    return out;
}

EligibilitySet eligibility_set(const Supervisor& sup, State q) {
    if (q >= sup.graph.size()) throw Error("eligibility_set: unknown state");
    EligibilitySet set{q, {}};
    for (State p = 0; p < sup.graph.size(); ++p)
        for (const auto& t : sup.graph.out(p))
            if (t.target == q && backtrackable(sup, p, t.event, q)) set.entries.emplace_back(p, t.event);
    std::sort(set.entries.begin(), set.entries.end());
    return set;
}

std::vector<std::size_t> Bft::leaves() const {
    std::vector<bool> has_child(nodes.size(), false);
    for (const auto& n : nodes)
        if (n.parent >= 0) has_child[static_cast<std::size_t>(n.parent)] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!has_child[i]) out.push_back(i);
    return out;
}

Bft build_bft(const Supervisor& sup, const ReconfigProblem& problem, std::size_t node_cap) {
    validate(sup, problem);
    const auto lambda = all_eligibility_sets(sup);
    Bft tree;
    tree.nodes.push_back({problem.target, -1, 0, 0});
    if (problem.target == problem.source) return tree;

    struct Frame {
        std::size_t node;
        std::size_t next;
    };
    std::vector<bool> on_branch(sup.graph.size(), false);
    on_branch[problem.target] = true;
    std::vector<Frame> frames{{0, 0}};
    while (!frames.empty()) {
        Frame& f = frames.back();
        const BftNode cur = tree.nodes[f.node];
        const auto& entries = lambda[cur.state];
        if (f.next == entries.size()) {
            on_branch[cur.state] = false;
            frames.pop_back();
            continue;
        }
        auto [pred, event] = entries[f.next++];
        if (on_branch[pred]) continue;
        if (tree.nodes.size() >= node_cap)
            throw Error("build_bft: node cap of " + std::to_string(node_cap) + " exceeded");
        tree.nodes.push_back({pred, static_cast<int>(f.node), event, cur.depth + 1});
        if (pred == problem.source) continue;  // terminal case
        on_branch[pred] = true;
        frames.push_back({tree.nodes.size() - 1, 0});
    }
    return tree;
}

Bft prune_to_pbft(const Bft& tree, State source) {
    Bft out;
    if (tree.empty()) return out;
    const std::size_t n = tree.size();
    std::vector<bool> useful(n, false);
    std::vector<bool> has_child(n, false);
    for (std::size_t i = 1; i < n; ++i) has_child[static_cast<std::size_t>(tree.nodes[i].parent)] = true;
    for (std::size_t i = n; i-- > 0;) {
        if (tree.nodes[i].state == source && !has_child[i]) useful[i] = true;
        if (useful[i] && tree.nodes[i].parent >= 0) useful[static_cast<std::size_t>(tree.nodes[i].parent)] = true;
    }
    if (!useful[0]) return out;
    std::vector<int> renum(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!useful[i]) continue;
        BftNode node = tree.nodes[i];
        if (node.parent >= 0) node.parent = renum[static_cast<std::size_t>(node.parent)];
        renum[i] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(node);
    }
    return out;
}

std::set<State> attraction_field(const Bft& pbft) {
    std::set<State> z;
    for (const auto& n : pbft.nodes) z.insert(n.state);
    return z;
}

std::size_t ForciblePath::ticks() const {
    return static_cast<std::size_t>(std::count(events.begin(), events.end(), kTick));
}

std::set<std::vector<Event>> ForciblePathSet::strings() const {
    std::set<std::vector<Event>> out;
    for (const auto& p : paths) out.insert(p.events);
    return out;
}

ForciblePathSet trs(const Supervisor& sup, const ReconfigProblem& problem, std::size_t node_cap) {
    ForciblePathSet result;
    const Bft tree = build_bft(sup, problem, node_cap);
    const Bft pbft = prune_to_pbft(tree, problem.source);
    result.bft_nodes = tree.size();
    result.pbft_nodes = pbft.size();
    if (pbft.empty()) return result;
    result.status = SolveStatus::solved;
    result.attraction_field = attraction_field(pbft);

    // Direct paths: each source leaf read back to the root.
    std::set<std::vector<Event>> seen;
    for (std::size_t leaf : pbft.leaves()) {
        std::vector<Event> word;
        for (int i = static_cast<int>(leaf); pbft.nodes[static_cast<std::size_t>(i)].parent >= 0;
             i = pbft.nodes[static_cast<std::size_t>(i)].parent)
            word.push_back(pbft.nodes[static_cast<std::size_t>(i)].label);
        if (seen.insert(word).second) result.paths.push_back({std::move(word), PathKind::direct});
    }

    // Branching paths: forward simple paths confined to Z.
    const auto& z = result.attraction_field;
    const auto& g = sup.graph;
    std::vector<bool> on_path(g.size(), false);
    std::vector<Event> word;
    struct Frame {
        State state;
        std::size_t next;
    };
    std::vector<Frame> frames{{problem.source, 0}};
    on_path[problem.source] = true;
    std::size_t steps = 0;
    if (problem.source == problem.target) frames.clear();
    while (!frames.empty()) {
        Frame& f = frames.back();
        auto out = g.out(f.state);
        if (f.next == out.size()) {
            on_path[f.state] = false;
            frames.pop_back();
            if (!word.empty()) word.pop_back();
            continue;
        }
        const Transition t = out[f.next++];
        const State from = f.state;
        if (!z.count(t.target) || on_path[t.target] || !backtrackable(sup, from, t.event, t.target))
            continue;
        if (++steps > node_cap) throw Error("trs: branching search exceeded the node cap");
        word.push_back(t.event);
        if (t.target == problem.target) {
            if (seen.insert(word).second) result.paths.push_back({word, PathKind::branching});
            word.pop_back();
            continue;
        }
        on_path[t.target] = true;
        frames.push_back({t.target, 0});
    }

    std::sort(result.paths.begin(), result.paths.end(), [](const auto& a, const auto& b) {
        return std::make_tuple(a.length(), a.ticks(), std::cref(a.events)) <
               std::make_tuple(b.length(), b.ticks(), std::cref(b.events));
    });
    return result;
}

const ForciblePath& select_optimal(const ForciblePathSet& set, Optimality criterion) {
    if (set.paths.empty()) throw Error("no solution");
    auto key = [criterion](const ForciblePath& p) {
        return criterion == Optimality::min_ticks
                   ? std::make_tuple(p.ticks(), p.length(), std::cref(p.events))
                   : std::make_tuple(p.length(), p.ticks(), std::cref(p.events));
    };
    return *std::min_element(set.paths.begin(), set.paths.end(),
                             [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

std::string format_path(std::span<const Event> path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += ',';
        out += event_name(path[i]);
    }
    return out;
}

std::vector<Event> parse_path(const std::string& text) {
    std::vector<Event> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "tick") {
            out.push_back(kTick);
            continue;
        }
        Event v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || item.empty())
            throw Error("bad event token '" + item + "'");
        out.push_back(v);
    }
    return out;
}

State project_state(const Generator& g, const Projection& proj, const EventSet& erase, State q) {
    const auto word = erase_events(shortest_access_string(g, q), erase);
    auto image = proj.graph.run(proj.graph.initial(), word);
    if (!image || !std::binary_search(proj.subsets[*image].begin(), proj.subsets[*image].end(), q))
        throw Error("state lost under projection");
    return *image;
}

CommutativityReport verify_projection_commutativity(const Supervisor& sup,
                                                    const ReconfigProblem& problem) {
    validate(sup, problem);
    const EventSet ticks{kTick};
    CommutativityReport report;

    auto t0 = Clock::now();
    const auto timed = trs(sup, problem);
    if (!timed.solved()) throw Error("problem unsolvable on the timed side");
    for (const auto& p : timed.paths) report.project_after_solve.insert(erase_events(p.events, ticks));
    report.seconds_project_after_solve = seconds_since(t0);

    t0 = Clock::now();
    const Projection proj = project_with_subsets(sup.graph, ticks);
    const Supervisor projected = Supervisor::from_generator(proj.graph, sup.events);
    report.projected_source = project_state(sup.graph, proj, ticks, problem.source);
    report.projected_target = project_state(sup.graph, proj, ticks, problem.target);
    const auto untimed = trs(projected, {report.projected_source, report.projected_target,
                                         problem.reconfig_event});
    report.solve_after_project = untimed.strings();
    report.seconds_solve_after_project = seconds_since(t0);

    report.projected_states = proj.graph.size();
    report.projected_transitions = proj.graph.num_transitions();
    report.equal = report.project_after_solve == report.solve_after_project;
    return report;
}

}  // namespace retdes
