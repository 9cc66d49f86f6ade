#include "retdes/localize.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace retdes {

namespace {

// Control data of one local controller, per supervisor state.
struct ControlFlags {
    bool enabled = false;   // the controlled action is allowed here
    bool disabled = false;  // the supervisor blocks it here
    bool marked_in_plant_and_sup = false;
    bool marked_in_plant_only = false;

    ControlFlags operator|(const ControlFlags& o) const {
        return {enabled || o.enabled, disabled || o.disabled,
                marked_in_plant_and_sup || o.marked_in_plant_and_sup,
                marked_in_plant_only || o.marked_in_plant_only};
    }
    bool consistent() const {
        return !(enabled && disabled) && !(marked_in_plant_and_sup && marked_in_plant_only);
    }
};

using SuccessorList = std::vector<std::pair<Event, State>>;

// Union-find over supervisor states whose classes stay closed under
// successors (a congruence). Merges are tentative and undone on conflict.
class ControlCongruence {
public:
    ControlCongruence(const Generator& g, std::vector<ControlFlags> flags)
        : parent_(g.size()), size_(g.size(), 1), flags_(std::move(flags)), succ_(g.size()) {
        for (State x = 0; x < g.size(); ++x) {
            parent_[x] = x;
            for (const auto& t : g.out(x)) succ_[x].emplace_back(t.event, t.target);
        }
    }

    State find(State x) const {
        while (parent_[x] != x) x = parent_[x];
        return x;
    }

    bool try_merge(State a, State b) {
        log_.clear();
        std::vector<std::pair<State, State>> queue{{a, b}};
        while (!queue.empty()) {
            auto [u, v] = queue.back();
            queue.pop_back();
            u = find(u);
            v = find(v);
            if (u == v) continue;
            if (size_[u] < size_[v]) std::swap(u, v);
            const ControlFlags merged = flags_[u] | flags_[v];
            if (!merged.consistent()) {
                rollback();
                return false;
            }
            log_.push_back({v, u, flags_[u], succ_[u], size_[u]});
            parent_[v] = u;
            flags_[u] = merged;
            size_[u] += size_[v];
            SuccessorList joined;
            auto& su = succ_[u];
            const auto& sv = succ_[v];
            std::size_t i = 0, j = 0;
            while (i < su.size() || j < sv.size()) {
                if (j == sv.size() || (i < su.size() && su[i].first < sv[j].first)) {
                    joined.push_back(su[i++]);
                } else if (i == su.size() || sv[j].first < su[i].first) {
                    joined.push_back(sv[j++]);
                } else {
                    queue.emplace_back(su[i].second, sv[j].second);
                    joined.push_back(su[i++]);
                    ++j;
                }
            }
            su = std::move(joined);
        }
        return true;
    }

private:
    struct Undo {
        State child;
        State root;
        ControlFlags flags;
        SuccessorList succ;
        std::size_t size;
    };

    void rollback() {
        for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
            parent_[it->child] = it->child;
            flags_[it->root] = it->flags;
            succ_[it->root] = std::move(it->succ);
            size_[it->root] = it->size;
        }
        log_.clear();
    }

    std::vector<State> parent_;
    std::vector<std::size_t> size_;
    std::vector<ControlFlags> flags_;
    std::vector<SuccessorList> succ_;
    std::vector<Undo> log_;
};

std::vector<ControlFlags> control_flags(const DecentralizationPackage& pkg, Event owner,
                                        ControllerKind kind, const std::vector<Event>& tick_owner) {
    const Supervisor& sup = pkg.supervisor;
    std::vector<ControlFlags> flags(sup.graph.size());
    for (State x = 0; x < sup.graph.size(); ++x) {
        ControlFlags& f = flags[x];
        if (kind == ControllerKind::event) {
            f.enabled = sup.graph.has_event(x, owner);
            f.disabled = sup.disabled[x].count(owner) != 0;
        } else {
            f.enabled = sup.graph.has_event(x, kTick);
            f.disabled = sup.tick_preempted[x] && tick_owner[x] == owner;
        }
        const bool plant_marked = pkg.plant.is_marked(sup.plant_state[x]);
        f.marked_in_plant_and_sup = plant_marked && sup.graph.is_marked(x);
        f.marked_in_plant_only = plant_marked && !sup.graph.is_marked(x);
    }
    return flags;
}

LocalController build_controller(const DecentralizationPackage& pkg, Event owner,
                                 ControllerKind kind, const std::vector<Event>& tick_owner) {
    const Generator& g = pkg.supervisor.graph;
    ControlCongruence congruence(g, control_flags(pkg, owner, kind, tick_owner));
    const State n = static_cast<State>(g.size());
    std::vector<State> roots;
    for (State j = 0; j < n; ++j) {
        for (State r : roots)
            if (congruence.find(r) == r && congruence.find(j) != r) congruence.try_merge(r, j);
        if (congruence.find(j) == j) roots.push_back(j);
    }

    std::map<State, State> cell_index;
    std::vector<State> cell(n);
    for (State x = 0; x < n; ++x) {
        auto [it, fresh] = cell_index.try_emplace(congruence.find(x), static_cast<State>(cell_index.size()));
        cell[x] = it->second;
    }

    EventSet alphabet{owner};
    if (kind == ControllerKind::tick) alphabet.insert(kTick);
    for (State x = 0; x < n; ++x)
        for (const auto& t : g.out(x))
            if (cell[x] != cell[t.target]) alphabet.insert(t.event);

    Generator quotient(cell_index.size(), alphabet, cell[g.initial()]);
    for (State x = 0; x < n; ++x) {
        if (g.is_marked(x)) quotient.set_marked(cell[x]);
        for (const auto& t : g.out(x))
            if (alphabet.count(t.event)) quotient.add_transition(cell[x], t.event, cell[t.target]);
    }

    std::vector<State> origin;
    LocalController c{owner, kind, restrict_states(quotient, std::vector<bool>(quotient.size(), true), &origin), {}};
    std::vector<State> renum(origin.size());
    for (std::size_t i = 0; i < origin.size(); ++i) renum[origin[i]] = static_cast<State>(i);
    c.cell_of.resize(n);
    for (State x = 0; x < n; ++x) c.cell_of[x] = renum[cell[x]];
    return c;
}

Generator with_alphabet(Generator g, const EventSet& alphabet) {
    for (Event e : alphabet) g.add_event(e);
    return g;
}

std::optional<State> replay_projected(const Generator& g, State from, std::span<const Event> word) {
    std::vector<Event> kept;
    for (Event e : word)
        if (g.alphabet().count(e)) kept.push_back(e);
    return g.run(from, kept);
}

}  // namespace

DecentralizationPackage make_package(Generator plant, Supervisor supervisor, EventSet event_list) {
    if (supervisor.graph.empty()) throw Error("decentralization package needs a nonempty supervisor");
    if (!supervisor.has_plant()) attach_plant(supervisor, plant);
    if (event_list.empty()) {
        for (Event e : supervisor.graph.alphabet())
            if (e != kTick && (supervisor.events.prohibitible(e) || supervisor.events.forcible(e)))
                event_list.insert(e);
    }
    for (Event e : event_list)
        if (!supervisor.graph.alphabet().count(e))
            throw Error("localization event " + event_name(e) + " is not in the supervisor alphabet");
    return {std::move(plant), std::move(supervisor), std::move(event_list)};
}

void compose_localization(LocalizedSupervisor& loc) {
    auto compose = [](const std::vector<LocalController>& cs) {
        if (cs.empty()) return allevents(EventSet{});
        std::vector<Generator> parts;
        for (const auto& c : cs) parts.push_back(c.graph);
        return sync_product(parts);
    };
    loc.loc_p = compose(loc.tick_controllers);
    loc.loc_c = compose(loc.event_controllers);
    loc.tdrs = sync_product(loc.loc_p, loc.loc_c);
}

LocalizedSupervisor trivial_localization(const DecentralizationPackage& pkg) {
    LocalizedSupervisor loc;
    loc.fallback = true;
    std::vector<State> identity(pkg.supervisor.graph.size());
    for (State x = 0; x < identity.size(); ++x) identity[x] = x;
    for (Event e : pkg.event_list) {
        if (pkg.supervisor.events.forcible(e))
            loc.tick_controllers.push_back({e, ControllerKind::tick, pkg.supervisor.graph, identity});
        if (pkg.supervisor.events.prohibitible(e))
            loc.event_controllers.push_back({e, ControllerKind::event, pkg.supervisor.graph, identity});
    }
    compose_localization(loc);
    return loc;
}

LocalizedSupervisor timed_localize(const DecentralizationPackage& pkg, Execution exec) {
    const Supervisor& sup = pkg.supervisor;
    if (sup.graph.empty()) throw Error("timed_localize: empty supervisor");
    if (!sup.has_plant()) throw Error("timed_localize: supervisor has no plant attached");

    // Each preempted tick is owned by the smallest forcible event of EV
    // eligible at that state.
    std::vector<Event> tick_owner(sup.graph.size(), kTick);
    for (State x = 0; x < sup.graph.size(); ++x)
        for (const auto& t : sup.graph.out(x))
            if (t.event != kTick && pkg.event_list.count(t.event) && sup.events.forcible(t.event)) {
                tick_owner[x] = t.event;
                break;
            }

    struct Job {
        Event owner;
        ControllerKind kind;
    };
    std::vector<Job> jobs;
    for (Event e : pkg.event_list)
        if (sup.events.forcible(e)) jobs.push_back({e, ControllerKind::tick});
    for (Event e : pkg.event_list)
        if (sup.events.prohibitible(e)) jobs.push_back({e, ControllerKind::event});

    std::vector<LocalController> built(jobs.size());
    const long count = static_cast<long>(jobs.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i)
            built[static_cast<std::size_t>(i)] =
                build_controller(pkg, jobs[static_cast<std::size_t>(i)].owner,
                                 jobs[static_cast<std::size_t>(i)].kind, tick_owner);
    } else {
        for (long i = 0; i < count; ++i)
            built[static_cast<std::size_t>(i)] =
                build_controller(pkg, jobs[static_cast<std::size_t>(i)].owner,
                                 jobs[static_cast<std::size_t>(i)].kind, tick_owner);
    }

    LocalizedSupervisor loc;
    for (auto& c : built)
        (c.kind == ControllerKind::tick ? loc.tick_controllers : loc.event_controllers).push_back(std::move(c));
    compose_localization(loc);
    if (verify_localization(pkg, loc)) return loc;

    loc = trivial_localization(pkg);
    if (!verify_localization(pkg, loc))
        throw Error("internal error: trivial localization fails verification");
    return loc;
}

Generator closed_loop(const DecentralizationPackage& pkg, const LocalizedSupervisor& loc) {
    return sync_product(pkg.plant, loc.tdrs);
}

bool verify_localization(const DecentralizationPackage& pkg, const LocalizedSupervisor& loc) {
    Generator closed = closed_loop(pkg, loc);
    EventSet alphabet = closed.alphabet();
    alphabet.insert(pkg.supervisor.graph.alphabet().begin(), pkg.supervisor.graph.alphabet().end());
    return language_equal(with_alphabet(std::move(closed), alphabet),
                          with_alphabet(pkg.supervisor.graph, alphabet));
}

ClosedLoopCorrespondence correspond(const DecentralizationPackage& pkg,
                                    const LocalizedSupervisor& loc) {
    const Generator& tcrs = pkg.supervisor.graph;
    ClosedLoopCorrespondence out{Supervisor::from_generator(closed_loop(pkg, loc), pkg.supervisor.events), {}};
    const Generator& cl = out.supervisor.graph;
    const State unset = static_cast<State>(-1);
    out.image.assign(tcrs.size(), unset);
    if (cl.empty()) throw Error("correspondence not established");
    out.image[tcrs.initial()] = cl.initial();
    std::vector<State> stack{tcrs.initial()};
    while (!stack.empty()) {
        State x = stack.back();
        stack.pop_back();
        for (const auto& t : tcrs.out(x)) {
            auto y = cl.next(out.image[x], t.event);
            if (!y) throw Error("correspondence not established");
            if (out.image[t.target] == unset) {
                out.image[t.target] = *y;
                stack.push_back(t.target);
            } else if (out.image[t.target] != *y) {
                throw Error("correspondence not established");
            }
        }
    }
    return out;
}

SolutionEquivalenceReport verify_solution_equivalence(const DecentralizationPackage& pkg,
                                                      const LocalizedSupervisor& loc,
                                                      const ReconfigProblem& problem) {
    const Supervisor& sup = pkg.supervisor;
    const auto central = trs(sup, problem);
    if (!central.solved()) throw Error("problem unsolvable on the centralized supervisor");

    SolutionEquivalenceReport r;
    r.centralized = central.strings();
    const auto corr = correspond(pkg, loc);
    r.mapped_source = corr.image[problem.source];
    r.mapped_target = corr.image[problem.target];
    const auto decentral = trs(corr.supervisor, {r.mapped_source, r.mapped_target, problem.reconfig_event});
    r.decentralized = decentral.strings();
    r.identical = r.centralized == r.decentralized;

    const Event sigma = problem.reconfig_event;
    r.reconfig_event_in_loc_p = loc.loc_p.alphabet().count(sigma) != 0;
    r.reconfig_event_in_loc_c = loc.loc_c.alphabet().count(sigma) != 0;

    const auto access = access_strings(sup.graph)[problem.source];
    auto endpoint_enables = [&](const Generator& g) {
        if (!g.alphabet().count(sigma)) return false;
        auto start = replay_projected(g, g.initial(), access);
        if (!start) return false;
        for (const auto& word : r.centralized) {
            auto end = replay_projected(g, *start, word);
            if (!end || !g.has_event(*end, sigma)) return false;
        }
        return true;
    };
    r.eligible_in_loc_p = endpoint_enables(loc.loc_p);
    r.eligible_in_loc_c = endpoint_enables(loc.loc_c);

    r.paths_in_tdrs = true;
    auto start = replay_projected(loc.tdrs, loc.tdrs.initial(), access);
    for (const auto& word : r.centralized)
        if (!start || !replay_projected(loc.tdrs, *start, word)) r.paths_in_tdrs = false;
    return r;
}

CommutativityReport verify_projection_commutativity_decentralized(
    const DecentralizationPackage& pkg, const LocalizedSupervisor& loc,
    const ReconfigProblem& problem) {
    const auto corr = correspond(pkg, loc);
    return verify_projection_commutativity(
        corr.supervisor,
        {corr.image.at(problem.source), corr.image.at(problem.target), problem.reconfig_event});
}

}  // namespace retdes
