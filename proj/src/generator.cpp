#include "retdes/generator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace retdes {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept {
        std::size_t h = v.size();
        for (State s : v) h ^= s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Assigns BFS indices to tuple-shaped states discovered during a product or
// subset construction.
class TupleIndex {
public:
    std::pair<State, bool> intern(const std::vector<State>& key) {
        auto [it, inserted] = index_.try_emplace(key, static_cast<State>(keys_.size()));
        if (inserted) keys_.push_back(key);
        return {it->second, inserted};
    }
    const std::vector<State>& key(State s) const { return keys_[s]; }
    std::size_t size() const { return keys_.size(); }
    std::vector<std::vector<State>> release() { return std::move(keys_); }

private:
    std::unordered_map<std::vector<State>, State, VectorHash> index_;
    std::vector<std::vector<State>> keys_;
};

}  // namespace

std::string event_name(Event e) {
    return e == kTick ? std::string("tick") : std::to_string(e);
}

void validate(const EventDef& def) {
    if (def.label == kTick)
        throw Error("event label 0 is reserved for tick");
    if (def.upper && def.lower > *def.upper)
        throw Error("event " + std::to_string(def.label) + ": lower bound exceeds upper bound");
}

void EventTable::add(const EventDef& def) {
    validate(def);
    if (!defs_.emplace(def.label, def).second)
        throw Error("duplicate event label " + std::to_string(def.label));
}

const EventDef& EventTable::at(Event e) const {
    auto it = defs_.find(e);
    if (it == defs_.end()) throw Error("no definition for event " + event_name(e));
    return it->second;
}

// ---------------------------------------------------------------------------

Generator::Generator(std::size_t num_states, EventSet alphabet, State initial)
    : out_(num_states), marked_(num_states, 0), alphabet_(std::move(alphabet)), initial_(initial) {
    if (num_states == 0) throw Error("a generator needs at least one state; use empty_language()");
    check_state(initial);
}

Generator Generator::empty_language(EventSet alphabet) {
    Generator g;
    g.alphabet_ = std::move(alphabet);
    return g;
}

void Generator::check_state(State s) const {
    if (s >= out_.size()) throw Error("state " + std::to_string(s) + " out of range");
}

State Generator::add_state(bool marked) {
    out_.emplace_back();
    marked_.push_back(marked ? 1 : 0);
    return static_cast<State>(out_.size() - 1);
}

void Generator::add_transition(State from, Event event, State to) {
    check_state(from);
    check_state(to);
    if (!alphabet_.count(event))
        throw Error("event " + event_name(event) + " is not in the alphabet");
    auto& row = out_[from];
    auto it = std::lower_bound(row.begin(), row.end(), event,
                               [](const Transition& t, Event e) { return t.event < e; });
    if (it != row.end() && it->event == event) {
        if (it->target == to) return;
        throw Error("nondeterministic transition at state " + std::to_string(from) + " on event " +
                    event_name(event));
    }
    row.insert(it, Transition{event, to});
}

void Generator::set_marked(State s, bool marked) {
    check_state(s);
    marked_[s] = marked ? 1 : 0;
}

std::optional<State> Generator::next(State s, Event e) const {
    const auto& row = out_[s];
    auto it = std::lower_bound(row.begin(), row.end(), e,
                               [](const Transition& t, Event ev) { return t.event < ev; });
    if (it == row.end() || it->event != e) return std::nullopt;
    return it->target;
}

std::optional<State> Generator::run(State from, std::span<const Event> word) const {
    if (empty()) return std::nullopt;
    State s = from;
    for (Event e : word) {
        auto n = next(s, e);
        if (!n) return std::nullopt;
        s = *n;
    }
    return s;
}

std::size_t Generator::num_transitions() const {
    std::size_t n = 0;
    for (const auto& row : out_) n += row.size();
    return n;
}

std::vector<State> Generator::marked_states() const {
    std::vector<State> m;
    for (State s = 0; s < size(); ++s)
        if (marked_[s]) m.push_back(s);
    return m;
}

// ---------------------------------------------------------------------------

Generator sync_product(std::span<const Generator> components) {
    if (components.empty()) throw Error("no components");
    EventSet alphabet;
    for (const auto& c : components) alphabet.insert(c.alphabet().begin(), c.alphabet().end());
    for (const auto& c : components)
        if (c.empty()) return Generator::empty_language(alphabet);

    const std::size_t n = components.size();
    // owners[e] = components whose alphabet contains e
    std::map<Event, std::vector<std::size_t>> owners;
    for (std::size_t i = 0; i < n; ++i)
        for (Event e : components[i].alphabet()) owners[e].push_back(i);

    TupleIndex index;
    std::vector<State> init(n);
    for (std::size_t i = 0; i < n; ++i) init[i] = components[i].initial();
    index.intern(init);

    Generator result(1, alphabet, 0);
    std::vector<Event> candidates;
    for (State cur = 0; cur < index.size(); ++cur) {
        const std::vector<State> tuple = index.key(cur);
        bool marked = true;
        candidates.clear();
        for (std::size_t i = 0; i < n; ++i) {
            marked = marked && components[i].is_marked(tuple[i]);
            for (const auto& t : components[i].out(tuple[i])) candidates.push_back(t.event);
        }
        result.set_marked(cur, marked);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (Event e : candidates) {
            std::vector<State> succ = tuple;
            bool enabled = true;
            for (std::size_t i : owners[e]) {
                auto nx = components[i].next(tuple[i], e);
                if (!nx) {
                    enabled = false;
                    break;
                }
                succ[i] = *nx;
            }
            if (!enabled) continue;
            auto [target, fresh] = index.intern(succ);
            if (fresh) result.add_state();
            result.add_transition(cur, e, target);
        }
    }
    return result;
}

Generator sync_product(const Generator& a, const Generator& b) {
    const Generator parts[] = {a, b};
    return sync_product(parts);
}

std::pair<Generator, std::vector<std::pair<State, State>>> meet_with_pairs(const Generator& a,
                                                                           const Generator& b) {
    EventSet alphabet = a.alphabet();
    alphabet.insert(b.alphabet().begin(), b.alphabet().end());
    if (a.empty() || b.empty()) return {Generator::empty_language(alphabet), {}};

    std::map<std::pair<State, State>, State> index;
    std::vector<std::pair<State, State>> pairs{{a.initial(), b.initial()}};
    index[pairs[0]] = 0;
    Generator result(1, alphabet, 0);
    for (State cur = 0; cur < pairs.size(); ++cur) {
        auto [sa, sb] = pairs[cur];
        result.set_marked(cur, a.is_marked(sa) && b.is_marked(sb));
        for (const auto& ta : a.out(sa)) {
            auto nb = b.next(sb, ta.event);
            if (!nb) continue;
            std::pair<State, State> key{ta.target, *nb};
            auto [it, fresh] = index.try_emplace(key, static_cast<State>(pairs.size()));
            if (fresh) {
                pairs.push_back(key);
                result.add_state();
            }
            result.add_transition(cur, ta.event, it->second);
        }
    }
    return {std::move(result), std::move(pairs)};
}

Generator meet(const Generator& a, const Generator& b) { return meet_with_pairs(a, b).first; }

namespace {

std::vector<State> closure(const Generator& g, std::vector<State> seed, const EventSet& erase) {
    std::vector<char> seen(g.size(), 0);
    std::vector<State> stack;
    for (State s : seed)
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (const auto& t : g.out(s))
            if (erase.count(t.event) && !seen[t.target]) {
                seen[t.target] = 1;
                stack.push_back(t.target);
            }
    }
    std::vector<State> out;
    for (State s = 0; s < g.size(); ++s)
        if (seen[s]) out.push_back(s);
    return out;
}

}  // namespace

Projection project_with_subsets(const Generator& g, const EventSet& erase) {
    EventSet alphabet;
    for (Event e : g.alphabet())
        if (!erase.count(e)) alphabet.insert(e);
    if (g.empty()) return {Generator::empty_language(alphabet), {}};

    TupleIndex index;
    index.intern(closure(g, {g.initial()}, erase));
    Generator result(1, alphabet, 0);
    std::map<Event, std::vector<State>> moves;
    for (State cur = 0; cur < index.size(); ++cur) {
        const std::vector<State> subset = index.key(cur);
        bool marked = false;
        moves.clear();
        for (State s : subset) {
            marked = marked || g.is_marked(s);
            for (const auto& t : g.out(s))
                if (!erase.count(t.event)) moves[t.event].push_back(t.target);
        }
        result.set_marked(cur, marked);
        for (auto& [e, targets] : moves) {
            auto [target, fresh] = index.intern(closure(g, std::move(targets), erase));
            if (fresh) result.add_state();
            result.add_transition(cur, e, target);
        }
    }
    return {std::move(result), index.release()};
}

Generator project(const Generator& g, const EventSet& erase) {
    return project_with_subsets(g, erase).graph;
}

Generator allevents(const EventSet& alphabet) {
    Generator g(1, alphabet, 0);
    g.set_marked(0);
    for (Event e : alphabet) g.add_transition(0, e, 0);
    return g;
}

Generator allevents(const Generator& g) { return allevents(g.alphabet()); }

std::vector<bool> reachable_states(const Generator& g) {
    std::vector<bool> seen(g.size(), false);
    if (g.empty()) return seen;
    std::vector<State> stack{g.initial()};
    seen[g.initial()] = true;
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (const auto& t : g.out(s))
            if (!seen[t.target]) {
                seen[t.target] = true;
                stack.push_back(t.target);
            }
    }
    return seen;
}

std::vector<bool> coreachable_states(const Generator& g) {
    std::vector<bool> seen(g.size(), false);
    auto preds = predecessors(g);
    std::vector<State> stack;
    for (State s = 0; s < g.size(); ++s)
        if (g.is_marked(s)) {
            seen[s] = true;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (auto [p, e] : preds[s])
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
    }
    return seen;
}

Generator restrict_states(const Generator& g, const std::vector<bool>& keep,
                          std::vector<State>* old_index) {
    if (old_index) old_index->clear();
    if (g.empty() || !keep[g.initial()]) return Generator::empty_language(g.alphabet());
    std::vector<State> renum(g.size(), static_cast<State>(-1));
    std::vector<State> order{g.initial()};
    renum[g.initial()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const auto& t : g.out(order[i]))
            if (keep[t.target] && renum[t.target] == static_cast<State>(-1)) {
                renum[t.target] = static_cast<State>(order.size());
                order.push_back(t.target);
            }
    Generator result(order.size(), g.alphabet(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        result.set_marked(static_cast<State>(i), g.is_marked(order[i]));
        for (const auto& t : g.out(order[i]))
            if (keep[t.target]) result.add_transition(static_cast<State>(i), t.event, renum[t.target]);
    }
    if (old_index) *old_index = std::move(order);
    return result;
}

Generator trim(const Generator& g) {
    auto reach = reachable_states(g);
    auto coreach = coreachable_states(g);
    std::vector<bool> keep(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) keep[i] = reach[i] && coreach[i];
    return restrict_states(g, keep);
}

Generator canonical(const Generator& g) {
    return restrict_states(g, std::vector<bool>(g.size(), true));
}

bool is_nonblocking(const Generator& g) {
    auto reach = reachable_states(g);
    auto coreach = coreachable_states(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (reach[i] && !coreach[i]) return false;
    return true;
}

namespace {

// Walks the synchronized pairs of two deterministic generators. `check`
// decides per reachable pair; the walk follows events of `a` defined in `b`.
bool walk_pairs(const Generator& a, const Generator& b,
                const std::function<bool(State, State)>& check) {
    std::map<std::pair<State, State>, bool> seen;
    std::vector<std::pair<State, State>> stack{{a.initial(), b.initial()}};
    seen[stack[0]] = true;
    while (!stack.empty()) {
        auto [sa, sb] = stack.back();
        stack.pop_back();
        if (!check(sa, sb)) return false;
        for (const auto& t : a.out(sa)) {
            auto nb = b.next(sb, t.event);
            if (!nb) continue;
            std::pair<State, State> key{t.target, *nb};
            if (seen.emplace(key, true).second) stack.push_back(key);
        }
    }
    return true;
}

}  // namespace

bool language_equal(const Generator& a, const Generator& b) {
    if (a.alphabet() != b.alphabet()) throw Error("language_equal: alphabet mismatch");
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return walk_pairs(a, b, [&](State sa, State sb) {
        if (a.is_marked(sa) != b.is_marked(sb)) return false;
        auto oa = a.out(sa);
        auto ob = b.out(sb);
        if (oa.size() != ob.size()) return false;
        for (std::size_t i = 0; i < oa.size(); ++i)
            if (oa[i].event != ob[i].event) return false;
        return true;
    });
}

bool language_included(const Generator& a, const Generator& b) {
    if (a.empty()) return true;
    if (b.empty()) return false;
    return walk_pairs(a, b, [&](State sa, State sb) {
        if (a.is_marked(sa) && !b.is_marked(sb)) return false;
        for (const auto& t : a.out(sa))
            if (!b.has_event(sb, t.event)) return false;
        return true;
    });
}

std::vector<std::vector<Event>> access_strings(const Generator& g) {
    std::vector<std::vector<Event>> words(g.size());
    if (g.empty()) return words;
    std::vector<bool> seen(g.size(), false);
    std::deque<State> queue{g.initial()};
    seen[g.initial()] = true;
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (const auto& t : g.out(s))
            if (!seen[t.target]) {
                seen[t.target] = true;
                words[t.target] = words[s];
                words[t.target].push_back(t.event);
                queue.push_back(t.target);
            }
    }
    return words;
}

std::vector<Event> erase_events(std::span<const Event> word, const EventSet& erase) {
    std::vector<Event> out;
    for (Event e : word)
        if (!erase.count(e)) out.push_back(e);
    return out;
}

std::vector<std::vector<std::pair<State, Event>>> predecessors(const Generator& g) {
    std::vector<std::vector<std::pair<State, Event>>> preds(g.size());
    for (State s = 0; s < g.size(); ++s)
        for (const auto& t : g.out(s)) preds[t.target].emplace_back(s, t.event);
    return preds;
}

}  // namespace retdes
