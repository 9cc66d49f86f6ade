#include "retdes/model.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace retdes {

const NamedGenerator* ModelFile::find(std::string_view name) const {
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

const Generator& ModelFile::at(std::string_view name) const {
    const auto* b = find(name);
    if (!b) throw Error("no block named '" + std::string(name) + "'");
    return b->graph;
}

std::vector<const NamedGenerator*> ModelFile::of_kind(BlockKind kind) const {
    std::vector<const NamedGenerator*> out;
    for (const auto& b : blocks)
        if (b.kind == kind) out.push_back(&b);
    return out;
}

std::string ParseResult::message() const {
    std::string out;
    for (const auto& d : diagnostics) out += "line " + std::to_string(d.line) + ": " + d.message + "\n";
    return out;
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size() || line[i] == '#') break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
        out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::optional<unsigned> parse_unsigned(const std::string& s) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct PendingBlock {
    NamedGenerator block;
    std::size_t line = 0;
    std::optional<std::size_t> states;
    std::optional<State> initial;
    std::vector<State> marked;
    EventSet alphabet;
    struct Arc {
        State from;
        Event event;
        State to;
        std::size_t line;
    };
    std::vector<Arc> arcs;
};

class Parser {
public:
    ParseResult run(std::string_view text) {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            ++line_no;
            line(line_no, split_fields(text.substr(start, end - start)));
            if (end == text.size()) break;
            start = end + 1;
        }
        close_block();
        ParseResult r;
        r.diagnostics = std::move(diags_);
        if (r.diagnostics.empty()) r.model = std::move(model_);
        return r;
    }

private:
    enum class Section { none, events, block };

    void error(std::size_t line, std::string msg) { diags_.push_back({line, std::move(msg)}); }

    void line(std::size_t n, const std::vector<std::string>& f) {
        if (f.empty()) return;
        if (f[0] == "events" && f.size() == 1) {
            close_block();
            section_ = Section::events;
            return;
        }
        if ((f[0] == "atg" || f[0] == "spec") && f.size() == 2) {
            close_block();
            if (names_.count(f[1])) error(n, "duplicate block name '" + f[1] + "'");
            names_.insert(f[1]);
            pending_ = PendingBlock{};
            pending_->block.name = f[1];
            pending_->block.kind = f[0] == "atg" ? BlockKind::atg : BlockKind::spec;
            pending_->line = n;
            section_ = Section::block;
            return;
        }
        switch (section_) {
            case Section::none: error(n, "expected a section header (events, atg NAME, spec NAME)"); break;
            case Section::events: event_line(n, f); break;
            case Section::block: block_line(n, f); break;
        }
    }

    void event_line(std::size_t n, const std::vector<std::string>& f) {
        if (f.size() != 5) {
            error(n, "event line needs: label control forcible lower upper");
            return;
        }
        EventDef d;
        auto label = parse_unsigned(f[0]);
        if (!label || *label == kTick) {
            error(n, "bad event label '" + f[0] + "'");
            return;
        }
        d.label = *label;
        if (f[1] == "prohibitible")
            d.control = Control::prohibitible;
        else if (f[1] == "uncontrollable")
            d.control = Control::uncontrollable;
        else {
            error(n, "control must be prohibitible or uncontrollable");
            return;
        }
        if (f[2] == "forcible")
            d.forcible = true;
        else if (f[2] != "unforcible") {
            error(n, "forcibility must be forcible or unforcible");
            return;
        }
        auto lower = parse_unsigned(f[3]);
        if (!lower) {
            error(n, "malformed lower bound '" + f[3] + "'");
            return;
        }
        d.lower = *lower;
        if (f[4] != "inf") {
            auto upper = parse_unsigned(f[4]);
            if (!upper) {
                error(n, "malformed upper bound '" + f[4] + "'");
                return;
            }
            d.upper = *upper;
        }
        if (model_.events.contains(d.label)) {
            error(n, "duplicate event label " + f[0]);
            return;
        }
        try {
            model_.events.add(d);
        } catch (const Error& e) {
            error(n, e.what());
        }
    }

    std::optional<Event> event_token(std::size_t n, const std::string& tok) {
        if (tok == "tick") return kTick;
        auto v = parse_unsigned(tok);
        if (!v) {
            error(n, "bad event '" + tok + "'");
            return std::nullopt;
        }
        if (!model_.events.contains(*v)) {
            error(n, "unknown event " + tok);
            return std::nullopt;
        }
        return *v;
    }

    void block_line(std::size_t n, const std::vector<std::string>& f) {
        auto& b = *pending_;
        auto state_token = [&](const std::string& tok) -> std::optional<State> {
            auto v = parse_unsigned(tok);
            if (!v) error(n, "bad state '" + tok + "'");
            return v;
        };
        if (f[0] == "states" && f.size() == 2) {
            auto v = parse_unsigned(f[1]);
            if (!v) error(n, "bad state count");
            b.states = v;
        } else if (f[0] == "initial" && f.size() == 2) {
            b.initial = state_token(f[1]);
        } else if (f[0] == "marked") {
            for (std::size_t i = 1; i < f.size(); ++i)
                if (auto s = state_token(f[i])) b.marked.push_back(*s);
        } else if (f[0] == "alphabet") {
            for (std::size_t i = 1; i < f.size(); ++i)
                if (auto e = event_token(n, f[i])) b.alphabet.insert(*e);
        } else if (f.size() == 3) {
            auto from = state_token(f[0]);
            auto e = event_token(n, f[1]);
            auto to = state_token(f[2]);
            if (from && e && to) b.arcs.push_back({*from, *e, *to, n});
        } else {
            error(n, "unrecognized line in block '" + b.block.name + "'");
        }
    }

    void close_block() {
        if (!pending_) return;
        auto& b = *pending_;
        const std::size_t errors_before = diags_.size();
        if (!b.states) error(b.line, "block '" + b.block.name + "' lacks a states line");
        const std::size_t n = b.states.value_or(0);
        EventSet alphabet = b.alphabet;
        for (const auto& a : b.arcs) alphabet.insert(a.event);
        if (n == 0) {
            if (b.initial || !b.marked.empty() || !b.arcs.empty())
                error(b.line, "block '" + b.block.name + "' has no states but lists some");
            b.block.graph = Generator::empty_language(alphabet);
        } else {
            const State init = b.initial.value_or(0);
            if (init >= n) error(b.line, "initial state out of range");
            for (State m : b.marked)
                if (m >= n) error(b.line, "marked state " + std::to_string(m) + " out of range");
            for (const auto& a : b.arcs)
                if (a.from >= n || a.to >= n) error(a.line, "transition state out of range");
            if (diags_.size() == errors_before) {
                Generator g(n, alphabet, init);
                for (State m : b.marked) g.set_marked(m);
                for (const auto& a : b.arcs) {
                    try {
                        g.add_transition(a.from, a.event, a.to);
                    } catch (const Error& e) {
                        error(a.line, e.what());
                    }
                }
                b.block.graph = std::move(g);
            }
        }
        if (diags_.size() == errors_before) model_.blocks.push_back(std::move(b.block));
        pending_.reset();
        section_ = Section::none;
    }

    ModelFile model_;
    std::vector<Diagnostic> diags_;
    Section section_ = Section::none;
    std::optional<PendingBlock> pending_;
    std::set<std::string> names_;
};

}  // namespace

ParseResult parse_model(std::string_view text) { return Parser{}.run(text); }

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto r = parse_model(ss.str());
    if (!r.ok()) throw Error(path + ":\n" + r.message());
    return std::move(*r.model);
}

std::string render_events(const EventTable& events) {
    std::ostringstream os;
    os << "events\n";
    for (const auto& [label, d] : events.defs()) {
        os << label << ' ' << (d.prohibitible() ? "prohibitible" : "uncontrollable") << ' '
           << (d.forcible ? "forcible" : "unforcible") << ' ' << d.lower << ' ';
        if (d.upper)
            os << *d.upper;
        else
            os << "inf";
        os << '\n';
    }
    return os.str();
}

std::string render_block(const NamedGenerator& block, const std::vector<std::string>& state_comments) {
    const Generator& g = block.graph;
    std::ostringstream os;
    os << (block.kind == BlockKind::atg ? "atg " : "spec ") << block.name << '\n';
    os << "states " << g.size() << '\n';
    if (!g.empty()) os << "initial " << g.initial() << '\n';
    os << "marked";
    for (State m : g.marked_states()) os << ' ' << m;
    os << "\nalphabet";
    for (Event e : g.alphabet()) os << ' ' << event_name(e);
    os << '\n';
    for (State s = 0; s < g.size(); ++s) {
        if (s < state_comments.size() && !state_comments[s].empty())
            os << "# state " << s << ": " << state_comments[s] << '\n';
        for (const auto& t : g.out(s)) os << s << ' ' << event_name(t.event) << ' ' << t.target << '\n';
    }
    return os.str();
}

std::string render_model(const ModelFile& model) {
    std::string out = render_events(model.events);
    for (const auto& b : model.blocks) out += "\n" + render_block(b);
    return out;
}

}  // namespace retdes
