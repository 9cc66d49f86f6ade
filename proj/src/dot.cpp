#include "retdes/dot.hpp"

#include <sstream>

namespace retdes {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '\\';
        out += c;
    }
    return out + '"';
}

}  // namespace

void write_dot(std::ostream& os, const Generator& g, const std::string& name,
               const StateLabeler& labeler) {
    os << "digraph " << quoted(name) << " {\n";
    os << "  rankdir=LR;\n";
    if (g.empty()) {
        os << "}\n";
        return;
    }
    os << "  __init [shape=point];\n";
    for (State s = 0; s < g.size(); ++s) {
        std::string label = std::to_string(s);
        if (labeler) label += "\\n" + labeler(s);
        os << "  " << s << " [shape=" << (g.is_marked(s) ? "doublecircle" : "circle")
           << ", label=" << quoted(label) << "];\n";
    }
    os << "  __init -> " << g.initial() << ";\n";
    for (State s = 0; s < g.size(); ++s)
        for (const auto& t : g.out(s))
            os << "  " << s << " -> " << t.target << " [label=" << quoted(event_name(t.event))
               << "];\n";
    os << "}\n";
}

std::string to_dot(const Generator& g, const std::string& name, const StateLabeler& labeler) {
    std::ostringstream os;
    write_dot(os, g, name, labeler);
    return os.str();
}

}  // namespace retdes
