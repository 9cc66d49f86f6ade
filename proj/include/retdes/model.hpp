#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retdes/event.hpp"
#include "retdes/generator.hpp"

namespace retdes {

// Line-oriented scenario format.
//
//   # comment
//   events
//   # label  control         forcible    lower  upper
//   11       prohibitible    forcible    1      inf
//   12       uncontrollable  unforcible  0      3
//
//   atg M1            (or: spec NAME)
//   states 3
//   initial 0
//   marked 0
//   alphabet 11 12    (optional; events used in transitions are implied)
//   0 11 1            (source event target; `tick` names the clock)

enum class BlockKind { atg, spec };

struct NamedGenerator {
    std::string name;
    BlockKind kind = BlockKind::atg;
    Generator graph;

    friend bool operator==(const NamedGenerator&, const NamedGenerator&) = default;
};

struct ModelFile {
    EventTable events;
    std::vector<NamedGenerator> blocks;  // in file order

    const NamedGenerator* find(std::string_view name) const;
    const Generator& at(std::string_view name) const;
    std::vector<const NamedGenerator*> of_kind(BlockKind kind) const;

    friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

struct Diagnostic {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct ParseResult {
    std::optional<ModelFile> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
    std::string message() const;
};

ParseResult parse_model(std::string_view text);
/// Reads and parses a file; throws Error carrying the diagnostics.
ModelFile load_model(const std::string& path);

std::string render_model(const ModelFile& model);
std::string render_events(const EventTable& events);
std::string render_block(const NamedGenerator& block,
                         const std::vector<std::string>& state_comments = {});

}  // namespace retdes
