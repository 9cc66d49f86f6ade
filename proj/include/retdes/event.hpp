#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace retdes {

using State = std::uint32_t;
using Event = std::uint32_t;
using EventSet = std::set<Event>;

/// Label reserved for the global clock event.
inline constexpr Event kTick = 0;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Control { prohibitible, uncontrollable };

/// Timing and control attributes of one activity event.
///
/// An event with a finite upper bound is prospective: once enabled it must
/// occur after at least `lower` and at most `upper` ticks. An infinite upper
/// bound makes it remote: it may occur any time after `lower` ticks.
struct EventDef {
    Event label = 1;
    Control control = Control::uncontrollable;
    bool forcible = false;
    unsigned lower = 0;
    std::optional<unsigned> upper;  // nullopt = infinity

    bool prospective() const { return upper.has_value(); }
    bool remote() const { return !upper.has_value(); }
    bool prohibitible() const { return control == Control::prohibitible; }

    /// Timer value on enablement: u for prospective, l for remote.
    unsigned default_timer() const { return upper ? *upper : lower; }

    friend bool operator==(const EventDef&, const EventDef&) = default;
};

/// Throws if the definition violates the label or bound invariants.
void validate(const EventDef& def);

class EventTable {
public:
    EventTable() = default;

    void add(const EventDef& def);
    bool contains(Event e) const { return defs_.count(e) != 0; }
    const EventDef& at(Event e) const;
    const std::map<Event, EventDef>& defs() const { return defs_; }
    std::size_t size() const { return defs_.size(); }

    // tick is neither prohibitible nor forcible.
    bool prohibitible(Event e) const { return e != kTick && at(e).prohibitible(); }
    bool forcible(Event e) const { return e != kTick && at(e).forcible; }

    friend bool operator==(const EventTable&, const EventTable&) = default;

private:
    std::map<Event, EventDef> defs_;
};

std::string event_name(Event e);

}  // namespace retdes
