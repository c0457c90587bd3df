#pragma once

#include "sas/availability.hpp"
#include "sas/instance.hpp"
#include "sas/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace sas {

/**
 * Parsed contents of an instance file, before validation.
 *
 * action_names is either empty, one list shared by all states, or one list per
 * state; state_names is empty or one name per state.
 */
struct InstanceDocument {
    BaseMdp mdp;
    AvailabilityModel availability;
    std::vector<std::string> state_names;
    std::vector<std::vector<std::string>> action_names;

    bool operator==(const InstanceDocument&) const = default;
};

/// Throws Error(ParseError) on malformed JSON or a missing/mistyped field.
InstanceDocument parse_instance(const std::string& text);
std::string serialize_instance(const InstanceDocument& doc);

InstanceDocument read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const InstanceDocument& doc);

/// Display name for state s, falling back to "s<index>".
std::string state_name(const InstanceDocument& doc, StateIndex s);
/// Display name for action k at state s, falling back to "a<index>".
std::string action_name(const InstanceDocument& doc, StateIndex s, ActionIndex k);

/// Formats a ranking as "[Stay, Go]" with the document's action names.
std::string format_order(const InstanceDocument& doc, StateIndex s, std::span<const ActionIndex> order);

} // namespace sas
