#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "tanglekit/qstate.hpp"

namespace tanglekit {

using StateMeta = std::map<std::string, std::string>;

struct StateFile {
  PureState state;
  StateMeta meta;
};

// File layout:
//   { "n_qubits": int, "amplitudes": [[re, im], ...], "meta": {"k": "v"} }
// Amplitudes follow the global basis order (qubit 1 most significant).

/// Parses state JSON text. Throws SchemaError on malformed JSON, schema
/// violations, or a squared norm deviating from 1 by more than 1e-6.
/// Deviations between 1e-12 and 1e-6 are renormalized.
StateFile parse_state_json(const std::string& text);
std::string state_to_json(const PureState& state, const StateMeta& meta = {});

StateFile read_state_file(const std::filesystem::path& path);
void write_state_file(const PureState& state, const std::filesystem::path& path,
                      const StateMeta& meta = {});

}  // namespace tanglekit
