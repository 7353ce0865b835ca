#include "tanglekit/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tanglekit {

using nlohmann::json;

StateFile parse_state_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed state JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("state file must be a JSON object");
  if (!doc.contains("n_qubits") || !doc["n_qubits"].is_number_integer()) {
    throw SchemaError("state file needs an integer 'n_qubits'");
  }
  const auto n = doc["n_qubits"].get<long long>();
  if (n < 1 || n > kMaxQubits) {
    throw SchemaError("'n_qubits' must be in 1.." + std::to_string(kMaxQubits));
  }
  if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
    throw SchemaError("state file needs an 'amplitudes' array");
  }
  const auto& amps = doc["amplitudes"];
  const std::size_t expected = std::size_t{1} << n;
  if (amps.size() != expected) {
    throw SchemaError("expected " + std::to_string(expected) + " amplitudes for " +
                      std::to_string(n) + " qubits, got " + std::to_string(amps.size()));
  }
  VectorXc v(static_cast<Eigen::Index>(expected));
  for (std::size_t b = 0; b < expected; ++b) {
    const auto& pair = amps[b];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw SchemaError("amplitude " + std::to_string(b) + " is not a [re, im] pair");
    }
    const Complex a(pair[0].get<Real>(), pair[1].get<Real>());
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw SchemaError("amplitude " + std::to_string(b) + " is not finite");
    }
    v[static_cast<Eigen::Index>(b)] = a;
  }

  StateMeta meta;
  if (doc.contains("meta")) {
    const auto& m = doc["meta"];
    if (!m.is_object()) throw SchemaError("'meta' must be an object of strings");
    for (const auto& [key, value] : m.items()) {
      if (!value.is_string()) throw SchemaError("'meta." + key + "' must be a string");
      meta.emplace(key, value.get<std::string>());
    }
  }

  const Real norm2 = v.squaredNorm();
  if (std::abs(norm2 - 1) > 1e-6) {
    std::ostringstream msg;
    msg << "state is not normalized: squared norm " << norm2 << " deviates from 1 by more than 1e-6";
    throw SchemaError(msg.str());
  }
  if (std::abs(norm2 - 1) > 1e-12) v /= std::sqrt(norm2);
  return {PureState(static_cast<int>(n), std::move(v)), std::move(meta)};
}

std::string state_to_json(const PureState& state, const StateMeta& meta) {
  json doc;
  doc["n_qubits"] = state.n_qubits();
  json amps = json::array();
  for (Eigen::Index b = 0; b < state.dim(); ++b) {
    amps.push_back({state[b].real(), state[b].imag()});
  }
  doc["amplitudes"] = std::move(amps);
  if (!meta.empty()) doc["meta"] = meta;
  return doc.dump(2);
}

StateFile read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

void write_state_file(const PureState& state, const std::filesystem::path& path,
                      const StateMeta& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write state file " + path.string());
  out << state_to_json(state, meta) << '\n';
  if (!out) throw std::runtime_error("failed writing state file " + path.string());
}

}  // namespace tanglekit
