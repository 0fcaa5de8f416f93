#include "sglbo/circuit.hpp"

#include <algorithm>

#include "sglbo/errors.hpp"
#include "sglbo/text.hpp"

namespace sglbo {

ParamCircuit ParamCircuit::inverted() const {
  ParamCircuit inv;
  inv.num_qubits = num_qubits;
  inv.num_params = num_params;
  inv.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind != GateKind::Cnot) g.angle_sign = -g.angle_sign;
    inv.gates.push_back(g);
  }
  return inv;
}

ParamCircuit build_ansatz(int n, int r) {
  if (n < 2) throw ArgumentError("build_ansatz: need n >= 2 qubits");
  if (r < 0) throw ArgumentError("build_ansatz: need r >= 0 blocks");
  ParamCircuit c;
  c.num_qubits = n;
  int p = 0;
  auto rotation_layers = [&] {
    for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::Rx, q, -1, p++, 1.0});
    for (int q = 0; q < n; ++q) c.gates.push_back({GateKind::Rz, q, -1, p++, 1.0});
  };
  rotation_layers();
  for (int b = 0; b < r; ++b) {
    for (int q = 0; q + 1 < n; ++q) c.gates.push_back({GateKind::Cnot, q + 1, q, -1, 1.0});
    rotation_layers();
  }
  c.num_params = p;  // 2 n (r + 1)
  return c;
}

std::string serialize_circuit(const ParamCircuit& c) {
  std::string out;
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::Rx:
      case GateKind::Rz:
        if (g.angle_sign != 1.0)
          throw ArgumentError("serialize_circuit: only forward circuits serialize");
        out += g.kind == GateKind::Rx ? "RX q" : "RZ q";
        out += std::to_string(g.target);
        out += " p";
        out += std::to_string(g.param);
        break;
      case GateKind::Cnot:
        out += "CNOT q";
        out += std::to_string(g.control);
        out += " q";
        out += std::to_string(g.target);
        break;
    }
    out += '\n';
  }
  return out;
}

namespace {

int parse_index(std::string_view token, char prefix, int line_no) {
  if (token.size() < 2 || token.front() != prefix)
    throw ParseError("line " + std::to_string(line_no) + ": expected '" + prefix +
                     "<index>', got '" + std::string(token) + "'");
  int value = 0;
  for (char ch : token.substr(1)) {
    if (ch < '0' || ch > '9')
      throw ParseError("line " + std::to_string(line_no) + ": bad index '" + std::string(token) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

}  // namespace

ParamCircuit parse_circuit(std::string_view text) {
  ParamCircuit c;
  int line_no = 0;
  int max_qubit = -1;
  int max_param = -1;
  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 3)
      throw ParseError("line " + std::to_string(line_no) + ": expected 3 tokens");
    Gate g;
    if (tokens[0] == "RX" || tokens[0] == "RZ") {
      g.kind = tokens[0] == "RX" ? GateKind::Rx : GateKind::Rz;
      g.target = parse_index(tokens[1], 'q', line_no);
      g.param = parse_index(tokens[2], 'p', line_no);
      max_param = std::max(max_param, g.param);
    } else if (tokens[0] == "CNOT") {
      g.kind = GateKind::Cnot;
      g.control = parse_index(tokens[1], 'q', line_no);
      g.target = parse_index(tokens[2], 'q', line_no);
      if (g.control == g.target)
        throw ParseError("line " + std::to_string(line_no) + ": CNOT control equals target");
      max_qubit = std::max(max_qubit, g.control);
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown gate '" +
                       std::string(tokens[0]) + "'");
    }
    max_qubit = std::max(max_qubit, g.target);
    c.gates.push_back(g);
  }
  if (c.gates.empty()) throw ParseError("no gates found");
  c.num_qubits = max_qubit + 1;
  c.num_params = max_param + 1;
  return c;
}

}  // namespace sglbo
