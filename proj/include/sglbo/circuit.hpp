#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sglbo {

enum class GateKind { Rx, Rz, Cnot };

/// One gate in a parameterized circuit. Rotations use the half-angle
/// convention R_P(x) = exp(-i x P / 2) with x = angle_sign * theta[param];
/// angle_sign is -1 in inverted circuits.
struct Gate {
  GateKind kind = GateKind::Rx;
  int target = 0;          // rotation target, or CNOT target
  int control = -1;        // CNOT only
  int param = -1;          // rotation only: index into the parameter vector
  double angle_sign = 1.0;
};

struct ParamCircuit {
  int num_qubits = 0;
  int num_params = 0;
  std::vector<Gate> gates;

  /// Gate-by-gate inverse: reversed order, rotation angles negated
  /// (CNOT is its own inverse). Shares this circuit's parameter vector.
  ParamCircuit inverted() const;
};

/// Hardware-efficient ansatz: an RX layer then an RZ layer on every qubit,
/// followed by r blocks of [CNOT chain (control j, target j+1), RX layer,
/// RZ layer]. Parameters are indexed in gate order; the total count is
/// 2 n (r + 1). Requires n >= 2 and r >= 0.
ParamCircuit build_ansatz(int n, int r);

/// One gate per line: "RX q<i> p<j>", "RZ q<i> p<j>", "CNOT q<i> q<j>"
/// (control first). Only forward circuits (angle_sign == +1) serialize.
std::string serialize_circuit(const ParamCircuit& c);

/// Inverse of serialize_circuit; malformed rows raise ParseError naming the
/// 1-based line. num_params is one past the largest parameter index.
ParamCircuit parse_circuit(std::string_view text);

}  // namespace sglbo
