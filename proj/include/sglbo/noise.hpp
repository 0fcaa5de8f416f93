#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sglbo {

/// Device noise description for a fixed qubit register: a depolarizing rate
/// per single-qubit gate, a joint two-qubit depolarizing rate per coupled
/// CNOT pair, and a readout bit-flip probability per qubit. Circuit qubit i
/// executes on device qubit i (identity placement).
struct NoiseModel {
  std::vector<double> single_qubit_rate;              // indexed by device qubit
  std::vector<double> readout_error;                  // indexed by device qubit
  std::vector<std::pair<std::pair<int, int>, double>> cnot_rates;  // directed pairs

  int num_qubits() const { return static_cast<int>(single_qubit_rate.size()); }

  /// Rate for CNOT(control, target); falls back to the reversed direction if
  /// only that is listed. Uncoupled pairs raise TopologyError.
  double cnot_rate(int control, int target) const;
  bool coupled(int a, int b) const;
};

/// Text format, sections in any order, '#' comments and blank lines allowed:
///   [single]           q<i> <rate>    (one row per qubit, 0..m-1 complete)
///   [cnot]             q<i> q<j> <rate>
///   [readout]          q<i> <rate>    (same qubit set as [single])
/// Rates must lie in [0, 1]; violations raise ParseError naming the line.
NoiseModel parse_noise_table(std::string_view text);
NoiseModel load_noise_table(const std::string& path);

/// Canonical form: sections in [single], [cnot], [readout] order, qubit rows
/// ascending, CNOT pairs lexicographic, rates in shortest scientific
/// notation. parse -> serialize reproduces a canonical file byte-for-byte.
std::string serialize_noise_table(const NoiseModel& model);

}  // namespace sglbo
