#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sglbo/rng.hpp"

namespace sglbo {

enum class PauliOp : std::uint8_t { I = 0, X, Y, Z };

/// Tensor product of single-qubit Pauli operators. ops[q] acts on qubit q.
/// Qubit 0 is the leftmost character of the text label and the most
/// significant bit of a computational-basis index, so on two qubits
/// Z (x) I = diag(1, 1, -1, -1) has label "ZI".
struct PauliString {
  std::vector<PauliOp> ops;

  int num_qubits() const { return static_cast<int>(ops.size()); }
  bool is_identity() const;

  static PauliString identity(int n);
  /// Identity everywhere except `op` on `qubit`.
  static PauliString single(int n, int qubit, PauliOp op);
  /// From a label like "XIZY" (one uppercase letter per qubit).
  static PauliString from_label(std::string_view label);
  std::string label() const;

  bool operator==(const PauliString&) const = default;
};

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
};

/// Real-weighted sum of Pauli strings (a Hermitian observable). Terms with
/// equal strings are merged on insertion and exactly-zero coefficients are
/// dropped, so the stored weights |c_k| are the well-defined masses used for
/// shot allocation.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int num_qubits);

  void add(double coeff, PauliString string);

  int num_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// sum_k |c_k|: the importance-sampling mass and a trivial upper bound on
  /// the operator norm.
  double weight_l1() const;

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Basis action of a Pauli string: P |r> = phase(r) |r ^ flip>.
struct PauliBasisAction {
  std::uint64_t flip = 0;       // X and Y positions
  std::uint64_t sign_mask = 0;  // Y and Z positions
  std::complex<double> base{1.0, 0.0};  // i^(#Y)

  std::complex<double> phase(std::uint64_t r) const {
    return __builtin_popcountll(r & sign_mask) & 1 ? -base : base;
  }
};
PauliBasisAction basis_action(const PauliString& p);

/// out[r ^ flip] = phase(r) * in[r] for the string's permutation/phase action.
/// `in` and `out` must be distinct buffers of size 2^n.
void apply_pauli_string(const PauliString& p,
                        std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out);

/// out = (sum_k c_k P_k) in; distinct buffers.
void apply_pauli_sum(const PauliSum& sum,
                     std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out);

/// Dense 2^n x 2^n matrix. Guarded: n > 12 raises ResourceError.
Eigen::MatrixXcd dense_matrix(const PauliSum& sum);

struct NormEstimate {
  double value = 0.0;
  /// True when the sum-of-|coefficients| fallback was used (n > 12); the
  /// value is then an upper bound rather than the exact spectral norm.
  bool is_upper_bound = false;
};

struct PowerIterOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

/// Largest-magnitude eigenvalue ||H||. For n <= 12: matrix-free power
/// iteration applied to H^2 (spectra symmetric about zero, as for the
/// transverse-field Ising chain, defeat plain power iteration on H).
/// For n > 12: returns weight_l1() flagged as an upper bound.
NormEstimate operator_norm(const PauliSum& sum, const PowerIterOptions& opt = {});

/// Open-boundary transverse-field Ising chain on n >= 2 sites:
///   H = -J (sum_j Z_j Z_{j+1} + g sum_j X_j),
/// ZZ bond terms first (ascending j), then X field terms (ascending j).
PauliSum tfim_hamiltonian(int n, double J, double g);

struct TermAllocation {
  std::vector<std::int64_t> counts;  // per term, aligned with sum.terms()
  std::int64_t total = 0;            // == requested total
};

/// Multinomial split of `total` shots over terms with probabilities
/// p_k = |c_k| / sum_j |c_j| (one categorical draw per shot).
TermAllocation allocate_shots(const PauliSum& sum, std::int64_t total, Rng& rng);

/// One term per line, "<coefficient> <label>", e.g. "-1.5 XIII".
std::string serialize_pauli_sum(const PauliSum& sum);

/// Inverse of serialize_pauli_sum. Blank lines and '#' comment lines are
/// skipped; malformed rows raise ParseError naming the 1-based line.
PauliSum parse_pauli_sum(std::string_view text);

}  // namespace sglbo
