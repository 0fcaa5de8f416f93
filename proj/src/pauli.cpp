#include "sglbo/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "sglbo/errors.hpp"
#include "sglbo/text.hpp"

namespace sglbo {

namespace {

constexpr char kOpChars[] = {'I', 'X', 'Y', 'Z'};

/// Bit masks describing a string's action on basis indices. Qubit q maps to
/// bit (n-1-q) so that qubit 0 is the most significant bit.
struct StringMasks {
  std::uint64_t flip = 0;  // X and Y positions: index permutation r -> r ^ flip
  std::uint64_t yz = 0;    // Y and Z positions: sign (-1)^popcount(r & yz)
  int num_y = 0;           // global factor i^num_y
};

StringMasks masks_of(const PauliString& p) {
  StringMasks m;
  const int n = p.num_qubits();
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = 1ull << (n - 1 - q);
    switch (p.ops[q]) {
      case PauliOp::I:
        break;
      case PauliOp::X:
        m.flip |= bit;
        break;
      case PauliOp::Y:
        m.flip |= bit;
        m.yz |= bit;
        ++m.num_y;
        break;
      case PauliOp::Z:
        m.yz |= bit;
        break;
    }
  }
  return m;
}

std::complex<double> i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliBasisAction basis_action(const PauliString& p) {
  const StringMasks m = masks_of(p);
  return PauliBasisAction{m.flip, m.yz, i_power(m.num_y)};
}

bool PauliString::is_identity() const {
  return std::all_of(ops.begin(), ops.end(), [](PauliOp o) { return o == PauliOp::I; });
}

PauliString PauliString::identity(int n) {
  if (n < 1) throw ArgumentError("PauliString: need at least one qubit");
  PauliString p;
  p.ops.assign(static_cast<std::size_t>(n), PauliOp::I);
  return p;
}

PauliString PauliString::single(int n, int qubit, PauliOp op) {
  PauliString p = identity(n);
  if (qubit < 0 || qubit >= n) throw ArgumentError("PauliString: qubit out of range");
  p.ops[static_cast<std::size_t>(qubit)] = op;
  return p;
}

PauliString PauliString::from_label(std::string_view label) {
  if (label.empty()) throw ArgumentError("PauliString: empty label");
  PauliString p;
  p.ops.reserve(label.size());
  for (char c : label) {
    switch (c) {
      case 'I': p.ops.push_back(PauliOp::I); break;
      case 'X': p.ops.push_back(PauliOp::X); break;
      case 'Y': p.ops.push_back(PauliOp::Y); break;
      case 'Z': p.ops.push_back(PauliOp::Z); break;
      default:
        throw ArgumentError(std::string("PauliString: invalid label character '") + c + "'");
    }
  }
  return p;
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(ops.size());
  for (PauliOp o : ops) s.push_back(kOpChars[static_cast<int>(o)]);
  return s;
}

PauliSum::PauliSum(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1) throw ArgumentError("PauliSum: need at least one qubit");
}

void PauliSum::add(double coeff, PauliString string) {
  if (n_ == 0) {
    n_ = string.num_qubits();
    if (n_ < 1) throw ArgumentError("PauliSum: string on zero qubits");
  } else if (string.num_qubits() != n_) {
    throw ArgumentError("PauliSum: string width does not match the sum");
  }
  if (!std::isfinite(coeff)) throw ArgumentError("PauliSum: non-finite coefficient");
  auto it = std::find_if(terms_.begin(), terms_.end(),
                         [&](const PauliTerm& t) { return t.string == string; });
  if (it != terms_.end()) {
    it->coeff += coeff;
    if (it->coeff == 0.0) terms_.erase(it);
    return;
  }
  if (coeff == 0.0) return;
  terms_.push_back(PauliTerm{coeff, std::move(string)});
}

double PauliSum::weight_l1() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

void apply_pauli_string(const PauliString& p,
                        std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) {
  const std::size_t dim = std::size_t{1} << p.num_qubits();
  if (in.size() != dim || out.size() != dim)
    throw ArgumentError("apply_pauli_string: buffer size mismatch");
  if (in.data() == out.data())
    throw ArgumentError("apply_pauli_string: in and out must be distinct");
  const StringMasks m = masks_of(p);
  const std::complex<double> base = i_power(m.num_y);
  for (std::size_t r = 0; r < dim; ++r) {
    const double sign = std::popcount(r & m.yz) & 1 ? -1.0 : 1.0;
    out[r ^ m.flip] = base * sign * in[r];
  }
}

void apply_pauli_sum(const PauliSum& sum,
                     std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out) {
  const std::size_t dim = std::size_t{1} << sum.num_qubits();
  if (in.size() != dim || out.size() != dim)
    throw ArgumentError("apply_pauli_sum: buffer size mismatch");
  if (in.data() == out.data())
    throw ArgumentError("apply_pauli_sum: in and out must be distinct");
  std::fill(out.begin(), out.end(), std::complex<double>{0.0, 0.0});
  for (const auto& term : sum.terms()) {
    const StringMasks m = masks_of(term.string);
    const std::complex<double> base = term.coeff * i_power(m.num_y);
    for (std::size_t r = 0; r < dim; ++r) {
      const double sign = std::popcount(r & m.yz) & 1 ? -1.0 : 1.0;
      out[r ^ m.flip] += base * sign * in[r];
    }
  }
}

Eigen::MatrixXcd dense_matrix(const PauliSum& sum) {
  const int n = sum.num_qubits();
  if (n < 1) throw ArgumentError("dense_matrix: empty sum has no width");
  if (n > 12) throw ResourceError("dense_matrix: refusing n > 12 qubits");
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  for (const auto& term : sum.terms()) {
    const StringMasks m = masks_of(term.string);
    const std::complex<double> base = term.coeff * i_power(m.num_y);
    for (std::size_t r = 0; r < dim; ++r) {
      const double sign = std::popcount(r & m.yz) & 1 ? -1.0 : 1.0;
      mat(static_cast<Eigen::Index>(r ^ m.flip), static_cast<Eigen::Index>(r)) += base * sign;
    }
  }
  return mat;
}

NormEstimate operator_norm(const PauliSum& sum, const PowerIterOptions& opt) {
  if (sum.size() == 0) return {0.0, false};
  const int n = sum.num_qubits();
  if (n > 12) return {sum.weight_l1(), true};

  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::complex<double>> v(dim), w(dim), t(dim);

  // Fixed-seed start vector: deterministic result, and (almost surely) not
  // orthogonal to the dominant eigenspace of H^2.
  Rng rng(0x5eedb0a7ull);
  for (int attempt = 0; attempt < 3; ++attempt) {
    double norm2 = 0.0;
    for (auto& a : v) {
      a = {rng.normal(), rng.normal()};
      norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : v) a *= inv;

    double prev = -1.0;
    for (int k = 0; k < opt.max_iter; ++k) {
      apply_pauli_sum(sum, v, w);
      apply_pauli_sum(sum, w, t);  // t = H^2 v
      double rayleigh = 0.0;       // <v, H^2 v> = ||Hv||^2 >= 0
      double tnorm2 = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        rayleigh += (std::conj(v[r]) * t[r]).real();
        tnorm2 += std::norm(t[r]);
      }
      const double value = std::sqrt(std::max(rayleigh, 0.0));
      if (tnorm2 == 0.0) break;  // v in the kernel of H: restart
      if (k > 0 && std::abs(value - prev) <= opt.tol * std::max(1.0, value))
        return {value, false};
      prev = value;
      const double tinv = 1.0 / std::sqrt(tnorm2);
      for (std::size_t r = 0; r < dim; ++r) v[r] = t[r] * tinv;
    }
    if (prev >= 0.0)
      throw NumericError("operator_norm: power iteration did not converge");
  }
  throw NumericError("operator_norm: start vectors collapsed into the kernel");
}

PauliSum tfim_hamiltonian(int n, double J, double g) {
  if (n < 2) throw ArgumentError("tfim_hamiltonian: need n >= 2 sites");
  PauliSum h(n);
  for (int j = 0; j + 1 < n; ++j) {
    PauliString zz = PauliString::identity(n);
    zz.ops[static_cast<std::size_t>(j)] = PauliOp::Z;
    zz.ops[static_cast<std::size_t>(j + 1)] = PauliOp::Z;
    h.add(-J, std::move(zz));
  }
  for (int j = 0; j < n; ++j) h.add(-J * g, PauliString::single(n, j, PauliOp::X));
  return h;
}

TermAllocation allocate_shots(const PauliSum& sum, std::int64_t total, Rng& rng) {
  if (total < 1) throw ArgumentError("allocate_shots: need at least one shot");
  if (sum.size() == 0) throw ArgumentError("allocate_shots: sum has no terms");
  std::vector<double> cumulative;
  cumulative.reserve(sum.size());
  double acc = 0.0;
  for (const auto& t : sum.terms()) {
    acc += std::abs(t.coeff);
    cumulative.push_back(acc);
  }
  TermAllocation alloc;
  alloc.counts.assign(sum.size(), 0);
  alloc.total = total;
  for (std::int64_t s = 0; s < total; ++s) ++alloc.counts[rng.categorical(cumulative)];
  return alloc;
}

std::string serialize_pauli_sum(const PauliSum& sum) {
  std::string out;
  for (const auto& t : sum.terms()) {
    out += format_double(t.coeff);
    out += ' ';
    out += t.string.label();
    out += '\n';
  }
  return out;
}

PauliSum parse_pauli_sum(std::string_view text) {
  PauliSum sum;
  int line_no = 0;
  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 2)
      throw ParseError("line " + std::to_string(line_no) + ": expected '<coefficient> <label>'");
    double coeff = 0.0;
    if (!parse_double(tokens[0], coeff))
      throw ParseError("line " + std::to_string(line_no) + ": bad coefficient '" +
                       std::string(tokens[0]) + "'");
    PauliString str;
    try {
      str = PauliString::from_label(tokens[1]);
    } catch (const ArgumentError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (sum.num_qubits() != 0 && str.num_qubits() != sum.num_qubits())
      throw ParseError("line " + std::to_string(line_no) + ": label width differs from previous terms");
    sum.add(coeff, std::move(str));
  }
  if (sum.num_qubits() == 0) throw ParseError("no terms found");
  return sum;
}

}  // namespace sglbo
