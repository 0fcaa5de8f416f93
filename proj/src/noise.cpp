#include "sglbo/noise.hpp"

#include <algorithm>
#include <map>

#include "sglbo/errors.hpp"
#include "sglbo/text.hpp"

namespace sglbo {

double NoiseModel::cnot_rate(int control, int target) const {
  for (const auto& [pair, rate] : cnot_rates) {
    if (pair.first == control && pair.second == target) return rate;
  }
  for (const auto& [pair, rate] : cnot_rates) {
    if (pair.first == target && pair.second == control) return rate;
  }
  throw TopologyError("CNOT between uncoupled qubits q" + std::to_string(control) +
                      " and q" + std::to_string(target));
}

bool NoiseModel::coupled(int a, int b) const {
  return std::any_of(cnot_rates.begin(), cnot_rates.end(), [&](const auto& e) {
    return (e.first.first == a && e.first.second == b) ||
           (e.first.first == b && e.first.second == a);
  });
}

namespace {

int parse_qubit_token(std::string_view token, int line_no) {
  if (token.size() < 2 || token.front() != 'q')
    throw ParseError("line " + std::to_string(line_no) + ": expected 'q<index>', got '" +
                     std::string(token) + "'");
  int value = 0;
  for (char ch : token.substr(1)) {
    if (ch < '0' || ch > '9')
      throw ParseError("line " + std::to_string(line_no) + ": bad qubit index '" +
                       std::string(token) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

double parse_rate_token(std::string_view token, int line_no) {
  double rate = 0.0;
  if (!parse_double(token, rate))
    throw ParseError("line " + std::to_string(line_no) + ": bad rate '" + std::string(token) + "'");
  if (!(rate >= 0.0 && rate <= 1.0))
    throw ParseError("line " + std::to_string(line_no) + ": rate outside [0, 1]");
  return rate;
}

}  // namespace

NoiseModel parse_noise_table(std::string_view text) {
  enum class Section { None, Single, Cnot, Readout };
  Section section = Section::None;
  std::map<int, double> single, readout;
  std::vector<std::pair<std::pair<int, int>, double>> cnot;
  int line_no = 0;

  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[single]") section = Section::Single;
      else if (line == "[cnot]") section = Section::Cnot;
      else if (line == "[readout]") section = Section::Readout;
      else
        throw ParseError("line " + std::to_string(line_no) + ": unknown section '" +
                         std::string(line) + "'");
      continue;
    }
    auto tokens = split_ws(line);
    switch (section) {
      case Section::None:
        throw ParseError("line " + std::to_string(line_no) + ": row before any section header");
      case Section::Single:
      case Section::Readout: {
        if (tokens.size() != 2)
          throw ParseError("line " + std::to_string(line_no) + ": expected 'q<i> <rate>'");
        const int q = parse_qubit_token(tokens[0], line_no);
        const double rate = parse_rate_token(tokens[1], line_no);
        auto& dest = section == Section::Single ? single : readout;
        if (!dest.emplace(q, rate).second)
          throw ParseError("line " + std::to_string(line_no) + ": duplicate row for q" +
                           std::to_string(q));
        break;
      }
      case Section::Cnot: {
        if (tokens.size() != 3)
          throw ParseError("line " + std::to_string(line_no) + ": expected 'q<i> q<j> <rate>'");
        const int a = parse_qubit_token(tokens[0], line_no);
        const int b = parse_qubit_token(tokens[1], line_no);
        if (a == b)
          throw ParseError("line " + std::to_string(line_no) + ": pair couples a qubit to itself");
        const double rate = parse_rate_token(tokens[2], line_no);
        const auto key = std::make_pair(a, b);
        if (std::any_of(cnot.begin(), cnot.end(), [&](const auto& e) { return e.first == key; }))
          throw ParseError("line " + std::to_string(line_no) + ": duplicate pair q" +
                           std::to_string(a) + " q" + std::to_string(b));
        cnot.emplace_back(key, rate);
        break;
      }
    }
  }

  if (single.empty()) throw ParseError("missing [single] section");
  if (readout.empty()) throw ParseError("missing [readout] section");
  const int n = static_cast<int>(single.size());
  for (int q = 0; q < n; ++q) {
    if (!single.count(q)) throw ParseError("missing [single] row for q" + std::to_string(q));
  }
  if (readout.size() != single.size() || !std::equal(single.begin(), single.end(), readout.begin(),
                                                     [](auto& a, auto& b) { return a.first == b.first; }))
    throw ParseError("[readout] must list exactly the qubits of [single]");
  for (const auto& [pair, rate] : cnot) {
    (void)rate;
    if (pair.first >= n || pair.second >= n)
      throw ParseError("[cnot] pair q" + std::to_string(pair.first) + " q" +
                       std::to_string(pair.second) + " references an unknown qubit");
  }

  NoiseModel model;
  model.single_qubit_rate.resize(static_cast<std::size_t>(n));
  model.readout_error.resize(static_cast<std::size_t>(n));
  for (const auto& [q, rate] : single) model.single_qubit_rate[static_cast<std::size_t>(q)] = rate;
  for (const auto& [q, rate] : readout) model.readout_error[static_cast<std::size_t>(q)] = rate;
  std::sort(cnot.begin(), cnot.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  model.cnot_rates = std::move(cnot);
  return model;
}

NoiseModel load_noise_table(const std::string& path) {
  return parse_noise_table(read_text_file(path));
}

std::string serialize_noise_table(const NoiseModel& model) {
  std::string out = "[single]\n";
  for (int q = 0; q < model.num_qubits(); ++q) {
    out += "q" + std::to_string(q) + " " + format_rate(model.single_qubit_rate[static_cast<std::size_t>(q)]) + "\n";
  }
  out += "\n[cnot]\n";
  auto pairs = model.cnot_rates;
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [pair, rate] : pairs) {
    out += "q" + std::to_string(pair.first) + " q" + std::to_string(pair.second) + " " +
           format_rate(rate) + "\n";
  }
  out += "\n[readout]\n";
  for (int q = 0; q < model.num_qubits(); ++q) {
    out += "q" + std::to_string(q) + " " + format_rate(model.readout_error[static_cast<std::size_t>(q)]) + "\n";
  }
  return out;
}

}  // namespace sglbo
