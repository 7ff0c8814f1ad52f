// Copyright 2026 The wqrbf Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQRBF_CLASSIFIER_HPP
#define WQRBF_CLASSIFIER_HPP

// Two-branch W_q radial basis network over two-qubit states.
//
//   y1(rho) = sum_n r_n1 / (1 + W_q(delta_n1 D(rho || Gamma_n)))   entangled centers
//   y2(rho) = sum_n r_n2 / (1 + W_q(delta_n2 D(rho || Phi_n)))     disentangled centers
//   y(rho)  = y1 - y2,  entangled iff y > 0
//
// D is the relative disentropy, which only sees the two spectra. Evaluation is
// therefore split into a per-state part (StateTerms) and a per-neuron part
// (CenterTerms) that can both be precomputed.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "wqrbf/errors.hpp"
#include "wqrbf/qstate.hpp"
#include "wqrbf/text.hpp"
#include "wqrbf/wq.hpp"

namespace wqrbf {

enum class DistanceMode {
  relative_disentropy,          ///< d = D_q^R(rho || center)
  squared_relative_disentropy,  ///< d = D_q^R(rho || center)^2
};

inline std::string_view distance_name(DistanceMode m) {
  return m == DistanceMode::relative_disentropy ? "relative-disentropy"
                                                : "squared-relative-disentropy";
}

inline DistanceMode parse_distance(std::string_view s) {
  if (s == "relative-disentropy") return DistanceMode::relative_disentropy;
  if (s == "squared-relative-disentropy") return DistanceMode::squared_relative_disentropy;
  throw FormatError("unknown distance mode '" + std::string(s) + "'");
}

struct Neuron {
  DensityMatrix center;
  double delta = 1;
  double weight = 0;
};

struct ClassifierModel {
  std::vector<Neuron> entangled;
  std::vector<Neuron> disentangled;
  double q = 2;
  DistanceMode distance = DistanceMode::relative_disentropy;

  std::size_t k() const noexcept { return entangled.size(); }

  /// Throws InvariantError unless both branches have the same length k >= 1,
  /// widths are finite and nonnegative and weights are finite.
  void check() const {
    if (entangled.size() != disentangled.size()) {
      throw InvariantError("classifier: branch sizes differ (" +
                           std::to_string(entangled.size()) + " vs " +
                           std::to_string(disentangled.size()) + ")");
    }
    if (entangled.empty()) throw InvariantError("classifier: k must be >= 1");
    if (!std::isfinite(q)) throw InvariantError("classifier: q must be finite");
    for (const auto* branch : {&entangled, &disentangled}) {
      for (const Neuron& n : *branch) {
        if (!(n.delta >= 0) || !std::isfinite(n.delta)) {
          throw InvariantError("classifier: neuron width must be finite and >= 0");
        }
        if (!std::isfinite(n.weight)) throw InvariantError("classifier: weight must be finite");
      }
    }
  }
};

/// Per-state quantities entering the relative disentropy: lambda^q and W_q(lambda).
struct StateTerms {
  std::array<double, 4> power{};
  std::array<double, 4> w{};
};

inline StateTerms state_terms(const Spectrum& s, const WqParams& p) {
  StateTerms t;
  for (std::size_t n = 0; n < 4; ++n) {
    const double l = s[n];
    t.power[n] = l > 0 ? std::pow(l, p.q) : 0.0;
    t.w[n] = lambert_wq(l, p);
  }
  return t;
}

/// Per-neuron quantities: W_q of the center spectrum, width and weight.
struct CenterTerms {
  std::array<double, 4> w{};
  double delta = 0;
  double weight = 0;
};

inline CenterTerms center_terms(const Spectrum& s, double delta, double weight,
                                const WqParams& p) {
  CenterTerms c;
  for (std::size_t n = 0; n < 4; ++n) c.w[n] = lambert_wq(s[n], p);
  c.delta = delta;
  c.weight = weight;
  return c;
}

inline double center_distance(const StateTerms& x, const CenterTerms& c, DistanceMode mode) {
  double d = 0;
  for (std::size_t n = 0; n < 4; ++n) d += x.power[n] * std::abs(x.w[n] - c.w[n]);
  return mode == DistanceMode::squared_relative_disentropy ? d * d : d;
}

inline double branch_output(const StateTerms& x, std::span<const CenterTerms> branch,
                            const WqParams& p, DistanceMode mode) {
  double y = 0;
  for (const CenterTerms& c : branch) {
    y += c.weight / (1 + lambert_wq(c.delta * center_distance(x, c, mode), p));
  }
  return y;
}

/// Sign rule: y > 0 is entangled, y <= 0 (ties included) disentangled.
inline Label classify_value(double y) { return y > 0 ? Label::entangled : Label::disentangled; }

/// A model reduced to its spectral form; what training and bulk scoring use.
class CompiledModel {
 public:
  CompiledModel() = default;

  CompiledModel(std::vector<CenterTerms> entangled, std::vector<CenterTerms> disentangled,
                WqParams wq, DistanceMode mode)
      : entangled_(std::move(entangled)),
        disentangled_(std::move(disentangled)),
        wq_(wq),
        mode_(mode) {}

  explicit CompiledModel(const ClassifierModel& m, WqMethod method = WqMethod::automatic) {
    m.check();
    wq_.q = m.q;
    wq_.method = method;
    mode_ = m.distance;
    for (const Neuron& n : m.entangled) {
      entangled_.push_back(center_terms(hermitian_eigenvalues(n.center), n.delta, n.weight, wq_));
    }
    for (const Neuron& n : m.disentangled) {
      disentangled_.push_back(
          center_terms(hermitian_eigenvalues(n.center), n.delta, n.weight, wq_));
    }
  }

  double entangled_output(const StateTerms& x) const {
    return branch_output(x, entangled_, wq_, mode_);
  }
  double disentangled_output(const StateTerms& x) const {
    return branch_output(x, disentangled_, wq_, mode_);
  }
  double decision_value(const StateTerms& x) const {
    return entangled_output(x) - disentangled_output(x);
  }
  Label classify(const StateTerms& x) const { return classify_value(decision_value(x)); }

  StateTerms terms(const DensityMatrix& rho) const {
    return state_terms(hermitian_eigenvalues(rho), wq_);
  }

  const WqParams& wq() const noexcept { return wq_; }
  DistanceMode distance() const noexcept { return mode_; }

 private:
  std::vector<CenterTerms> entangled_;
  std::vector<CenterTerms> disentangled_;
  WqParams wq_;
  DistanceMode mode_ = DistanceMode::relative_disentropy;
};

/// y_t(rho) for one branch of neurons.
inline double branch_output(const DensityMatrix& rho, std::span<const Neuron> branch, double q,
                            DistanceMode mode = DistanceMode::relative_disentropy,
                            WqMethod method = WqMethod::automatic) {
  WqParams p;
  p.q = q;
  p.method = method;
  const StateTerms x = state_terms(hermitian_eigenvalues(rho), p);
  double y = 0;
  for (const Neuron& n : branch) {
    const CenterTerms c = center_terms(hermitian_eigenvalues(n.center), n.delta, n.weight, p);
    y += c.weight / (1 + lambert_wq(c.delta * center_distance(x, c, mode), p));
  }
  return y;
}

inline double decision_value(const DensityMatrix& rho, const ClassifierModel& m) {
  return branch_output(rho, m.entangled, m.q, m.distance) -
         branch_output(rho, m.disentangled, m.q, m.distance);
}

inline Label classify(const DensityMatrix& rho, const ClassifierModel& m) {
  return classify_value(decision_value(rho, m));
}

/// Confusion counts, indexed [true label][predicted label].
struct Confusion {
  std::uint64_t counts[2][2] = {{0, 0}, {0, 0}};

  std::uint64_t& at(Label truth, Label predicted) {
    return counts[static_cast<int>(truth)][static_cast<int>(predicted)];
  }
  std::uint64_t at(Label truth, Label predicted) const {
    return counts[static_cast<int>(truth)][static_cast<int>(predicted)];
  }
  std::uint64_t total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
  std::uint64_t correct() const { return counts[0][0] + counts[1][1]; }
  std::uint64_t errors() const { return counts[0][1] + counts[1][0]; }
  double rate() const {
    return total() == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(total());
  }

  Confusion& operator+=(const Confusion& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) counts[i][j] += o.counts[i][j];
    return *this;
  }
};

/// A dataset reduced to spectral terms at a fixed q.
struct PreparedSet {
  std::vector<StateTerms> terms;
  std::vector<Label> labels;

  std::size_t size() const noexcept { return labels.size(); }
};

inline PreparedSet prepare(std::span<const LabeledState> records, const WqParams& p) {
  PreparedSet out;
  out.terms.reserve(records.size());
  out.labels.reserve(records.size());
  for (const LabeledState& r : records) {
    out.terms.push_back(state_terms(hermitian_eigenvalues(r.state), p));
    out.labels.push_back(r.label);
  }
  return out;
}

/// Confusion counts over a prepared set. Work is split by record range; only
/// integer counts cross threads, so the result does not depend on `threads`.
inline Confusion score(const CompiledModel& model, const PreparedSet& set, unsigned threads = 1) {
  const std::size_t n = set.size();
  auto run = [&](std::size_t begin, std::size_t end) {
    Confusion c;
    for (std::size_t i = begin; i < end; ++i) {
      ++c.at(set.labels[i], model.classify(set.terms[i]));
    }
    return c;
  };
  if (threads <= 1 || n < 2 * static_cast<std::size_t>(threads)) return run(0, n);

  std::vector<Confusion> parts(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = n * t / threads;
      const std::size_t end = n * (t + 1) / threads;
      pool.emplace_back([&, t, begin, end] { parts[t] = run(begin, end); });
    }
  }
  Confusion total;
  for (const auto& p : parts) total += p;
  return total;
}

inline Confusion score(const ClassifierModel& model, std::span<const LabeledState> records,
                       unsigned threads = 1) {
  const CompiledModel compiled(model);
  return score(compiled, prepare(records, compiled.wq()), threads);
}

/// Fraction of records whose predicted label matches the stored one.
inline double success_rate(const ClassifierModel& model, std::span<const LabeledState> records,
                           unsigned threads = 1) {
  if (records.empty()) throw std::invalid_argument("success_rate: dataset is empty");
  return score(model, records, threads).rate();
}

// ---------------------------------------------------------------------------
// Model files
//
//   wqrbf-model v1
//   q <q>
//   k <k>
//   distance <relative-disentropy|squared-relative-disentropy>
//   neuron <E|D> <r> <delta> <re,im> x 16     (2k lines, row-major entries)
//   end

inline constexpr std::string_view kModelMagic = "wqrbf-model v1";

inline void write_model(std::ostream& os, const ClassifierModel& m) {
  m.check();
  os << kModelMagic << '\n';
  os << "q " << text::fmt(m.q) << '\n';
  os << "k " << m.k() << '\n';
  os << "distance " << distance_name(m.distance) << '\n';
  auto put = [&](char tag, const Neuron& n) {
    std::string line = "neuron ";
    line += tag;
    line += ' ' + text::fmt(n.weight) + ' ' + text::fmt(n.delta);
    const Matrix4c& c = n.center.matrix();
    for (int i = 0; i < 16; ++i) {
      line += ' ' + text::fmt(c(i / 4, i % 4).real()) + ',' + text::fmt(c(i / 4, i % 4).imag());
    }
    os << line << '\n';
  };
  for (const Neuron& n : m.entangled) put('E', n);
  for (const Neuron& n : m.disentangled) put('D', n);
  os << "end\n";
}

inline ClassifierModel read_model(std::istream& is) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);) {
    const auto t = text::trim(line);
    if (!t.empty()) lines.emplace_back(t);
  }
  auto fail = [](std::size_t idx, const std::string& what) -> FormatError {
    return FormatError("model line " + std::to_string(idx + 1) + ": " + what);
  };
  if (lines.empty() || lines[0] != kModelMagic) throw fail(0, "not a wqrbf-model v1 file");

  auto keyed = [&](std::size_t idx, std::string_view key) -> std::string_view {
    if (idx >= lines.size()) throw fail(idx, "truncated file, missing field '" + std::string(key) + "'");
    std::string_view l = lines[idx];
    if (l.substr(0, key.size()) != key || l.size() <= key.size() || l[key.size()] != ' ') {
      throw fail(idx, "expected field '" + std::string(key) + "'");
    }
    return l.substr(key.size() + 1);
  };

  ClassifierModel m;
  if (!text::parse(keyed(1, "q"), m.q)) throw fail(1, "field 'q' is not a number");
  std::int64_t k = 0;
  if (!text::parse(keyed(2, "k"), k) || k < 1) throw fail(2, "field 'k' must be a positive integer");
  try {
    m.distance = parse_distance(keyed(3, "distance"));
  } catch (const FormatError& e) {
    throw fail(3, std::string("field 'distance': ") + e.what());
  }

  if (lines.back() != "end") throw fail(lines.size(), "truncated file, missing 'end'");

  for (std::size_t idx = 4; idx + 1 < lines.size(); ++idx) {
    const auto tok = text::split(keyed(idx, "neuron"), ' ');
    if (tok.size() != 19) throw fail(idx, "neuron needs 19 fields, found " + std::to_string(tok.size()));
    Neuron n;
    if (!text::parse(tok[1], n.weight)) throw fail(idx, "field 'r' is not a number");
    if (!text::parse(tok[2], n.delta)) throw fail(idx, "field 'delta' is not a number");
    Matrix4c c;
    for (int i = 0; i < 16; ++i) {
      const auto parts = text::split(tok[3 + i], ',');
      double re = 0, im = 0;
      if (parts.size() != 2 || !text::parse(parts[0], re) || !text::parse(parts[1], im)) {
        throw fail(idx, "field 'entry " + std::to_string(i) + "' is not a re,im pair");
      }
      c(i / 4, i % 4) = Complex(re, im);
    }
    try {
      n.center = validate(c);
    } catch (const StateError& e) {
      throw fail(idx, std::string("field 'center': ") + e.what());
    }
    if (tok[0] == "E") {
      m.entangled.push_back(std::move(n));
    } else if (tok[0] == "D") {
      m.disentangled.push_back(std::move(n));
    } else {
      throw fail(idx, "field 'branch' must be E or D");
    }
  }
  if (m.entangled.size() != static_cast<std::size_t>(k) ||
      m.disentangled.size() != static_cast<std::size_t>(k)) {
    throw InvariantError("model: k = " + std::to_string(k) + " but branches hold " +
                         std::to_string(m.entangled.size()) + " entangled and " +
                         std::to_string(m.disentangled.size()) + " disentangled neurons");
  }
  m.check();
  return m;
}

inline void save_model(const std::string& path, const ClassifierModel& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_model(os, m);
}

inline ClassifierModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_model(is);
}

}  // namespace wqrbf

#endif  // WQRBF_CLASSIFIER_HPP
