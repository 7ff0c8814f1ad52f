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

#ifndef WQRBF_DE_HPP
#define WQRBF_DE_HPP

// Differential Evolution (DE/rand/1/bin) training of the two-branch classifier.
//
// Genome layout for k neurons per branch:
//
//   k x entangled neuron    [32 Ginibre factor genes (re, im row-major)][width][weight]
//   k x disentangled neuron [4 x (2 + 2 complex amplitudes = 8 genes)][4 mixing][width][weight]
//
// Every real vector decodes to valid centers: entangled-branch centers are
// G G^dagger / tr, disentangled-branch centers are convex mixtures of product
// pure states and hence separable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wqrbf/classifier.hpp"
#include "wqrbf/qstate.hpp"

namespace wqrbf {

inline constexpr std::size_t kFactorGenes = 32;
inline constexpr std::size_t kProductTerms = 4;
inline constexpr std::size_t kMixtureGenes = kProductTerms * 8 + kProductTerms;  // 36
inline constexpr std::size_t kEntangledGenes = kFactorGenes + 2;                 // 34
inline constexpr std::size_t kDisentangledGenes = kMixtureGenes + 2;             // 38

using Genome = std::vector<double>;

inline std::size_t genome_length(std::size_t k) { return k * (kEntangledGenes + kDisentangledGenes); }

struct DEConfig {
  std::size_t population = 20;
  double cr = 0.75;  ///< binomial crossover probability
  double f = 0.25;   ///< differential weight
  std::size_t generations = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void check() const {
    if (population < 4) throw std::invalid_argument("DE population must be >= 4");
    if (!(cr >= 0 && cr <= 1)) throw std::invalid_argument("DE crossover rate must be in [0, 1]");
    if (!std::isfinite(f)) throw std::invalid_argument("DE differential weight must be finite");
  }
};

// ---------------------------------------------------------------------------
// Encoding

inline Matrix4c entangled_center_matrix(std::span<const double> genes) {
  Matrix4c g;
  for (int i = 0; i < 16; ++i) g(i / 4, i % 4) = Complex(genes[2 * i], genes[2 * i + 1]);
  return normalized_gram(g);
}

/// sum_i w_i |a_i><a_i| (x) |b_i><b_i|, w_i = g_i^2 / sum g_j^2. Terms with a zero
/// amplitude vector are dropped; if nothing is left the result is I/4.
inline Matrix4c disentangled_center_matrix(std::span<const double> genes) {
  Matrix4c m = Matrix4c::Zero();
  double total = 0;
  for (std::size_t t = 0; t < kProductTerms; ++t) {
    const double* a = genes.data() + 8 * t;
    const Vector2c va(Complex(a[0], a[1]), Complex(a[2], a[3]));
    const Vector2c vb(Complex(a[4], a[5]), Complex(a[6], a[7]));
    const double g = genes[kProductTerms * 8 + t];
    const double w = g * g;
    if (w == 0 || va.squaredNorm() == 0 || vb.squaredNorm() == 0) continue;
    m += w * product_projector(va, vb);
    total += w;
  }
  if (!(total > 0) || !std::isfinite(total) || !m.allFinite()) return Matrix4c::Identity() / 4.0;
  m /= total;
  return (m + m.adjoint()) / 2.0;
}

inline ClassifierModel decode(std::span<const double> g, std::size_t k, double q,
                              DistanceMode mode = DistanceMode::relative_disentropy) {
  if (k == 0 || g.size() != genome_length(k)) {
    throw std::invalid_argument("decode: genome length " + std::to_string(g.size()) +
                                " does not match k = " + std::to_string(k));
  }
  ClassifierModel m;
  m.q = q;
  m.distance = mode;
  std::size_t pos = 0;
  for (std::size_t n = 0; n < k; ++n, pos += kEntangledGenes) {
    const auto block = g.subspan(pos, kEntangledGenes);
    m.entangled.push_back({validate(entangled_center_matrix(block)),
                           std::abs(block[kFactorGenes]), block[kFactorGenes + 1]});
  }
  for (std::size_t n = 0; n < k; ++n, pos += kDisentangledGenes) {
    const auto block = g.subspan(pos, kDisentangledGenes);
    m.disentangled.push_back({validate(disentangled_center_matrix(block)),
                              std::abs(block[kMixtureGenes]), block[kMixtureGenes + 1]});
  }
  return m;
}

/// Spectral form of decode(g), skipping validation. Bitwise identical to
/// CompiledModel(decode(g)).
inline CompiledModel compile_genome(std::span<const double> g, std::size_t k, const WqParams& wq,
                                    DistanceMode mode = DistanceMode::relative_disentropy) {
  if (k == 0 || g.size() != genome_length(k)) {
    throw std::invalid_argument("compile_genome: genome length does not match k");
  }
  std::vector<CenterTerms> ent, dis;
  ent.reserve(k);
  dis.reserve(k);
  std::size_t pos = 0;
  for (std::size_t n = 0; n < k; ++n, pos += kEntangledGenes) {
    const auto block = g.subspan(pos, kEntangledGenes);
    ent.push_back(center_terms(spectrum_of(entangled_center_matrix(block)),
                               std::abs(block[kFactorGenes]), block[kFactorGenes + 1], wq));
  }
  for (std::size_t n = 0; n < k; ++n, pos += kDisentangledGenes) {
    const auto block = g.subspan(pos, kDisentangledGenes);
    dis.push_back(center_terms(spectrum_of(disentangled_center_matrix(block)),
                               std::abs(block[kMixtureGenes]), block[kMixtureGenes + 1], wq));
  }
  return CompiledModel(std::move(ent), std::move(dis), wq, mode);
}

/// Genome whose decode has the same decision function as m. Entangled-branch
/// centers are stored exactly (G = sqrt(rho)); disentangled-branch centers are
/// replaced by the diagonal product mixture with the same spectrum, which the
/// spectral distance cannot tell apart.
inline Genome encode(const ClassifierModel& m) {
  m.check();
  Genome g;
  g.reserve(genome_length(m.k()));
  for (const Neuron& n : m.entangled) {
    const Matrix4c s = psd_sqrt(n.center);
    for (int i = 0; i < 16; ++i) {
      g.push_back(s(i / 4, i % 4).real());
      g.push_back(s(i / 4, i % 4).imag());
    }
    g.push_back(n.delta);
    g.push_back(n.weight);
  }
  for (const Neuron& n : m.disentangled) {
    const Spectrum s = hermitian_eigenvalues(n.center);
    // |00>, |01>, |10>, |11>
    for (std::size_t t = 0; t < kProductTerms; ++t) {
      const int a = static_cast<int>(t / 2), b = static_cast<int>(t % 2);
      const double amp[8] = {a == 0 ? 1.0 : 0.0, 0, a == 1 ? 1.0 : 0.0, 0,
                             b == 0 ? 1.0 : 0.0, 0, b == 1 ? 1.0 : 0.0, 0};
      g.insert(g.end(), amp, amp + 8);
    }
    for (std::size_t t = 0; t < kProductTerms; ++t) g.push_back(std::sqrt(s[t]));
    g.push_back(n.delta);
    g.push_back(n.weight);
  }
  return g;
}

inline constexpr double kInitWidthLog10Min = -1.0;
inline constexpr double kInitWidthLog10Max = 4.0;

/// Initial genome: entangled-branch factors are Ginibre draws that produced
/// entangled states, disentangled-branch genes are standard normals, widths are
/// log-uniform in [0.1, 1e4] and weights uniform in [-1, 1].
///
/// Relative disentropies between states are typically 1e-3..1e-1 and the q = 2
/// kernel only leaves its flat region once delta * d is of order one, hence the
/// wide width range.
inline Genome random_genome(Rng& rng, std::size_t k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto width = [&](Rng& r) {
    return std::pow(10.0, kInitWidthLog10Min + (kInitWidthLog10Max - kInitWidthLog10Min) * unit(r));
  };
  Genome g;
  g.reserve(genome_length(k));
  for (std::size_t n = 0; n < k; ++n) {
    Matrix4c f;
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt == kDefaultRejectionBudget) throw BudgetError("random_genome: no entangled draw");
      f = ginibre_factor(rng);
      if (concurrence(state_from_factor(f)) > kSeparableTol) break;
    }
    for (int i = 0; i < 16; ++i) {
      g.push_back(f(i / 4, i % 4).real());
      g.push_back(f(i / 4, i % 4).imag());
    }
    g.push_back(width(rng));
    g.push_back(2.0 * unit(rng) - 1.0);
  }
  for (std::size_t n = 0; n < k; ++n) {
    for (std::size_t i = 0; i < kMixtureGenes; ++i) g.push_back(normal(rng));
    g.push_back(width(rng));
    g.push_back(2.0 * unit(rng) - 1.0);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Fitness

/// Training-set error of genomes. Spectra of the training states are computed
/// once here; only the centers change between candidates.
class TrainingProblem {
 public:
  TrainingProblem(std::span<const LabeledState> train, std::size_t k, double q,
                  DistanceMode mode = DistanceMode::relative_disentropy)
      : k_(k), mode_(mode) {
    if (train.empty()) throw std::invalid_argument("training set is empty");
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    wq_.q = q;
    set_ = prepare(train, wq_);
  }

  std::uint64_t errors(std::span<const double> g) const {
    return score(compile_genome(g, k_, wq_, mode_), set_).errors();
  }

  /// Error rate in [0, 1]; lower is better.
  double fitness(std::span<const double> g) const {
    return static_cast<double>(errors(g)) / static_cast<double>(set_.size());
  }

  std::size_t k() const noexcept { return k_; }
  double q() const noexcept { return wq_.q; }
  DistanceMode distance() const noexcept { return mode_; }
  const PreparedSet& set() const noexcept { return set_; }

 private:
  std::size_t k_;
  WqParams wq_;
  DistanceMode mode_;
  PreparedSet set_;
};

inline double fitness(std::span<const double> g, std::span<const LabeledState> train,
                      std::size_t k, double q) {
  return TrainingProblem(train, k, q).fitness(g);
}

// ---------------------------------------------------------------------------
// DE/rand/1/bin

struct Population {
  std::vector<Genome> members;
  std::vector<double> fitness;
};

inline Genome mutant(std::span<const double> a, std::span<const double> b,
                     std::span<const double> c, double f) {
  Genome v(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) v[j] = a[j] + f * (b[j] - c[j]);
  return v;
}

namespace detail {

inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned t = 0; t < used; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += used) fn(i);
    });
  }
}

}  // namespace detail

/// One generation. Trial vectors are drawn sequentially from rng, evaluated
/// (possibly in parallel), then each replaces its target iff its fitness is <=.
template <class Eval>
Population de_step(const Population& pop, const DEConfig& cfg, Rng& rng, Eval&& eval) {
  cfg.check();
  const std::size_t np = pop.members.size();
  if (np < 4) throw std::invalid_argument("de_step: population must be >= 4");
  const std::size_t dim = pop.members.front().size();

  std::uniform_int_distribution<std::size_t> pick(0, np - 1);
  std::uniform_int_distribution<std::size_t> gene(0, dim - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Genome> trials(np);
  for (std::size_t i = 0; i < np; ++i) {
    std::size_t a, b, c;
    do a = pick(rng); while (a == i);
    do b = pick(rng); while (b == i || b == a);
    do c = pick(rng); while (c == i || c == a || c == b);
    Genome v = mutant(pop.members[a], pop.members[b], pop.members[c], cfg.f);
    const std::size_t forced = gene(rng);
    const Genome& x = pop.members[i];
    for (std::size_t j = 0; j < dim; ++j) {
      if (j != forced && !(unit(rng) < cfg.cr)) v[j] = x[j];
    }
    trials[i] = std::move(v);
  }

  std::vector<double> trial_fit(np);
  detail::parallel_for(np, cfg.threads, [&](std::size_t i) { trial_fit[i] = eval(trials[i]); });

  Population next = pop;
  for (std::size_t i = 0; i < np; ++i) {
    if (trial_fit[i] <= pop.fitness[i]) {
      next.members[i] = std::move(trials[i]);
      next.fitness[i] = trial_fit[i];
    }
  }
  return next;
}

struct GenerationStats {
  std::size_t generation = 0;
  double best_error = 0;
  double mean_error = 0;
};

inline GenerationStats population_stats(const Population& pop, std::size_t generation) {
  GenerationStats s;
  s.generation = generation;
  s.best_error = *std::min_element(pop.fitness.begin(), pop.fitness.end());
  s.mean_error = std::accumulate(pop.fitness.begin(), pop.fitness.end(), 0.0) /
                 static_cast<double>(pop.fitness.size());
  return s;
}

struct TrainResult {
  ClassifierModel model;
  Genome best;
  double best_error = 1;
  std::vector<GenerationStats> history;  ///< generation 0 is the initial population
};

using ProgressFn = std::function<void(const GenerationStats&)>;

/// Initial population from init_rng, then cfg.generations DE steps driven by a
/// generator seeded with cfg.seed.
inline TrainResult train(const TrainingProblem& problem, const DEConfig& cfg, Rng& init_rng,
                         const ProgressFn& progress = {}) {
  cfg.check();
  const auto eval = [&](std::span<const double> g) { return problem.fitness(g); };

  Population pop;
  pop.members.reserve(cfg.population);
  for (std::size_t i = 0; i < cfg.population; ++i) {
    pop.members.push_back(random_genome(init_rng, problem.k()));
  }
  pop.fitness.resize(cfg.population);
  detail::parallel_for(cfg.population, cfg.threads,
                       [&](std::size_t i) { pop.fitness[i] = eval(pop.members[i]); });

  TrainResult out;
  out.history.push_back(population_stats(pop, 0));
  if (progress) progress(out.history.back());

  Rng rng(cfg.seed);
  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    pop = de_step(pop, cfg, rng, eval);
    out.history.push_back(population_stats(pop, gen));
    if (progress) progress(out.history.back());
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(pop.fitness.begin(), pop.fitness.end()) - pop.fitness.begin());
  out.best = pop.members[best];
  out.best_error = pop.fitness[best];
  out.model = decode(out.best, problem.k(), problem.q(), problem.distance());
  return out;
}

inline TrainResult train(std::span<const LabeledState> train_set, const DEConfig& cfg,
                         std::size_t k, double q, Rng& init_rng) {
  return train(TrainingProblem(train_set, k, q), cfg, init_rng);
}

}  // namespace wqrbf

#endif  // WQRBF_DE_HPP
