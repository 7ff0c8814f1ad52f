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

#include <catch_amalgamated.hpp>

#include <numeric>

#include "support.hpp"
#include "wqrbf/de.hpp"

using namespace wqrbf;
using Catch::Matchers::WithinAbs;

namespace {

/// Genome with every gene drawn as N(0, 1) * 10^U(-3, 3).
Genome wild_genome(Rng& rng, std::size_t k) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  Genome g(genome_length(k));
  for (double& x : g) x = n(rng) * std::pow(10.0, e(rng));
  return g;
}

std::vector<LabeledState> mixed_set(Rng& rng, std::size_t per_class) {
  std::vector<LabeledState> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back(sample_labeled(rng, Label::disentangled));
    out.push_back(sample_labeled(rng, Label::entangled, 0.0, 0.1));
  }
  return out;
}

void set_weights(Genome& g, std::size_t k, double entangled, double disentangled) {
  for (std::size_t n = 0; n < k; ++n) g[n * kEntangledGenes + kFactorGenes + 1] = entangled;
  const std::size_t base = k * kEntangledGenes;
  for (std::size_t n = 0; n < k; ++n) g[base + n * kDisentangledGenes + kMixtureGenes + 1] = disentangled;
}

double sphere(std::span<const double> x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

Population sphere_population(Rng& rng, std::size_t np, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 3.0);
  Population pop;
  for (std::size_t i = 0; i < np; ++i) {
    Genome g(dim);
    for (double& x : g) x = n(rng);
    pop.fitness.push_back(sphere(g));
    pop.members.push_back(std::move(g));
  }
  return pop;
}

}  // namespace

TEST_CASE("genome length", "[de][encoding]") {
  CHECK(genome_length(10) == 720);
  CHECK(genome_length(1) == kEntangledGenes + kDisentangledGenes);
  Rng rng(1);
  CHECK(random_genome(rng, 10).size() == 720);
  CHECK_THROWS_AS(decode(Genome(719), 10, 2.0), std::invalid_argument);
}

TEST_CASE("decode reference genomes", "[de][encoding]") {
  Genome g(genome_length(1), 0.0);
  // Entangled block: G = identity, width gene -2, weight 0.5.
  for (int i = 0; i < 4; ++i) g[2 * (4 * i + i)] = 1.0;
  g[kFactorGenes] = -2.0;
  g[kFactorGenes + 1] = 0.5;
  // Disentangled block: single term |0> (x) |1> with mixing gene 1.
  const std::size_t d = kEntangledGenes;
  g[d + 0] = 1.0;  // a = (1, 0)
  g[d + 6] = 1.0;  // b = (0, 1)
  g[d + 32] = 1.0;
  g[d + kMixtureGenes] = 3.0;
  g[d + kMixtureGenes + 1] = -1.0;

  const ClassifierModel m = decode(g, 1, 2.0);
  CHECK((m.entangled[0].center.matrix() - Matrix4c::Identity() / 4.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(m.entangled[0].delta == 2.0);
  CHECK(m.entangled[0].weight == 0.5);
  Matrix4c expected = Matrix4c::Zero();
  expected(1, 1) = 1.0;
  CHECK((m.disentangled[0].center.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(m.disentangled[0].delta == 3.0);
  CHECK(m.disentangled[0].weight == -1.0);
}

TEST_CASE("degenerate blocks decode to I/4", "[de][encoding]") {
  const ClassifierModel m = decode(Genome(genome_length(2), 0.0), 2, 2.0);
  for (const auto* branch : {&m.entangled, &m.disentangled})
    for (const Neuron& n : *branch) CHECK(n.center.matrix() == Matrix4c::Identity() / 4.0);
}

TEST_CASE("random genomes decode to valid, separable-where-required centers", "[de][encoding][property]") {
  Rng rng(2);
  for (int t = 0; t < 10'000; ++t) {
    const Genome g = t % 2 ? wild_genome(rng, 1) : random_genome(rng, 1);
    const ClassifierModel m = decode(g, 1, 2.0);
    CHECK_NOTHROW(validate(m.entangled[0].center.matrix()));
    CHECK_NOTHROW(validate(m.disentangled[0].center.matrix()));
    CHECK(concurrence(m.disentangled[0].center) <= 1e-9);
    CHECK(m.entangled[0].delta >= 0);
  }
}

TEST_CASE("initial entangled-branch centers are entangled", "[de][encoding]") {
  Rng rng(3);
  const ClassifierModel m = decode(random_genome(rng, 10), 10, 2.0);
  for (const Neuron& n : m.entangled) {
    CHECK(concurrence(n.center) > 1e-9);
    CHECK((n.delta >= 0.1 && n.delta <= 1e4));
    CHECK((n.weight >= -1 && n.weight <= 1));
  }
}

TEST_CASE("compile_genome matches the decoded model", "[de][encoding]") {
  Rng rng(4);
  WqParams p;
  for (int t = 0; t < 20; ++t) {
    const Genome g = random_genome(rng, 3);
    const CompiledModel fast = compile_genome(g, 3, p);
    const CompiledModel slow(decode(g, 3, 2.0));
    for (int i = 0; i < 20; ++i) {
      const auto x = fast.terms(random_state(rng));
      CHECK(fast.decision_value(x) == slow.decision_value(x));
    }
  }
}

TEST_CASE("encode then decode preserves decisions", "[de][encoding][property]") {
  Rng rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    ClassifierModel m;
    for (int i = 0; i < 5; ++i) {
      m.entangled.push_back({random_state(rng), 100 * unit(rng), 2 * unit(rng) - 1});
      m.disentangled.push_back({sample_labeled(rng, Label::disentangled).state, 100 * unit(rng),
                                2 * unit(rng) - 1});
    }
    const Genome g = encode(m);
    REQUIRE(g.size() == genome_length(5));
    const ClassifierModel back = decode(g, 5, m.q);
    for (int i = 0; i < 100; ++i) {
      const DensityMatrix rho = random_state(rng);
      CHECK_THAT(decision_value(rho, back), WithinAbs(decision_value(rho, m), 1e-9));
    }
  }
}

TEST_CASE("fitness reference cases", "[de][fitness]") {
  Rng rng(6);
  const auto data = mixed_set(rng, 40);
  const TrainingProblem problem(data, 3, 2.0);

  Genome g = random_genome(rng, 3);
  set_weights(g, 3, 0.0, 0.0);  // y == 0 everywhere: all predicted disentangled
  CHECK(problem.fitness(g) == 0.5);

  std::vector<LabeledState> only_dis;
  for (const auto& r : data)
    if (r.label == Label::disentangled) only_dis.push_back(r);
  set_weights(g, 3, 0.0, 1.0);
  CHECK(TrainingProblem(only_dis, 3, 2.0).fitness(g) == 0.0);

  for (int t = 0; t < 50; ++t) {
    const double f = problem.fitness(wild_genome(rng, 3));
    CHECK((f >= 0 && f <= 1));
  }
  CHECK(fitness(g, only_dis, 3, 2.0) == 0.0);
}

TEST_CASE("mutant arithmetic", "[de][step]") {
  const Genome a{1, 1}, b{2, 0}, c{0, 0};
  CHECK(mutant(a, b, c, 0.25) == Genome{1.5, 1.0});
  CHECK(mutant(a, b, c, 0.0) == a);
}

TEST_CASE("de_step selection is greedy", "[de][step][property]") {
  Rng init(7), rng(8);
  DEConfig cfg;
  Population pop = sphere_population(init, 20, 6);
  double best = *std::min_element(pop.fitness.begin(), pop.fitness.end());
  const double start = best;
  for (int gen = 0; gen < 200; ++gen) {
    const Population next = de_step(pop, cfg, rng, sphere);
    for (std::size_t i = 0; i < pop.members.size(); ++i) CHECK(next.fitness[i] <= pop.fitness[i]);
    const double b = *std::min_element(next.fitness.begin(), next.fitness.end());
    CHECK(b <= best);
    best = b;
    pop = next;
  }
  CHECK(best < 1e-3 * start);
}

TEST_CASE("de_step with F = 0 and CR = 1 copies donors", "[de][step]") {
  Rng init(9), rng(10);
  DEConfig cfg;
  cfg.f = 0;
  cfg.cr = 1;
  const Population pop = sphere_population(init, 8, 3);
  const Population next = de_step(pop, cfg, rng, sphere);
  for (const Genome& g : next.members) {
    CHECK(std::find(pop.members.begin(), pop.members.end(), g) != pop.members.end());
  }
}

TEST_CASE("DE configuration checks", "[de]") {
  DEConfig cfg;
  cfg.population = 3;
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
  cfg = {};
  cfg.cr = 1.5;
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
}

TEST_CASE("train: zero generations returns the best initial genome", "[de][train]") {
  Rng data_rng(11);
  const auto data = mixed_set(data_rng, 30);
  const TrainingProblem problem(data, 2, 2.0);
  DEConfig cfg;
  cfg.generations = 0;
  Rng init(12);
  const TrainResult res = train(problem, cfg, init);
  REQUIRE(res.history.size() == 1);

  Rng again(12);
  double best = 2;
  Genome best_genome;
  for (std::size_t i = 0; i < cfg.population; ++i) {
    const Genome g = random_genome(again, 2);
    const double f = problem.fitness(g);
    if (f < best) {
      best = f;
      best_genome = g;
    }
  }
  CHECK(res.best_error == best);
  CHECK(res.best == best_genome);
  CHECK(res.history[0].best_error == best);
}

TEST_CASE("train: history and determinism", "[de][train][property]") {
  Rng data_rng(13);
  const auto data = mixed_set(data_rng, 50);
  const TrainingProblem problem(data, 3, 2.0);
  DEConfig cfg;
  cfg.generations = 40;
  cfg.seed = 99;

  Rng init_a(14);
  const TrainResult a = train(problem, cfg, init_a);
  REQUIRE(a.history.size() == 41);
  for (std::size_t i = 1; i < a.history.size(); ++i) {
    CHECK(a.history[i].generation == i);
    CHECK(a.history[i].best_error <= a.history[i - 1].best_error);
    CHECK(a.history[i].best_error <= a.history[i].mean_error);
  }
  CHECK(a.best_error == a.history.back().best_error);
  CHECK(problem.fitness(a.best) == a.best_error);

  Rng init_b(14);
  const TrainResult b = train(problem, cfg, init_b);
  CHECK(a.best == b.best);

  cfg.threads = 3;
  Rng init_c(14);
  const TrainResult c = train(problem, cfg, init_c);
  CHECK(a.best == c.best);
}
