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

#ifndef WQRBF_EXPERIMENT_HPP
#define WQRBF_EXPERIMENT_HPP

// Dataset recipes for the training/test scenarios, seed derivation and the
// train-on-Str_i / test-on-Stst_j success-rate grid.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wqrbf/classifier.hpp"
#include "wqrbf/de.hpp"
#include "wqrbf/qstate.hpp"
#include "wqrbf/text.hpp"

namespace wqrbf {

// ---------------------------------------------------------------------------
// Seeds
//
// All randomness derives from one master seed:
//   derive_seed(master, stream, index) = master + 1'000'000 * stream + 10'000 * index
// and dataset generation adds the chunk number (< 10'000) on top.

enum class Stream : std::uint64_t {
  train_set = 1,
  test_set = 2,
  de_init = 3,
  de_loop = 4,
  sampler = 5,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream s, std::uint64_t index = 0) {
  return master + 1'000'000ULL * static_cast<std::uint64_t>(s) + 10'000ULL * index;
}

// ---------------------------------------------------------------------------
// Dataset recipes

/// Entangled records drawn with concurrence in (c_min, c_max] (closed at 0).
struct Window {
  double fraction = 1;
  double c_min = 0;
  double c_max = 1;
};

struct DatasetSpec {
  std::size_t disentangled = 0;
  std::size_t entangled = 0;
  std::vector<Window> mix{Window{}};
  std::size_t unrestricted = 0;  ///< plain Hilbert-Schmidt draws, labeled by concurrence
};

/// Parses "fraction:c_min:c_max[,fraction:c_min:c_max...]".
inline std::vector<Window> parse_mix(std::string_view spec) {
  std::vector<Window> out;
  for (auto item : text::split(spec, ',')) {
    const auto f = text::split(text::trim(item), ':');
    Window w;
    if (f.size() != 3 || !text::parse(f[0], w.fraction) || !text::parse(f[1], w.c_min) ||
        !text::parse(f[2], w.c_max)) {
      throw std::invalid_argument("mix entry '" + std::string(item) +
                                  "' is not fraction:c_min:c_max");
    }
    if (!(w.fraction >= 0) || !(w.c_min >= 0 && w.c_min <= w.c_max && w.c_max <= 1)) {
      throw std::invalid_argument("mix entry '" + std::string(item) + "' is out of range");
    }
    out.push_back(w);
  }
  double total = 0;
  for (const auto& w : out) total += w.fraction;
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mix fractions must sum to 1");
  return out;
}

struct SampleTask {
  std::optional<Label> kind;  ///< nullopt: accept whatever is drawn
  double c_min;
  double c_max;
};

/// One task per record: unrestricted draws first, then all disentangled, then
/// each entangled window in order.
/// Window sizes use cumulative rounding so they always add up to `entangled`.
inline std::vector<SampleTask> expand(const DatasetSpec& spec) {
  std::vector<SampleTask> tasks;
  tasks.reserve(spec.unrestricted + spec.disentangled + spec.entangled);
  for (std::size_t i = 0; i < spec.unrestricted; ++i) tasks.push_back({std::nullopt, 0, 1});
  for (std::size_t i = 0; i < spec.disentangled; ++i) tasks.push_back({Label::disentangled, 0, 1});
  double cum = 0;
  std::size_t placed = 0;
  for (std::size_t w = 0; w < spec.mix.size(); ++w) {
    cum += spec.mix[w].fraction;
    const std::size_t upto =
        w + 1 == spec.mix.size()
            ? spec.entangled
            : static_cast<std::size_t>(std::llround(cum * static_cast<double>(spec.entangled)));
    for (; placed < upto; ++placed) {
      tasks.push_back({Label::entangled, spec.mix[w].c_min, spec.mix[w].c_max});
    }
  }
  return tasks;
}

inline constexpr std::size_t kGenerationChunk = 1024;

/// Records are produced in chunks of kGenerationChunk; chunk c uses its own
/// generator seeded with seed + c, so the output does not depend on `threads`.
inline std::vector<LabeledState> generate(const DatasetSpec& spec, std::uint64_t seed,
                                          unsigned threads = 1,
                                          std::uint64_t budget = kDefaultRejectionBudget) {
  const auto tasks = expand(spec);
  std::vector<LabeledState> out(tasks.size());
  const std::size_t chunks = (tasks.size() + kGenerationChunk - 1) / kGenerationChunk;
  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng(seed + c);
    const std::size_t end = std::min(tasks.size(), (c + 1) * kGenerationChunk);
    for (std::size_t i = c * kGenerationChunk; i < end; ++i) {
      const SampleTask& t = tasks[i];
      out[i] = t.kind ? sample_labeled(rng, *t.kind, t.c_min, t.c_max, budget) : sample_any(rng);
    }
  });
  return out;
}

inline constexpr std::size_t kFullTrainPerClass = 2500;
inline constexpr std::size_t kFullTestCount = 1'000'000;
inline constexpr std::size_t kFullGenerations = 1000;
inline constexpr std::size_t kTrainPresets = 6;  // Str_0 .. Str_5
inline constexpr std::size_t kTestPresets = 9;   // Stst_1 .. Stst_9

inline std::size_t scaled(std::size_t base, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(base * scale)));
}

inline std::vector<Window> train_mix(std::size_t index) {
  switch (index) {
    case 0: return {{1.0, 0.0, 1.0}};
    case 1: return {{1.0, 0.0, 0.1}};
    case 2: return {{0.75, 0.0, 0.1}, {0.25, 0.1, 0.2}};
    case 3: return {{0.5, 0.0, 0.1}, {0.5, 0.1, 0.2}};
    case 4: return {{0.25, 0.0, 0.1}, {0.75, 0.1, 0.2}};
    case 5: return {{0.25, 0.0, 0.1}, {0.25, 0.1, 0.2}, {0.25, 0.2, 0.3}, {0.25, 0.3, 0.4}};
    default: throw std::out_of_range("training preset index must be 0..5");
  }
}

/// Str_<index>: per_class disentangled + per_class entangled records.
inline DatasetSpec train_preset(std::size_t index, std::size_t per_class) {
  return DatasetSpec{per_class, per_class, train_mix(index)};
}

/// Stst_<index>, index 1..9. Stst_1 is unrestricted: class proportions are
/// whatever the Hilbert-Schmidt measure produces (about 24% disentangled).
inline DatasetSpec test_preset(std::size_t index, std::size_t count) {
  switch (index) {
    case 1: return DatasetSpec{0, 0, {{1.0, 0.0, 1.0}}, count};
    case 2: return DatasetSpec{count, 0, {{1.0, 0.0, 1.0}}};
    case 3: return DatasetSpec{0, count, {{1.0, 0.0, 1.0}}};
    default: {
      static constexpr double kEdges[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
      if (index < 4 || index > 9) throw std::out_of_range("test preset index must be 1..9");
      return DatasetSpec{0, count, {{1.0, kEdges[index - 4], kEdges[index - 3]}}};
    }
  }
}

/// Resolves "Str_0".."Str_5" / "Stst_1".."Stst_9" at the given scale.
inline DatasetSpec named_preset(std::string_view name, double scale) {
  const auto idx = [&](std::string_view prefix) -> std::optional<std::size_t> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::int64_t v = -1;
    if (!text::parse(name.substr(prefix.size()), v) || v < 0) return std::nullopt;
    return static_cast<std::size_t>(v);
  };
  if (auto i = idx("Stst_")) return test_preset(*i, scaled(kFullTestCount, scale));
  if (auto i = idx("Str_")) return train_preset(*i, scaled(kFullTrainPerClass, scale));
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Train/test grid

struct ExperimentConfig {
  std::uint64_t seed = 1;
  double scale = 1.0;
  std::size_t k = 10;
  double q = 2;
  DEConfig de;  ///< de.generations and de.seed are overridden from scale/seed
  DistanceMode distance = DistanceMode::relative_disentropy;
  std::optional<std::size_t> train_per_class;
  std::optional<std::size_t> test_count;
  std::optional<std::size_t> generations;
  unsigned threads = 1;

  std::size_t resolved_train_per_class() const {
    return train_per_class.value_or(scaled(kFullTrainPerClass, scale));
  }
  std::size_t resolved_test_count() const {
    return test_count.value_or(scaled(kFullTestCount, scale));
  }
  std::size_t resolved_generations() const {
    return generations.value_or(static_cast<std::size_t>(std::llround(kFullGenerations * scale)));
  }

  void check() const {
    if (!(scale > 0 && scale <= 1)) throw std::invalid_argument("scale must be in (0, 1]");
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    de.check();
  }
};

/// Trains on Str_<row> with seeds derived from cfg.seed. The DE streams are
/// shared by all rows so rows differ only in their training data.
inline TrainResult train_row(const ExperimentConfig& cfg, std::size_t row,
                             const ProgressFn& progress = {}) {
  const auto train_set = generate(train_preset(row, cfg.resolved_train_per_class()),
                                  derive_seed(cfg.seed, Stream::train_set, row), cfg.threads);
  DEConfig de = cfg.de;
  de.generations = cfg.resolved_generations();
  de.seed = derive_seed(cfg.seed, Stream::de_loop);
  de.threads = cfg.threads;
  Rng init(derive_seed(cfg.seed, Stream::de_init));
  return train(TrainingProblem(train_set, cfg.k, cfg.q, cfg.distance), de, init, progress);
}

inline PreparedSet prepared_test_set(const ExperimentConfig& cfg, std::size_t index) {
  const auto records = generate(test_preset(index, cfg.resolved_test_count()),
                                derive_seed(cfg.seed, Stream::test_set, index), cfg.threads);
  WqParams p;
  p.q = cfg.q;
  return prepare(records, p);
}

struct Table3 {
  std::array<std::array<double, kTestPresets>, kTrainPresets> rate{};  ///< fractions in [0, 1]
  std::array<double, kTrainPresets> train_error{};
};

using Table3Progress = std::function<void(const std::string&)>;

inline Table3 run_table3(const ExperimentConfig& cfg, const Table3Progress& progress = {}) {
  cfg.check();
  std::vector<PreparedSet> tests;
  for (std::size_t j = 1; j <= kTestPresets; ++j) {
    if (progress) progress("generating Stst_" + std::to_string(j));
    tests.push_back(prepared_test_set(cfg, j));
  }
  Table3 out;
  for (std::size_t i = 0; i < kTrainPresets; ++i) {
    if (progress) progress("training on Str_" + std::to_string(i));
    const TrainResult res = train_row(cfg, i);
    out.train_error[i] = res.best_error;
    const CompiledModel model(res.model);
    for (std::size_t j = 0; j < kTestPresets; ++j) {
      out.rate[i][j] = score(model, tests[j], cfg.threads).rate();
    }
  }
  return out;
}

}  // namespace wqrbf

#endif  // WQRBF_EXPERIMENT_HPP
