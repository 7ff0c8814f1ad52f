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

// wqrbf command-line front end.
//
//   wqrbf wq-eval  --q 2 1 2.5 10
//   wqrbf gen      --preset Str_1 --scale 0.1 --seed 1 --out train.csv
//   wqrbf train    --train train.csv --out model.txt --log log.csv
//   wqrbf eval     --model model.txt --data test.csv
//   wqrbf table3   --scale 0.01 --seed 1 --out table3.csv
//   wqrbf pdf      --dist normal --n 20000 --bins 2000 --delta 30 --out curve.csv
//   wqrbf sample   --dist cauchy --n 10000 --out samples.txt

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wqrbf/wqrbf.hpp"

namespace {

using namespace wqrbf;

/// Writes to a file, or to stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw std::runtime_error("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string percent(double fraction) { return text::fmt_fixed(100.0 * fraction, 2); }

// ---------------------------------------------------------------------------
// wq-eval

struct WqEvalArgs {
  double q = 2;
  double tol = 1e-12;
  int max_iter = 200;
  std::string method = "auto";
  std::vector<double> z;
};

int cmd_wq_eval(const WqEvalArgs& a) {
  WqParams p;
  p.q = a.q;
  p.tol = a.tol;
  p.max_iter = a.max_iter;
  p.method = a.method == "root" ? WqMethod::root_finder : WqMethod::automatic;
  std::cout << "z,W,residual\n";
  for (double z : a.z) {
    const double w = lambert_wq(z, p);
    const double residual = std::abs(w * q_exp(w, a.q) - z);
    std::cout << text::fmt(z) << ',' << text::fmt(w) << ',' << text::fmt(residual) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string kind = "entangled";
  std::int64_t count = 0;
  double c_min = 0;
  double c_max = 1;
  std::string mix;
  std::string preset;
  double scale = 1;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 1;
};

int cmd_gen(const GenArgs& a) {
  DatasetSpec spec;
  if (!a.preset.empty()) {
    spec = named_preset(a.preset, a.scale);
  } else {
    if (a.count < 0) throw std::invalid_argument("--count must be >= 0");
    const auto n = static_cast<std::size_t>(a.count);
    if (a.kind == "any") {
      spec = DatasetSpec{0, 0, {Window{}}, n};
    } else if (a.kind == "disentangled") {
      spec = DatasetSpec{n, 0, {Window{}}};
    } else if (a.kind == "entangled") {
      spec = DatasetSpec{0, n, a.mix.empty() ? std::vector<Window>{{1.0, a.c_min, a.c_max}}
                                             : parse_mix(a.mix)};
    } else {
      throw std::invalid_argument("--kind must be entangled, disentangled or any");
    }
  }
  const auto records = generate(spec, a.seed, a.threads);
  Output out(a.out);
  write_dataset(out.stream(), records, a.seed);
  out.close();
  if (!a.out.empty() && a.out != "-") {
    std::cerr << "wrote " << records.size() << " states to " << a.out << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string train;
  std::string out;
  std::string log;
  std::size_t k = 10;
  double q = 2;
  DEConfig de;
  std::string distance = "relative-disentropy";
  bool quiet = false;
};

int cmd_train(TrainArgs a) {
  const Dataset ds = load_dataset(a.train);
  const TrainingProblem problem(ds.records, a.k, a.q, parse_distance(a.distance));
  Rng init(derive_seed(a.de.seed, Stream::de_init));
  const std::uint64_t master = a.de.seed;
  a.de.seed = derive_seed(master, Stream::de_loop);
  const auto progress = [&](const GenerationStats& s) {
    if (!a.quiet && (s.generation % 100 == 0 || s.generation == a.de.generations)) {
      std::cerr << "generation " << s.generation << " best_error " << text::fmt(s.best_error)
                << '\n';
    }
  };
  const TrainResult res = train(problem, a.de, init, progress);

  Output model(a.out);
  write_model(model.stream(), res.model);
  model.close();
  if (!a.log.empty()) {
    Output log(a.log);
    log.stream() << "generation,best_error,mean_error\n";
    for (const auto& s : res.history) {
      log.stream() << s.generation << ',' << text::fmt(s.best_error) << ','
                   << text::fmt(s.mean_error) << '\n';
    }
    log.close();
  }
  std::cerr << "final training error " << text::fmt(res.best_error) << " ("
            << percent(res.best_error) << "%)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model;
  std::string data;
  unsigned threads = 1;
};

int cmd_eval(const EvalArgs& a) {
  const ClassifierModel model = load_model(a.model);
  const Dataset ds = load_dataset(a.data);
  if (ds.records.empty()) throw std::invalid_argument("dataset '" + a.data + "' is empty");
  const Confusion c = score(model, ds.records, a.threads);
  std::cout << "success_rate " << percent(c.rate()) << "%\n"
            << "states " << c.total() << '\n'
            << "truth,predicted,count\n";
  for (Label t : {Label::entangled, Label::disentangled}) {
    for (Label p : {Label::entangled, Label::disentangled}) {
      std::cout << label_name(t) << ',' << label_name(p) << ',' << c.at(t, p) << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// table3

struct Table3Args {
  ExperimentConfig cfg;
  std::int64_t train_per_class = -1;
  std::int64_t test_count = -1;
  std::int64_t generations = -1;
  std::string distance = "relative-disentropy";
  std::string out;
};

int cmd_table3(Table3Args a) {
  if (a.train_per_class >= 0) a.cfg.train_per_class = static_cast<std::size_t>(a.train_per_class);
  if (a.test_count >= 0) a.cfg.test_count = static_cast<std::size_t>(a.test_count);
  if (a.generations >= 0) a.cfg.generations = static_cast<std::size_t>(a.generations);
  a.cfg.distance = parse_distance(a.distance);
  const Table3 t = run_table3(a.cfg, [](const std::string& msg) { std::cerr << msg << '\n'; });

  std::string header = "train";
  for (std::size_t j = 1; j <= kTestPresets; ++j) header += ",Stst_" + std::to_string(j);
  if (!a.out.empty()) {
    Output csv(a.out);
    csv.stream() << header << ",train_error\n";
    for (std::size_t i = 0; i < kTrainPresets; ++i) {
      csv.stream() << "Str_" << i;
      for (double r : t.rate[i]) csv.stream() << ',' << text::fmt(100.0 * r);
      csv.stream() << ',' << text::fmt(t.train_error[i]) << '\n';
    }
    csv.close();
  }
  std::cout << header << '\n';
  for (std::size_t i = 0; i < kTrainPresets; ++i) {
    std::cout << "Str_" << i;
    for (double r : t.rate[i]) std::cout << ',' << percent(r);
    std::cout << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// pdf / sample

struct Distribution {
  std::string name = "normal";

  bool normal() const { return name == "normal"; }
  void check() const {
    if (name != "normal" && name != "cauchy") {
      throw std::invalid_argument("--dist must be normal or cauchy");
    }
  }
  std::vector<double> draw(std::uint64_t seed, std::size_t n) const {
    Rng rng(derive_seed(seed, Stream::sampler));
    return normal() ? sample_normal(rng, n) : sample_cauchy(rng, n);
  }
  double pdf(double x) const { return normal() ? normal_pdf(x) : cauchy_pdf(x); }
};

std::vector<double> read_samples(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    double v = 0;
    if (!text::parse(body, v)) {
      throw FormatError("samples line " + std::to_string(lineno) + ": not a number");
    }
    out.push_back(v);
  }
  return out;
}

struct PdfArgs {
  Distribution dist;
  std::int64_t n = 20000;
  std::int64_t bins = 2000;
  std::optional<double> delta;
  std::uint64_t seed = 1;
  std::optional<double> lo;
  std::optional<double> hi;
  std::int64_t grid_points = 2001;
  std::string samples;
  std::string out;
};

int cmd_pdf(const PdfArgs& a) {
  a.dist.check();
  if (a.n < 1 || a.bins < 1 || a.grid_points < 2) {
    throw std::invalid_argument("--n and --bins must be >= 1, --grid-points >= 2");
  }
  const auto data = a.samples.empty() ? a.dist.draw(a.seed, static_cast<std::size_t>(a.n))
                                      : read_samples(a.samples);
  if (data.size() < static_cast<std::size_t>(a.bins)) {
    std::cerr << "warning: " << data.size() << " samples for " << a.bins
              << " bins; the estimate needs many more samples than bins\n";
  }
  const double delta = a.delta.value_or(a.dist.normal() ? 30.0 : 0.5);
  const double lo = a.lo.value_or(a.dist.normal() ? -5.0 : -15.0);
  const double hi = a.hi.value_or(a.dist.normal() ? 5.0 : 15.0);

  const PdfEstimator est = fit(build_histogram(data, static_cast<std::size_t>(a.bins)), delta);
  const auto grid = uniform_grid(lo, hi, static_cast<std::size_t>(a.grid_points));
  const auto ref = [&](double x) { return a.dist.pdf(x); };
  const ErrorMetrics m = error_metrics(est, ref, grid);

  if (!a.out.empty()) {
    Output csv(a.out);
    csv.stream() << "x,estimate,reference,raw\n";
    for (double x : grid) {
      const double raw = evaluate_raw(est, x);
      csv.stream() << text::fmt(x) << ',' << text::fmt(est.norm * raw) << ','
                   << text::fmt(ref(x)) << ',' << text::fmt(raw) << '\n';
    }
    csv.close();
  }
  std::cout << "samples " << data.size() << "\nneurons " << est.size() << "\ndelta "
            << text::fmt(delta) << "\nnorm " << text::fmt(est.norm) << "\nl1 " << text::fmt(m.l1)
            << "\nmax_abs " << text::fmt(m.max_abs) << '\n';
  return 0;
}

struct SampleArgs {
  Distribution dist;
  std::int64_t n = 20000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_sample(const SampleArgs& a) {
  a.dist.check();
  if (a.n < 0) throw std::invalid_argument("--n must be >= 0");
  Output out(a.out);
  for (double x : a.dist.draw(a.seed, static_cast<std::size_t>(a.n))) {
    out.stream() << text::fmt(x) << '\n';
  }
  out.close();
  return 0;
}

void add_de_flags(CLI::App* cmd, DEConfig& de) {
  cmd->add_option("--population", de.population, "DE population size")->capture_default_str();
  cmd->add_option("--cr", de.cr, "binomial crossover probability")->capture_default_str();
  cmd->add_option("--f", de.f, "differential weight")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambert-Tsallis RBF entanglement classifier and density estimator"};
  app.require_subcommand(1);

  WqEvalArgs wq;
  auto* wq_cmd = app.add_subcommand("wq-eval", "evaluate W_q(z) with residuals");
  wq_cmd->add_option("--q", wq.q, "Tsallis index")->capture_default_str();
  wq_cmd->add_option("--tol", wq.tol, "residual tolerance, relative to max(1, z)")
      ->capture_default_str();
  wq_cmd->add_option("--max-iter", wq.max_iter, "root-finder iteration cap")
      ->capture_default_str();
  wq_cmd->add_option("--method", wq.method, "auto or root")
      ->check(CLI::IsMember({"auto", "root"}))
      ->capture_default_str();
  wq_cmd->add_option("z", wq.z, "arguments")->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a labeled two-qubit dataset");
  gen_cmd->add_option("--kind", gen.kind, "entangled, disentangled or any")
      ->check(CLI::IsMember({"entangled", "disentangled", "any"}))
      ->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "number of states")->capture_default_str();
  gen_cmd->add_option("--cmin", gen.c_min, "entangled: concurrence lower bound (exclusive)")
      ->capture_default_str();
  gen_cmd->add_option("--cmax", gen.c_max, "entangled: concurrence upper bound (inclusive)")
      ->capture_default_str();
  gen_cmd->add_option("--mix", gen.mix, "entangled windows, fraction:cmin:cmax[,...]");
  gen_cmd->add_option("--preset", gen.preset, "Str_0..Str_5 or Stst_1..Stst_9");
  gen_cmd->add_option("--scale", gen.scale, "preset size relative to full scale")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output path (default stdout)");
  gen_cmd->add_option("--threads", gen.threads, "worker threads")->capture_default_str();

  TrainArgs tr;
  tr.de.seed = 1;
  auto* train_cmd = app.add_subcommand("train", "train a classifier with differential evolution");
  train_cmd->add_option("--train", tr.train, "training dataset")->required();
  train_cmd->add_option("--out", tr.out, "model output path")->required();
  train_cmd->add_option("--log", tr.log, "per-generation CSV log");
  train_cmd->add_option("--k", tr.k, "neurons per branch")->capture_default_str();
  train_cmd->add_option("--q", tr.q, "Tsallis index")->capture_default_str();
  train_cmd->add_option("--generations", tr.de.generations, "DE generations")
      ->capture_default_str();
  train_cmd->add_option("--seed", tr.de.seed, "master seed")->capture_default_str();
  train_cmd->add_option("--distance", tr.distance, "relative-disentropy or squared-relative-disentropy")
      ->capture_default_str();
  train_cmd->add_flag("--quiet", tr.quiet, "no progress output");
  add_de_flags(train_cmd, tr.de);
  train_cmd->add_option("--threads", tr.de.threads, "worker threads")->capture_default_str();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "success rate of a model on a dataset");
  eval_cmd->add_option("--model", ev.model, "model file")->required();
  eval_cmd->add_option("--data", ev.data, "dataset file")->required();
  eval_cmd->add_option("--threads", ev.threads, "worker threads")->capture_default_str();

  Table3Args t3;
  auto* t3_cmd = app.add_subcommand("table3", "train on every Str_i and test on every Stst_j");
  t3_cmd->add_option("--seed", t3.cfg.seed, "master seed")->capture_default_str();
  t3_cmd->add_option("--scale", t3.cfg.scale, "dataset sizes and generations relative to full scale")
      ->capture_default_str();
  t3_cmd->add_option("--k", t3.cfg.k, "neurons per branch")->capture_default_str();
  t3_cmd->add_option("--q", t3.cfg.q, "Tsallis index")->capture_default_str();
  t3_cmd->add_option("--train-per-class", t3.train_per_class, "override training states per class");
  t3_cmd->add_option("--test-count", t3.test_count, "override test states per set");
  t3_cmd->add_option("--generations", t3.generations, "override DE generations");
  t3_cmd->add_option("--distance", t3.distance, "relative-disentropy or squared-relative-disentropy")
      ->capture_default_str();
  t3_cmd->add_option("--out", t3.out, "CSV output with full-precision rates");
  add_de_flags(t3_cmd, t3.cfg.de);
  t3_cmd->add_option("--threads", t3.cfg.threads, "worker threads")->capture_default_str();

  PdfArgs pdf;
  auto* pdf_cmd = app.add_subcommand("pdf", "fit the W_2 density estimator to samples");
  pdf_cmd->add_option("--dist", pdf.dist.name, "normal or cauchy")->capture_default_str();
  pdf_cmd->add_option("--n", pdf.n, "number of samples")->capture_default_str();
  pdf_cmd->add_option("--bins", pdf.bins, "histogram bins")->capture_default_str();
  pdf_cmd->add_option("--delta", pdf.delta, "kernel width (default 30 normal, 0.5 cauchy)");
  pdf_cmd->add_option("--seed", pdf.seed, "sampler seed")->capture_default_str();
  pdf_cmd->add_option("--lo", pdf.lo, "grid start (default -5 normal, -15 cauchy)");
  pdf_cmd->add_option("--hi", pdf.hi, "grid end (default 5 normal, 15 cauchy)");
  pdf_cmd->add_option("--grid-points", pdf.grid_points, "evaluation points")->capture_default_str();
  pdf_cmd->add_option("--samples", pdf.samples, "read samples from a file instead of drawing");
  pdf_cmd->add_option("--out", pdf.out, "curve CSV x,estimate,reference,raw");

  SampleArgs smp;
  auto* sample_cmd = app.add_subcommand("sample", "draw samples, one per line");
  sample_cmd->add_option("--dist", smp.dist.name, "normal or cauchy")->capture_default_str();
  sample_cmd->add_option("--n", smp.n, "number of samples")->capture_default_str();
  sample_cmd->add_option("--seed", smp.seed, "sampler seed")->capture_default_str();
  sample_cmd->add_option("--out", smp.out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*wq_cmd) return cmd_wq_eval(wq);
    if (*gen_cmd) return cmd_gen(gen);
    if (*train_cmd) return cmd_train(tr);
    if (*eval_cmd) return cmd_eval(ev);
    if (*t3_cmd) return cmd_table3(t3);
    if (*pdf_cmd) return cmd_pdf(pdf);
    if (*sample_cmd) return cmd_sample(smp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
