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

#ifndef WQRBF_PDF_HPP
#define WQRBF_PDF_HPP

// Histogram-seeded density estimator with the W_2 kernel
//
//   y(x) = norm * sum_n r_n [2 / (1 + W_2(delta_n (x - c_n)^2)) - 1]
//
// where c_n are bin midpoints and r_n relative bin frequencies. The bracket
// equals 1 / (1 + 2 delta_n (x - c_n)^2), whose integral is pi / sqrt(2 delta_n),
// so norm = 1 / sum_n r_n pi / sqrt(2 delta_n) makes y a density.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "wqrbf/errors.hpp"
#include "wqrbf/wq.hpp"

namespace wqrbf {

struct Histogram {
  std::vector<double> edges;           ///< n_bins + 1, strictly increasing
  std::vector<std::uint64_t> counts;   ///< n_bins
  std::uint64_t total = 0;

  std::size_t bins() const noexcept { return counts.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

/// Uniform bins over [min, max]; bins are half-open except the last, which is closed.
inline Histogram build_histogram(std::span<const double> samples, std::size_t n_bins) {
  if (samples.empty()) throw std::invalid_argument("build_histogram: no samples");
  if (n_bins == 0) throw std::invalid_argument("build_histogram: n_bins must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo) || !std::isfinite(hi - lo)) {
    throw InvariantError("build_histogram: samples span a zero-width or non-finite range");
  }
  Histogram h;
  h.edges.resize(n_bins + 1);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) h.edges[i] = lo + static_cast<double>(i) * width;
  h.edges[n_bins] = hi;
  h.counts.assign(n_bins, 0);
  for (double x : samples) {
    // Locate by position, then correct against the stored edges.
    auto i = static_cast<std::size_t>((x - lo) / width);
    i = std::min(i, n_bins - 1);
    while (i > 0 && x < h.edges[i]) --i;
    while (i + 1 < n_bins && x >= h.edges[i + 1]) ++i;
    ++h.counts[i];
  }
  h.total = samples.size();
  return h;
}

struct PdfEstimator {
  std::vector<double> centers;
  std::vector<double> weights;
  std::vector<double> deltas;
  double norm = 1;

  std::size_t size() const noexcept { return centers.size(); }
};

/// Integral over the real line of the un-normalised estimate.
inline double raw_integral(const PdfEstimator& est) {
  double acc = 0;
  for (std::size_t n = 0; n < est.size(); ++n) {
    acc += est.weights[n] * std::numbers::pi / std::sqrt(2.0 * est.deltas[n]);
  }
  return acc;
}

/// One neuron per non-empty bin, all with width delta.
inline PdfEstimator fit(const Histogram& hist, double delta) {
  if (!(delta > 0) || !std::isfinite(delta)) throw std::invalid_argument("fit: delta must be > 0");
  if (hist.bins() == 0 || hist.total == 0) throw InvariantError("fit: empty histogram");
  PdfEstimator est;
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    if (hist.counts[i] == 0) continue;
    est.centers.push_back(hist.center(i));
    est.weights.push_back(static_cast<double>(hist.counts[i]) / static_cast<double>(hist.total));
    est.deltas.push_back(delta);
  }
  est.norm = 1.0 / raw_integral(est);
  return est;
}

/// Kernel with c1 = 2, c2 = 1, q = 2: peak 1 at u = 0, tail 0.
inline double w2_kernel(double u, double delta) {
  WqParams p;
  p.q = 2;
  return 2.0 / (1.0 + lambert_wq(delta * u * u, p)) - 1.0;
}

/// Estimate without the normalisation factor.
inline double evaluate_raw(const PdfEstimator& est, double x) {
  double acc = 0;
  for (std::size_t n = 0; n < est.size(); ++n) {
    acc += est.weights[n] * w2_kernel(x - est.centers[n], est.deltas[n]);
  }
  return acc;
}

inline double evaluate(const PdfEstimator& est, double x) { return est.norm * evaluate_raw(est, x); }

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double cauchy_pdf(double x) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); }

inline std::vector<double> sample_normal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (double& x : out) x = dist(rng);
  return out;
}

/// Inverse-CDF draws tan(pi (u - 1/2)).
inline std::vector<double> sample_cauchy(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(n);
  for (double& x : out) x = std::tan(std::numbers::pi * (unit(rng) - 0.5));
  return out;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw std::invalid_argument("uniform_grid: need hi > lo and >= 2 points");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + static_cast<double>(i) * step;
  g.back() = hi;
  return g;
}

struct ErrorMetrics {
  double l1 = 0;       ///< trapezoid integral of |estimate - reference|
  double max_abs = 0;  ///< max pointwise |estimate - reference| on the grid
};

inline ErrorMetrics error_metrics(const std::function<double(double)>& estimate,
                                  const std::function<double(double)>& reference,
                                  std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("error_metrics: grid needs >= 2 points");
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("error_metrics: grid must be sorted");
  }
  ErrorMetrics m;
  double prev = std::abs(estimate(grid[0]) - reference(grid[0]));
  m.max_abs = prev;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = std::abs(estimate(grid[i]) - reference(grid[i]));
    m.l1 += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
    m.max_abs = std::max(m.max_abs, cur);
    prev = cur;
  }
  return m;
}

inline ErrorMetrics error_metrics(const PdfEstimator& est,
                                  const std::function<double(double)>& reference,
                                  std::span<const double> grid) {
  return error_metrics([&](double x) { return evaluate(est, x); }, reference, grid);
}

/// Width selection helper (not part of the estimator itself): picks the
/// candidate whose fit to `fit_hist` is closest in L1 to the piecewise-constant
/// density of `heldout`, evaluated at the held-out bin midpoints.
inline double select_delta(const Histogram& fit_hist, const Histogram& heldout,
                           std::span<const double> candidates) {
  if (candidates.empty()) throw std::invalid_argument("select_delta: no candidates");
  double best = candidates.front();
  double best_l1 = std::numeric_limits<double>::infinity();
  for (double delta : candidates) {
    const PdfEstimator est = fit(fit_hist, delta);
    double l1 = 0;
    for (std::size_t i = 0; i < heldout.bins(); ++i) {
      const double width = heldout.edges[i + 1] - heldout.edges[i];
      const double density =
          static_cast<double>(heldout.counts[i]) / (static_cast<double>(heldout.total) * width);
      l1 += std::abs(evaluate(est, heldout.center(i)) - density) * width;
    }
    if (l1 < best_l1) {
      best_l1 = l1;
      best = delta;
    }
  }
  return best;
}

}  // namespace wqrbf

#endif  // WQRBF_PDF_HPP
