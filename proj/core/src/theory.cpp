// Copyright 2026 The mmes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmes/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "mmes/errors.hpp"

namespace mmes {
namespace {

void check_parts(int n_a, int n_abar) {
  if (n_a < 1 || n_abar < 1) throw DomainError("both parts need at least one qubit");
}

double bin_mass(const Histogram& h, std::size_t i) {
  return h.density ? h.weights[i] * h.width(i) : h.weights[i];
}

double ratio_or_flag(double num, double den) {
  if (den > 0.0) return num / den;
  if (num == 0.0) return 0.0;
  return num > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

void check_nonempty(const Histogram& h) {
  if (h.bins() == 0 || !(h.total() > 0.0)) throw DomainError("empty histogram");
}

}  // namespace

// Both closed forms are evaluated after dividing numerator and denominator
// by powers of N, so they stay finite for any qubit count.
double typical_mean(int n_a, int n_abar) {
  check_parts(n_a, n_abar);
  const double inv_na = std::ldexp(1.0, -n_a);
  const double inv_nb = std::ldexp(1.0, -n_abar);
  return (inv_na + inv_nb) / (1.0 + inv_na * inv_nb);
}

double typical_variance(int n_a, int n_abar) {
  check_parts(n_a, n_abar);
  const double inv_na = std::ldexp(1.0, -n_a);
  const double inv_nb = std::ldexp(1.0, -n_abar);
  const double inv_n = inv_na * inv_nb;
  const double num = 2.0 * (1.0 - inv_na * inv_na) * (1.0 - inv_nb * inv_nb);
  const double den = (1.0 + inv_n) * (1.0 + inv_n) * (1.0 + 2.0 * inv_n) * (1.0 + 3.0 * inv_n);
  return num / den * inv_n * inv_n;
}

double typical_mean(int n) {
  if (n < 2) throw DomainError("need n >= 2");
  return typical_mean(n / 2, n - n / 2);
}

double typical_variance(int n) {
  if (n < 2) throw DomainError("need n >= 2");
  return typical_variance(n / 2, n - n / 2);
}

double asymptotic_kappa2_exponent() { return -4.0 + std::log2(3.0); }

double asymptotic_kappa2(int n) {
  if (n < 2) throw DomainError("need n >= 2");
  return 3.0 * std::numbers::sqrt2 * std::exp2(n * asymptotic_kappa2_exponent());
}

double Histogram::total() const {
  double s = 0.0;
  for (std::size_t i = 0; i < bins(); ++i) s += bin_mass(*this, i);
  return s;
}

double Histogram::cdf(double x) const {
  if (bins() == 0) return 0.0;
  if (x <= edges.front()) return 0.0;
  if (x >= edges.back()) return 1.0;
  const double tot = total();
  double acc = 0.0;
  for (std::size_t i = 0; i < bins(); ++i) {
    const double m = bin_mass(*this, i);
    if (x < edges[i + 1]) {
      acc += m * (x - edges[i]) / width(i);
      break;
    }
    acc += m;
  }
  return acc / tot;
}

Histogram make_histogram(std::span<const double> values, std::span<const double> weights,
                         const HistogramOptions& options) {
  if (values.empty()) throw DomainError("cannot histogram an empty sample");
  if (!weights.empty() && weights.size() != values.size()) {
    throw DomainError("weights and values differ in length");
  }
  if (options.bins == 0) throw DomainError("histogram needs at least one bin");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = options.lo.value_or(*mn);
  double hi = options.hi.value_or(*mx);
  if (!(hi >= lo)) throw DomainError("histogram range is inverted");
  if (hi == lo) {
    const double pad = std::max(std::abs(lo) * 1e-9, 1e-12);
    lo -= pad;
    hi += pad;
  }

  Histogram h;
  h.density = options.density;
  h.edges.resize(options.bins + 1);
  for (std::size_t i = 0; i <= options.bins; ++i) {
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(options.bins);
  }
  h.edges.back() = hi;
  h.weights.assign(options.bins, 0.0);

  double sw = 0.0, sw2 = 0.0, swx = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = values[k];
    const double w = weights.empty() ? 1.0 : weights[k];
    if (w < 0.0) throw DomainError("negative histogram weight");
    if (x < lo || x > hi) continue;
    auto bin = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(options.bins));
    bin = std::min(bin, options.bins - 1);
    h.weights[bin] += w;
    sw += w;
    sw2 += w * w;
    swx += w * x;
  }
  if (!(sw > 0.0)) throw DomainError("no samples inside the histogram range");
  h.mean = swx / sw;
  double var = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = values[k];
    if (x < lo || x > hi) continue;
    const double w = weights.empty() ? 1.0 : weights[k];
    var += w * (x - h.mean) * (x - h.mean);
  }
  h.variance = var / sw;
  h.samples = sw * sw / sw2;
  if (h.density) {
    for (std::size_t i = 0; i < h.bins(); ++i) h.weights[i] /= sw * h.width(i);
  }
  return h;
}

void write_plot_data(const Histogram& h, std::ostream& out) {
  const auto old = out.precision(17);
  out << "center,density\n";
  const double tot = h.density ? 1.0 : h.total();
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double d = h.density ? h.weights[i] : h.weights[i] / (tot * h.width(i));
    out << h.center(i) << ',' << d << '\n';
  }
  out.precision(old);
}

double GaussianModel::density(double e) const {
  if (sigma2 == 0.0) return e == mean() ? std::numeric_limits<double>::infinity() : 0.0;
  const double d = e - mean();
  return std::exp(-d * d / (2.0 * sigma2)) / std::sqrt(2.0 * std::numbers::pi * sigma2);
}

double GaussianModel::cdf(double e) const {
  if (sigma2 == 0.0) return e < mean() ? 0.0 : 1.0;
  return 0.5 * std::erfc(-(e - mean()) / std::sqrt(2.0 * sigma2));
}

GaussianModel gaussian_prediction(double mu, double sigma2, double beta, std::optional<double> e0) {
  if (sigma2 < 0.0 || std::isnan(sigma2)) throw DomainError("sigma^2 must be non-negative");
  GaussianModel m{mu, sigma2, beta, true};
  if (e0) m.valid = m.mean() - std::sqrt(sigma2) >= *e0;
  return m;
}

double ks_coefficient(double alpha) { return std::sqrt(-std::log(alpha / 2.0) / 2.0); }

CompareReport compare(const Histogram& a, const Histogram& b) {
  check_nonempty(a);
  check_nonempty(b);
  CompareReport r;
  for (const auto* h : {&a, &b}) {
    for (double x : h->edges) r.ks = std::max(r.ks, std::abs(a.cdf(x) - b.cdf(x)));
  }
  r.ks_critical = ks_coefficient(0.01) * std::sqrt((a.samples + b.samples) / (a.samples * b.samples));
  r.mean_diff_se = ratio_or_flag(a.mean - b.mean,
                                 std::sqrt(a.variance / a.samples + b.variance / b.samples));
  const double var_se = std::sqrt(2.0 * a.variance * a.variance / std::max(a.samples - 1.0, 1.0) +
                                  2.0 * b.variance * b.variance / std::max(b.samples - 1.0, 1.0));
  r.variance_diff_se = ratio_or_flag(a.variance - b.variance, var_se);
  return r;
}

CompareReport compare(const Histogram& h, const GaussianModel& model) {
  check_nonempty(h);
  CompareReport r;
  for (double x : h.edges) r.ks = std::max(r.ks, std::abs(h.cdf(x) - model.cdf(x)));
  r.ks_critical = ks_coefficient(0.01) / std::sqrt(h.samples);
  r.mean_diff_se = ratio_or_flag(h.mean - model.mean(), std::sqrt(h.variance / h.samples));
  r.variance_diff_se = ratio_or_flag(
      h.variance - model.sigma2,
      std::sqrt(2.0 * model.sigma2 * model.sigma2 / std::max(h.samples - 1.0, 1.0)));
  return r;
}

}  // namespace mmes
