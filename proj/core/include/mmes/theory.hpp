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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mmes {

// Mean purity of a uniformly random state at a fixed bipartition with part
// sizes n_a and n_abar: (N_A + N_Abar)/(N + 1).
double typical_mean(int n_a, int n_abar);
// Variance of that purity: 2(N_A^2-1)(N_Abar^2-1) / ((N+1)^2 (N+2)(N+3)).
double typical_variance(int n_a, int n_abar);
// Balanced shorthands, n_a = floor(n/2).
double typical_mean(int n);
double typical_variance(int n);

// Large-N second cumulant of H at infinite temperature:
// 3 sqrt(2) N^{-4 + log2 3}, N = 2^n.
double asymptotic_kappa2(int n);

// Log-log slope of the asymptotic second cumulant in N: -4 + log2(3).
double asymptotic_kappa2_exponent();

// Binned distribution. With density = true the weights integrate to one.
struct Histogram {
  std::vector<double> edges;    // strictly increasing, size bins + 1
  std::vector<double> weights;  // size bins
  bool density = true;
  // Moments of the binned data and its (effective) sample size, kept for
  // comparisons in units of standard error.
  double mean = 0.0;
  double variance = 0.0;
  double samples = 0.0;

  std::size_t bins() const noexcept { return weights.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  // Total mass (integral for densities, sum for counts).
  double total() const;
  // Piecewise-linear CDF, normalized to [0, 1].
  double cdf(double x) const;
};

struct HistogramOptions {
  std::size_t bins = 100;
  // Defaults to the observed [min, max].
  std::optional<double> lo;
  std::optional<double> hi;
  bool density = true;
};

// Weighted histogram; weights may be empty (all ones). The effective sample
// size recorded is (sum w)^2 / sum w^2.
Histogram make_histogram(std::span<const double> values, std::span<const double> weights = {},
                         const HistogramOptions& options = {});

// Two-column "center,density" rows with a header line.
void write_plot_data(const Histogram& h, std::ostream& out);

// Gaussian approximation of the energy distribution at inverse temperature
// beta, obtained by shifting the beta = 0 Gaussian by -beta * sigma2.
struct GaussianModel {
  double mu = 0.0;
  double sigma2 = 0.0;
  double beta = 0.0;
  // Set when the predicted mean minus one standard deviation falls below the
  // supplied minimum energy estimate.
  bool valid = true;

  double mean() const noexcept { return mu - beta * sigma2; }
  // Beyond this inverse temperature the shifted Gaussian reaches E = 0.
  double beta_star() const noexcept { return mu / sigma2; }
  double density(double e) const;
  double cdf(double e) const;
};

GaussianModel gaussian_prediction(double mu, double sigma2, double beta,
                                  std::optional<double> e0 = std::nullopt);

struct CompareReport {
  double ks = 0.0;
  // Asymptotic Kolmogorov-Smirnov critical value at the 1% level for the
  // sample sizes involved.
  double ks_critical = 0.0;
  double mean_diff_se = 0.0;
  double variance_diff_se = 0.0;
};

CompareReport compare(const Histogram& a, const Histogram& b);
CompareReport compare(const Histogram& h, const GaussianModel& model);

// c(alpha) for the asymptotic Kolmogorov distribution, sqrt(-ln(alpha/2)/2).
double ks_coefficient(double alpha);

}  // namespace mmes
