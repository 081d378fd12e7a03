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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mmes/canonical.hpp"
#include "mmes/errors.hpp"
#include "mmes/partition.hpp"
#include "mmes/theory.hpp"

namespace mmes {
namespace {

TEST(Theory, TypicalMean) {
  EXPECT_NEAR(typical_mean(2, 2), 8.0 / 17.0, 1e-15);
  EXPECT_NEAR(typical_mean(1, 1), 0.8, 1e-15);
  EXPECT_NEAR(typical_mean(5, 5), 1.0 / 16.0, 0.03 / 16.0);
  EXPECT_NEAR(typical_mean(1, 2), 6.0 / 9.0, 1e-15);
  EXPECT_NEAR(typical_mean(4), 8.0 / 17.0, 1e-15);
  EXPECT_NEAR(typical_mean(6), 16.0 / 65.0, 1e-15);
  // no overflow far beyond 64 qubits
  EXPECT_NEAR(typical_mean(100, 100) * std::ldexp(1.0, 100), 2.0, 1e-12);
  EXPECT_THROW(typical_mean(0, 3), DomainError);
}

TEST(Theory, TypicalVariance) {
  EXPECT_NEAR(typical_variance(2, 2), 450.0 / 98838.0, 1e-17);
  EXPECT_NEAR(typical_variance(1, 1), 18.0 / 1050.0, 1e-17);
  const double na = std::ldexp(1.0, 10);
  EXPECT_NEAR(typical_variance(10, 10), 2.0 / std::pow(na, 4), 0.1 * 2.0 / std::pow(na, 4));
  EXPECT_GT(typical_variance(80, 80), 0.0);
  EXPECT_TRUE(std::isfinite(typical_variance(80, 80)));
}

TEST(Theory, AsymptoticKappa2) {
  EXPECT_NEAR(asymptotic_kappa2(10), 2.2784996866330995e-07, 1e-20);
  for (int n = 2; n <= 20; n += 2) {
    EXPECT_NEAR(asymptotic_kappa2(n + 2) / asymptotic_kappa2(n), 9.0 / 256.0, 1e-14);
  }
  EXPECT_NEAR(asymptotic_kappa2_exponent(), -2.415037499278844, 1e-14);
  // beta* = mu / sigma2 at n = 10, evaluated independently.
  const auto m = gaussian_prediction(typical_mean(10), asymptotic_kappa2(10), 0.0);
  EXPECT_NEAR(m.beta_star(), 274035.6944376367, 1e-6);
}

TEST(Theory, GaussianShift) {
  const auto zero = gaussian_prediction(0.3, 2e-4, 0.0);
  EXPECT_EQ(zero.mean(), 0.3);
  const auto half = gaussian_prediction(0.25, 1e-4, 0.5 * 0.25 / 1e-4);
  EXPECT_NEAR(half.mean(), 0.125, 1e-15);
  const double mu = 0.2, s2 = 3e-5;
  for (double b1 : {-300.0, 10.0, 1000.0}) {
    for (double b2 : {5.0, 250.0}) {
      const double lhs = gaussian_prediction(mu, s2, b1 + b2).mean() - mu;
      const double rhs = (gaussian_prediction(mu, s2, b1).mean() - mu) +
                         (gaussian_prediction(mu, s2, b2).mean() - mu);
      EXPECT_NEAR(lhs, rhs, 1e-15);
    }
  }
  // P_beta(E) = P_0(E + beta sigma2)
  const auto p0 = gaussian_prediction(mu, s2, 0.0);
  const auto pb = gaussian_prediction(mu, s2, 700.0);
  for (double e : {0.17, 0.18, 0.19}) EXPECT_NEAR(pb.density(e), p0.density(e + 700.0 * s2), 1e-9);
  EXPECT_THROW(gaussian_prediction(mu, -1e-9, 0.0), DomainError);
}

TEST(Theory, GaussianWallFlag) {
  // mean 0.125, sigma 0.01: valid against E0 = 0.1, invalid against E0 = 0.12
  EXPECT_TRUE(gaussian_prediction(0.25, 1e-4, 1250.0, 0.1).valid);
  EXPECT_FALSE(gaussian_prediction(0.25, 1e-4, 1250.0, 0.12).valid);
}

TEST(Histogram, DensityNormalization) {
  std::vector<double> x;
  std::vector<double> w;
  for (int i = 0; i < 1000; ++i) {
    x.push_back(std::sin(0.37 * i));
    w.push_back(std::exp(-3.0 * x.back()));
  }
  const auto h = make_histogram(x);
  EXPECT_EQ(h.bins(), 100u);
  EXPECT_NEAR(h.total(), 1.0, 1e-9);
  EXPECT_NEAR(h.samples, 1000.0, 1e-9);
  const auto hw = make_histogram(x, w, {.bins = 37});
  EXPECT_NEAR(hw.total(), 1.0, 1e-9);
  EXPECT_LT(hw.samples, 1000.0);
  const auto counts = make_histogram(x, {}, {.bins = 10, .density = false});
  EXPECT_NEAR(counts.total(), 1000.0, 1e-9);
  EXPECT_THROW(make_histogram(std::vector<double>{}), DomainError);
}

TEST(Histogram, PlotData) {
  const std::vector<double> x{0.0, 1.0, 1.0, 2.0};
  const auto h = make_histogram(x, {}, {.bins = 2});
  std::ostringstream os;
  write_plot_data(h, os);
  EXPECT_EQ(os.str(), "center,density\n0.5,0.25\n1.5,0.75\n");
}

TEST(Compare, SelfAndDisjoint) {
  std::vector<double> a, b;
  for (int i = 0; i < 500; ++i) {
    a.push_back(0.001 * i);
    b.push_back(10.0 + 0.001 * i);
  }
  const auto ha = make_histogram(a);
  EXPECT_NEAR(compare(ha, ha).ks, 0.0, 1e-15);
  EXPECT_NEAR(compare(ha, make_histogram(b)).ks, 1.0, 1e-15);
  EXPECT_GT(compare(ha, ha).ks_critical, 0.0);
  Histogram empty;
  EXPECT_THROW(compare(empty, ha), DomainError);
}

TEST(Compare, TypicalEnergiesAreGaussianAtTenQubits) {
  const auto s = typical_samples(10, 5000, 2718);
  const auto h = make_histogram(s.energies);
  const auto k = cumulants(s, 2);
  const auto model = gaussian_prediction(typical_mean(10), k[1].value, 0.0);
  const auto r = compare(h, model);
  EXPECT_LT(r.ks, r.ks_critical) << "KS " << r.ks << " critical " << r.ks_critical;
  EXPECT_LT(std::abs(r.mean_diff_se), 3.0);
}

TEST(Theory, ClosedFormsMatchMonteCarloAtFixedBipartition) {
  for (int n : {4, 6, 8}) {
    const std::uint64_t mask = (std::uint64_t{1} << (n / 2)) - 1;
    const auto s = typical_purities(n, mask, 10'000, 77 + n);
    const auto k = cumulants(s, 2);
    EXPECT_LT(std::abs(k[0].value - typical_mean(n)), 3.0 * k[0].se) << "n=" << n;
    EXPECT_LT(std::abs(k[1].value - typical_variance(n)), 3.0 * k[1].se) << "n=" << n;
  }
}

TEST(Theory, BipartitionsInterfere) {
  for (int n : {6, 8}) {
    const auto s = typical_samples(n, 5000, 31 + n);
    const double k2 = cumulants(s, 2)[1].value;
    EXPECT_LT(k2, typical_variance(n)) << "n=" << n;
    EXPECT_GT(k2, typical_variance(n) / static_cast<double>(balanced_count(n))) << "n=" << n;
  }
}

}  // namespace
}  // namespace mmes
