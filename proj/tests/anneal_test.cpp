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

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "mmes/anneal.hpp"
#include "mmes/errors.hpp"
#include "oracle.hpp"

namespace mmes {
namespace {

AnnealSchedule quick(std::uint64_t seed, std::size_t restarts = 3) {
  AnnealSchedule s;
  s.levels = 10;
  s.sweeps_per_level = 300;
  s.restarts = restarts;
  s.seed = seed;
  return s;
}

TEST(Schedule, Validation) {
  AnnealSchedule s;
  EXPECT_NO_THROW(s.validate());
  auto bad = s;
  bad.sweeps_per_level = 0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = s;
  bad.levels = 0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = s;
  bad.restarts = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = s;
  bad.beta_end = 0.5;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = s;
  bad.beta_start = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);  // geometric from zero
  bad.geometric = false;
  EXPECT_NO_THROW(bad.validate());
  EXPECT_THROW(anneal(4, [] { AnnealSchedule z; z.levels = 0; return z; }()), DomainError);
}

TEST(Schedule, BetaLadder) {
  AnnealSchedule s;
  EXPECT_DOUBLE_EQ(s.beta_at(0), 1.0);
  EXPECT_NEAR(s.beta_at(59), 1e5, 1e-6);
  s.geometric = false;
  s.beta_start = 0.0;
  s.beta_end = 10.0;
  s.levels = 11;
  EXPECT_DOUBLE_EQ(s.beta_at(3), 3.0);
}

TEST(Anneal, TwoQubitMinimumIsBellLike) {
  const auto r = anneal(2, quick(1));
  EXPECT_NEAR(r.energy, 0.5, 1e-6);
  EXPECT_GE(r.gap, -1e-10);
}

TEST(Anneal, FourQubitMinimum) {
  const auto r = anneal(4, quick(2));
  EXPECT_NEAR(r.energy, 1.0 / 3.0, 1e-3);
  EXPECT_FALSE(certify(r).perfect);
}

TEST(Anneal, MaximizeFindsProductState) {
  const auto r = anneal(3, quick(3), Direction::Maximize);
  EXPECT_NEAR(r.energy, 1.0, 1e-6);
  for (double p : r.profile.purities) EXPECT_NEAR(p, 1.0, 1e-6);
  for (int q = 0; q < 3; ++q) {
    EXPECT_NEAR(purity(r.state, Bipartition::from_qubits(3, {q})), 1.0, 1e-6);
  }
}

TEST(Anneal, ResultInvariants) {
  for (int n = 2; n <= 6; ++n) {
    const auto r = anneal(n, quick(10 + n));
    EXPECT_NEAR(r.energy, potential(r.state), 1e-12);
    EXPECT_NEAR(r.energy, oracle::potential(r.state), 1e-12);
    EXPECT_GE(r.gap, -1e-10);
    EXPECT_LT(r.restart, 3u);
    EXPECT_EQ(r.restart_energies.size(), 3u);
    EXPECT_EQ(*std::min_element(r.restart_energies.begin(), r.restart_energies.end()), r.energy);
  }
}

TEST(Anneal, ReproducibleAndThreadIndependent) {
  auto s = quick(77, 4);
  s.threads = 1;
  const auto a = anneal(5, s);
  s.threads = 3;
  const auto b = anneal(5, s);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(a.restart, b.restart);
  EXPECT_TRUE(a.state == b.state);
  EXPECT_EQ(a.restart_energies, b.restart_energies);
}

TEST(Anneal, BeatsRandomStates) {
  for (int n = 2; n <= 8; ++n) {
    double best_random = 1.0;
    for (std::uint64_t i = 0; i < 100; ++i) best_random = std::min(best_random, potential(haar_sample(n, 1000 + i)));
    const auto r = anneal(n, quick(n, n == 8 ? 1 : 2));
    EXPECT_LE(r.energy, best_random) << "n=" << n;
  }
}

TEST(Anneal, SeedsAgreeOnTheMinimum) {
  for (int n = 2; n <= 6; ++n) {
    double lo = 1.0, hi = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const double e = anneal(n, quick(100 * n + seed)).energy;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    EXPECT_LT(hi - lo, 1e-3) << "n=" << n;
  }
}

TEST(Anneal, PerfectStatesAtFiveAndSixQubitsHaveFlatProfiles) {
  for (int n : {5, 6}) {
    const auto c = certify(anneal(n, quick(5 * n)));
    EXPECT_TRUE(c.perfect) << "n=" << n;
    EXPECT_LT(c.spread, 1e-4) << "n=" << n;
  }
}

TEST(Polish, ConvergesFromPerturbedBell) {
  Rng rng = make_stream(3, 0);
  const auto start = perturb(PureState::ghz(2), 0.2, rng);
  const auto p = polish(start);
  EXPECT_NEAR(p.energy, 0.5, 1e-12);
  EXPECT_LT(p.gradient_norm, 1e-9);
  EXPECT_LT(p.iterations, 10'000u);
}

TEST(Certify, GhzAndFrustratedCases) {
  const auto ghz = certify(PureState::ghz(3));
  EXPECT_TRUE(ghz.perfect);
  EXPECT_NEAR(ghz.spread, 0.0, 1e-15);
  EXPECT_NEAR(ghz.gap, 0.0, 1e-15);
  EXPECT_LT(ghz.gradient_norm, 1e-8);

  auto s = quick(8, 1);
  s.levels = 4;
  s.sweeps_per_level = 100;
  const auto eight = anneal(8, s);
  const auto c8 = certify(eight);
  EXPECT_FALSE(c8.perfect);
  EXPECT_GT(c8.energy, 1.0 / 16.0 + 1e-4);
}

TEST(Report, JsonCarriesProfile) {
  const auto r = anneal(4, quick(6, 1));
  const auto doc = nlohmann::json::parse(report_json(r, certify(r)));
  EXPECT_EQ(doc["n"].get<int>(), 4);
  EXPECT_EQ(doc["purities"].size(), 6u);
  EXPECT_NEAR(doc["energy"].get<double>(), r.energy, 1e-15);
  EXPECT_FALSE(doc["perfect"].get<bool>());
  EXPECT_EQ(doc["restart_energies"].size(), 1u);
}

}  // namespace
}  // namespace mmes
