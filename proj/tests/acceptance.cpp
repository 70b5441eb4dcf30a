//------------------------------------------------------------------------------
//
//   Copyright 2026 The randcert Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "randcert/bounds.hpp"
#include "randcert/distributions.hpp"
#include "randcert/generalization.hpp"
#include "randcert/harness.hpp"
#include "randcert/parallel.hpp"
#include "randcert/smoothing.hpp"

namespace randcert {
namespace {

struct Outcome
{
  bool        pass;
  std::string detail;
};

struct Criterion
{
  int                      id;
  std::string              title;
  double                   time_limit_s;
  std::function<Outcome()> run;
};

CategoricalDistribution RandomDist(std::mt19937_64 &gen, std::size_t k)
{
  std::exponential_distribution<double> expo;
  std::bernoulli_distribution           drop(0.15);
  std::vector<double>                   v(k);
  double                                sum = 0.0;
  for (auto &x : v)
  {
    x = drop(gen) ? 0.0 : expo(gen);
    sum += x;
  }
  if (sum == 0.0)
  {
    v[0] = sum = 1.0;
  }
  for (auto &x : v)
  {
    x /= sum;
  }
  return CategoricalDistribution(v);
}

std::vector<double> const kSigmas{0.25, 0.5, 1.0};
std::vector<double> const kShiftNorms{0.0, 0.1, 0.5, 1.0};

Outcome GaussianRenyiVsQuadrature()
{
  double worst = 0.0;
  for (double sigma : kSigmas)
  {
    for (double len : kShiftNorms)
    {
      for (double beta : {1.0, 1.5, 2.0, 10.0})
      {
        auto const   spec   = GaussianNoiseSpec::Isotropic(sigma);
        double const closed = GaussianRenyiDivergence(Perturbation({len * 0.6, -len * 0.8}), spec, beta);
        double const quad   = oracle::QuadratureGaussianRenyi(len / sigma, beta);
        double const err    = len == 0.0 ? std::fabs(closed - quad) : std::fabs(closed - quad) / quad;
        worst               = std::max(worst, err);
      }
    }
  }
  return {worst <= 1e-6, fmt::format("48 configurations, max relative error {:.2e}", worst)};
}

Outcome GaussianTvVsOracles()
{
  double worst_mc = 0.0, worst_quad = 0.0;
  std::uint64_t seed = 100;
  for (double sigma : kSigmas)
  {
    for (double len : kShiftNorms)
    {
      double const closed = GaussianTotalVariation(Perturbation({0.0, len}), GaussianNoiseSpec::Isotropic(sigma));
      worst_mc   = std::max(worst_mc, std::fabs(closed - oracle::MonteCarloGaussianTv(len / sigma, 1'000'000, seed++)));
      worst_quad = std::max(worst_quad, std::fabs(closed - oracle::QuadratureGaussianTv(len / sigma)));
    }
  }
  return {worst_mc <= 5e-3 && worst_quad <= 1e-8,
          fmt::format("12 configurations, max |err| Monte Carlo {:.2e}, quadrature {:.2e}", worst_mc,
                      worst_quad)};
}

Outcome TvFromRenyiInequality()
{
  std::mt19937_64 gen(2024);
  std::size_t     violations = 0, checks = 0;
  for (int trial = 0; trial < 10000; ++trial)
  {
    std::size_t const k = 2 + static_cast<std::size_t>(trial % 9);
    auto const        p = RandomDist(gen, k);
    auto const        q = RandomDist(gen, k);
    for (double beta : {1.0, 1.5, 2.0, 10.0, kInfinity})
    {
      ++checks;
      violations += TotalVariationDistance(p, q) > TotalVariationBoundFromRenyi(RenyiDivergence(p, q, beta)) ? 1 : 0;
    }
  }
  return {violations == 0, fmt::format("{} checks, {} violations", checks, violations)};
}

Outcome ProbabilityPreservation()
{
  std::mt19937_64                        gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t                            violations = 0, trials = 0;
  while (trials < 10000)
  {
    std::size_t const k    = 2 + static_cast<std::size_t>(trials % 9);
    auto const        p    = RandomDist(gen, k);
    auto const        q    = RandomDist(gen, k);
    double const      beta = trials % 10 == 0 ? kInfinity : 1.0 + 1e-3 + 15.0 * unit(gen);
    double const      eps  = RenyiDivergence(p, q, beta);
    if (!std::isfinite(eps))
    {
      continue;
    }
    std::uint64_t mask = 0;
    while (mask == 0)
    {
      mask = gen() & ((1ULL << k) - 1);
    }
    double pz = 0.0, qz = 0.0;
    for (std::size_t i = 0; i < k; ++i)
    {
      if (mask & (1ULL << i))
      {
        pz += p[i];
        qz += q[i];
      }
    }
    violations += pz > ProbabilityPreservationBound(qz, eps, beta) + 1e-12 ? 1 : 0;
    ++trials;
  }
  return {violations == 0, fmt::format("{} triples, {} violations", trials, violations)};
}

Outcome EndToEndDominance()
{
  double const              sigma = 0.5;
  std::vector<double> const alphas{0.1, 0.25, 0.5};
  std::size_t               violations = 0, runs = 0;
  double                    worst_slack = kInfinity;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    auto const                 data = BenchmarkDataset(seed);
    DeterministicClassifier const base(FitLeastSquaresLinear(data));
    RandomizedClassifier const clf(base, GaussianNoiseSpec::Isotropic(sigma), MonteCarloEvaluation{10000, seed});
    auto const                 clean = EmpiricalRisk(clf, data);
    AttackBudget const         budget{2, 2, 10000, seed};
    for (double alpha : alphas)
    {
      auto const   adv   = EmpiricalAdversarialRisk(clf, data, alpha, NormOrder::L2(), budget);
      double const eps   = CertifyGaussianPreprocessing(sigma, alpha, 1.0).total_variation.epsilon;
      double const se    = std::hypot(clean.standard_error, adv.standard_error);
      double const slack = clean.value + eps + 3.0 * se - adv.value;
      worst_slack        = std::min(worst_slack, slack);
      violations += slack < 0.0 ? 1 : 0;
      ++runs;
    }
  }
  double const eps_mid = CertifyGaussianPreprocessing(sigma, 0.25, 1.0).total_variation.epsilon;
  return {violations == 0 && std::fabs(eps_mid - 0.197413) < 1e-6,
          fmt::format("{} runs, {} violations, smallest slack {:.4f}, eps_tv(0.25) = {:.6f}", runs,
                      violations, worst_slack, eps_mid)};
}

Outcome ModePreservationSoundness()
{
  double const               sigma = 0.5, alpha = 0.25, beta = 2.0;
  DeterministicClassifier const base(LinearModel::Binary({0.8, -0.6}, 0.05));
  RandomizedClassifier const clf(base, GaussianNoiseSpec::Isotropic(sigma), ExactEvaluation{});
  auto const                 certs = CertifyGaussianPreprocessing(sigma, alpha, beta);
  std::mt19937_64                        gen(99);
  std::uniform_real_distribution<double> coord(-0.75, 0.75);

  auto count_changes = [&](auto certified) {
    std::size_t points = 0, changes = 0;
    while (points < 200)
    {
      std::vector<double> const x{coord(gen), coord(gen)};
      auto const                dist = PredictDistribution(clf, x).dist;
      if (!certified(dist))
      {
        continue;
      }
      ++points;
      Label const mode = ModeClassifier(dist);
      for (int i = 1; i <= 100; ++i)
      {
        double const r = alpha * i / 100.0;
        for (int j = 0; j < 100; ++j)
        {
          double const              theta = 2.0 * std::numbers::pi * j / 100.0;
          std::vector<double> const moved{x[0] + r * std::cos(theta), x[1] + r * std::sin(theta)};
          changes += ModeClassifier(PredictDistribution(clf, moved).dist) != mode ? 1 : 0;
        }
      }
    }
    return changes;
  };
  std::size_t const tv_changes = count_changes(
      [&](CategoricalDistribution const &d) { return ModePreservationTv(d, certs.total_variation.epsilon); });
  std::size_t const renyi_changes = count_changes(
      [&](CategoricalDistribution const &d) { return ModePreservationRenyi(d, certs.renyi.epsilon, beta); });
  return {tv_changes == 0 && renyi_changes == 0,
          fmt::format("200 TV-certified and 200 Renyi-certified points x 10^4 perturbations, "
                      "mode changes {} / {}",
                      tv_changes, renyi_changes)};
}

Outcome CoveringSandwich()
{
  std::mt19937_64                        gen(5);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.1, 1.0);
  std::size_t                            failures = 0;
  for (int trial = 0; trial < 100; ++trial)
  {
    std::size_t const n = 1 + static_cast<std::size_t>(gen() % 10);
    std::size_t const d = 1 + static_cast<std::size_t>(gen() % 3);
    PointSet          pts(n, std::vector<double>(d));
    for (auto &p : pts)
    {
      for (auto &v : p)
      {
        v = coord(gen);
      }
    }
    double const    p    = std::vector<double>{1.0, 2.0, kInfinity}[static_cast<std::size_t>(trial % 3)];
    NormOrder const norm(p);
    double const    a      = radius(gen);
    auto const      exact  = CoveringExact(pts, a, norm);
    auto const      greedy = CoveringGreedy(pts, a, norm);
    bool const      ok     = IsValidCover(pts, exact) && IsValidCover(pts, greedy) &&
                    exact.n_balls <= greedy.n_balls &&
                    exact.n_balls == oracle::BruteForceCoverSize(pts, a, p);
    failures += ok ? 0 : 1;
  }
  return {failures == 0, fmt::format("100 instances, {} failures", failures)};
}

Outcome BoundArithmetic()
{
  double const rad  = RademacherBoundTv(4, 2, 100, 0.05);
  double const gap  = GeneralizationGapBound(0.1, 1000, 0.05);
  double const mult = RenyiMultiplicativeBound(0.1, 0.1, 2.0);
  // 0.2 + 3 sqrt(ln 40 / 2000) = 0.328841
  double const gap_reference = 0.2 + 3.0 * std::sqrt(std::log(40.0) / 2000.0);
  bool const   ok = std::fabs(rad - 0.332843) <= 1e-6 && std::fabs(gap - gap_reference) <= 1e-6 &&
                  std::fabs(gap - 0.328841) <= 1e-6 && std::fabs(mult - 0.332442) <= 1e-6;
  return {ok, fmt::format("rademacher_tv {:.6f}, generalization_gap {:.6f}, renyi_mult {:.6f}", rad,
                          gap, mult)};
}

// Pinned from the pre-registered benchmark run (seed 0, m = 10^4, step 0.05).
constexpr double kPinnedCrossover = 0.20;
constexpr double kGridStep        = 0.05;

Outcome CurveProperties()
{
  auto const                    data = BenchmarkDataset(0);
  DeterministicClassifier const base(FitLeastSquaresLinear(data));
  std::vector<double>           grid;
  for (int i = 0; i <= 20; ++i)
  {
    grid.push_back(kGridStep * i);
  }
  auto const narrow = GuaranteedAccuracyCurve(base, data, {0.25, 1.0, grid, 10000, 0, std::nullopt});
  auto const wide   = GuaranteedAccuracyCurve(base, data, {0.5, 1.0, grid, 10000, 0, std::nullopt});
  bool       monotone = true;
  for (std::size_t i = 1; i < grid.size(); ++i)
  {
    monotone = monotone && narrow[i].guaranteed_acc <= narrow[i - 1].guaranteed_acc &&
               wide[i].guaranteed_acc <= wide[i - 1].guaranteed_acc;
  }
  bool const starts_higher = narrow[0].guaranteed_acc > wide[0].guaranteed_acc;
  double     crossover     = kInfinity;
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    if (narrow[i].guaranteed_acc < wide[i].guaranteed_acc)
    {
      crossover = grid[i];
      break;
    }
  }
  bool const pinned = std::fabs(crossover - kPinnedCrossover) <= kGridStep + 1e-12;
  return {monotone && starts_higher && pinned,
          fmt::format("monotone {}, acc at 0: {:.4f} vs {:.4f}, crossover at {:.2f} (pinned {:.2f} +/- {:.2f})",
                      monotone, narrow[0].guaranteed_acc, wide[0].guaranteed_acc, crossover,
                      kPinnedCrossover, kGridStep)};
}

Outcome CurveReproducibility()
{
  auto run = [](std::string const &threads) {
    std::ostringstream out, err;
    int const code = cli::Run({"curve", "--sigma", "0.5", "--samples", "2000", "--seed", "11", "--threads",
                               threads, "--alphas", "0,0.25,0.5", "--attack", "--restarts", "1", "--steps", "1"},
                              out, err);
    return code == 0 ? out.str() : std::string{};
  };
  std::string const one  = run("1");
  std::string const four = run("4");
  SetThreadCount(1);
  return {!one.empty() && one == four,
          fmt::format("{} bytes with 1 thread, {} bytes with 4 threads, identical: {}", one.size(),
                      four.size(), one == four)};
}

}  // namespace
}  // namespace randcert

int main()
{
  using namespace randcert;
  std::vector<Criterion> const criteria{
      {1, "Gaussian Renyi closed form matches quadrature", 10, GaussianRenyiVsQuadrature},
      {2, "Gaussian TV closed form matches Monte Carlo and quadrature", 60, GaussianTvVsOracles},
      {3, "TV never exceeds the bound from Renyi", 30, TvFromRenyiInequality},
      {4, "Renyi probability preservation", 30, ProbabilityPreservation},
      {5, "attacked risk within clean risk + eps_tv + 3 SE", 300, EndToEndDominance},
      {6, "certified points never change mode", 120, ModePreservationSoundness},
      {7, "covering sandwich", 60, CoveringSandwich},
      {8, "bound arithmetic", 1, BoundArithmetic},
      {9, "guaranteed-accuracy curve shape and crossover", 600, CurveProperties},
      {11, "curve CSV identical across thread counts", 600, CurveReproducibility},
  };

  int failures = 0;
  for (auto const &c : criteria)
  {
    auto const    start   = std::chrono::steady_clock::now();
    Outcome       outcome = c.run();
    double const  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool const    in_time = seconds < c.time_limit_s;
    bool const    pass    = outcome.pass && in_time;
    failures += pass ? 0 : 1;
    std::cout << fmt::format("[{}] AC{:<2} {}: {} ({:.1f} s, limit {:.0f} s)", pass ? "PASS" : "FAIL", c.id,
                             c.title, outcome.detail, seconds, c.time_limit_s)
              << std::endl;
    if (c.id == 9)
    {
      std::cout << "[N/A ] AC10 published image-classification accuracies: needs a trained deep "
                   "network, outside this toolkit; AC1-9 cover the classifier-agnostic formulas"
                << std::endl;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
