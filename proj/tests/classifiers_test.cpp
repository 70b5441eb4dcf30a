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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "randcert/classifiers.hpp"
#include "randcert/errors.hpp"

namespace randcert {
namespace {

DeterministicClassifier AxisLinear()
{
  return DeterministicClassifier(LinearModel::Binary({1.0, 0.0}, 0.0));
}

// 4 x 4 lattice on [-1, 1]^2 with three labels arranged in diagonal bands.
GridTable BandGrid()
{
  GridTable g;
  g.origin      = {-1.0, -1.0};
  g.cell_size   = 0.5;
  g.shape       = {4, 4};
  g.num_classes = 3;
  for (std::size_t i = 0; i < 4; ++i)
  {
    for (std::size_t j = 0; j < 4; ++j)
    {
      g.labels.push_back((i + j) % 3);
    }
  }
  return g;
}

TEST(LinearModelTest, BinaryPredictsSignWithSmallestIndexTies)
{
  auto const m = LinearModel::Binary({1.0, -1.0}, 0.25);
  std::vector<double> const pos{0.5, 0.0};
  std::vector<double> const neg{-0.5, 0.0};
  std::vector<double> const tie{0.0, 0.25};
  EXPECT_EQ(m.Predict(pos), 1u);
  EXPECT_EQ(m.Predict(neg), 0u);
  EXPECT_EQ(m.Predict(tie), 0u);
}

TEST(DeterministicClassifierTest, RejectsMalformedModels)
{
  LinearModel bad;
  bad.weights = Eigen::MatrixXd::Zero(2, 2);
  bad.bias    = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(DeterministicClassifier{bad}, DimensionError);
  bad.bias       = Eigen::VectorXd::Zero(2);
  bad.weights(0, 0) = NAN;
  EXPECT_THROW(DeterministicClassifier{bad}, ValidationError);

  auto grid      = BandGrid();
  grid.labels[3] = 5;
  EXPECT_THROW(DeterministicClassifier{grid}, ValidationError);
  grid = BandGrid();
  grid.labels.pop_back();
  EXPECT_THROW(DeterministicClassifier{grid}, DimensionError);
}

TEST(GridTableTest, PredictAndBox)
{
  auto const g = BandGrid();
  std::vector<double> const a{-0.9, -0.9};
  std::vector<double> const b{0.1, -0.6};
  std::vector<double> const outside{3.0, 3.0};
  EXPECT_EQ(g.Predict(a), 0u);
  EXPECT_EQ(g.Predict(b), 2u);  // cell (2, 0)
  EXPECT_TRUE(g.Contains(b));
  EXPECT_FALSE(g.Contains(outside));
  EXPECT_EQ(g.Predict(outside), (3u + 3u) % 3u);
}

TEST(PredictDistributionTest, ExactLinearKnownValues)
{
  RandomizedClassifier const clf(AxisLinear(), GaussianNoiseSpec::Isotropic(1.0), ExactEvaluation{});
  std::vector<double> const  origin{0.0, 0.0};
  std::vector<double> const  shifted{1.0, 0.0};
  auto const                 at_origin = PredictDistribution(clf, origin);
  EXPECT_NEAR(at_origin.dist[0], 0.5, 1e-15);
  EXPECT_TRUE(at_origin.exact());
  EXPECT_EQ(at_origin.confidence_radius, 0.0);
  auto const at_one = PredictDistribution(clf, shifted);
  EXPECT_NEAR(at_one.dist[1], 0.841344746068543, 1e-12);
}

TEST(PredictDistributionTest, ExactLinearMatchesMonteCarloOracle)
{
  std::mt19937_64                  gen(17);
  std::normal_distribution<double> normal;
  std::size_t                      hits = 0;
  constexpr std::size_t            n    = 1'000'000;
  for (std::size_t i = 0; i < n; ++i)
  {
    hits += 1.0 + normal(gen) > 0.0 ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.841344746068543, 2e-3);
}

TEST(PredictDistributionTest, ExactLinearWithFullCovariance)
{
  Eigen::MatrixXd cov(2, 2);
  cov << 0.5, 0.3, 0.3, 0.4;
  auto const spec = GaussianNoiseSpec::FullCovariance(cov);
  RandomizedClassifier const exact(DeterministicClassifier(LinearModel::Binary({1.0, 2.0}, -0.1)),
                                   spec, ExactEvaluation{});
  std::vector<double> const x{0.2, 0.1};
  double const expected = oracle::SeriesNormalCdf((0.2 + 0.2 - 0.1) / std::sqrt(0.5 + 4 * 0.4 + 4 * 0.3));
  EXPECT_NEAR(PredictDistribution(exact, x).dist[1], expected, 1e-12);

  auto const mc = exact.WithMode(MonteCarloEvaluation{200000, 3});
  auto const est = PredictDistribution(mc, x);
  EXPECT_NEAR(est.dist[1], expected, est.confidence_radius);
}

TEST(PredictDistributionTest, MonteCarloWithinConfidenceRadiusAcrossSeeds)
{
  std::vector<double> const x{1.0, 0.0};
  int                       misses = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    RandomizedClassifier const clf(AxisLinear(), GaussianNoiseSpec::Isotropic(1.0),
                                   MonteCarloEvaluation{10000, seed});
    auto const est = PredictDistribution(clf, x);
    EXPECT_EQ(est.samples, 10000u);
    EXPECT_NEAR(est.confidence_radius, HoeffdingRadius(2, 10000), 0.0);
    misses += std::fabs(est.dist[1] - 0.841344746068543) > est.confidence_radius ? 1 : 0;
  }
  EXPECT_EQ(misses, 0);
}

TEST(PredictDistributionTest, HoeffdingRadiusFormula)
{
  EXPECT_NEAR(HoeffdingRadius(2, 10000), std::sqrt(std::log(4.0 / 1e-3) / 20000.0), 1e-15);
  EXPECT_THROW(HoeffdingRadius(2, 0), DomainError);
}

TEST(PredictDistributionTest, NoiseFreeIsAPointMass)
{
  RandomizedClassifier const clf(AxisLinear(), std::nullopt, MonteCarloEvaluation{10, 0});
  std::vector<double> const  x{0.3, 0.0};
  auto const                 est = PredictDistribution(clf, x);
  EXPECT_EQ(est.dist[1], 1.0);
  EXPECT_TRUE(est.exact());
}

TEST(PredictDistributionTest, ExactUnsupportedIsACapabilityError)
{
  LinearModel three;
  three.weights = Eigen::MatrixXd::Identity(3, 2);
  three.bias    = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(RandomizedClassifier(DeterministicClassifier(three),
                                    GaussianNoiseSpec::Isotropic(1.0), ExactEvaluation{}),
               CapabilityError);
  EXPECT_NO_THROW(RandomizedClassifier(DeterministicClassifier(three), std::nullopt,
                                       ExactEvaluation{}));
}

TEST(PredictDistributionTest, DimensionAndBoxChecks)
{
  RandomizedClassifier const lin(AxisLinear(), GaussianNoiseSpec::Isotropic(1.0), ExactEvaluation{});
  std::vector<double> const  short_x{0.0};
  EXPECT_THROW(PredictDistribution(lin, short_x), DimensionError);

  RandomizedClassifier const grid(DeterministicClassifier(BandGrid()),
                                  GaussianNoiseSpec::Isotropic(0.3), ExactEvaluation{});
  std::vector<double> const  outside{1.5, 0.0};
  EXPECT_THROW(PredictDistribution(grid, outside), ValidationError);
}

// Cell masses of N(x, cov) on the lattice: outer Simpson over the first
// coordinate, inner conditional normal via the series CDF.
std::vector<double> GridMassOracle(GridTable const &g, std::vector<double> const &x,
                                   double s0, double s1, double rho)
{
  std::vector<double> mass(g.num_classes, 0.0);
  double const        cond_sd = s1 * std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < g.shape[0]; ++i)
  {
    double const lo = i == 0 ? x[0] - 12.0 * s0 : g.origin[0] + g.cell_size * i;
    double const hi = i + 1 == g.shape[0] ? x[0] + 12.0 * s0 : g.origin[0] + g.cell_size * (i + 1);
    for (std::size_t j = 0; j < g.shape[1]; ++j)
    {
      double const lo1 = j == 0 ? -1e300 : g.origin[1] + g.cell_size * j;
      double const hi1 = j + 1 == g.shape[1] ? 1e300 : g.origin[1] + g.cell_size * (j + 1);
      auto integrand = [&](long double u) -> long double {
        double const z    = (static_cast<double>(u) - x[0]) / s0;
        double const mean = x[1] + rho * s1 * z;
        double const pdf  = std::exp(-0.5 * z * z) / (s0 * std::sqrt(2.0 * std::numbers::pi));
        double const upper = hi1 > 1e299 ? 1.0 : oracle::SeriesNormalCdf((hi1 - mean) / cond_sd);
        double const lower = lo1 < -1e299 ? 0.0 : oracle::SeriesNormalCdf((lo1 - mean) / cond_sd);
        return pdf * (upper - lower);
      };
      mass[g.labels[i * g.shape[1] + j]] += static_cast<double>(oracle::Simpson(integrand, lo, hi, 4000));
    }
  }
  return mass;
}

TEST(PredictDistributionTest, GridCellMassesMatchQuadratureOracle)
{
  auto const g = BandGrid();
  std::vector<double> const x{0.1, -0.2};
  for (double rho : {0.0, 0.6, -0.4})
  {
    double const    s0 = 0.4, s1 = 0.3;
    Eigen::MatrixXd cov(2, 2);
    cov << s0 * s0, rho * s0 * s1, rho * s0 * s1, s1 * s1;
    RandomizedClassifier const clf(DeterministicClassifier(g), GaussianNoiseSpec::FullCovariance(cov),
                                   ExactEvaluation{});
    auto const est       = PredictDistribution(clf, x);
    auto const reference = GridMassOracle(g, x, s0, s1, rho);
    for (std::size_t c = 0; c < 3; ++c)
    {
      EXPECT_NEAR(est.dist[c], reference[c], 1e-4 * reference[c] + 1e-9) << rho << " " << c;
    }
  }
}

TEST(PredictDistributionTest, OneDimensionalGrid)
{
  GridTable g;
  g.origin      = {-1.0};
  g.cell_size   = 1.0;
  g.shape       = {2};
  g.labels      = {0, 1};
  g.num_classes = 2;
  RandomizedClassifier const clf(DeterministicClassifier(g), GaussianNoiseSpec::Isotropic(0.5),
                                 ExactEvaluation{});
  std::vector<double> const x{0.25};
  EXPECT_NEAR(PredictDistribution(clf, x).dist[1], oracle::SeriesNormalCdf(0.5), 1e-12);
}

TEST(ModeClassifierTest, ArgmaxWithSmallestIndexTies)
{
  EXPECT_EQ(ModeClassifier(CategoricalDistribution({0.8, 0.2})), 0u);
  EXPECT_EQ(ModeClassifier(CategoricalDistribution({0.5, 0.5})), 0u);
  EXPECT_EQ(ModeClassifier(CategoricalDistribution({0.2, 0.3, 0.5})), 2u);
}

TEST(SamplePredictionTest, NoiseFreeAndDeterministic)
{
  RandomizedClassifier const quiet(AxisLinear(), std::nullopt, MonteCarloEvaluation{1, 0});
  std::vector<double> const  x{-0.2, 0.4};
  for (std::uint64_t seed = 0; seed < 50; ++seed)
  {
    ASSERT_EQ(SamplePrediction(quiet, x, seed), 0u);
  }
  RandomizedClassifier const noisy(AxisLinear(), GaussianNoiseSpec::Isotropic(1.0),
                                   MonteCarloEvaluation{1, 0});
  EXPECT_EQ(SamplePrediction(noisy, x, 99), SamplePrediction(noisy, x, 99));
}

TEST(SamplePredictionTest, FrequencyMatchesDistribution)
{
  RandomizedClassifier const noisy(AxisLinear(), GaussianNoiseSpec::Isotropic(1.0),
                                   MonteCarloEvaluation{1, 0});
  std::vector<double> const  x{1.0, 0.0};
  constexpr std::size_t      n    = 100000;
  std::size_t                ones = 0;
  for (std::uint64_t seed = 0; seed < n; ++seed)
  {
    ones += SamplePrediction(noisy, x, seed);
  }
  double const p  = 0.841344746068543;
  double const se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(ones) / n, p, 3.0 * se);
}

TEST(Expected01LossTest, ComplementOfTrueLabelMass)
{
  CategoricalDistribution const d({0.2, 0.3, 0.5});
  EXPECT_NEAR(Expected01Loss(d, 2), 0.5, 1e-15);
  EXPECT_NEAR(Expected01Loss(d, 0), 0.8, 1e-15);
  EXPECT_THROW(Expected01Loss(d, 3), ValidationError);
}

}  // namespace
}  // namespace randcert
