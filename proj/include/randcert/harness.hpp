#pragma once
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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randcert/bounds.hpp"
#include "randcert/classifiers.hpp"
#include "randcert/smoothing.hpp"

namespace randcert {

/**
 * n labelled points in [-1, 1]^d with labels in [0, K). The provenance string
 * records how the sample was produced (generator parameters and seed, or file).
 */
class LabeledDataset
{
public:
  LabeledDataset(std::vector<std::vector<double>> points, std::vector<Label> labels,
                 std::size_t num_classes, std::string provenance);

  std::size_t size() const noexcept
  {
    return points_.size();
  }
  std::size_t dim() const noexcept
  {
    return points_.front().size();
  }
  std::size_t num_classes() const noexcept
  {
    return num_classes_;
  }
  std::span<double const> point(std::size_t i) const
  {
    return points_[i];
  }
  Label label(std::size_t i) const
  {
    return labels_[i];
  }
  std::vector<std::vector<double>> const &points() const noexcept
  {
    return points_;
  }
  std::vector<Label> const &labels() const noexcept
  {
    return labels_;
  }
  std::string const &provenance() const noexcept
  {
    return provenance_;
  }

private:
  std::vector<std::vector<double>> points_;
  std::vector<Label>               labels_;
  std::size_t                      num_classes_;
  std::string                      provenance_;
};

// Balanced Gaussian blobs (label = i mod #centers) clipped to [-1, 1]^d.
LabeledDataset GenerateMixtureDataset(std::size_t n, std::size_t dim,
                                      std::vector<std::vector<double>> const &centers,
                                      double sigma_data, std::uint64_t seed);

// Fixed benchmark: d = 2, blobs at (-0.5, 0) and (0.5, 0), sigma_data = 0.2, n = 1000.
struct BenchmarkConfig
{
  static constexpr std::size_t kSamples   = 1000;
  static constexpr double      kSigmaData = 0.2;
  static constexpr double      kCenter    = 0.5;
};
LabeledDataset BenchmarkDataset(std::uint64_t seed, std::size_t n = BenchmarkConfig::kSamples);

// Two-class linear model fit by least squares on targets -1 / +1 (closed form).
LinearModel FitLeastSquaresLinear(LabeledDataset const &data);

struct RiskEstimate
{
  double value;
  double standard_error;
};

// Mean expected 0/1 loss; point i uses Monte-Carlo stream i. The standard error
// is the sample standard deviation of per-point losses over sqrt(n).
RiskEstimate EmpiricalRisk(RandomizedClassifier const &clf, LabeledDataset const &data);

struct AttackBudget
{
  std::size_t   random_restarts{8};
  std::size_t   refinement_steps{6};
  std::size_t   mc_samples_per_query{1000};
  std::uint64_t seed{0};

  void Validate() const;
};

struct AttackResult
{
  Perturbation tau;
  double       attacked_loss;
  double       clean_loss;
};

/**
 * Derivative-free search for a perturbation in the l_p ball (p in {1, 2, inf})
 * that maximises the expected 0/1 loss at x + tau, keeping x + tau inside
 * [-1, 1]^d. Each restart draws a uniform point of the ball and refines it by
 * coordinate and radial moves with a halving step. Restarts are independent of
 * each other, so more restarts never lower the result. The returned loss is a
 * lower bound on the worst case.
 *
 * Monte-Carlo classifiers use budget.mc_samples_per_query draws from
 * stream `stream`, shared by every candidate (common random numbers).
 */
AttackResult AttackPoint(RandomizedClassifier const &clf, std::span<double const> x, Label y,
                         double alpha, NormOrder norm, AttackBudget const &budget,
                         std::uint64_t stream = 0);

// Mean attacked loss over the dataset, a lower bound on the adversarial risk.
RiskEstimate EmpiricalAdversarialRisk(RandomizedClassifier const &clf, LabeledDataset const &data,
                                      double alpha, NormOrder norm, AttackBudget const &budget);

struct CurveRow
{
  double                alpha2;
  double                eps_tv;
  double                eps_renyi;
  double                clean_acc;
  double                guaranteed_acc;
  std::optional<double> attacked_acc;
};

struct CurveConfig
{
  double                      sigma;
  double                      beta{1.0};
  std::vector<double>         alpha_grid;
  std::size_t                 samples{10000};
  std::uint64_t               seed{0};
  std::optional<AttackBudget> attack;
};

/**
 * Certified accuracy of base # N(x, sigma^2 I) against l2 adversaries, one row
 * per radius. Clean risk and the entropy term are estimated once on the
 * dataset; guaranteed accuracy is 1 - best certified adversarial risk, floored at 0.
 */
std::vector<CurveRow> GuaranteedAccuracyCurve(DeterministicClassifier const &base,
                                              LabeledDataset const &data, CurveConfig const &cfg);

std::string CurveToCsv(std::span<CurveRow const> rows);

struct SweepRow
{
  double sigma;
  double clean_acc;
  double standard_error;
};

// Clean accuracy of the noise-injected classifier for each sigma; sigma = 0 means no noise.
std::vector<SweepRow> NoiseAccuracySweep(DeterministicClassifier const &base,
                                         LabeledDataset const &data,
                                         std::span<double const> sigma_grid, std::size_t samples,
                                         std::uint64_t seed);

std::string SweepToCsv(std::span<SweepRow const> rows);

// Headerless CSV, one point per row.
std::vector<std::vector<double>> ReadPointsCsv(std::string const &path);
// Headerless CSV whose last column is the integer label.
LabeledDataset ReadDatasetCsv(std::string const &path, std::size_t num_classes);

}  // namespace randcert
