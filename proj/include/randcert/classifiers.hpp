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
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "randcert/distributions.hpp"
#include "randcert/smoothing.hpp"

namespace randcert {

using Label = std::size_t;

/**
 * Affine scorer: label = argmax_k (W x + b)_k, ties to the smallest k.
 * weights is K x d, bias has K entries.
 */
struct LinearModel
{
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  // Two-class model predicting label 1 iff w.x + b > 0.
  static LinearModel Binary(std::vector<double> const &w, double b);

  std::size_t num_classes() const
  {
    return static_cast<std::size_t>(weights.rows());
  }
  std::size_t dim() const
  {
    return static_cast<std::size_t>(weights.cols());
  }
  Label Predict(std::span<double const> x) const;
};

/**
 * Piecewise-constant classifier on a 1-D or 2-D lattice. Cell (i, j) spans
 * [origin + (i, j) * cell_size, origin + (i + 1, j + 1) * cell_size); labels are
 * stored row-major with the first coordinate slowest. Inputs outside the box
 * take the label of the nearest edge cell, so noisy inputs are always defined.
 */
struct GridTable
{
  std::vector<double>      origin;
  double                   cell_size{1.0};
  std::vector<std::size_t> shape;
  std::vector<Label>       labels;
  std::size_t              num_classes{2};

  std::size_t dim() const
  {
    return origin.size();
  }
  bool  Contains(std::span<double const> x) const;
  Label Predict(std::span<double const> x) const;
  // Cell index along `axis`, clamped to the lattice.
  std::size_t CellCoordinate(std::size_t axis, double value) const;
  // Lower/upper edge of a cell along an axis; the outermost cells extend to infinity.
  double CellLower(std::size_t axis, std::size_t index) const;
  double CellUpper(std::size_t axis, std::size_t index) const;
};

class DeterministicClassifier
{
public:
  using Variant = std::variant<LinearModel, GridTable>;

  explicit DeterministicClassifier(LinearModel model);
  explicit DeterministicClassifier(GridTable table);

  Variant const &variant() const noexcept
  {
    return model_;
  }
  std::size_t num_classes() const;
  std::size_t dim() const;
  Label       Predict(std::span<double const> x) const;

private:
  Variant model_;
};

struct ExactEvaluation
{};

struct MonteCarloEvaluation
{
  std::size_t   samples;
  std::uint64_t seed;
};

using EvaluationMode = std::variant<ExactEvaluation, MonteCarloEvaluation>;

/**
 * Output distribution at one input. confidence_radius is a simultaneous
 * per-class half-width (zero exactly when the distribution is exact) and
 * samples is the Monte-Carlo sample count (zero when exact).
 */
struct DistributionEstimate
{
  CategoricalDistribution dist;
  double                  confidence_radius{0.0};
  std::size_t             samples{0};

  bool exact() const noexcept
  {
    return samples == 0;
  }
};

inline constexpr double kDefaultConfidenceDelta = 1e-3;

// Two-sided Hoeffding half-width with a union bound over the classes:
// sqrt(ln(2K / delta) / (2m)).
double HoeffdingRadius(std::size_t num_classes, std::size_t samples,
                       double delta = kDefaultConfidenceDelta);

/**
 * m coloured noise vectors for one input stream, stored row-major (m x d).
 * Reusing the same draws for every candidate input gives common random numbers.
 */
class NoiseDraws
{
public:
  NoiseDraws(GaussianNoiseSpec const &spec, std::size_t dim, std::size_t samples,
             std::uint64_t seed, std::uint64_t stream);

  std::size_t samples() const noexcept
  {
    return samples_;
  }
  std::size_t dim() const noexcept
  {
    return dim_;
  }
  std::span<double const> row(std::size_t s) const
  {
    return {values_.data() + s * dim_, dim_};
  }

private:
  std::size_t         samples_;
  std::size_t         dim_;
  std::vector<double> values_;
};

/**
 * A deterministic base model behind optional Gaussian input noise: the
 * pushforward of N(x, Sigma) through the base classifier.
 *
 * Exact evaluation is available for noise-free models, for two-class linear
 * models (Gaussian orthant probability) and for grid tables (cell masses).
 * Everything else must use Monte-Carlo evaluation.
 */
class RandomizedClassifier
{
public:
  RandomizedClassifier(DeterministicClassifier base, std::optional<GaussianNoiseSpec> noise,
                       EvaluationMode mode);

  DeterministicClassifier const &base() const noexcept
  {
    return base_;
  }
  std::optional<GaussianNoiseSpec> const &noise() const noexcept
  {
    return noise_;
  }
  EvaluationMode const &mode() const noexcept
  {
    return mode_;
  }
  std::size_t num_classes() const
  {
    return base_.num_classes();
  }
  std::size_t dim() const
  {
    return base_.dim();
  }

  bool SupportsExact() const;

  RandomizedClassifier WithMode(EvaluationMode mode) const;

  // Monte-Carlo draws for stream `stream` under this classifier's mode.
  // Returns nullopt when evaluation is exact.
  std::optional<NoiseDraws> DrawsFor(std::uint64_t stream) const;

  // Frequencies of base(x + z) over pre-drawn noise z.
  DistributionEstimate EstimateWithDraws(std::span<double const> x, NoiseDraws const &draws) const;

  DistributionEstimate Exact(std::span<double const> x) const;

private:
  void CheckInput(std::span<double const> x) const;

  DeterministicClassifier          base_;
  std::optional<GaussianNoiseSpec> noise_;
  EvaluationMode                   mode_;
};

// Output distribution at x. Monte-Carlo draws come from the stream (seed, stream).
DistributionEstimate PredictDistribution(RandomizedClassifier const &clf,
                                         std::span<double const> x, std::uint64_t stream = 0);

// argmax with ties broken toward the smallest label.
Label ModeClassifier(DistributionEstimate const &est);
Label ModeClassifier(CategoricalDistribution const &dist);

// One label drawn from the output distribution; a pure function of (clf, x, seed).
Label SamplePrediction(RandomizedClassifier const &clf, std::span<double const> x,
                       std::uint64_t seed);

// Probability of misclassifying y: 1 - p(y).
double Expected01Loss(DistributionEstimate const &est, Label y);
double Expected01Loss(CategoricalDistribution const &dist, Label y);

}  // namespace randcert
