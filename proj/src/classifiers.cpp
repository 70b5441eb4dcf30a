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

#include "randcert/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "randcert/errors.hpp"
#include "randcert/random.hpp"

namespace randcert {

namespace {

// Standardised integration limits; the normal mass beyond 9 sd is below 1e-18.
constexpr double kTailCut = 9.0;

Label ArgmaxSmallestIndex(std::span<double const> values)
{
  Label best = 0;
  for (Label k = 1; k < values.size(); ++k)
  {
    if (values[k] > values[best])
    {
      best = k;
    }
  }
  return best;
}

double IntervalMass(double lower, double upper, double mean, double sd)
{
  double const a = std::isinf(lower) ? 0.0 : StdNormalCdf((lower - mean) / sd);
  double const b = std::isinf(upper) ? 1.0 : StdNormalCdf((upper - mean) / sd);
  return std::max(0.0, b - a);
}

}  // namespace

LinearModel LinearModel::Binary(std::vector<double> const &w, double b)
{
  LinearModel model;
  auto const  d = static_cast<Eigen::Index>(w.size());
  model.weights = Eigen::MatrixXd::Zero(2, d);
  for (Eigen::Index j = 0; j < d; ++j)
  {
    model.weights(1, j) = w[static_cast<std::size_t>(j)];
  }
  model.bias = Eigen::Vector2d(0.0, b);
  return model;
}

Label LinearModel::Predict(std::span<double const> x) const
{
  Label       best       = 0;
  double      best_score = -kInfinity;
  auto const  d          = weights.cols();
  for (Eigen::Index k = 0; k < weights.rows(); ++k)
  {
    double score = bias(k);
    for (Eigen::Index j = 0; j < d; ++j)
    {
      score += weights(k, j) * x[static_cast<std::size_t>(j)];
    }
    if (score > best_score)
    {
      best_score = score;
      best       = static_cast<Label>(k);
    }
  }
  return best;
}

bool GridTable::Contains(std::span<double const> x) const
{
  for (std::size_t a = 0; a < dim(); ++a)
  {
    double const hi = origin[a] + cell_size * static_cast<double>(shape[a]);
    if (!(x[a] >= origin[a] && x[a] <= hi))
    {
      return false;
    }
  }
  return true;
}

std::size_t GridTable::CellCoordinate(std::size_t axis, double value) const
{
  double const rel = std::floor((value - origin[axis]) / cell_size);
  if (!(rel > 0.0))
  {
    return 0;
  }
  auto const last = static_cast<double>(shape[axis] - 1);
  return static_cast<std::size_t>(std::min(rel, last));
}

double GridTable::CellLower(std::size_t axis, std::size_t index) const
{
  return index == 0 ? -kInfinity : origin[axis] + cell_size * static_cast<double>(index);
}

double GridTable::CellUpper(std::size_t axis, std::size_t index) const
{
  return index + 1 == shape[axis] ? kInfinity
                                  : origin[axis] + cell_size * static_cast<double>(index + 1);
}

Label GridTable::Predict(std::span<double const> x) const
{
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a)
  {
    flat = flat * shape[a] + CellCoordinate(a, x[a]);
  }
  return labels[flat];
}

DeterministicClassifier::DeterministicClassifier(LinearModel model)
  : model_(std::move(model))
{
  auto const &m = std::get<LinearModel>(model_);
  if (m.weights.rows() < 2 || m.weights.cols() < 1)
  {
    throw ValidationError("linear model needs at least two classes and one input dimension");
  }
  if (m.bias.size() != m.weights.rows())
  {
    throw DimensionError("linear model bias must have one entry per class");
  }
  if (!m.weights.allFinite() || !m.bias.allFinite())
  {
    throw ValidationError("linear model parameters must be finite");
  }
}

DeterministicClassifier::DeterministicClassifier(GridTable table)
  : model_(std::move(table))
{
  auto const &g = std::get<GridTable>(model_);
  if (g.dim() < 1 || g.dim() > 2)
  {
    throw ValidationError("grid tables support one or two input dimensions");
  }
  if (g.shape.size() != g.dim())
  {
    throw DimensionError("grid shape must have one entry per dimension");
  }
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size))
  {
    throw ValidationError("grid cell size must be positive");
  }
  if (g.num_classes < 2)
  {
    throw ValidationError("grid table needs at least two classes");
  }
  std::size_t cells = 1;
  for (std::size_t n : g.shape)
  {
    if (n == 0)
    {
      throw ValidationError("grid shape entries must be positive");
    }
    cells *= n;
  }
  if (g.labels.size() != cells)
  {
    throw DimensionError("grid label count does not match its shape");
  }
  for (Label l : g.labels)
  {
    if (l >= g.num_classes)
    {
      throw ValidationError("grid label out of range");
    }
  }
  for (double o : g.origin)
  {
    if (!std::isfinite(o))
    {
      throw ValidationError("grid origin must be finite");
    }
  }
}

std::size_t DeterministicClassifier::num_classes() const
{
  if (auto const *grid = std::get_if<GridTable>(&model_))
  {
    return grid->num_classes;
  }
  return std::get<LinearModel>(model_).num_classes();
}

std::size_t DeterministicClassifier::dim() const
{
  return std::visit([](auto const &m) { return m.dim(); }, model_);
}

Label DeterministicClassifier::Predict(std::span<double const> x) const
{
  return std::visit([&](auto const &m) { return m.Predict(x); }, model_);
}

double HoeffdingRadius(std::size_t num_classes, std::size_t samples, double delta)
{
  if (samples == 0)
  {
    throw DomainError("Hoeffding radius needs at least one sample");
  }
  return std::sqrt(std::log(2.0 * static_cast<double>(num_classes) / delta) /
                   (2.0 * static_cast<double>(samples)));
}

NoiseDraws::NoiseDraws(GaussianNoiseSpec const &spec, std::size_t dim, std::size_t samples,
                       std::uint64_t seed, std::uint64_t stream)
  : samples_{samples}
  , dim_{dim}
  , values_(samples * dim)
{
  if (auto const d = spec.dim(); d && *d != dim)
  {
    throw DimensionError("noise covariance dimension does not match the classifier");
  }
  CounterRng          rng(seed, stream);
  std::vector<double> normals(dim);
  for (std::size_t s = 0; s < samples; ++s)
  {
    rng.StandardNormals(s, normals);
    spec.Colour(normals, {values_.data() + s * dim, dim});
  }
}

RandomizedClassifier::RandomizedClassifier(DeterministicClassifier base,
                                           std::optional<GaussianNoiseSpec> noise,
                                           EvaluationMode mode)
  : base_(std::move(base))
  , noise_(std::move(noise))
  , mode_(mode)
{
  if (noise_ && noise_->dim() && *noise_->dim() != base_.dim())
  {
    throw DimensionError("noise covariance dimension does not match the classifier");
  }
  if (auto const *mc = std::get_if<MonteCarloEvaluation>(&mode_); mc && mc->samples == 0)
  {
    throw ValidationError("Monte-Carlo evaluation needs at least one sample");
  }
  if (std::holds_alternative<ExactEvaluation>(mode_) && !SupportsExact())
  {
    throw CapabilityError(
        "exact evaluation is only available for noise-free models, two-class linear models and "
        "grid tables");
  }
}

bool RandomizedClassifier::SupportsExact() const
{
  if (!noise_)
  {
    return true;
  }
  if (auto const *lin = std::get_if<LinearModel>(&base_.variant()))
  {
    return lin->num_classes() == 2;
  }
  return std::holds_alternative<GridTable>(base_.variant());
}

RandomizedClassifier RandomizedClassifier::WithMode(EvaluationMode mode) const
{
  return RandomizedClassifier(base_, noise_, mode);
}

void RandomizedClassifier::CheckInput(std::span<double const> x) const
{
  if (x.size() != base_.dim())
  {
    std::ostringstream msg;
    msg << "input has dimension " << x.size() << ", classifier expects " << base_.dim();
    throw DimensionError(msg.str());
  }
  for (double v : x)
  {
    if (!std::isfinite(v))
    {
      throw ValidationError("input coordinates must be finite");
    }
  }
}

std::optional<NoiseDraws> RandomizedClassifier::DrawsFor(std::uint64_t stream) const
{
  auto const *mc = std::get_if<MonteCarloEvaluation>(&mode_);
  if (!mc || !noise_)
  {
    return std::nullopt;
  }
  return NoiseDraws(*noise_, base_.dim(), mc->samples, mc->seed, stream);
}

DistributionEstimate RandomizedClassifier::EstimateWithDraws(std::span<double const> x,
                                                             NoiseDraws const &draws) const
{
  CheckInput(x);
  if (draws.dim() != x.size())
  {
    throw DimensionError("noise draws do not match the input dimension");
  }
  std::size_t const        k = num_classes();
  std::vector<std::size_t> counts(k, 0);
  std::vector<double>      shifted(x.size());
  for (std::size_t s = 0; s < draws.samples(); ++s)
  {
    auto const z = draws.row(s);
    for (std::size_t j = 0; j < x.size(); ++j)
    {
      shifted[j] = x[j] + z[j];
    }
    ++counts[base_.Predict(shifted)];
  }
  std::vector<double> freq(k);
  auto const          m = static_cast<double>(draws.samples());
  for (std::size_t c = 0; c < k; ++c)
  {
    freq[c] = static_cast<double>(counts[c]) / m;
  }
  return {CategoricalDistribution(std::move(freq)), HoeffdingRadius(k, draws.samples()),
          draws.samples()};
}

DistributionEstimate RandomizedClassifier::Exact(std::span<double const> x) const
{
  CheckInput(x);
  std::size_t const k = num_classes();
  if (!noise_)
  {
    return {CategoricalDistribution::PointMass(k, base_.Predict(x)), 0.0, 0};
  }
  if (!SupportsExact())
  {
    throw CapabilityError("no closed form for this classifier configuration");
  }
  GaussianNoiseSpec const &noise = *noise_;

  if (auto const *lin = std::get_if<LinearModel>(&base_.variant()))
  {
    // Label 1 iff v.(x + z) + c > 0 with v = w1 - w0, c = b1 - b0.
    std::vector<double> v(lin->dim());
    double              margin = lin->bias(1) - lin->bias(0);
    for (std::size_t j = 0; j < v.size(); ++j)
    {
      auto const jj = static_cast<Eigen::Index>(j);
      v[j]          = lin->weights(1, jj) - lin->weights(0, jj);
      margin += v[j] * x[j];
    }
    double const var = noise.ProjectedVariance(v);
    if (var == 0.0)
    {
      return {CategoricalDistribution::PointMass(k, margin > 0.0 ? 1 : 0), 0.0, 0};
    }
    double const p1 = StdNormalCdf(margin / std::sqrt(var));
    return {CategoricalDistribution({1.0 - p1, p1}), 0.0, 0};
  }

  auto const         &grid = std::get<GridTable>(base_.variant());
  std::vector<double> mass(k, 0.0);
  double const        sd0 = noise.is_isotropic() ? noise.sigma() : std::sqrt(noise.covariance()(0, 0));

  if (grid.dim() == 1)
  {
    for (std::size_t i = 0; i < grid.shape[0]; ++i)
    {
      mass[grid.labels[i]] += IntervalMass(grid.CellLower(0, i), grid.CellUpper(0, i), x[0], sd0);
    }
    return {CategoricalDistribution(std::move(mass)), 0.0, 0};
  }

  double const sd1  = noise.is_isotropic() ? noise.sigma() : std::sqrt(noise.covariance()(1, 1));
  double const cov  = noise.is_isotropic() ? 0.0 : noise.covariance()(0, 1);
  double const corr = cov / (sd0 * sd1);

  if (corr == 0.0)
  {
    std::vector<double> col(grid.shape[0]);
    std::vector<double> row(grid.shape[1]);
    for (std::size_t i = 0; i < col.size(); ++i)
    {
      col[i] = IntervalMass(grid.CellLower(0, i), grid.CellUpper(0, i), x[0], sd0);
    }
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      row[j] = IntervalMass(grid.CellLower(1, j), grid.CellUpper(1, j), x[1], sd1);
    }
    for (std::size_t i = 0; i < col.size(); ++i)
    {
      for (std::size_t j = 0; j < row.size(); ++j)
      {
        mass[grid.labels[i * row.size() + j]] += col[i] * row[j];
      }
    }
    return {CategoricalDistribution(std::move(mass)), 0.0, 0};
  }

  // Correlated 2-D noise: integrate the first coordinate numerically and use the
  // conditional normal of the second one in closed form.
  double const cond_sd = sd1 * std::sqrt(1.0 - corr * corr);
  using Quadrature     = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (std::size_t i = 0; i < grid.shape[0]; ++i)
  {
    double const lo = std::max(-kTailCut, (grid.CellLower(0, i) - x[0]) / sd0);
    double const hi = std::min(kTailCut, (grid.CellUpper(0, i) - x[0]) / sd0);
    if (!(hi > lo))
    {
      continue;
    }
    for (std::size_t j = 0; j < grid.shape[1]; ++j)
    {
      double const lower1 = grid.CellLower(1, j);
      double const upper1 = grid.CellUpper(1, j);
      auto         density = [&](double u) {
        double const cond_mean = x[1] + corr * sd1 * u;
        double const pdf       = std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
        return pdf * IntervalMass(lower1, upper1, cond_mean, cond_sd);
      };
      double const cell = Quadrature::integrate(density, lo, hi, 12, 1e-12);
      mass[grid.labels[i * grid.shape[1] + j]] += std::max(0.0, cell);
    }
  }
  return {CategoricalDistribution(std::move(mass)), 0.0, 0};
}

DistributionEstimate PredictDistribution(RandomizedClassifier const &clf,
                                         std::span<double const> x, std::uint64_t stream)
{
  if (auto const *grid = std::get_if<GridTable>(&clf.base().variant());
      grid && x.size() == grid->dim() && !grid->Contains(x))
  {
    throw ValidationError("input lies outside the grid table's box");
  }
  if (std::holds_alternative<ExactEvaluation>(clf.mode()) || !clf.noise())
  {
    return clf.Exact(x);
  }
  auto const draws = clf.DrawsFor(stream);
  return clf.EstimateWithDraws(x, *draws);
}

Label ModeClassifier(CategoricalDistribution const &dist)
{
  return ArgmaxSmallestIndex(dist.probs());
}

Label ModeClassifier(DistributionEstimate const &est)
{
  return ModeClassifier(est.dist);
}

Label SamplePrediction(RandomizedClassifier const &clf, std::span<double const> x,
                       std::uint64_t seed)
{
  if (x.size() != clf.dim())
  {
    throw DimensionError("input dimension does not match the classifier");
  }
  if (!clf.noise())
  {
    return clf.base().Predict(x);
  }
  NoiseDraws const    draw(*clf.noise(), x.size(), 1, seed, 0);
  std::vector<double> shifted(x.begin(), x.end());
  auto const          z = draw.row(0);
  for (std::size_t j = 0; j < shifted.size(); ++j)
  {
    shifted[j] += z[j];
  }
  return clf.base().Predict(shifted);
}

double Expected01Loss(CategoricalDistribution const &dist, Label y)
{
  if (y >= dist.size())
  {
    throw ValidationError("label out of range");
  }
  return std::clamp(1.0 - dist[y], 0.0, 1.0);
}

double Expected01Loss(DistributionEstimate const &est, Label y)
{
  return Expected01Loss(est.dist, y);
}

}  // namespace randcert
