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

#include "randcert/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/QR>
#include <fmt/format.h>

#include "randcert/errors.hpp"
#include "randcert/parallel.hpp"
#include "randcert/random.hpp"

namespace randcert {

namespace {

constexpr std::uint64_t kRestartSalt = 0xD1B54A32D192ED03ULL;

RiskEstimate MeanWithStandardError(std::vector<double> const &values)
{
  auto const n    = static_cast<double>(values.size());
  double     sum  = 0.0;
  for (double v : values)
  {
    sum += v;
  }
  double const mean = sum / n;
  if (values.size() < 2)
  {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (double v : values)
  {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

bool IsSupportedAttackNorm(NormOrder norm)
{
  return norm.value() == 1.0 || norm.value() == 2.0 || norm.is_infinite();
}

// Expected 0/1 loss at a candidate input, sharing one set of noise draws
// across all candidates of an attack.
class LossOracle
{
public:
  LossOracle(RandomizedClassifier const &clf, Label y, AttackBudget const &budget,
             std::uint64_t stream)
    : clf_{clf}
    , y_{y}
  {
    auto const *mc = std::get_if<MonteCarloEvaluation>(&clf.mode());
    if (mc && clf.noise())
    {
      draws_.emplace(*clf.noise(), clf.dim(), budget.mc_samples_per_query, mc->seed, stream);
    }
  }

  double operator()(std::span<double const> x) const
  {
    auto const est = draws_ ? clf_.EstimateWithDraws(x, *draws_) : clf_.Exact(x);
    return Expected01Loss(est, y_);
  }

private:
  RandomizedClassifier const &clf_;
  Label                       y_;
  std::optional<NoiseDraws>   draws_;
};

// Pulls tau back into the l_p ball of radius alpha, then keeps x + tau in [-1, 1]^d.
void Project(std::vector<double> &tau, std::span<double const> x, double alpha, NormOrder norm)
{
  if (norm.is_infinite())
  {
    for (double &t : tau)
    {
      t = std::clamp(t, -alpha, alpha);
    }
  }
  else
  {
    double const len = LpNorm(tau, norm);
    if (len > alpha)
    {
      double const scale = alpha / len;
      for (double &t : tau)
      {
        t *= scale;
      }
    }
  }
  for (std::size_t j = 0; j < tau.size(); ++j)
  {
    tau[j] = std::clamp(x[j] + tau[j], -1.0, 1.0) - x[j];
  }
}

std::vector<double> SampleBall(CounterRng const &rng, std::size_t dim, double alpha,
                               NormOrder norm)
{
  std::vector<double> tau(dim, 0.0);
  if (norm.is_infinite())
  {
    for (std::size_t j = 0; j < dim; ++j)
    {
      tau[j] = alpha * (2.0 * rng.Uniform(j) - 1.0);
    }
    return tau;
  }
  if (norm.value() == 1.0)
  {
    // Normalised exponential spacings with one slack coordinate give a uniform
    // point of the simplex interior; random signs fill the cross-polytope.
    double total = 0.0;
    for (std::size_t j = 0; j <= dim; ++j)
    {
      double const e = -std::log(rng.Uniform(j));
      total += e;
      if (j < dim)
      {
        tau[j] = e;
      }
    }
    for (std::size_t j = 0; j < dim; ++j)
    {
      double const sign = rng.Uniform(dim + 1 + j) < 0.5 ? -1.0 : 1.0;
      tau[j]            = sign * alpha * tau[j] / total;
    }
    return tau;
  }
  rng.StandardNormals(0, tau);
  double const len = LpNorm(tau, NormOrder::L2());
  if (len == 0.0)
  {
    return std::vector<double>(dim, 0.0);
  }
  double const radius = alpha * std::pow(rng.Uniform(1u << 20), 1.0 / static_cast<double>(dim));
  for (double &t : tau)
  {
    t *= radius / len;
  }
  return tau;
}

std::vector<double> Shifted(std::span<double const> x, std::vector<double> const &tau)
{
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j)
  {
    out[j] += tau[j];
  }
  return out;
}

std::string FormatNumber(double v)
{
  return fmt::format("{:.10f}", v);
}

}  // namespace

LabeledDataset::LabeledDataset(std::vector<std::vector<double>> points, std::vector<Label> labels,
                               std::size_t num_classes, std::string provenance)
  : points_(std::move(points))
  , labels_(std::move(labels))
  , num_classes_{num_classes}
  , provenance_(std::move(provenance))
{
  if (points_.empty())
  {
    throw ValidationError("a dataset needs at least one point");
  }
  if (points_.size() != labels_.size())
  {
    throw DimensionError("dataset has a different number of points and labels");
  }
  if (num_classes_ < 2)
  {
    throw ValidationError("a dataset needs at least two classes");
  }
  std::size_t const d = points_.front().size();
  if (d == 0)
  {
    throw ValidationError("points must have at least one coordinate");
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
  {
    if (points_[i].size() != d)
    {
      throw DimensionError("all points must have the same dimension");
    }
    for (double v : points_[i])
    {
      if (!(v >= -1.0 && v <= 1.0))
      {
        throw ValidationError("point coordinates must lie in [-1, 1]");
      }
    }
    if (labels_[i] >= num_classes_)
    {
      throw ValidationError("label out of range");
    }
  }
}

LabeledDataset GenerateMixtureDataset(std::size_t n, std::size_t dim,
                                      std::vector<std::vector<double>> const &centers,
                                      double sigma_data, std::uint64_t seed)
{
  if (centers.size() < 2)
  {
    throw ValidationError("a mixture needs at least two centers");
  }
  if (n < centers.size())
  {
    throw ValidationError("need at least one point per center");
  }
  if (dim == 0)
  {
    throw ValidationError("dimension must be positive");
  }
  if (!(sigma_data >= 0.0) || !std::isfinite(sigma_data))
  {
    throw ValidationError("blob standard deviation must be finite and >= 0");
  }
  for (std::size_t c = 0; c < centers.size(); ++c)
  {
    if (centers[c].size() != dim)
    {
      throw DimensionError("center dimension does not match");
    }
    for (std::size_t o = 0; o < c; ++o)
    {
      if (centers[o] == centers[c])
      {
        throw ValidationError("mixture centers must be distinct");
      }
    }
  }

  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  std::vector<Label>               labels(n);
  std::vector<double>              normals(dim);
  for (std::size_t i = 0; i < n; ++i)
  {
    Label const label = i % centers.size();
    CounterRng(seed, i).StandardNormals(0, normals);
    for (std::size_t j = 0; j < dim; ++j)
    {
      points[i][j] = std::clamp(centers[label][j] + sigma_data * normals[j], -1.0, 1.0);
    }
    labels[i] = label;
  }
  std::string provenance = fmt::format("mixture(n={}, d={}, centers={}, sigma_data={}, seed={})",
                                       n, dim, centers.size(), sigma_data, seed);
  return LabeledDataset(std::move(points), std::move(labels), centers.size(),
                        std::move(provenance));
}

LabeledDataset BenchmarkDataset(std::uint64_t seed, std::size_t n)
{
  double const c = BenchmarkConfig::kCenter;
  return GenerateMixtureDataset(n, 2, {{-c, 0.0}, {c, 0.0}}, BenchmarkConfig::kSigmaData, seed);
}

LinearModel FitLeastSquaresLinear(LabeledDataset const &data)
{
  if (data.num_classes() != 2)
  {
    throw CapabilityError("least-squares fitting is implemented for two classes");
  }
  auto const      n = static_cast<Eigen::Index>(data.size());
  auto const      d = static_cast<Eigen::Index>(data.dim());
  Eigen::MatrixXd design(n, d + 1);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    auto const p = data.point(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < d; ++j)
    {
      design(i, j) = p[static_cast<std::size_t>(j)];
    }
    design(i, d) = 1.0;
    target(i)    = data.label(static_cast<std::size_t>(i)) == 1 ? 1.0 : -1.0;
  }
  Eigen::VectorXd const coef = design.colPivHouseholderQr().solve(target);
  std::vector<double>   w(coef.data(), coef.data() + d);
  return LinearModel::Binary(w, coef(d));
}

RiskEstimate EmpiricalRisk(RandomizedClassifier const &clf, LabeledDataset const &data)
{
  std::vector<double> losses(data.size());
  ParallelFor(data.size(), [&](std::size_t i) {
    losses[i] = Expected01Loss(PredictDistribution(clf, data.point(i), i), data.label(i));
  });
  return MeanWithStandardError(losses);
}

void AttackBudget::Validate() const
{
  if (random_restarts == 0)
  {
    throw ValidationError("attack needs at least one random restart");
  }
  if (mc_samples_per_query == 0)
  {
    throw ValidationError("attack needs at least one Monte-Carlo sample per query");
  }
}

AttackResult AttackPoint(RandomizedClassifier const &clf, std::span<double const> x, Label y,
                         double alpha, NormOrder norm, AttackBudget const &budget,
                         std::uint64_t stream)
{
  budget.Validate();
  if (!IsSupportedAttackNorm(norm))
  {
    throw CapabilityError("attacks support the l1, l2 and l_inf norms only");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
  {
    throw DomainError("attack radius must be finite and >= 0");
  }
  if (x.size() != clf.dim())
  {
    throw DimensionError("input dimension does not match the classifier");
  }
  if (y >= clf.num_classes())
  {
    throw ValidationError("label out of range");
  }
  for (double v : x)
  {
    if (!(v >= -1.0 && v <= 1.0))
    {
      throw ValidationError("attacked point must lie in [-1, 1]^d");
    }
  }

  LossOracle const    loss_at(clf, y, budget, stream);
  std::size_t const   d          = x.size();
  double const        clean_loss = loss_at(x);
  std::vector<double> best_tau(d, 0.0);
  double              best_loss = clean_loss;
  if (alpha == 0.0 || best_loss >= 1.0)
  {
    return {Perturbation(best_tau), best_loss, clean_loss};
  }

  for (std::size_t r = 0; r < budget.random_restarts; ++r)
  {
    CounterRng const    rng(SplitMix64(budget.seed ^ (kRestartSalt * (r + 1))), stream);
    std::vector<double> tau = SampleBall(rng, d, alpha, norm);
    Project(tau, x, alpha, norm);
    double loss = loss_at(Shifted(x, tau));
    double step = 0.5 * alpha;

    for (std::size_t s = 0; s < budget.refinement_steps && loss < 1.0; ++s)
    {
      std::vector<std::vector<double>> candidates;
      for (std::size_t j = 0; j < d; ++j)
      {
        for (double sign : {1.0, -1.0})
        {
          auto moved = tau;
          moved[j] += sign * step;
          candidates.push_back(std::move(moved));
        }
      }
      if (double const len = LpNorm(tau, norm); len > 0.0)
      {
        auto pushed = tau;
        for (double &t : pushed)
        {
          t *= alpha / len;
        }
        candidates.push_back(std::move(pushed));
      }

      double              round_best = loss;
      std::vector<double> round_tau;
      for (auto &cand : candidates)
      {
        Project(cand, x, alpha, norm);
        double const l = loss_at(Shifted(x, cand));
        if (l > round_best)
        {
          round_best = l;
          round_tau  = cand;
        }
      }
      if (!round_tau.empty())
      {
        tau  = std::move(round_tau);
        loss = round_best;
      }
      else
      {
        step *= 0.5;
      }
    }

    if (loss > best_loss)
    {
      best_loss = loss;
      best_tau  = tau;
    }
    if (best_loss >= 1.0)
    {
      break;
    }
  }
  return {Perturbation(std::move(best_tau)), best_loss, clean_loss};
}

RiskEstimate EmpiricalAdversarialRisk(RandomizedClassifier const &clf, LabeledDataset const &data,
                                      double alpha, NormOrder norm, AttackBudget const &budget)
{
  std::vector<double> losses(data.size());
  ParallelFor(data.size(), [&](std::size_t i) {
    losses[i] = AttackPoint(clf, data.point(i), data.label(i), alpha, norm, budget, i).attacked_loss;
  });
  return MeanWithStandardError(losses);
}

std::vector<CurveRow> GuaranteedAccuracyCurve(DeterministicClassifier const &base,
                                              LabeledDataset const &data, CurveConfig const &cfg)
{
  if (cfg.alpha_grid.empty())
  {
    throw ValidationError("the radius grid is empty");
  }
  for (std::size_t i = 0; i < cfg.alpha_grid.size(); ++i)
  {
    double const a = cfg.alpha_grid[i];
    if (!(a >= 0.0) || !std::isfinite(a) || (i > 0 && a < cfg.alpha_grid[i - 1]))
    {
      throw ValidationError("the radius grid must be finite, non-negative and sorted ascending");
    }
  }
  if (cfg.samples == 0)
  {
    throw ValidationError("curve evaluation needs at least one sample per point");
  }

  RandomizedClassifier const clf(base, GaussianNoiseSpec::Isotropic(cfg.sigma),
                                 MonteCarloEvaluation{cfg.samples, cfg.seed});
  std::vector<double>        losses(data.size());
  std::vector<double>        entropy_terms(data.size());
  ParallelFor(data.size(), [&](std::size_t i) {
    auto const est   = PredictDistribution(clf, data.point(i), i);
    losses[i]        = Expected01Loss(est, data.label(i));
    entropy_terms[i] = std::exp(-ShannonEntropy(est.dist));
  });
  double const clean_risk      = MeanWithStandardError(losses).value;
  double const exp_neg_entropy = MeanWithStandardError(entropy_terms).value;

  std::optional<AttackBudget> budget = cfg.attack;
  if (budget)
  {
    budget->mc_samples_per_query = cfg.samples;
  }

  std::vector<CurveRow> rows;
  rows.reserve(cfg.alpha_grid.size());
  for (double alpha : cfg.alpha_grid)
  {
    auto const   certs  = CertifyGaussianPreprocessing(cfg.sigma, alpha, cfg.beta);
    auto const   report = BuildRiskGapReport(clean_risk, certs.total_variation, certs.renyi,
                                             exp_neg_entropy);
    CurveRow row{alpha,
                 certs.total_variation.epsilon,
                 certs.renyi.epsilon,
                 1.0 - clean_risk,
                 std::max(0.0, 1.0 - report.best_adv_risk_bound),
                 std::nullopt};
    if (budget)
    {
      row.attacked_acc =
          1.0 - EmpiricalAdversarialRisk(clf, data, alpha, NormOrder::L2(), *budget).value;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string CurveToCsv(std::span<CurveRow const> rows)
{
  std::string out = "alpha2,eps_tv,eps_renyi,clean_acc,guaranteed_acc,attacked_acc\n";
  for (auto const &r : rows)
  {
    out += fmt::format("{},{},{},{},{},{}\n", FormatNumber(r.alpha2), FormatNumber(r.eps_tv),
                       FormatNumber(r.eps_renyi), FormatNumber(r.clean_acc),
                       FormatNumber(r.guaranteed_acc),
                       r.attacked_acc ? FormatNumber(*r.attacked_acc) : std::string{});
  }
  return out;
}

std::vector<SweepRow> NoiseAccuracySweep(DeterministicClassifier const &base,
                                         LabeledDataset const &data,
                                         std::span<double const> sigma_grid, std::size_t samples,
                                         std::uint64_t seed)
{
  if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()))
  {
    throw ValidationError("the sigma grid must be sorted ascending");
  }
  if (samples == 0)
  {
    throw ValidationError("sweep needs at least one sample per point");
  }
  std::vector<SweepRow> rows;
  for (double sigma : sigma_grid)
  {
    if (!(sigma >= 0.0))
    {
      throw ValidationError("noise levels must be >= 0");
    }
    std::optional<GaussianNoiseSpec> noise;
    if (sigma > 0.0)
    {
      noise = GaussianNoiseSpec::Isotropic(sigma);
    }
    RandomizedClassifier const clf(base, noise, MonteCarloEvaluation{samples, seed});
    auto const                 risk = EmpiricalRisk(clf, data);
    rows.push_back({sigma, 1.0 - risk.value, risk.standard_error});
  }
  return rows;
}

std::string SweepToCsv(std::span<SweepRow const> rows)
{
  std::string out = "sigma,clean_acc\n";
  for (auto const &r : rows)
  {
    out += fmt::format("{},{}\n", FormatNumber(r.sigma), FormatNumber(r.clean_acc));
  }
  return out;
}

std::vector<std::vector<double>> ReadPointsCsv(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ValidationError("cannot open " + path);
  }
  std::vector<std::vector<double>> rows;
  std::string                      line;
  std::size_t                      line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    std::vector<double> row;
    std::stringstream   fields(line);
    std::string         field;
    while (std::getline(fields, field, ','))
    {
      std::size_t used = 0;
      double      v    = 0.0;
      try
      {
        v = std::stod(field, &used);
      }
      catch (std::exception const &)
      {
        used = 0;
      }
      if (used == 0 || field.find_first_not_of(" \t\r", used) != std::string::npos ||
          !std::isfinite(v))
      {
        throw ValidationError(fmt::format("{}:{}: cannot parse '{}' as a number", path, line_no,
                                          field));
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
    {
      throw ValidationError(fmt::format("{}:{}: inconsistent column count", path, line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
  {
    throw ValidationError(path + " contains no points");
  }
  return rows;
}

LabeledDataset ReadDatasetCsv(std::string const &path, std::size_t num_classes)
{
  auto rows = ReadPointsCsv(path);
  if (rows.front().size() < 2)
  {
    throw ValidationError(path + " needs at least one coordinate and a label column");
  }
  std::vector<Label> labels;
  for (auto &row : rows)
  {
    double const raw = row.back();
    if (raw < 0.0 || raw != std::floor(raw))
    {
      throw ValidationError(path + ": labels must be non-negative integers");
    }
    labels.push_back(static_cast<Label>(raw));
    row.pop_back();
  }
  return LabeledDataset(std::move(rows), std::move(labels), num_classes, "file:" + path);
}

}  // namespace randcert
