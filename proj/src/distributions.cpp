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

#include "randcert/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "randcert/errors.hpp"

namespace randcert {

namespace {

void CheckSameSize(CategoricalDistribution const &p, CategoricalDistribution const &q)
{
  if (p.size() != q.size())
  {
    std::ostringstream msg;
    msg << "distributions have different support sizes (" << p.size() << " vs " << q.size()
        << ")";
    throw DimensionError(msg.str());
  }
}

void CheckRenyiOrder(double beta)
{
  if (!(beta >= 1.0))
  {
    throw DomainError("Renyi order must be >= 1");
  }
}

}  // namespace

CategoricalDistribution::CategoricalDistribution(std::vector<double> probs)
  : probs_(std::move(probs))
{
  if (probs_.size() < 2)
  {
    throw ValidationError("a categorical distribution needs at least two labels");
  }
  double total = 0.0;
  for (double v : probs_)
  {
    if (!std::isfinite(v) || v < 0.0)
    {
      throw ValidationError("probabilities must be finite and non-negative");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kRenormalizeTolerance)
  {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
  for (double &v : probs_)
  {
    v /= total;
  }
}

CategoricalDistribution CategoricalDistribution::Uniform(std::size_t num_classes)
{
  return CategoricalDistribution(
      std::vector<double>(num_classes, 1.0 / static_cast<double>(num_classes)));
}

CategoricalDistribution CategoricalDistribution::PointMass(std::size_t num_classes,
                                                           std::size_t label)
{
  if (label >= num_classes)
  {
    throw ValidationError("point-mass label out of range");
  }
  std::vector<double> probs(num_classes, 0.0);
  probs[label] = 1.0;
  return CategoricalDistribution(std::move(probs));
}

double CategoricalDistribution::top() const
{
  return *std::max_element(probs_.begin(), probs_.end());
}

double CategoricalDistribution::runner_up() const
{
  std::vector<double> sorted(probs_);
  std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end(), std::greater<>{});
  return sorted[1];
}

double Diameter(GroundDistance ground, std::size_t num_classes)
{
  if (num_classes < 2)
  {
    return 0.0;
  }
  return ground == GroundDistance::kTrivial ? 1.0 : static_cast<double>(num_classes - 1);
}

DivergenceKind DivergenceKind::TotalVariation()
{
  return {Tag::kTotalVariation, 0.0, GroundDistance::kTrivial};
}

DivergenceKind DivergenceKind::Renyi(double beta)
{
  CheckRenyiOrder(beta);
  return {Tag::kRenyi, beta, GroundDistance::kTrivial};
}

DivergenceKind DivergenceKind::Hellinger()
{
  return {Tag::kHellinger, 0.0, GroundDistance::kTrivial};
}

DivergenceKind DivergenceKind::Separation()
{
  return {Tag::kSeparation, 0.0, GroundDistance::kTrivial};
}

DivergenceKind DivergenceKind::Wasserstein(GroundDistance ground)
{
  return {Tag::kWasserstein, 0.0, ground};
}

std::string DivergenceKind::name() const
{
  switch (tag_)
  {
  case Tag::kTotalVariation:
    return "tv";
  case Tag::kRenyi:
  {
    if (std::isinf(beta_))
    {
      return "renyi(inf)";
    }
    std::ostringstream out;
    out << "renyi(" << beta_ << ")";
    return out.str();
  }
  case Tag::kHellinger:
    return "hellinger";
  case Tag::kSeparation:
    return "separation";
  case Tag::kWasserstein:
    return ground_ == GroundDistance::kTrivial ? "wasserstein(trivial)" : "wasserstein(line)";
  }
  return "unknown";
}

double TotalVariationDistance(CategoricalDistribution const &p, CategoricalDistribution const &q)
{
  CheckSameSize(p, q);
  double l1 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
  {
    l1 += std::abs(p[k] - q[k]);
  }
  return std::min(1.0, 0.5 * l1);
}

double KullbackLeiblerDivergence(CategoricalDistribution const &p, CategoricalDistribution const &q)
{
  CheckSameSize(p, q);
  double kl = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
  {
    if (p[k] == 0.0)
    {
      continue;
    }
    if (q[k] == 0.0)
    {
      return kInfinity;
    }
    kl += p[k] * std::log(p[k] / q[k]);
  }
  return std::max(0.0, kl);
}

double RenyiDivergence(CategoricalDistribution const &p, CategoricalDistribution const &q,
                       double beta)
{
  CheckRenyiOrder(beta);
  CheckSameSize(p, q);
  if (beta == 1.0)
  {
    return KullbackLeiblerDivergence(p, q);
  }
  if (std::isinf(beta))
  {
    double worst = -kInfinity;
    for (std::size_t k = 0; k < p.size(); ++k)
    {
      if (p[k] == 0.0)
      {
        continue;
      }
      if (q[k] == 0.0)
      {
        return kInfinity;
      }
      worst = std::max(worst, std::log(p[k] / q[k]));
    }
    return std::max(0.0, worst);
  }

  // log sum_y q^(1-beta) p^beta, accumulated in log space so that large orders
  // do not overflow.
  std::vector<double> log_terms;
  log_terms.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k)
  {
    if (p[k] == 0.0)
    {
      continue;
    }
    if (q[k] == 0.0)
    {
      return kInfinity;
    }
    log_terms.push_back(beta * std::log(p[k]) + (1.0 - beta) * std::log(q[k]));
  }
  double const peak = *std::max_element(log_terms.begin(), log_terms.end());
  double       acc  = 0.0;
  for (double t : log_terms)
  {
    acc += std::exp(t - peak);
  }
  double const value = (peak + std::log(acc)) / (beta - 1.0);
  return std::max(0.0, value);
}

double HellingerDistance(CategoricalDistribution const &p, CategoricalDistribution const &q)
{
  CheckSameSize(p, q);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k)
  {
    double const d = std::sqrt(p[k]) - std::sqrt(q[k]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double SeparationDistance(CategoricalDistribution const &p, CategoricalDistribution const &q)
{
  CheckSameSize(p, q);
  double sup = -kInfinity;
  for (std::size_t k = 0; k < p.size(); ++k)
  {
    if (q[k] == 0.0)
    {
      if (p[k] == 0.0)
      {
        sup = std::max(sup, 0.0);
      }
      continue;
    }
    sup = std::max(sup, 1.0 - p[k] / q[k]);
  }
  return sup;
}

double WassersteinDistance(CategoricalDistribution const &p, CategoricalDistribution const &q,
                           GroundDistance ground)
{
  CheckSameSize(p, q);
  if (ground == GroundDistance::kTrivial)
  {
    return TotalVariationDistance(p, q);
  }
  // 1-D transport with unit spacing: integral of |F_p - F_q|.
  double cdf_p = 0.0;
  double cdf_q = 0.0;
  double cost  = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
  {
    cdf_p += p[k];
    cdf_q += q[k];
    cost += std::abs(cdf_p - cdf_q);
  }
  return cost;
}

double Divergence(DivergenceKind const &kind, CategoricalDistribution const &p,
                  CategoricalDistribution const &q)
{
  switch (kind.tag())
  {
  case DivergenceKind::Tag::kTotalVariation:
    return TotalVariationDistance(p, q);
  case DivergenceKind::Tag::kRenyi:
    return RenyiDivergence(p, q, kind.beta());
  case DivergenceKind::Tag::kHellinger:
    return HellingerDistance(p, q);
  case DivergenceKind::Tag::kSeparation:
    return SeparationDistance(p, q);
  case DivergenceKind::Tag::kWasserstein:
    return WassersteinDistance(p, q, kind.ground());
  }
  throw DomainError("unknown divergence kind");
}

double ProbabilityPreservationBound(double event_prob, double epsilon, double beta)
{
  if (!(beta > 1.0))
  {
    throw DomainError("probability preservation needs a Renyi order > 1");
  }
  // Event probabilities are usually sums of masses, so allow the rounding slack
  // that CategoricalDistribution itself tolerates.
  if (!(event_prob >= -1e-9 && event_prob <= 1.0 + 1e-9))
  {
    throw DomainError("event probability must lie in [0, 1]");
  }
  if (!(epsilon >= 0.0))
  {
    throw DomainError("divergence bound must be >= 0");
  }
  event_prob = std::clamp(event_prob, 0.0, 1.0);
  if (event_prob == 0.0)
  {
    return 0.0;
  }
  double const exponent = std::isinf(beta) ? 1.0 : (beta - 1.0) / beta;
  return std::exp(exponent * (epsilon + std::log(event_prob)));
}

double TotalVariationBoundFromRenyi(double epsilon)
{
  if (!(epsilon >= 0.0))
  {
    throw DomainError("Renyi divergence bound must be >= 0");
  }
  if (std::isinf(epsilon))
  {
    return 1.0;
  }
  double const pinsker_branch = 1.5 * std::sqrt(std::sqrt(1.0 + 4.0 * epsilon / 9.0) - 1.0);
  // (e^(eps+1) - 1) / (e^(eps+1) + 1) written as tanh to stay finite for large eps.
  double const vajda_branch = std::tanh(0.5 * (epsilon + 1.0));
  return std::min(pinsker_branch, vajda_branch);
}

double ShannonEntropy(CategoricalDistribution const &p)
{
  double h = 0.0;
  for (double v : p.probs())
  {
    if (v > 0.0)
    {
      h -= v * std::log(v);
    }
  }
  return std::max(0.0, h);
}

}  // namespace randcert
