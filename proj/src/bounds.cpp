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

#include "randcert/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "randcert/errors.hpp"
#include "randcert/harness.hpp"
#include "randcert/parallel.hpp"

namespace randcert {

namespace {

void CheckProbability(double v, char const *what)
{
  if (!(v >= 0.0 && v <= 1.0))
  {
    throw DomainError(std::string(what) + " must lie in [0, 1]");
  }
}

void CheckNonNegative(double v, char const *what)
{
  if (!(v >= 0.0))
  {
    throw DomainError(std::string(what) + " must be >= 0");
  }
}

struct TopTwo
{
  double first;
  double second;
};

TopTwo Pessimistic(DistributionEstimate const &est)
{
  double const r = est.confidence_radius;
  return {std::max(0.0, est.dist.top() - r), std::min(1.0, est.dist.runner_up() + r)};
}

bool TvMargin(TopTwo t, double eps_tv)
{
  CheckProbability(eps_tv, "TV epsilon");
  return t.first >= t.second + 2.0 * eps_tv;
}

bool RenyiMargin(TopTwo t, double eps, double beta)
{
  if (!(beta > 1.0))
  {
    throw DomainError("mode preservation needs a Renyi order > 1");
  }
  CheckNonNegative(eps, "Renyi epsilon");
  if (std::isinf(eps))
  {
    return false;
  }
  if (std::isinf(beta))
  {
    return t.first >= std::exp(2.0 * eps) * t.second;
  }
  double const lhs = std::pow(t.first, beta / (beta - 1.0));
  double const rhs = std::exp((2.0 - 1.0 / beta) * eps) * std::pow(t.second, (beta - 1.0) / beta);
  return lhs >= rhs;
}

}  // namespace

double TvRiskGapBound(double clean_risk, double eps_tv)
{
  CheckProbability(clean_risk, "clean risk");
  CheckProbability(eps_tv, "TV epsilon");
  return std::min(1.0, clean_risk + eps_tv);
}

double RenyiMultiplicativeBound(double clean_risk, double eps, double beta)
{
  if (!(beta > 1.0))
  {
    throw DomainError("the multiplicative bound needs a Renyi order > 1");
  }
  CheckProbability(clean_risk, "clean risk");
  CheckNonNegative(eps, "Renyi epsilon");
  return std::min(1.0, ProbabilityPreservationBound(clean_risk, eps, beta));
}

double RenyiAdditiveGapBound(double eps, double exp_neg_entropy)
{
  CheckNonNegative(eps, "Renyi epsilon");
  CheckProbability(exp_neg_entropy, "entropy term");
  return 1.0 - std::exp(-eps) * exp_neg_entropy;
}

double EstimateExpNegEntropy(RandomizedClassifier const &clf,
                             std::span<std::vector<double> const> xs, std::size_t samples)
{
  if (xs.empty())
  {
    throw ValidationError("entropy term needs at least one point");
  }
  RandomizedClassifier evaluator = clf;
  if (auto const *mc = std::get_if<MonteCarloEvaluation>(&clf.mode()))
  {
    if (samples == 0)
    {
      throw ValidationError("entropy term needs at least one sample per point");
    }
    evaluator = clf.WithMode(MonteCarloEvaluation{samples, mc->seed});
  }
  std::vector<double> terms(xs.size());
  ParallelFor(xs.size(), [&](std::size_t i) {
    auto const est = PredictDistribution(evaluator, xs[i], i);
    terms[i]       = std::exp(-ShannonEntropy(est.dist));
  });
  double sum = 0.0;
  for (double t : terms)
  {
    sum += t;
  }
  return sum / static_cast<double>(terms.size());
}

bool ModePreservationTv(CategoricalDistribution const &dist, double eps_tv)
{
  return TvMargin({dist.top(), dist.runner_up()}, eps_tv);
}

bool ModePreservationTv(DistributionEstimate const &est, double eps_tv)
{
  double const margin = est.dist.top() - est.dist.runner_up() - 2.0 * est.confidence_radius;
  CheckProbability(eps_tv, "TV epsilon");
  return margin >= 2.0 * eps_tv;
}

bool ModePreservationRenyi(CategoricalDistribution const &dist, double eps, double beta)
{
  return RenyiMargin({dist.top(), dist.runner_up()}, eps, beta);
}

bool ModePreservationRenyi(DistributionEstimate const &est, double eps, double beta)
{
  return RenyiMargin(Pessimistic(est), eps, beta);
}

double LowConfidenceMassBound(RandomizedClassifier const &clf, LabeledDataset const &data,
                              double eps_tv)
{
  CheckProbability(eps_tv, "TV epsilon");
  std::vector<char> flagged(data.size(), 0);
  ParallelFor(data.size(), [&](std::size_t i) {
    auto const est     = PredictDistribution(clf, data.point(i), i);
    bool const correct = ModeClassifier(est) == data.label(i);
    flagged[i]         = correct && !ModePreservationTv(est, eps_tv);
  });
  auto const count = std::count(flagged.begin(), flagged.end(), 1);
  return static_cast<double>(count) / static_cast<double>(data.size());
}

RiskGapReport BuildRiskGapReport(double clean_risk,
                                 std::optional<RobustnessCertificate> const &cert_tv,
                                 std::optional<RobustnessCertificate> const &cert_renyi,
                                 std::optional<double>                       exp_neg_entropy)
{
  CheckProbability(clean_risk, "clean risk");
  if (!cert_tv && !cert_renyi)
  {
    throw ValidationError("a risk report needs at least one certificate");
  }
  if (cert_tv && cert_renyi && std::abs(cert_tv->radius - cert_renyi->radius) > 1e-12)
  {
    throw ValidationError("certificates were issued for different radii");
  }

  RiskGapReport report{};
  report.clean_risk = clean_risk;
  double best       = 1.0;

  if (cert_tv)
  {
    ValidateCertificate(*cert_tv);
    if (cert_tv->divergence.tag() != DivergenceKind::Tag::kTotalVariation)
    {
      throw ValidationError("the TV slot needs a total-variation certificate");
    }
    report.radius = cert_tv->radius;
    report.tv_gap = cert_tv->epsilon;
    best          = std::min(best, TvRiskGapBound(clean_risk, cert_tv->epsilon));
  }
  if (cert_renyi)
  {
    ValidateCertificate(*cert_renyi);
    if (cert_renyi->divergence.tag() != DivergenceKind::Tag::kRenyi)
    {
      throw ValidationError("the Renyi slot needs a Renyi certificate");
    }
    double const beta = cert_renyi->divergence.beta();
    report.radius     = cert_renyi->radius;
    report.renyi_beta = beta;
    if (beta > 1.0)
    {
      report.renyi_mult_bound = RenyiMultiplicativeBound(clean_risk, cert_renyi->epsilon, beta);
      best                    = std::min(best, *report.renyi_mult_bound);
    }
    if (exp_neg_entropy)
    {
      report.exp_neg_entropy = *exp_neg_entropy;
      report.renyi_add_gap   = RenyiAdditiveGapBound(cert_renyi->epsilon, *exp_neg_entropy);
      best                   = std::min(best, clean_risk + *report.renyi_add_gap);
      report.entropy_source  = "empirical sample mean of exp(-H(p(x))) in place of the data marginal";
    }
  }
  report.best_adv_risk_bound = std::clamp(best, clean_risk, 1.0);
  return report;
}

}  // namespace randcert
