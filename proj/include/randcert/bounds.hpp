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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randcert/classifiers.hpp"
#include "randcert/distributions.hpp"
#include "randcert/smoothing.hpp"

namespace randcert {

class LabeledDataset;

// Upper bound on the adversarial risk of a TV-robust classifier: min(1, R + eps).
double TvRiskGapBound(double clean_risk, double eps_tv);

// Multiplicative bound for Renyi-robust classifiers, beta > 1:
// min(1, (e^eps R)^((beta - 1) / beta)).
double RenyiMultiplicativeBound(double clean_risk, double eps, double beta);

// Additive gap R_adv - R <= 1 - e^{-eps} E[e^{-H(p(x))}], valid for any Renyi order >= 1.
double RenyiAdditiveGapBound(double eps, double exp_neg_entropy);

/**
 * Mean of e^{-H(p(x))} over the given points. Monte-Carlo classifiers are
 * evaluated with `samples` draws per point (stream = point index); exact
 * classifiers ignore `samples`.
 */
double EstimateExpNegEntropy(RandomizedClassifier const &clf,
                             std::span<std::vector<double> const> xs, std::size_t samples);

// True iff p_(1) >= p_(2) + 2 eps. Inclusive at equality.
bool ModePreservationTv(CategoricalDistribution const &dist, double eps_tv);
// Same check on an estimate: the observed margin is first reduced by 2 * confidence_radius.
bool ModePreservationTv(DistributionEstimate const &est, double eps_tv);

// True iff p_(1)^(beta / (beta - 1)) >= e^{(2 - 1/beta) eps} p_(2)^((beta - 1) / beta).
// beta = +inf uses the limiting exponents (1 and 1) and factor e^{2 eps}.
bool ModePreservationRenyi(CategoricalDistribution const &dist, double eps, double beta);
// Estimates are made pessimistic first: p_(1) - r and p_(2) + r, clamped to [0, 1].
bool ModePreservationRenyi(DistributionEstimate const &est, double eps, double beta);

/**
 * Fraction of the dataset whose mode prediction is correct but whose margin
 * does not pass ModePreservationTv. Upper-bounds the extra risk an adversary can
 * create on the mode classifier. Point i uses Monte-Carlo stream i.
 */
double LowConfidenceMassBound(RandomizedClassifier const &clf, LabeledDataset const &data,
                              double eps_tv);

struct RiskGapReport
{
  double                clean_risk;
  std::optional<double> tv_gap;              // eps_tv
  std::optional<double> renyi_mult_bound;    // only for beta > 1
  std::optional<double> renyi_add_gap;       // 1 - e^{-eps} E[e^{-H}]
  std::optional<double> exp_neg_entropy;
  double                best_adv_risk_bound;  // min of the bounds, clamped to [clean_risk, 1]
  double                radius;
  std::optional<double> renyi_beta;
  std::string           entropy_source;
};

/**
 * Combines the TV bound, the multiplicative Renyi bound (beta > 1) and the
 * additive Renyi bound (needs exp_neg_entropy) into one report. Certificates
 * must share a radius. Either certificate may be absent, but not both.
 */
RiskGapReport BuildRiskGapReport(double clean_risk,
                                 std::optional<RobustnessCertificate> const &cert_tv,
                                 std::optional<RobustnessCertificate> const &cert_renyi,
                                 std::optional<double>                       exp_neg_entropy);

}  // namespace randcert
