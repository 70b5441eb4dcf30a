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
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace randcert {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/**
 * Probability vector over K >= 2 labels.
 *
 * Construction checks that every entry is finite and non-negative and that
 * the entries sum to one. Sums within 1e-6 of one are renormalised so that
 * Monte-Carlo frequencies and rounded literals are accepted; anything further
 * off is rejected with a ValidationError.
 */
class CategoricalDistribution
{
public:
  static constexpr double kRenormalizeTolerance = 1e-6;

  explicit CategoricalDistribution(std::vector<double> probs);

  static CategoricalDistribution Uniform(std::size_t num_classes);
  static CategoricalDistribution PointMass(std::size_t num_classes, std::size_t label);

  std::size_t size() const noexcept
  {
    return probs_.size();
  }

  double operator[](std::size_t k) const
  {
    return probs_[k];
  }

  std::span<double const> probs() const noexcept
  {
    return probs_;
  }

  // Largest and second largest probabilities, p_(1) >= p_(2).
  double top() const;
  double runner_up() const;

private:
  std::vector<double> probs_;
};

enum class GroundDistance
{
  kTrivial,      // d(y, y') = 1{y != y'}
  kOrderedLine,  // d(y, y') = |y - y'|, labels placed at 0, 1, ..., K-1
};

// Diameter of the label set {0, ..., K-1} under a ground distance.
double Diameter(GroundDistance ground, std::size_t num_classes);

/**
 * Which metric or divergence a certificate is stated in.
 * Renyi orders live in [1, +inf]; order 1 is KL and +inf is the max-divergence.
 */
class DivergenceKind
{
public:
  enum class Tag
  {
    kTotalVariation,
    kRenyi,
    kHellinger,
    kSeparation,
    kWasserstein,
  };

  static DivergenceKind TotalVariation();
  static DivergenceKind Renyi(double beta);
  static DivergenceKind Hellinger();
  static DivergenceKind Separation();
  static DivergenceKind Wasserstein(GroundDistance ground);

  Tag tag() const noexcept
  {
    return tag_;
  }
  // Only meaningful for kRenyi.
  double beta() const noexcept
  {
    return beta_;
  }
  // Only meaningful for kWasserstein.
  GroundDistance ground() const noexcept
  {
    return ground_;
  }

  std::string name() const;

  friend bool operator==(DivergenceKind const &, DivergenceKind const &) = default;

private:
  DivergenceKind(Tag tag, double beta, GroundDistance ground)
    : tag_{tag}
    , beta_{beta}
    , ground_{ground}
  {}

  Tag            tag_;
  double         beta_;
  GroundDistance ground_;
};

double TotalVariationDistance(CategoricalDistribution const &p, CategoricalDistribution const &q);

/**
 * Renyi divergence D_beta(p || q) in nats.
 *
 * beta = 1 is evaluated as KL and beta = +inf as max_y log(p(y) / q(y)); both are
 * dedicated formulas rather than limits. Labels with p(y) = 0 contribute nothing;
 * p(y) > 0 = q(y) makes the divergence +inf. Throws DomainError for beta < 1.
 */
double RenyiDivergence(CategoricalDistribution const &p, CategoricalDistribution const &q,
                       double beta);

double KullbackLeiblerDivergence(CategoricalDistribution const &p, CategoricalDistribution const &q);

double HellingerDistance(CategoricalDistribution const &p, CategoricalDistribution const &q);

// sup_y (1 - p(y) / q(y)). Labels with q(y) = 0 are skipped when p(y) > 0 and
// contribute 0 when p(y) = 0. The raw supremum is returned, without clamping at 0.
double SeparationDistance(CategoricalDistribution const &p, CategoricalDistribution const &q);

double WassersteinDistance(CategoricalDistribution const &p, CategoricalDistribution const &q,
                           GroundDistance ground);

// Dispatches on the divergence kind.
double Divergence(DivergenceKind const &kind, CategoricalDistribution const &p,
                  CategoricalDistribution const &q);

/**
 * Upper bound on p(Z) given q(Z) = event_prob and D_beta(p || q) <= epsilon:
 * (e^epsilon * event_prob)^((beta - 1) / beta). beta = +inf uses exponent 1.
 * The value is not clamped to 1.
 */
double ProbabilityPreservationBound(double event_prob, double epsilon, double beta);

// Largest total variation compatible with a Renyi divergence of epsilon (any order >= 1).
double TotalVariationBoundFromRenyi(double epsilon);

// Natural-log entropy, 0 log 0 = 0.
double ShannonEntropy(CategoricalDistribution const &p);

}  // namespace randcert
