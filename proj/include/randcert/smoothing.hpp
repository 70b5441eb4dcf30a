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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "randcert/distributions.hpp"

namespace randcert {

// Order p of the l_p norm bounding the adversary. Any p >= 1, including +inf.
class NormOrder
{
public:
  explicit NormOrder(double p);

  static NormOrder L1()
  {
    return NormOrder(1.0);
  }
  static NormOrder L2()
  {
    return NormOrder(2.0);
  }
  static NormOrder LInf()
  {
    return NormOrder(kInfinity);
  }
  // Accepts "1", "2", "inf" and any other decimal >= 1.
  static NormOrder Parse(std::string const &text);

  double value() const noexcept
  {
    return p_;
  }
  bool is_infinite() const noexcept;
  std::string name() const;

  friend bool operator==(NormOrder const &, NormOrder const &) = default;

private:
  double p_;
};

double LpNorm(std::span<double const> v, NormOrder order);

// Adversarial perturbation tau, in input units.
class Perturbation
{
public:
  Perturbation() = default;
  explicit Perturbation(std::vector<double> tau);

  static Perturbation Zero(std::size_t dim)
  {
    return Perturbation(std::vector<double>(dim, 0.0));
  }

  std::span<double const> values() const noexcept
  {
    return tau_;
  }
  std::size_t dim() const noexcept
  {
    return tau_.size();
  }
  double norm(NormOrder order) const
  {
    return LpNorm(tau_, order);
  }

private:
  std::vector<double> tau_;
};

/**
 * Covariance of additive Gaussian noise: either isotropic sigma^2 I (any
 * dimension) or a full symmetric positive-definite d x d matrix. The full
 * matrix is factorised once at construction; eigenvalues must exceed
 * 1e-12 times the largest one.
 */
class GaussianNoiseSpec
{
public:
  static GaussianNoiseSpec Isotropic(double sigma);
  static GaussianNoiseSpec FullCovariance(Eigen::MatrixXd covariance);

  bool is_isotropic() const noexcept
  {
    return !covariance_.has_value();
  }
  // Isotropic standard deviation; only meaningful when is_isotropic().
  double sigma() const noexcept
  {
    return sigma_;
  }
  // Full-covariance dimension; nullopt for isotropic specs.
  std::optional<std::size_t> dim() const;
  Eigen::MatrixXd const &covariance() const;
  // Lower Cholesky factor L with L L^T = covariance.
  Eigen::MatrixXd const &cholesky_factor() const;

  // Draw = L * standard_normals (or sigma * standard_normals).
  void Colour(std::span<double const> standard_normals, std::span<double> out) const;

  // Variance of v^T z for z drawn from this noise.
  double ProjectedVariance(std::span<double const> direction) const;

private:
  GaussianNoiseSpec() = default;

  double                         sigma_{0.0};
  std::optional<Eigen::MatrixXd> covariance_;
  Eigen::MatrixXd                cholesky_;
};

struct RobustnessCertificate
{
  double         radius;   // alpha_p, input units
  double         epsilon;  // divergence units
  DivergenceKind divergence;
  NormOrder      norm_order;
};

// Checks the invariants of a certificate (non-negative radius and epsilon, TV epsilon <= 1).
void ValidateCertificate(RobustnessCertificate const &cert);

// Standard normal CDF.
double StdNormalCdf(double x);

// sqrt(tau^T Sigma^{-1} tau); ||tau||_2 / sigma in the isotropic case.
double MahalanobisNorm(Perturbation const &tau, GaussianNoiseSpec const &spec);

// D_beta(N(x, Sigma), N(x + tau, Sigma)) = beta / 2 * ||tau||^2_{Sigma^-1}, for beta in [1, inf].
double GaussianRenyiDivergence(Perturbation const &tau, GaussianNoiseSpec const &spec, double beta);

// D_TV(N(x, Sigma), N(x + tau, Sigma)) = 2 Phi(||tau||_{Sigma^-1} / 2) - 1.
double GaussianTotalVariation(Perturbation const &tau, GaussianNoiseSpec const &spec);

// Same two closed forms, from a precomputed Mahalanobis norm.
double GaussianRenyiFromNorm(double mahalanobis, double beta);
double GaussianTotalVariationFromNorm(double mahalanobis);

struct GaussianCertificates
{
  RobustnessCertificate renyi;
  RobustnessCertificate total_variation;
};

/**
 * Certificates for c # N(x, sigma^2 I) against l2 adversaries of radius alpha2.
 *
 * They hold for every deterministic downstream classifier c since
 * post-processing cannot increase either divergence:
 *   Renyi:  epsilon = beta * alpha2^2 / (2 sigma^2)
 *   TV:     epsilon = 2 Phi(alpha2 / (2 sigma)) - 1
 */
GaussianCertificates CertifyGaussianPreprocessing(double sigma, double alpha2, double beta);

/**
 * Re-expresses a certificate in another divergence. Supported pairs:
 *   TV -> Wasserstein      epsilon * diam(Y)
 *   TV -> Hellinger        sqrt(2 epsilon)
 *   Renyi -> TV            TotalVariationBoundFromRenyi(epsilon)
 *   Renyi -> Hellinger     sqrt(epsilon)
 *   Renyi(inf) -> Separation   epsilon
 * plus the identity. Anything else throws CapabilityError.
 */
RobustnessCertificate ConvertCertificate(RobustnessCertificate const &cert,
                                         DivergenceKind const &target, double diam_y);

}  // namespace randcert
