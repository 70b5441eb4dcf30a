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

#include "randcert/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "randcert/errors.hpp"

namespace randcert {

NormOrder::NormOrder(double p)
  : p_{p}
{
  if (!(p >= 1.0))
  {
    throw DomainError("norm order must be >= 1");
  }
}

NormOrder NormOrder::Parse(std::string const &text)
{
  if (text == "inf" || text == "Inf" || text == "infinity" || text == "linf")
  {
    return LInf();
  }
  std::size_t used = 0;
  double      p    = 0.0;
  try
  {
    p = std::stod(text, &used);
  }
  catch (std::exception const &)
  {
    throw ValidationError("cannot parse norm order '" + text + "'");
  }
  if (used != text.size())
  {
    throw ValidationError("cannot parse norm order '" + text + "'");
  }
  return NormOrder(p);
}

bool NormOrder::is_infinite() const noexcept
{
  return std::isinf(p_);
}

std::string NormOrder::name() const
{
  if (is_infinite())
  {
    return "inf";
  }
  std::ostringstream out;
  out << p_;
  return out.str();
}

double LpNorm(std::span<double const> v, NormOrder order)
{
  double const p = order.value();
  if (std::isinf(p))
  {
    double m = 0.0;
    for (double x : v)
    {
      m = std::max(m, std::abs(x));
    }
    return m;
  }
  if (p == 1.0)
  {
    double s = 0.0;
    for (double x : v)
    {
      s += std::abs(x);
    }
    return s;
  }
  if (p == 2.0)
  {
    double s = 0.0;
    for (double x : v)
    {
      s += x * x;
    }
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double x : v)
  {
    s += std::pow(std::abs(x), p);
  }
  return std::pow(s, 1.0 / p);
}

Perturbation::Perturbation(std::vector<double> tau)
  : tau_(std::move(tau))
{
  for (double v : tau_)
  {
    if (!std::isfinite(v))
    {
      throw ValidationError("perturbation entries must be finite");
    }
  }
}

GaussianNoiseSpec GaussianNoiseSpec::Isotropic(double sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
  {
    throw DomainError("noise standard deviation must be positive and finite");
  }
  GaussianNoiseSpec spec;
  spec.sigma_ = sigma;
  return spec;
}

GaussianNoiseSpec GaussianNoiseSpec::FullCovariance(Eigen::MatrixXd covariance)
{
  if (covariance.rows() == 0 || covariance.rows() != covariance.cols())
  {
    throw DimensionError("covariance must be a non-empty square matrix");
  }
  if (!covariance.allFinite())
  {
    throw ValidationError("covariance entries must be finite");
  }
  double const scale = covariance.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || (covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw ValidationError("covariance must be symmetric and non-zero");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
  double const largest  = eig.eigenvalues().maxCoeff();
  double const smallest = eig.eigenvalues().minCoeff();
  if (!(largest > 0.0) || !(smallest > 1e-12 * largest))
  {
    throw ValidationError("covariance must be positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
  {
    throw ValidationError("covariance factorisation failed");
  }
  GaussianNoiseSpec spec;
  spec.cholesky_   = llt.matrixL();
  spec.covariance_ = std::move(covariance);
  return spec;
}

std::optional<std::size_t> GaussianNoiseSpec::dim() const
{
  if (!covariance_)
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(covariance_->rows());
}

Eigen::MatrixXd const &GaussianNoiseSpec::covariance() const
{
  if (!covariance_)
  {
    throw CapabilityError("isotropic noise has no explicit covariance matrix");
  }
  return *covariance_;
}

Eigen::MatrixXd const &GaussianNoiseSpec::cholesky_factor() const
{
  if (!covariance_)
  {
    throw CapabilityError("isotropic noise has no explicit covariance matrix");
  }
  return cholesky_;
}

void GaussianNoiseSpec::Colour(std::span<double const> standard_normals, std::span<double> out) const
{
  if (standard_normals.size() != out.size())
  {
    throw DimensionError("noise buffers differ in size");
  }
  if (is_isotropic())
  {
    for (std::size_t i = 0; i < out.size(); ++i)
    {
      out[i] = sigma_ * standard_normals[i];
    }
    return;
  }
  auto const d = static_cast<std::size_t>(cholesky_.rows());
  if (out.size() != d)
  {
    throw DimensionError("noise dimension does not match the covariance");
  }
  for (std::size_t i = 0; i < d; ++i)
  {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j)
    {
      acc += cholesky_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
             standard_normals[j];
    }
    out[i] = acc;
  }
}

double GaussianNoiseSpec::ProjectedVariance(std::span<double const> direction) const
{
  if (is_isotropic())
  {
    double s = 0.0;
    for (double v : direction)
    {
      s += v * v;
    }
    return sigma_ * sigma_ * s;
  }
  if (direction.size() != static_cast<std::size_t>(covariance_->rows()))
  {
    throw DimensionError("direction dimension does not match the covariance");
  }
  Eigen::Map<Eigen::VectorXd const> v(direction.data(), static_cast<Eigen::Index>(direction.size()));
  return v.dot(*covariance_ * v);
}

void ValidateCertificate(RobustnessCertificate const &cert)
{
  if (!(cert.radius >= 0.0))
  {
    throw ValidationError("certificate radius must be >= 0");
  }
  if (!(cert.epsilon >= 0.0))
  {
    throw ValidationError("certificate epsilon must be >= 0");
  }
  if (cert.divergence.tag() == DivergenceKind::Tag::kTotalVariation && cert.epsilon > 1.0)
  {
    throw ValidationError("total-variation epsilon must be <= 1");
  }
}

double StdNormalCdf(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double MahalanobisNorm(Perturbation const &tau, GaussianNoiseSpec const &spec)
{
  auto const values = tau.values();
  if (spec.is_isotropic())
  {
    return LpNorm(values, NormOrder::L2()) / spec.sigma();
  }
  if (tau.dim() != *spec.dim())
  {
    throw DimensionError("perturbation dimension does not match the covariance");
  }
  // ||L^{-1} tau||_2 with L the Cholesky factor.
  Eigen::Map<Eigen::VectorXd const> t(values.data(), static_cast<Eigen::Index>(values.size()));
  Eigen::VectorXd const whitened = spec.cholesky_factor().triangularView<Eigen::Lower>().solve(t);
  return whitened.norm();
}

double GaussianRenyiFromNorm(double mahalanobis, double beta)
{
  if (!(beta >= 1.0))
  {
    throw DomainError("Renyi order must be >= 1");
  }
  if (mahalanobis == 0.0)
  {
    return 0.0;
  }
  return 0.5 * beta * mahalanobis * mahalanobis;
}

double GaussianTotalVariationFromNorm(double mahalanobis)
{
  // 2 Phi(m / 2) - 1 == erf(m / (2 sqrt 2)), without the cancellation near 0.
  return std::erf(mahalanobis / (2.0 * std::numbers::sqrt2));
}

double GaussianRenyiDivergence(Perturbation const &tau, GaussianNoiseSpec const &spec, double beta)
{
  return GaussianRenyiFromNorm(MahalanobisNorm(tau, spec), beta);
}

double GaussianTotalVariation(Perturbation const &tau, GaussianNoiseSpec const &spec)
{
  return GaussianTotalVariationFromNorm(MahalanobisNorm(tau, spec));
}

GaussianCertificates CertifyGaussianPreprocessing(double sigma, double alpha2, double beta)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
  {
    throw DomainError("noise standard deviation must be positive and finite");
  }
  if (!(alpha2 >= 0.0) || !std::isfinite(alpha2))
  {
    throw DomainError("certified radius must be finite and >= 0");
  }
  if (!(beta >= 1.0))
  {
    throw DomainError("Renyi order must be >= 1");
  }
  double const ratio = alpha2 / sigma;
  return GaussianCertificates{
      .renyi           = {alpha2, GaussianRenyiFromNorm(ratio, beta), DivergenceKind::Renyi(beta),
                          NormOrder::L2()},
      .total_variation = {alpha2, GaussianTotalVariationFromNorm(ratio),
                          DivergenceKind::TotalVariation(), NormOrder::L2()},
  };
}

RobustnessCertificate ConvertCertificate(RobustnessCertificate const &cert,
                                         DivergenceKind const &target, double diam_y)
{
  ValidateCertificate(cert);
  if (!(diam_y >= 0.0))
  {
    throw DomainError("label-set diameter must be >= 0");
  }
  using Tag = DivergenceKind::Tag;
  RobustnessCertificate out = cert;
  out.divergence            = target;

  if (cert.divergence == target)
  {
    return out;
  }
  Tag const from = cert.divergence.tag();
  Tag const to   = target.tag();

  if (from == Tag::kTotalVariation && to == Tag::kWasserstein)
  {
    out.epsilon = cert.epsilon * diam_y;
    return out;
  }
  if (from == Tag::kTotalVariation && to == Tag::kHellinger)
  {
    out.epsilon = std::sqrt(2.0 * cert.epsilon);
    return out;
  }
  if (from == Tag::kRenyi && to == Tag::kTotalVariation)
  {
    out.epsilon = TotalVariationBoundFromRenyi(cert.epsilon);
    return out;
  }
  if (from == Tag::kRenyi && to == Tag::kHellinger)
  {
    out.epsilon = std::sqrt(cert.epsilon);
    return out;
  }
  if (from == Tag::kRenyi && std::isinf(cert.divergence.beta()) && to == Tag::kSeparation)
  {
    return out;
  }
  throw CapabilityError("no certificate conversion from " + cert.divergence.name() + " to " +
                        target.name());
}

}  // namespace randcert
