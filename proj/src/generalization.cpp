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

#include "randcert/generalization.hpp"

#include <cmath>
#include <cstdint>

#include "randcert/errors.hpp"

namespace randcert {

namespace {

void CheckInputs(PointSet const &points, double alpha)
{
  if (points.empty())
  {
    throw ValidationError("cannot cover an empty point set");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha))
  {
    throw DomainError("cover radius must be positive and finite");
  }
  for (auto const &p : points)
  {
    if (p.size() != points.front().size())
    {
      throw DimensionError("all points must have the same dimension");
    }
  }
}

double Distance(std::vector<double> const &a, std::vector<double> const &b, NormOrder norm)
{
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    diff[i] = a[i] - b[i];
  }
  return LpNorm(diff, norm);
}

// covers[c][i] is true when candidate center c covers point i.
std::vector<std::vector<bool>> CoverageTable(PointSet const &points, double alpha, NormOrder norm)
{
  std::size_t const              n = points.size();
  std::vector<std::vector<bool>> covers(n, std::vector<bool>(n, false));
  for (std::size_t c = 0; c < n; ++c)
  {
    covers[c][c] = true;
    for (std::size_t i = c + 1; i < n; ++i)
    {
      bool const inside = Distance(points[c], points[i], norm) <= alpha;
      covers[c][i]      = inside;
      covers[i][c]      = inside;
    }
  }
  return covers;
}

CoveringResult MakeResult(PointSet const &points, std::vector<std::size_t> indices, double alpha,
                          NormOrder norm, bool exact)
{
  CoveringResult result{indices.size(), {}, std::move(indices), alpha, norm, exact};
  for (std::size_t idx : result.center_indices)
  {
    result.centers.push_back(points[idx]);
  }
  if (!IsValidCover(points, result))
  {
    throw std::logic_error("internal error: constructed cover is not valid");
  }
  return result;
}

bool SearchCombinations(std::vector<std::uint32_t> const &masks, std::uint32_t full,
                        std::size_t start, std::size_t remaining, std::uint32_t covered,
                        std::vector<std::size_t> &chosen)
{
  if (remaining == 0)
  {
    return covered == full;
  }
  for (std::size_t c = start; c + remaining <= masks.size(); ++c)
  {
    chosen.push_back(c);
    if (SearchCombinations(masks, full, c + 1, remaining - 1, covered | masks[c], chosen))
    {
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

void CheckCounts(std::size_t n_balls, std::size_t num_classes, std::size_t n)
{
  if (n_balls == 0 || num_classes == 0 || n == 0)
  {
    throw DomainError("covering number, class count and sample size must be positive");
  }
}

}  // namespace

bool IsValidCover(PointSet const &points, CoveringResult const &cover)
{
  for (auto const &p : points)
  {
    bool covered = false;
    for (auto const &c : cover.centers)
    {
      if (c.size() == p.size() && Distance(p, c, cover.norm_order) <= cover.radius)
      {
        covered = true;
        break;
      }
    }
    if (!covered)
    {
      return false;
    }
  }
  return true;
}

CoveringResult CoveringGreedy(PointSet const &points, double alpha, NormOrder norm)
{
  CheckInputs(points, alpha);
  std::size_t const        n      = points.size();
  auto const               covers = CoverageTable(points, alpha, norm);
  std::vector<bool>        covered(n, false);
  std::size_t              remaining = n;
  std::vector<std::size_t> centers;
  while (remaining > 0)
  {
    std::size_t best       = 0;
    std::size_t best_count = 0;
    for (std::size_t c = 0; c < n; ++c)
    {
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i)
      {
        count += (!covered[i] && covers[c][i]) ? 1 : 0;
      }
      if (count > best_count)
      {
        best       = c;
        best_count = count;
      }
    }
    centers.push_back(best);
    for (std::size_t i = 0; i < n; ++i)
    {
      if (!covered[i] && covers[best][i])
      {
        covered[i] = true;
        --remaining;
      }
    }
  }
  return MakeResult(points, std::move(centers), alpha, norm, false);
}

CoveringResult CoveringExact(PointSet const &points, double alpha, NormOrder norm)
{
  CheckInputs(points, alpha);
  std::size_t const n = points.size();
  if (n > kMaxExactCoverPoints)
  {
    throw CapabilityError("exhaustive covering is limited to " +
                          std::to_string(kMaxExactCoverPoints) + " points");
  }
  auto const                 covers = CoverageTable(points, alpha, norm);
  std::vector<std::uint32_t> masks(n, 0);
  for (std::size_t c = 0; c < n; ++c)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      if (covers[c][i])
      {
        masks[c] |= (std::uint32_t{1} << i);
      }
    }
  }
  std::uint32_t const full = (std::uint32_t{1} << n) - 1;
  for (std::size_t k = 1; k <= n; ++k)
  {
    std::vector<std::size_t> chosen;
    if (SearchCombinations(masks, full, 0, k, 0, chosen))
    {
      return MakeResult(points, std::move(chosen), alpha, norm, true);
    }
  }
  throw std::logic_error("internal error: the full point set always covers itself");
}

double RademacherBoundTv(std::size_t n_balls, std::size_t num_classes, std::size_t n,
                         double eps_tv)
{
  CheckCounts(n_balls, num_classes, n);
  if (!(eps_tv >= 0.0 && eps_tv <= 1.0))
  {
    throw DomainError("TV epsilon must lie in [0, 1]");
  }
  return std::sqrt(static_cast<double>(n_balls) * static_cast<double>(num_classes) /
                   static_cast<double>(n)) +
         eps_tv;
}

double RademacherBoundRenyi(std::size_t n_balls, std::size_t num_classes, std::size_t n,
                            double eps_renyi)
{
  CheckCounts(n_balls, num_classes, n);
  return std::sqrt(static_cast<double>(n_balls) * static_cast<double>(num_classes) /
                   static_cast<double>(n)) +
         TotalVariationBoundFromRenyi(eps_renyi);
}

double GeneralizationGapBound(double rademacher, std::size_t n, double delta)
{
  if (!(delta > 0.0 && delta < 1.0))
  {
    throw DomainError("confidence parameter delta must lie in (0, 1)");
  }
  if (n == 0)
  {
    throw DomainError("sample size must be positive");
  }
  if (!(rademacher >= 0.0))
  {
    throw DomainError("Rademacher complexity bound must be >= 0");
  }
  return 2.0 * rademacher + 3.0 * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

double AdversarialGeneralizationBound(double rademacher, std::size_t n, double delta,
                                      double eps_tv)
{
  if (!(eps_tv >= 0.0 && eps_tv <= 1.0))
  {
    throw DomainError("TV epsilon must lie in [0, 1]");
  }
  return GeneralizationGapBound(rademacher, n, delta) + eps_tv;
}

}  // namespace randcert
