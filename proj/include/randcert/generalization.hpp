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
#include <vector>

#include "randcert/smoothing.hpp"

namespace randcert {

using PointSet = std::vector<std::vector<double>>;

/**
 * An alpha-cover of a point set. Centers are always input points here, so
 * n_balls upper-bounds the external covering number (centers anywhere).
 */
struct CoveringResult
{
  std::size_t              n_balls;
  PointSet                 centers;
  std::vector<std::size_t> center_indices;
  double                   radius;
  NormOrder                norm_order;
  bool                     exact;
};

// Every point lies within `radius` of some center (inclusive).
bool IsValidCover(PointSet const &points, CoveringResult const &cover);

// Max-coverage greedy, ties to the smallest index.
CoveringResult CoveringGreedy(PointSet const &points, double alpha, NormOrder norm);

inline constexpr std::size_t kMaxExactCoverPoints = 12;

// Smallest point-centred cover by exhaustive search (lexicographically first
// among optimal subsets). Throws CapabilityError above kMaxExactCoverPoints.
CoveringResult CoveringExact(PointSet const &points, double alpha, NormOrder norm);

// Rademacher complexity of the TV-robust loss class: sqrt(N K / n) + eps_tv.
double RademacherBoundTv(std::size_t n_balls, std::size_t num_classes, std::size_t n,
                         double eps_tv);

// Renyi variant: sqrt(N K / n) + TotalVariationBoundFromRenyi(eps_renyi).
double RademacherBoundRenyi(std::size_t n_balls, std::size_t num_classes, std::size_t n,
                            double eps_renyi);

// 2 rademacher + 3 sqrt(ln(2 / delta) / (2n)); holds with probability >= 1 - delta.
double GeneralizationGapBound(double rademacher, std::size_t n, double delta);

// GeneralizationGapBound + eps_tv: bounds R_adv - empirical risk for TV-robust classifiers.
double AdversarialGeneralizationBound(double rademacher, std::size_t n, double delta,
                                      double eps_tv);

}  // namespace randcert
