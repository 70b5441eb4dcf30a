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

#include <cstdint>
#include <span>

namespace randcert {

/**
 * Counter-based random stream keyed by (seed, stream). Draw i is a pure
 * function of (seed, stream, i), so results never depend on how work is
 * split across threads. The mixing function is the SplitMix64 finaliser.
 */
class CounterRng
{
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t Bits(std::uint64_t counter) const noexcept;

  // Uniform in the open interval (0, 1) with 53 random bits.
  double Uniform(std::uint64_t counter) const noexcept;

  // Fills `out` with independent N(0, 1) draws for sample `index`. Draws for
  // different sample indices never overlap.
  void StandardNormals(std::uint64_t index, std::span<double> out) const noexcept;

  std::uint64_t key() const noexcept
  {
    return key_;
  }

private:
  std::uint64_t key_;
};

std::uint64_t SplitMix64(std::uint64_t x) noexcept;

}  // namespace randcert
