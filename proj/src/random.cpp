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

#include "randcert/random.hpp"

#include <cmath>
#include <numbers>

namespace randcert {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t SplitMix64(std::uint64_t x) noexcept
{
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
  : key_{SplitMix64(SplitMix64(seed) ^ SplitMix64(stream * kGolden + 0x632BE59BD9B4E019ULL))}
{}

std::uint64_t CounterRng::Bits(std::uint64_t counter) const noexcept
{
  return SplitMix64(key_ ^ SplitMix64(counter));
}

double CounterRng::Uniform(std::uint64_t counter) const noexcept
{
  return (static_cast<double>(Bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

void CounterRng::StandardNormals(std::uint64_t index, std::span<double> out) const noexcept
{
  // Box-Muller; each pair of normals consumes two counters.
  std::uint64_t const pairs = (out.size() + 1) / 2;
  std::uint64_t       base  = index * pairs * 2;
  for (std::size_t i = 0; i < out.size(); i += 2, base += 2)
  {
    double const radius = std::sqrt(-2.0 * std::log(Uniform(base)));
    double const angle  = 2.0 * std::numbers::pi * Uniform(base + 1);
    out[i]              = radius * std::cos(angle);
    if (i + 1 < out.size())
    {
      out[i + 1] = radius * std::sin(angle);
    }
  }
}

}  // namespace randcert
