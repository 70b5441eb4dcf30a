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

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace randcert {

// Worker count used by the dataset-level loops. 0 means hardware concurrency.
void        SetThreadCount(std::size_t threads);
std::size_t ThreadCount();

/**
 * Calls fn(i) for i in [0, n) on up to ThreadCount() threads using a static
 * contiguous partition. Callers write results into slot i and reduce
 * sequentially afterwards, which keeps every output schedule-independent.
 */
template <typename Fn>
void ParallelFor(std::size_t n, Fn &&fn)
{
  std::size_t const workers = std::min(ThreadCount(), n);
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      fn(i);
    }
    return;
  }
  std::exception_ptr       failure;
  std::mutex               failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
  {
    std::size_t const begin = n * w / workers;
    std::size_t const end   = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try
      {
        for (std::size_t i = begin; i < end; ++i)
        {
          fn(i);
        }
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

}  // namespace randcert
