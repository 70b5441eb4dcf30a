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

#include "randcert/parallel.hpp"

#include <atomic>

namespace randcert {

namespace {
std::atomic<std::size_t> g_threads{1};
}

void SetThreadCount(std::size_t threads)
{
  if (threads == 0)
  {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  g_threads.store(threads);
}

std::size_t ThreadCount()
{
  return g_threads.load();
}

}  // namespace randcert
