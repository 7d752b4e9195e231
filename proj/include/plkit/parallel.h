// Copyright 2026 The plkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PLKIT_PARALLEL_H_
#define PLKIT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace plkit {

// Runs fn(i) for every i in [0, n) on up to `jobs` threads. Indices are
// handed out in order; if any call throws, the exception from the lowest
// failing index is rethrown after all workers stop.
void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace plkit

#endif  // PLKIT_PARALLEL_H_
