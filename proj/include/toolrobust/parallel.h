// Copyright 2026 The toolrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef TOOLROBUST_PARALLEL_H_
#define TOOLROBUST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace toolrobust {

// Runs fn(i) for every i in [0, n) on up to `threads` workers. Once any call
// returns false no further indices are handed out; calls already running
// finish.
void ParallelFor(size_t n, int threads, const std::function<bool(size_t)>& fn);

}  // namespace toolrobust

#endif  // TOOLROBUST_PARALLEL_H_
