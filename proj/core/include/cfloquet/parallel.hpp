// Copyright 2026 The cfloquet Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace cfloquet {

/// Number of worker threads used by parallel loops. 0 selects
/// std::thread::hardware_concurrency(). The initial value is read from the
/// CFLOQUET_THREADS environment variable when present.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Iterations must be independent; results
/// should be written to pre-sized per-index storage so that output does not
/// depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace cfloquet
