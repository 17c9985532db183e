// qbe/parallel.h

// Copyright 2026  The qbe-kws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef QBE_PARALLEL_H_
#define QBE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace qbe {

/// Runs fn(0) ... fn(n-1) on up to `workers` threads (workers <= 1 runs
/// inline). Each index must write only its own output slot. If any call
/// throws, the exception from the lowest failing index is rethrown after all
/// workers stop, so failures do not depend on scheduling.
void ParallelFor(size_t n, int workers, const std::function<void(size_t)> &fn);

// std::thread::hardware_concurrency(), at least 1.
int DefaultWorkerCount();

}  // namespace qbe

#endif  // QBE_PARALLEL_H_
