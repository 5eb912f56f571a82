// Copyright 2026 The Persuasion Authors. All rights reserved.
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

// Built with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "persuasion/grid_kernel.h"

namespace persuasion {
namespace {

// Four candidates per register. Products and sums of integers below 2^53 are
// exact, so the lanes agree bit-for-bit with the scalar kernel.
inline __m256d LeafNumerator(const std::vector<LeafFactor>& factors,
                             double constant, const double* params,
                             std::size_t count, std::size_t c, __m256d g) {
  __m256d n = _mm256_set1_pd(constant);
  for (const LeafFactor& f : factors) {
    __m256d k =
        _mm256_loadu_pd(params + static_cast<std::size_t>(f.param) * count + c);
    n = _mm256_mul_pd(n, f.complement ? _mm256_sub_pd(g, k) : k);
  }
  return n;
}

}  // namespace

void EvaluateBatchAvx2(const CompiledTree& t, const double* params,
                       std::size_t count, double* out) {
  const __m256d g = _mm256_set1_pd(t.grid);
  std::size_t c = 0;
  for (; c + 4 <= count; c += 4) {
    __m256d total = _mm256_setzero_pd();
    for (std::size_t l = 0; l < t.leaves.size(); ++l) {
      const LeafProgram& leaf = t.leaves[l];
      __m256d n1 =
          LeafNumerator(leaf.factors1, t.constant1[l], params, count, c, g);
      __m256d n2 =
          LeafNumerator(leaf.factors2, t.constant2[l], params, count, c, g);
      __m256d follow = _mm256_cmp_pd(n1, n2, _CMP_GE_OQ);
      total = _mm256_add_pd(total,
                            _mm256_and_pd(follow, _mm256_add_pd(n1, n2)));
    }
    _mm256_storeu_pd(out + c, total);
  }
  if (c < count) {
    // Tail: run the scalar kernel on a compacted copy of the last columns.
    std::size_t rest = count - c;
    std::vector<double> tail(static_cast<std::size_t>(t.num_params) * rest);
    for (int j = 0; j < t.num_params; ++j) {
      for (std::size_t i = 0; i < rest; ++i) {
        tail[static_cast<std::size_t>(j) * rest + i] =
            params[static_cast<std::size_t>(j) * count + c + i];
      }
    }
    EvaluateBatchScalar(t, tail.data(), rest, out + c);
  }
}

}  // namespace persuasion
