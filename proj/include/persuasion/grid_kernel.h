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

// Bulk evaluation of sender utility over grids of designed parameters.
//
// With every designed parameter of the form k/G, each leaf's joint mass under
// state s is N_s / D for one common denominator D and an integer N_s that is
// a fixed constant times a product of k's and (G - k)'s. The obedient
// receiver acts phi1 iff N_1 >= N_2, so the sender's utility is
// sum_{N_1 >= N_2} (N_1 + N_2) / D. When D < 2^53 every partial product is an
// exactly representable double and the kernels below are exact.

#ifndef PERSUASION_GRID_KERNEL_H_
#define PERSUASION_GRID_KERNEL_H_

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "persuasion/model.h"

namespace persuasion {

struct LeafFactor {
  int param;        // index into the candidate parameter vector
  bool complement;  // G - k instead of k
};

struct LeafProgram {
  mpz_class constant1;
  mpz_class constant2;
  std::vector<LeafFactor> factors1;
  std::vector<LeafFactor> factors2;
};

struct CompiledTree {
  int grid = 1;        // G
  int num_params = 0;  // 2 per designed node: p1 then p2, preorder
  std::vector<NodePath> designed;
  std::vector<LeafProgram> leaves;
  mpz_class denominator;  // D
  bool fits_double = false;
  // Double copies of the constants, valid when fits_double.
  std::vector<double> constant1;
  std::vector<double> constant2;
};

// Designed nodes are numbered in preorder. Throws ValidationError if G < 1
// or the prior lies outside [0,1].
CompiledTree CompileTree(const TrialTree& tree, const Rational& prior, int grid);

// params is column-major: params[j * count + c] is parameter j of candidate
// c, an integer in [0, G]. Writes utility numerators (units of 1/D).
void EvaluateBatchScalar(const CompiledTree& t, const double* params,
                         std::size_t count, double* out);
void EvaluateBatchAvx2(const CompiledTree& t, const double* params,
                       std::size_t count, double* out);
// AVX2 when the CPU has it, scalar otherwise. Requires fits_double.
void EvaluateBatch(const CompiledTree& t, const double* params,
                   std::size_t count, double* out);
bool Avx2Available();

// Exact GMP evaluation of one candidate; works without the 2^53 guard.
mpz_class EvaluateExact(const CompiledTree& t, const std::vector<long>& params);

}  // namespace persuasion

#endif  // PERSUASION_GRID_KERNEL_H_
