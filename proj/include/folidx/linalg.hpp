/* Copyright 2026 The folidx Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>

#include "folidx/trigpoly.hpp"

namespace folidx::linalg {

/// Thin SVD A = U diag(s) V^*, singular values in descending order.
struct Svd {
  CMatrix U;
  Eigen::VectorXd s;
  CMatrix V;
};

/// Singular values of A in descending order (LAPACK divide and conquer).
Eigen::VectorXd singular_values(const CMatrix& A);
/// Full SVD: U is rows x rows, V is cols x cols, s has min(rows, cols) entries.
Svd full_svd(const CMatrix& A);

/// Spectral norm of a Hermitian matrix.
double hermitian_norm(const CMatrix& H);
/// Smallest singular value of a small square matrix.
double smallest_singular_value(const CMatrix& A);

}  // namespace folidx::linalg
