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

#include "folidx/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "folidx/errors.hpp"

namespace folidx::linalg {

namespace {

lapack_complex_double* as_lapack(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

Eigen::VectorXd singular_values(const CMatrix& A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  if (m == 0 || n == 0) return Eigen::VectorXd();
  CMatrix work = A;
  Eigen::VectorXd s(std::min(m, n));
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, as_lapack(work.data()), m,
                                         s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw InvariantViolation("zgesdd failed with info = " + std::to_string(info));
  return s;
}

Svd full_svd(const CMatrix& A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  Svd out;
  CMatrix work = A;
  out.s.resize(std::min(m, n));
  out.U.resize(m, m);
  CMatrix Vh(n, n);
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, as_lapack(work.data()), m, out.s.data(),
                     as_lapack(out.U.data()), m, as_lapack(Vh.data()), n);
  if (info != 0) throw InvariantViolation("zgesdd failed with info = " + std::to_string(info));
  out.V = Vh.adjoint();
  return out;
}

double hermitian_norm(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double smallest_singular_value(const CMatrix& A) {
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace folidx::linalg
