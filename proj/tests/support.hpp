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

#include <random>

#include "folidx/opcalc.hpp"

namespace folidx::testing {

inline TrigPoly random_poly(std::mt19937_64& rng, int dim, int rows, int cols, int bandwidth,
                            double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  TrigPoly u(dim, rows, cols);
  std::vector<int> k(dim, -bandwidth);
  while (true) {
    CMatrix c(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int s = 0; s < cols; ++s) c(r, s) = cplx(g(rng), g(rng));
    u.add_term(k, c);
    int a = 0;
    while (a < dim && ++k[a] > bandwidth) k[a++] = -bandwidth;
    if (a == dim) break;
  }
  return u;
}

inline DiffOp random_op(std::mt19937_64& rng, FoliationSplit split, int m_in, int m_out, int max_deg,
                        int bandwidth) {
  DiffOp P(split, m_in, m_out);
  for (const auto& alpha : multi_indices_up_to(max_deg, split))
    P.add_monomial(alpha, random_poly(rng, split.n(), m_out, m_in, bandwidth, 0.5));
  return P;
}

}  // namespace folidx::testing
