// Copyright 2026 The ffext Authors.
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


// Lower bounds for the extension norm from S in F_5^4 at the endpoint
// (p, r) = (8/5, 4), and the additive energy of the subspace H.

#include <cstdio>

#include "ffext/energy.hpp"
#include "ffext/norms_lab.hpp"

int main() {
  using namespace ffext;
  const auto field = make_field(5, 1);
  const CharacterTable chars(field);
  const Paraboloid surface(field, 4);
  const ExtensionOperator op(surface, chars);
  const double p = p4_endpoint(4), r = 4.0;

  const auto h = *build_subspace_H(*field, 4);
  std::printf("|H| = %zu, ratio %.6f\n", h.size(), indicator_ratio(op, h, p, r));

  EstimateOptions opt;
  opt.restarts = 5;
  const auto est = estimate_rstar(surface, op, p, r, opt);
  std::printf("estimate %.6f via %s (%s), restricted type %.6f, work %llu\n", est.lower_bound, est.method.c_str(),
              est.witness.label.c_str(), est.restricted_type, static_cast<unsigned long long>(est.work));

  const auto rep = check_lemma_key(*field, 4, h, Parity::kEven);
  std::printf("Lambda_4(H) = %llu, bound %.1f (%s)\n", static_cast<unsigned long long>(rep.lambda4), rep.bound,
              rep.branch.c_str());
}
