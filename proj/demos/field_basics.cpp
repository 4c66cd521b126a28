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


// Arithmetic in F_9, its Gauss sum, and the extension of 1 from the
// paraboloid in F_9^3.

#include <cstdio>

#include "ffext/characters.hpp"
#include "ffext/fourier.hpp"
#include "ffext/geometry.hpp"

int main() {
  using namespace ffext;
  const auto f9 = parse_field("3^2");
  std::printf("%s, modulus coefficients:", f9->name().c_str());
  for (auto c : f9->modulus()) std::printf(" %u", c);
  std::printf("\n");

  const Element a{4}, b{7};
  std::printf("4 * 7 = %u, 4 / 7 = %u, tr(4) = %u\n", f9->mul(a, b).index(), f9->div(a, b).index(), f9->trace(a));

  const CharacterTable chars(f9);
  const Complex g = chars.gauss_sum(f9->one());
  std::printf("G_1 = %.6f %+.6fi, closed form %.6f %+.6fi\n", g.real(), g.imag(), chars.g1().real(),
              chars.g1().imag());

  const Paraboloid surface(f9, 3);
  const ExtensionOperator op(surface, chars);
  const auto ext = op.apply(std::vector<Complex>(op.surface_size(), Complex{1.0, 0.0}));
  for (std::size_t m : {std::size_t{0}, std::size_t{1}, std::size_t{10}}) {
    const Complex closed = sigma_inverse_closed_form(chars, op.grid_point(m));
    std::printf("m = %zu: direct %.6f %+.6fi, closed %.6f %+.6fi\n", m, ext[m].real(), ext[m].imag(), closed.real(),
                closed.imag());
  }
}
