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

#ifndef FFEXT_TESTS_ORACLES_HPP_
#define FFEXT_TESTS_ORACLES_HPP_

// Brute-force reference computations for the test suites. These deliberately
// avoid the library's lookup tables and factorized formulas: field products go
// through polynomial multiplication, characters through cos/sin of the trace,
// and counts through plain enumeration.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ffext/finite_field.hpp"
#include "ffext/geometry.hpp"

namespace ffext::oracle {

using Cx = std::complex<double>;

/// Exhaustive irreducibility: no monic factor of degree 1..deg/2 divides f.
inline bool irreducible_by_search(const detail::Poly& f, std::uint32_t p) {
  const std::size_t l = f.size() - 1;
  for (std::size_t deg = 1; deg <= l / 2; ++deg) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < deg; ++i) count *= p;
    for (std::uint64_t low = 0; low < count; ++low) {
      detail::Poly g(deg + 1, 0);
      std::uint64_t t = low;
      for (std::size_t i = 0; i < deg; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      g[deg] = 1;
      if (detail::poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

inline Element mul(const Field& f, Element a, Element b) { return f.mul_reference(a, b); }

inline Element add(const Field& f, Element a, Element b) {
  auto ca = f.coefficients(a), cb = f.coefficients(b);
  for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = (ca[i] + cb[i]) % f.characteristic();
  return f.from_coefficients(ca);
}

/// a + a^p + ... + a^{p^{l-1}} by repeated reference multiplication.
inline std::uint32_t trace(const Field& f, Element a) {
  Element acc = f.zero(), term = a;
  for (std::uint32_t k = 0; k < f.degree(); ++k) {
    acc = add(f, acc, term);
    Element next = f.one();
    for (std::uint32_t j = 0; j < f.characteristic(); ++j) next = mul(f, next, term);
    term = next;
  }
  return acc.index();
}

inline Cx chi(const Field& f, Element a) {
  const double angle = 2.0 * std::numbers::pi * trace(f, a) / f.characteristic();
  return {std::cos(angle), std::sin(angle)};
}

inline int eta(const Field& f, Element a) {
  if (a.index() == 0) return 0;
  for (std::uint32_t s = 1; s < f.order(); ++s) {
    if (mul(f, Element{s}, Element{s}) == a) return 1;
  }
  return -1;
}

inline Element dot(const Field& f, const Point& a, const Point& b) {
  Element acc = f.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc = add(f, acc, mul(f, a[i], b[i]));
  return acc;
}

/// (f dsigma)^v(m) as the literal |S|^{-1} sum over the points of S.
inline Cx extension_at(const Field& f, const std::vector<Point>& surface,
                       const std::vector<Cx>& values, const Point& m) {
  Cx acc{};
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (values[i] != Cx{}) acc += chi(f, dot(f, surface[i], m)) * values[i];
  }
  return acc / static_cast<double>(surface.size());
}

/// Lambda_4 by enumerating all quadruples of full points.
inline std::uint64_t lambda4_quadruples(const Field& f, const std::vector<Point>& e) {
  std::uint64_t count = 0;
  const std::size_t n = e.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t w = 0; w < n; ++w) {
          bool equal = true;
          for (std::size_t i = 0; i < e[a].size() && equal; ++i) {
            equal = add(f, e[a][i], e[b][i]) == add(f, e[c][i], e[w][i]);
          }
          count += equal ? 1 : 0;
        }
  return count;
}

}  // namespace ffext::oracle

#endif  // FFEXT_TESTS_ORACLES_HPP_
