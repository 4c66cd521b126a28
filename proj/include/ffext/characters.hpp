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

#ifndef FFEXT_CHARACTERS_HPP_
#define FFEXT_CHARACTERS_HPP_

// Canonical additive character chi(x) = exp(2 pi i Tr(x) / p), the quadratic
// character eta, Gauss sums and the completed-square character sums.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffext/finite_field.hpp"

namespace ffext {

using Complex = std::complex<double>;

/// z^n by repeated squaring.
inline Complex ipow(Complex z, unsigned n) {
  Complex out{1.0, 0.0};
  while (n > 0) {
    if (n & 1u) out *= z;
    z *= z;
    n >>= 1;
  }
  return out;
}

/// Exact accumulator for sums of p-th roots of unity.
///
/// Holds the multiplicity of each exponent k in sum_k c_k w^k, w = e^{2 pi i/p}.
/// Such a sum is a rational integer iff c_1 = ... = c_{p-1}, in which case
/// it equals c_0 - c_1.
class PhaseHistogram {
 public:
  explicit PhaseHistogram(std::uint32_t p) : counts_(p, 0) {}

  void add(std::uint32_t phase, std::int64_t weight = 1) { counts_[phase] += weight; }

  std::span<const std::int64_t> counts() const { return counts_; }

  std::optional<std::int64_t> as_integer() const {
    for (std::size_t k = 2; k < counts_.size(); ++k) {
      if (counts_[k] != counts_[1]) return std::nullopt;
    }
    return counts_[0] - counts_[1];
  }

  Complex value() const {
    const double n = static_cast<double>(counts_.size());
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
      sum += static_cast<double>(counts_[k]) * Complex{std::cos(angle), std::sin(angle)};
    }
    return sum;
  }

 private:
  std::vector<std::int64_t> counts_;
};

/// Precomputed chi and eta over the canonical element order.
class CharacterTable {
 public:
  explicit CharacterTable(FieldPtr field) : field_(std::move(field)) {
    const std::uint32_t p = field_->characteristic();
    roots_.resize(p);
    for (std::uint32_t k = 0; k < p; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / p;
      roots_[k] = Complex{std::cos(angle), std::sin(angle)};
    }
    g1_ = explicit_gauss_value(*field_);
  }

  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  /// w^k for w = e^{2 pi i/p}.
  Complex root(std::uint32_t k) const { return roots_[k % roots_.size()]; }
  std::span<const Complex> roots() const { return roots_; }

  Complex chi(Element a) const { return roots_[field_->trace(a)]; }

  /// +1 on nonzero squares, -1 on nonsquares, 0 at zero.
  int eta(Element a) const {
    if (a.index() == 0) return 0;
    return field_->is_square(a) ? 1 : -1;
  }

  /// G_a(eta, chi) = sum over s != 0 of eta(s) chi(a s), by direct summation.
  Complex gauss_sum(Element a) const {
    Complex sum{0.0, 0.0};
    for (std::uint32_t s = 1; s < field_->order(); ++s) {
      const Element se{s};
      sum += static_cast<double>(eta(se)) * chi(field_->mul(a, se));
    }
    return sum;
  }

  /// G_1 from its closed form: (-1)^{l-1} sqrt(q) if p = 1 mod 4,
  /// (-1)^{l-1} i^l sqrt(q) if p = 3 mod 4.
  Complex explicit_gauss_value() const { return explicit_gauss_value(*field_); }

  static Complex explicit_gauss_value(const Field& f) {
    const std::uint32_t l = f.degree();
    const double sign = (l % 2 == 1) ? 1.0 : -1.0;
    const double root_q = std::sqrt(static_cast<double>(f.order()));
    if (f.characteristic() % 4 == 1) return Complex{sign * root_q, 0.0};
    static constexpr Complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return sign * root_q * kPowersOfI[l % 4];
  }

  /// G_1 from the closed form.
  Complex g1() const { return g1_; }

  /// sum over s in F_q of chi(a s^2), by direct summation. Requires a != 0.
  Complex square_sum(Element a) const {
    if (a.index() == 0) {
      throw std::invalid_argument("square_sum: a = 0 is degenerate (sum equals q)");
    }
    Complex sum{0.0, 0.0};
    for (std::uint32_t s = 0; s < field_->order(); ++s) {
      const Element se{s};
      sum += chi(field_->mul(a, field_->mul(se, se)));
    }
    return sum;
  }

  /// Closed form of sum over alpha in F_q^k of chi(t alpha.alpha + beta.alpha):
  /// chi(beta.beta / (-4t)) eta(t)^k G_1^k.
  Complex completed_square_closed(Element t, std::span<const Element> beta) const {
    if (t.index() == 0) throw std::invalid_argument("completed_square: t must be nonzero");
    const Field& f = *field_;
    Element norm = f.zero();
    for (Element b : beta) norm = f.add(norm, f.mul(b, b));
    const Element four_t = f.mul(f.from_int(4), t);
    const Element arg = f.div(norm, f.neg(four_t));
    const std::size_t k = beta.size();
    const int eta_t = eta(t);
    const double eta_k = (k % 2 == 0 || eta_t == 1) ? 1.0 : -1.0;
    return chi(arg) * eta_k * ipow(g1(), static_cast<unsigned>(k));
  }

  /// The same sum evaluated term by term over all q^k vectors alpha.
  Complex completed_square_direct(Element t, std::span<const Element> beta) const {
    if (t.index() == 0) throw std::invalid_argument("completed_square: t must be nonzero");
    const Field& f = *field_;
    const std::size_t k = beta.size();
    const std::uint32_t q = f.order();
    // Per-coordinate phase of t a^2 + b a; the total phase is their sum mod p.
    std::vector<std::vector<std::uint32_t>> phase(k, std::vector<std::uint32_t>(q));
    for (std::size_t j = 0; j < k; ++j) {
      for (std::uint32_t a = 0; a < q; ++a) {
        const Element ae{a};
        phase[j][a] = f.trace(f.add(f.mul(t, f.mul(ae, ae)), f.mul(beta[j], ae)));
      }
    }
    // No factorization over coordinates: every alpha contributes one term.
    const std::uint32_t p = f.characteristic();
    PhaseHistogram hist(p);
    std::vector<std::uint32_t> digits(k, 0);
    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= q;
    for (std::size_t n = 0; n < total; ++n) {
      std::uint32_t ph = 0;
      for (std::size_t j = 0; j < k; ++j) ph += phase[j][digits[j]];
      hist.add(ph % p);
      for (std::size_t j = k; j-- > 0;) {
        if (++digits[j] < q) break;
        digits[j] = 0;
      }
    }
    return hist.value();
  }

 private:
  FieldPtr field_;
  std::vector<Complex> roots_;
  Complex g1_;
};

struct CompletedSquareSum {
  Complex direct;
  Complex closed;
};

inline CompletedSquareSum completed_square_sum(const CharacterTable& chars, Element t,
                                               std::span<const Element> beta) {
  return {chars.completed_square_direct(t, beta), chars.completed_square_closed(t, beta)};
}

}  // namespace ffext

#endif  // FFEXT_CHARACTERS_HPP_
