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

#ifndef FFEXT_FINITE_FIELD_HPP_
#define FFEXT_FINITE_FIELD_HPP_

// Exact arithmetic in F_q, q = p^l with p an odd prime.
//
// Elements are stored as their index in the canonical enumeration: the
// coefficient vector (c_0, ..., c_{l-1}) of the polynomial-basis
// representation maps to c_0 + c_1 p + ... + c_{l-1} p^{l-1}. Indices
// 0..p-1 are therefore exactly the prime subfield, and iterating indices
// 0..q-1 visits the elements in lexicographic order of the coefficient
// vector read from the highest-degree coefficient down.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffext {

/// An element of F_q, identified by its canonical index.
class Element {
 public:
  constexpr Element() = default;
  constexpr explicit Element(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }

  friend constexpr auto operator<=>(Element, Element) = default;

 private:
  std::uint32_t index_ = 0;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp,
                                 std::uint64_t limit) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (out > limit / base) {
      throw std::length_error("integer power exceeds limit " +
                              std::to_string(limit));
    }
    out *= base;
  }
  return out;
}

// Dense polynomials over Z/p, low degree first, no trailing zeros
// (the zero polynomial is empty).
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p is prime, so a^{p-2} is the inverse.
  std::uint64_t result = 1, base = a % p;
  std::uint32_t e = p - 2;
  while (e > 0) {
    if (e & 1u) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

inline Poly poly_sub(Poly a, const Poly& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    }
  }
  Poly out(acc.begin(), acc.end());
  trim(out);
  return out;
}

// Remainder of a modulo a nonzero polynomial m.
inline Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t factor = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = static_cast<std::uint32_t>(
          (a[shift + i] + p - factor * m[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly poly_powmod(Poly base, std::uint64_t exp, const Poly& m,
                        std::uint32_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), m, p);
  while (exp > 0) {
    if (exp & 1u) result = poly_mod(poly_mul(result, base, p), m, p);
    base = poly_mod(poly_mul(base, base, p), m, p);
    exp >>= 1;
  }
  return result;
}

// Rabin-style test: a monic f of degree l is irreducible over F_p iff
// gcd(x^{p^k} - x, f) = 1 for every 1 <= k <= l/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t l = f.size() - 1;
  if (l == 0) return false;
  if (l == 1) return true;
  const Poly x{0, 1};
  Poly frob = x;  // x^{p^k} mod f
  for (std::size_t k = 1; k <= l / 2; ++k) {
    frob = poly_powmod(frob, p, f, p);
    const Poly g = poly_gcd(f, poly_sub(frob, x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

/// The field F_q with q = p^l and odd prime p.
///
/// Immutable after construction; use make_field() to obtain a shared handle.
class Field {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;
  static constexpr std::uint32_t kTableOrder = 512;

  Field(std::uint32_t p, std::uint32_t l) : p_(p), l_(l) {
    if (p < 3 || !detail::is_prime(p)) {
      throw std::invalid_argument("characteristic must be an odd prime, got " +
                                  std::to_string(p));
    }
    if (l < 1) throw std::invalid_argument("extension degree must be >= 1");
    q_ = static_cast<std::uint32_t>(detail::checked_pow(p, l, kMaxOrder));
    select_modulus();
    build_tables();
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return l_; }
  std::uint32_t order() const { return q_; }

  /// Monic modulus, constant term first, length l + 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  /// "p^l" rendering used in configs and reports.
  std::string name() const {
    return std::to_string(p_) + "^" + std::to_string(l_);
  }

  Element zero() const { return Element{0}; }
  Element one() const { return Element{1}; }

  /// Image of an integer in the prime subfield.
  Element from_int(std::int64_t n) const {
    const std::int64_t r = ((n % p_) + p_) % p_;
    return Element{static_cast<std::uint32_t>(r)};
  }

  Element from_coefficients(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() != l_) {
      throw std::invalid_argument("coefficient vector must have length l");
    }
    std::uint32_t idx = 0;
    for (std::size_t i = l_; i-- > 0;) {
      if (coeffs[i] >= p_) throw std::invalid_argument("coefficient not reduced mod p");
      idx = idx * p_ + coeffs[i];
    }
    return Element{idx};
  }

  std::vector<std::uint32_t> coefficients(Element a) const {
    std::vector<std::uint32_t> out(l_);
    std::uint32_t v = a.index();
    for (std::uint32_t i = 0; i < l_; ++i) {
      out[i] = v % p_;
      v /= p_;
    }
    return out;
  }

  Element add(Element a, Element b) const {
    if (!add_table_.empty()) return Element{add_table_[a.index() * q_ + b.index()]};
    return Element{add_digits(a.index(), b.index())};
  }
  Element neg(Element a) const { return Element{neg_[a.index()]}; }
  Element sub(Element a, Element b) const { return add(a, neg(b)); }

  Element mul(Element a, Element b) const {
    if (!mul_table_.empty()) return Element{mul_table_[a.index() * q_ + b.index()]};
    if (a.index() == 0 || b.index() == 0) return zero();
    std::uint32_t e = log_[a.index()] + log_[b.index()];
    if (e >= q_ - 1) e -= q_ - 1;
    return Element{exp_[e]};
  }

  Element inv(Element a) const {
    if (a.index() == 0) throw std::domain_error("inverse of zero in F_q");
    const std::uint32_t e = log_[a.index()];
    return Element{exp_[e == 0 ? 0 : q_ - 1 - e]};
  }

  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  Element pow(Element a, std::int64_t e) const {
    if (a.index() == 0) {
      if (e < 0) throw std::domain_error("negative power of zero in F_q");
      return e == 0 ? one() : zero();
    }
    const std::int64_t n = q_ - 1;
    const std::int64_t k = ((std::int64_t{log_[a.index()]} * (e % n)) % n + n) % n;
    return Element{exp_[static_cast<std::size_t>(k)]};
  }

  /// Absolute trace to the prime field, as a residue in [0, p).
  std::uint32_t trace(Element a) const { return trace_[a.index()]; }

  bool is_square(Element a) const { return is_square_[a.index()] != 0; }

  /// First square root of -1 in canonical order; present iff q = 1 mod 4.
  std::optional<Element> sqrt_of_minus_one() const {
    const Element minus_one = neg(one());
    for (std::uint32_t i = 0; i < q_; ++i) {
      if (mul(Element{i}, Element{i}) == minus_one) return Element{i};
    }
    return std::nullopt;
  }

  /// Generator of the multiplicative group used for the log tables.
  Element primitive_element() const { return Element{exp_[1 % (q_ - 1)]}; }

  /// Multiplicative order of a nonzero element.
  std::uint32_t multiplicative_order(Element a) const {
    if (a.index() == 0) throw std::domain_error("order of zero");
    std::uint32_t n = 1;
    for (Element x = a; x != one(); x = mul(x, a)) ++n;
    return n;
  }

  /// Product computed from the polynomial representation, bypassing tables.
  Element mul_reference(Element a, Element b) const {
    detail::Poly pa = to_poly(a.index()), pb = to_poly(b.index());
    return Element{from_poly(detail::poly_mod(detail::poly_mul(pa, pb, p_), modulus_, p_))};
  }

 private:
  detail::Poly to_poly(std::uint32_t idx) const {
    detail::Poly out;
    for (std::uint32_t i = 0; i < l_; ++i) {
      out.push_back(idx % p_);
      idx /= p_;
    }
    detail::trim(out);
    return out;
  }

  std::uint32_t from_poly(const detail::Poly& a) const {
    std::uint32_t idx = 0;
    for (std::size_t i = a.size(); i-- > 0;) idx = idx * p_ + a[i];
    return idx;
  }

  std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < l_; ++i) {
      out += ((a % p_ + b % p_) % p_) * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return out;
  }

  std::uint32_t neg_digits(std::uint32_t a) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < l_; ++i) {
      out += ((p_ - a % p_) % p_) * scale;
      a /= p_;
      scale *= p_;
    }
    return out;
  }

  void select_modulus() {
    // Monic x^l + sum c_i x^i, lower coefficients scanned in index order.
    for (std::uint32_t low = 0; low < q_; ++low) {
      detail::Poly f = to_poly(low);
      f.resize(l_ + 1, 0);
      f[l_] = 1;
      if (detail::is_irreducible(f, p_)) {
        modulus_ = f;
        return;
      }
    }
    throw std::logic_error("no irreducible polynomial found");
  }

  void build_tables() {
    neg_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) neg_[a] = neg_digits(a);

    // Primitive element: smallest index g with g^{(q-1)/r} != 1 for all r | q-1.
    const auto factors = detail::prime_factors(q_ - 1);
    std::uint32_t generator = 0;
    for (std::uint32_t g = 1; g < q_ && generator == 0; ++g) {
      bool primitive = true;
      for (auto r : factors) {
        const detail::Poly t = detail::poly_powmod(to_poly(g), (q_ - 1) / r, modulus_, p_);
        if (t == detail::Poly{1}) {
          primitive = false;
          break;
        }
      }
      if (primitive) generator = g;
    }
    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    detail::Poly cur{1};
    const detail::Poly gen = to_poly(generator);
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      const std::uint32_t idx = from_poly(cur);
      exp_[k] = idx;
      log_[idx] = k;
      cur = detail::poly_mod(detail::poly_mul(cur, gen, p_), modulus_, p_);
    }

    if (q_ <= kTableOrder) {
      add_table_.resize(std::size_t{q_} * q_);
      mul_table_.resize(std::size_t{q_} * q_);
      for (std::uint32_t a = 0; a < q_; ++a) {
        for (std::uint32_t b = 0; b < q_; ++b) {
          add_table_[a * q_ + b] = static_cast<std::uint16_t>(add_digits(a, b));
          std::uint32_t prod = 0;
          if (a != 0 && b != 0) {
            std::uint32_t e = log_[a] + log_[b];
            if (e >= q_ - 1) e -= q_ - 1;
            prod = exp_[e];
          }
          mul_table_[a * q_ + b] = static_cast<std::uint16_t>(prod);
        }
      }
    }

    trace_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) {
      Element acc = zero(), term{a};
      for (std::uint32_t k = 0; k < l_; ++k) {
        acc = add(acc, term);
        term = pow(term, p_);
      }
      if (acc.index() >= p_) throw std::logic_error("trace left the prime field");
      trace_[a] = acc.index();
    }

    is_square_.assign(q_, 0);
    for (std::uint32_t a = 1; a < q_; ++a) is_square_[mul(Element{a}, Element{a}).index()] = 1;
  }

  std::uint32_t p_, l_, q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> neg_, exp_, log_, trace_;
  std::vector<std::uint16_t> add_table_, mul_table_;
  std::vector<std::uint8_t> is_square_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(std::int64_t p, std::int64_t l) {
  if (p == 2) throw std::invalid_argument("characteristic 2 is not supported");
  if (p < 3 || !detail::is_prime(static_cast<std::uint64_t>(p))) {
    throw std::invalid_argument("characteristic must be an odd prime, got " +
                                std::to_string(p));
  }
  if (l <= 0) throw std::invalid_argument("extension degree must be positive");
  return std::make_shared<const Field>(static_cast<std::uint32_t>(p),
                                       static_cast<std::uint32_t>(l));
}

/// Parses "p^l" or a plain prime power "q" into a field.
inline FieldPtr parse_field(std::string_view text) {
  auto to_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty() || s.size() > 9) throw std::invalid_argument("bad field spec '" + std::string(text) + "'");
    std::int64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad field spec '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (const auto caret = text.find('^'); caret != std::string_view::npos) {
    return make_field(to_int(text.substr(0, caret)), to_int(text.substr(caret + 1)));
  }
  const std::int64_t q = to_int(text);
  if (q < 3) throw std::invalid_argument("field order must be an odd prime power, got " + std::string(text));
  const auto factors = detail::prime_factors(static_cast<std::uint64_t>(q));
  if (factors.size() != 1) {
    throw std::invalid_argument("field order must be a prime power, got " + std::string(text));
  }
  std::int64_t l = 0;
  for (std::int64_t n = q; n > 1; n /= static_cast<std::int64_t>(factors[0])) ++l;
  return make_field(static_cast<std::int64_t>(factors[0]), l);
}

/// All odd prime powers in [3, limit], ascending.
inline std::vector<std::uint32_t> odd_prime_powers(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 3; q <= limit; q += 2) {
    if (detail::prime_factors(q).size() == 1) out.push_back(q);
  }
  return out;
}

}  // namespace ffext

#endif  // FFEXT_FINITE_FIELD_HPP_
