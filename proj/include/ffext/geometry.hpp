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

#ifndef FFEXT_GEOMETRY_HPP_
#define FFEXT_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffext/finite_field.hpp"

namespace ffext {

using Point = std::vector<Element>;

/// Raised when an enumeration would exceed the configured size cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// F_q^k with points indexed lexicographically, first coordinate most
/// significant.
class PointSpace {
 public:
  PointSpace(FieldPtr field, unsigned dim, std::uint64_t cap = UINT64_MAX / 64)
      : field_(std::move(field)), dim_(dim) {
    try {
      size_ = detail::checked_pow(field_->order(), dim_, cap);
    } catch (const std::length_error&) {
      throw CapExceeded("q^" + std::to_string(dim_) + " with q = " +
                        std::to_string(field_->order()) + " exceeds the enumeration cap " +
                        std::to_string(cap));
    }
  }

  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  unsigned dim() const { return dim_; }
  std::uint64_t size() const { return size_; }

  void decode(std::uint64_t index, std::span<Element> out) const {
    const std::uint32_t q = field_->order();
    for (unsigned i = dim_; i-- > 0;) {
      out[i] = Element{static_cast<std::uint32_t>(index % q)};
      index /= q;
    }
  }

  Point decode(std::uint64_t index) const {
    Point out(dim_);
    decode(index, out);
    return out;
  }

  std::uint64_t encode(std::span<const Element> coords) const {
    if (coords.size() != dim_) throw std::invalid_argument("point has wrong dimension");
    std::uint64_t idx = 0;
    for (Element c : coords) idx = idx * field_->order() + c.index();
    return idx;
  }

  Element dot(std::span<const Element> a, std::span<const Element> b) const {
    Element acc = field_->zero();
    for (std::size_t i = 0; i < a.size(); ++i) acc = field_->add(acc, field_->mul(a[i], b[i]));
    return acc;
  }

 private:
  FieldPtr field_;
  unsigned dim_;
  std::uint64_t size_ = 0;
};

/// The paraboloid S = {(xbar, xbar.xbar)} in F_q^d.
///
/// Points are not materialized: the point with index i is the lift of the
/// i-th vector xbar of F_q^{d-1}, so the canonical order of S is the
/// lexicographic order of xbar.
class Paraboloid {
 public:
  Paraboloid(FieldPtr field, unsigned d, std::uint64_t cap = kDefaultEnumerationCap)
      : ambient_(field, check_dim(d), cap), base_(field, d - 1) {}

  const Field& field() const { return ambient_.field(); }
  const FieldPtr& field_ptr() const { return ambient_.field_ptr(); }
  unsigned dim() const { return ambient_.dim(); }
  std::uint64_t size() const { return base_.size(); }

  /// F_q^d, the frequency side.
  const PointSpace& ambient() const { return ambient_; }
  /// F_q^{d-1}, the xbar coordinates.
  const PointSpace& base() const { return base_; }

  void point(std::uint64_t index, std::span<Element> out) const {
    base_.decode(index, out.first(dim() - 1));
    out[dim() - 1] = base_.dot(out.first(dim() - 1), out.first(dim() - 1));
  }

  Point point(std::uint64_t index) const {
    Point out(dim());
    point(index, out);
    return out;
  }

  bool contains(std::span<const Element> x) const {
    if (x.size() != dim()) return false;
    const auto xbar = x.first(dim() - 1);
    return base_.dot(xbar, xbar) == x[dim() - 1];
  }

  std::optional<std::uint64_t> index_of(std::span<const Element> x) const {
    if (!contains(x)) return std::nullopt;
    return base_.encode(x.first(dim() - 1));
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t i = 0; i < size(); ++i) out.push_back(point(i));
    return out;
  }

 private:
  static unsigned check_dim(unsigned d) {
    if (d < 2) throw std::invalid_argument("paraboloid dimension must be >= 2");
    return d;
  }

  PointSpace ambient_;
  PointSpace base_;
};

inline Paraboloid build_paraboloid(FieldPtr field, unsigned d,
                                   std::uint64_t cap = kDefaultEnumerationCap) {
  return Paraboloid(std::move(field), d, cap);
}

/// A subset of S, stored as the sorted indices of its members in the
/// canonical order of S.
class SubsetOfS {
 public:
  SubsetOfS() = default;
  SubsetOfS(std::uint32_t q, unsigned d, std::vector<std::uint64_t> members)
      : q_(q), d_(d), members_(std::move(members)) {
    universe_ = detail::checked_pow(q, d - 1, UINT64_MAX / 64);
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.back() >= universe_) {
      throw std::out_of_range("subset member outside S");
    }
  }

  static SubsetOfS full(std::uint32_t q, unsigned d) {
    const std::uint64_t n = detail::checked_pow(q, d - 1, UINT64_MAX / 64);
    std::vector<std::uint64_t> all(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
    return SubsetOfS(q, d, std::move(all));
  }

  std::uint32_t q() const { return q_; }
  unsigned dim() const { return d_; }
  /// |S|
  std::uint64_t universe() const { return universe_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const std::uint64_t> members() const { return members_; }

  bool contains(std::uint64_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }

  /// Bit i of the canonical order of S is bit (i % 8) of byte i / 8; bytes
  /// are written in order as two lowercase hex digits.
  std::string to_hex() const {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>((universe_ + 7) / 8), 0);
    for (auto i : members_) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
      out.push_back(kDigits[b >> 4]);
      out.push_back(kDigits[b & 15]);
    }
    return out;
  }

  static SubsetOfS from_hex(std::uint32_t q, unsigned d, const std::string& hex) {
    const std::uint64_t n = detail::checked_pow(q, d - 1, UINT64_MAX / 64);
    if (hex.size() != 2 * ((n + 7) / 8)) {
      throw std::invalid_argument("hex bit string has wrong length for |S| = " + std::to_string(n));
    }
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw std::invalid_argument("bad hex digit");
    };
    std::vector<std::uint64_t> members;
    for (std::size_t byte = 0; byte < hex.size() / 2; ++byte) {
      const unsigned v = nibble(hex[2 * byte]) << 4 | nibble(hex[2 * byte + 1]);
      for (unsigned bit = 0; bit < 8; ++bit) {
        if (v >> bit & 1u) {
          const std::uint64_t i = byte * 8 + bit;
          if (i >= n) throw std::invalid_argument("padding bits must be zero");
          members.push_back(i);
        }
      }
    }
    return SubsetOfS(q, d, std::move(members));
  }

  friend bool operator==(const SubsetOfS&, const SubsetOfS&) = default;

 private:
  std::uint32_t q_ = 0;
  unsigned d_ = 0;
  std::uint64_t universe_ = 0;
  std::vector<std::uint64_t> members_;
};

/// The isotropic subspace inside S built from a square root i of -1:
/// (s_1, i s_1, ..., s_n, i s_n, 0, ..., 0) with n = (d-2)/2 for even d and
/// n = (d-1)/2 for odd d. Absent when -1 is not a square in F_q.
inline std::optional<SubsetOfS> build_subspace_H(const Field& field, unsigned d) {
  if (d < 3) throw std::invalid_argument("subspace H needs d >= 3");
  const auto i = field.sqrt_of_minus_one();
  if (!i) return std::nullopt;
  const unsigned n = (d % 2 == 0) ? (d - 2) / 2 : (d - 1) / 2;
  const std::uint32_t q = field.order();
  const std::uint64_t count = detail::checked_pow(q, n, UINT64_MAX / 64);
  std::vector<std::uint64_t> members;
  members.reserve(static_cast<std::size_t>(count));
  std::vector<std::uint32_t> s(n, 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    std::uint64_t idx = 0;
    for (unsigned k = 0; k < n; ++k) {
      idx = idx * q + s[k];
      idx = idx * q + field.mul(*i, Element{s[k]}).index();
    }
    for (unsigned k = 2 * n; k < d - 1; ++k) idx *= q;
    members.push_back(idx);
    for (unsigned k = n; k-- > 0;) {
      if (++s[k] < q) break;
      s[k] = 0;
    }
  }
  return SubsetOfS(q, d, std::move(members));
}

/// Image of E under xbar -> xbar + t, which maps S onto itself.
inline SubsetOfS translate(const Paraboloid& surface, const SubsetOfS& subset,
                           std::span<const Element> shift) {
  const Field& f = surface.field();
  const PointSpace& base = surface.base();
  Point x(base.dim());
  std::vector<std::uint64_t> out;
  out.reserve(subset.size());
  for (auto i : subset.members()) {
    base.decode(i, x);
    for (unsigned k = 0; k < base.dim(); ++k) x[k] = f.add(x[k], shift[k]);
    out.push_back(base.encode(x));
  }
  return SubsetOfS(subset.q(), subset.dim(), std::move(out));
}

/// Both sides of |H| |S|^{-1} q^{(d-n)/r} <~ (|H| |S|^{-1})^{1/p} for a
/// subspace H of S with |H| = q^n.
struct NecessaryConditionSides {
  double left = 0.0;
  double right = 0.0;
  double n = 0.0;
};

inline NecessaryConditionSides necessary_condition_sides(const SubsetOfS& h, double p, double r) {
  if (h.empty()) throw std::invalid_argument("H must be nonempty");
  const double q = h.q();
  const double d = h.dim();
  const double density = static_cast<double>(h.size()) / static_cast<double>(h.universe());
  NecessaryConditionSides out;
  out.n = std::log(static_cast<double>(h.size())) / std::log(q);
  out.left = density * std::pow(q, (d - out.n) / r);
  out.right = std::pow(density, 1.0 / p);
  return out;
}

/// Smallest r allowed by a subspace of dimension n: p(d-n)/((p-1)(d-n-1)).
inline double necessary_r_threshold(double p, double d, double n) {
  return p * (d - n) / ((p - 1.0) * (d - n - 1.0));
}

}  // namespace ffext

#endif  // FFEXT_GEOMETRY_HPP_
