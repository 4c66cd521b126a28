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

#ifndef FFEXT_FOURIER_HPP_
#define FFEXT_FOURIER_HPP_

// Transforms and norms on F_q^d and on the paraboloid.
//
// Conventions:
//   space side (F_q^d, dx), dx = q^{-d} counting measure
//     hat(f)(m) = q^{-d} sum_x chi(-x.m) f(x)
//   frequency side (F_q^d, dm), dm = counting measure
//     hat_dual(g)(x) = sum_m chi(-x.m) g(m)
//   surface side (S, dsigma), dsigma = |S|^{-1} counting measure on S
//     extend(f)(m) = (f dsigma)^v(m) = |S|^{-1} sum_{x in S} chi(x.m) f(x)
//
// All transforms are direct sums over precomputed trace-of-product tables.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ffext/characters.hpp"
#include "ffext/finite_field.hpp"
#include "ffext/geometry.hpp"

namespace ffext {

/// Complex function on F_q^d in canonical point order.
struct GridFunction {
  std::uint32_t q = 0;
  unsigned d = 0;
  std::vector<Complex> values;
};

/// Complex function on S in the canonical order of S.
struct SurfaceFunction {
  std::uint32_t q = 0;
  unsigned d = 0;
  std::vector<Complex> values;
};

enum class Measure { kDx, kDm };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Hoelder conjugate p' with 1/p + 1/p' = 1.
inline double dual_exponent(double p) {
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

/// sum |v|^p, or max |v| for p = infinity.
inline double power_sum(std::span<const Complex> v, double p) {
  if (p < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
  double acc = 0.0;
  if (std::isinf(p)) {
    for (const auto& z : v) acc = std::max(acc, std::abs(z));
    return acc;
  }
  if (p == 2.0) {
    for (const auto& z : v) acc += std::norm(z);
  } else if (p == 4.0) {
    for (const auto& z : v) {
      const double n = std::norm(z);
      acc += n * n;
    }
  } else {
    const double half = p / 2.0;
    for (const auto& z : v) {
      const double n = std::norm(z);
      if (n > 0.0) acc += std::pow(n, half);
    }
  }
  return acc;
}

/// (weight * sum |v|^p)^{1/p}; max modulus for p = infinity.
inline double weighted_norm(std::span<const Complex> v, double p, double weight) {
  const double s = power_sum(v, p);
  if (std::isinf(p)) return s;
  if (p == 2.0) return std::sqrt(weight * s);
  return std::pow(weight * s, 1.0 / p);
}

inline double norm_grid(const GridFunction& f, double p, Measure measure) {
  const double weight =
      measure == Measure::kDx ? std::pow(static_cast<double>(f.q), -static_cast<double>(f.d)) : 1.0;
  return weighted_norm(f.values, p, weight);
}

inline double norm_surface(const SurfaceFunction& f, double p) {
  return weighted_norm(f.values, p, 1.0 / static_cast<double>(f.values.size()));
}

/// tr(a b) for all pairs, the building block of chi(x.m).
class TraceProductTable {
 public:
  static constexpr std::uint32_t kTableOrder = 1024;

  explicit TraceProductTable(const Field& field) : field_(&field), q_(field.order()) {
    if (q_ <= kTableOrder) {
      table_.resize(std::size_t{q_} * q_);
      for (std::uint32_t a = 0; a < q_; ++a) {
        for (std::uint32_t b = 0; b < q_; ++b) {
          table_[a * q_ + b] = static_cast<std::uint16_t>(field.trace(field.mul(Element{a}, Element{b})));
        }
      }
    }
  }

  std::uint32_t operator()(Element a, Element b) const {
    if (!table_.empty()) return table_[a.index() * q_ + b.index()];
    return field_->trace(field_->mul(a, b));
  }

  /// tr(x.m) mod p.
  std::uint32_t dot(std::span<const Element> x, std::span<const Element> m) const {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (*this)(x[i], m[i]);
    return acc % field_->characteristic();
  }

 private:
  const Field* field_;
  std::uint32_t q_;
  std::vector<std::uint16_t> table_;
};

namespace detail {

inline std::vector<Element> all_points(const PointSpace& space) {
  const std::size_t n = static_cast<std::size_t>(space.size());
  std::vector<Element> out(n * space.dim());
  for (std::size_t i = 0; i < n; ++i) {
    space.decode(i, std::span<Element>(out.data() + i * space.dim(), space.dim()));
  }
  return out;
}

// out[m] = scale * sum_x w^{sign tr(x.m)} in[x] over F_q^d.
inline std::vector<Complex> grid_transform(const CharacterTable& chars, const PointSpace& space,
                                           std::span<const Complex> in, int sign, double scale) {
  if (in.size() != space.size()) throw std::invalid_argument("grid function has wrong length");
  const std::uint32_t p = chars.field().characteristic();
  const unsigned d = space.dim();
  const TraceProductTable tr(chars.field());
  const auto pts = all_points(space);
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  std::vector<Complex> bucket(p);
  for (std::size_t m = 0; m < n; ++m) {
    std::fill(bucket.begin(), bucket.end(), Complex{});
    const std::span<const Element> pm(pts.data() + m * d, d);
    for (std::size_t x = 0; x < n; ++x) {
      if (in[x] == Complex{}) continue;
      bucket[tr.dot(std::span<const Element>(pts.data() + x * d, d), pm)] += in[x];
    }
    Complex acc{};
    for (std::uint32_t k = 0; k < p; ++k) acc += bucket[k] * chars.root(sign > 0 ? k : (p - k) % p);
    out[m] = scale * acc;
  }
  return out;
}

}  // namespace detail

/// Space-side transform: q^{-d} sum_x chi(-x.m) f(x).
inline GridFunction hat(const CharacterTable& chars, const GridFunction& f) {
  const PointSpace space(chars.field_ptr(), f.d);
  const double scale = 1.0 / static_cast<double>(space.size());
  return {f.q, f.d, detail::grid_transform(chars, space, f.values, -1, scale)};
}

/// Frequency-side transform: sum_m chi(-x.m) g(m). This is the transform
/// under which the kernel of dsigma minus the delta at the origin becomes
/// q S(x) - 1.
inline GridFunction hat_dual(const CharacterTable& chars, const GridFunction& g) {
  const PointSpace space(chars.field_ptr(), g.d);
  return {g.q, g.d, detail::grid_transform(chars, space, g.values, -1, 1.0)};
}

/// The extension operator f -> (f dsigma)^v and its adjoint g -> hat_dual(g)|_S.
///
/// Keeps a dense phase matrix tr(x.m) when it fits in kMatrixLimit bytes.
class ExtensionOperator {
 public:
  static constexpr std::uint64_t kMatrixLimit = std::uint64_t{1} << 26;

  ExtensionOperator(const Paraboloid& surface, const CharacterTable& chars)
      : chars_(&chars),
        field_(surface.field_ptr()),
        q_(surface.field().order()),
        d_(surface.dim()),
        p_(surface.field().characteristic()),
        grid_size_(static_cast<std::size_t>(surface.ambient().size())),
        surface_size_(static_cast<std::size_t>(surface.size())),
        tr_(*field_) {
    grid_points_ = detail::all_points(surface.ambient());
    surface_points_.resize(surface_size_ * d_);
    for (std::size_t i = 0; i < surface_size_; ++i) {
      surface.point(i, std::span<Element>(surface_points_.data() + i * d_, d_));
    }
    if (p_ <= 256 && std::uint64_t{grid_size_} * surface_size_ <= kMatrixLimit) {
      phases_.resize(grid_size_ * surface_size_);
      for (std::size_t m = 0; m < grid_size_; ++m) {
        for (std::size_t x = 0; x < surface_size_; ++x) {
          phases_[m * surface_size_ + x] =
              static_cast<std::uint8_t>(tr_.dot(surface_point(x), grid_point(m)));
        }
      }
    }
  }

  std::uint32_t q() const { return q_; }
  unsigned dim() const { return d_; }
  std::size_t grid_size() const { return grid_size_; }
  std::size_t surface_size() const { return surface_size_; }
  const CharacterTable& characters() const { return *chars_; }

  std::span<const Element> grid_point(std::size_t m) const {
    return {grid_points_.data() + m * d_, d_};
  }
  std::span<const Element> surface_point(std::size_t x) const {
    return {surface_points_.data() + x * d_, d_};
  }

  /// tr(x.m) mod p for grid index m and surface index x.
  std::uint32_t phase(std::size_t m, std::size_t x) const {
    if (!phases_.empty()) return phases_[m * surface_size_ + x];
    return tr_.dot(surface_point(x), grid_point(m));
  }

  /// (f dsigma)^v on all of F_q^d.
  std::vector<Complex> apply(std::span<const Complex> f) const {
    if (f.size() != surface_size_) throw std::invalid_argument("surface function has wrong length");
    std::vector<std::size_t> support;
    for (std::size_t x = 0; x < surface_size_; ++x) {
      if (f[x] != Complex{}) support.push_back(x);
    }
    std::vector<Complex> out(grid_size_);
    std::vector<Complex> bucket(p_);
    const double scale = 1.0 / static_cast<double>(surface_size_);
    for (std::size_t m = 0; m < grid_size_; ++m) {
      std::fill(bucket.begin(), bucket.end(), Complex{});
      if (!phases_.empty()) {
        const std::uint8_t* row = phases_.data() + m * surface_size_;
        for (auto x : support) bucket[row[x]] += f[x];
      } else {
        for (auto x : support) bucket[phase(m, x)] += f[x];
      }
      Complex acc{};
      for (std::uint32_t k = 0; k < p_; ++k) acc += bucket[k] * chars_->root(k);
      out[m] = scale * acc;
    }
    return out;
  }

  /// Extension of the indicator of a subset, touching only its members.
  std::vector<Complex> apply_indicator(const SubsetOfS& subset) const {
    std::vector<Complex> out(grid_size_);
    std::vector<std::int64_t> bucket(p_);
    const double scale = 1.0 / static_cast<double>(surface_size_);
    for (std::size_t m = 0; m < grid_size_; ++m) {
      std::fill(bucket.begin(), bucket.end(), 0);
      for (auto x : subset.members()) ++bucket[phase(m, static_cast<std::size_t>(x))];
      Complex acc{};
      for (std::uint32_t k = 0; k < p_; ++k) acc += static_cast<double>(bucket[k]) * chars_->root(k);
      out[m] = scale * acc;
    }
    return out;
  }

  /// hat_dual(g) restricted to S: sum_m chi(-x.m) g(m) for x in S.
  std::vector<Complex> adjoint(std::span<const Complex> g) const {
    if (g.size() != grid_size_) throw std::invalid_argument("grid function has wrong length");
    std::vector<std::size_t> support;
    for (std::size_t m = 0; m < grid_size_; ++m) {
      if (g[m] != Complex{}) support.push_back(m);
    }
    std::vector<Complex> out(surface_size_);
    std::vector<Complex> bucket(p_);
    for (std::size_t x = 0; x < surface_size_; ++x) {
      std::fill(bucket.begin(), bucket.end(), Complex{});
      if (!phases_.empty()) {
        for (auto m : support) bucket[phases_[m * surface_size_ + x]] += g[m];
      } else {
        for (auto m : support) bucket[phase(m, x)] += g[m];
      }
      Complex acc{};
      for (std::uint32_t k = 0; k < p_; ++k) acc += bucket[k] * chars_->root((p_ - k) % p_);
      out[x] = acc;
    }
    return out;
  }

 private:
  const CharacterTable* chars_;
  FieldPtr field_;
  std::uint32_t q_;
  unsigned d_;
  std::uint32_t p_;
  std::size_t grid_size_;
  std::size_t surface_size_;
  TraceProductTable tr_;
  std::vector<Element> grid_points_;
  std::vector<Element> surface_points_;
  std::vector<std::uint8_t> phases_;
};

inline GridFunction extend(const ExtensionOperator& op, const SurfaceFunction& f) {
  return {op.q(), op.dim(), op.apply(f.values)};
}

inline GridFunction extend(const Paraboloid& surface, const CharacterTable& chars,
                           const SurfaceFunction& f) {
  const ExtensionOperator op(surface, chars);
  return extend(op, f);
}

/// Closed form of (dsigma)^v(m):
///   1                                                   m = 0
///   0                                                   m_d = 0, mbar != 0
///   q^{-(d-1)} chi(mbar.mbar / (-4 m_d)) eta^{d-1}(m_d) G_1^{d-1}   m_d != 0
inline Complex sigma_inverse_closed_form(const CharacterTable& chars, std::span<const Element> m) {
  const Field& f = chars.field();
  const unsigned d = static_cast<unsigned>(m.size());
  const Element md = m[d - 1];
  if (md.index() == 0) {
    const bool origin = std::all_of(m.begin(), m.end(), [](Element e) { return e.index() == 0; });
    return origin ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  }
  const double scale = std::pow(static_cast<double>(f.order()), -static_cast<double>(d - 1));
  return scale * chars.completed_square_closed(md, m.first(d - 1));
}

/// Sum over m of |(f dsigma)^v(m)|^2 against (q^d / |S|) ||f||^2_{L^2(S, dsigma)}.
struct L2Identity {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline L2Identity l2_identity_check(const ExtensionOperator& op, const SurfaceFunction& f) {
  const auto u = op.apply(f.values);
  const double fn = norm_surface(f, 2.0);
  return {power_sum(u, 2.0),
          static_cast<double>(op.grid_size()) / static_cast<double>(op.surface_size()) * fn * fn};
}

/// (g * k)(m) = sum_{m'} g(m') k(m - m') under the counting measure.
inline GridFunction convolve(const Field& field, const GridFunction& g, const GridFunction& k) {
  if (g.values.size() != k.values.size()) throw std::invalid_argument("convolution size mismatch");
  const std::uint32_t q = field.order();
  const unsigned d = g.d;
  const std::size_t n = g.values.size();
  std::vector<std::uint64_t> place(d, 1);
  for (unsigned i = d - 1; i-- > 0;) place[i] = place[i + 1] * q;
  GridFunction out{g.q, g.d, std::vector<Complex>(n)};
  std::vector<std::uint32_t> dm(d), dmp(d);
  for (std::size_t m = 0; m < n; ++m) {
    std::uint64_t t = m;
    for (unsigned i = d; i-- > 0;) {
      dm[i] = static_cast<std::uint32_t>(t % q);
      t /= q;
    }
    Complex acc{};
    for (std::size_t mp = 0; mp < n; ++mp) {
      if (g.values[mp] == Complex{}) continue;
      std::uint64_t u = mp, idx = 0;
      for (unsigned i = d; i-- > 0;) {
        dmp[i] = static_cast<std::uint32_t>(u % q);
        u /= q;
      }
      for (unsigned i = 0; i < d; ++i) idx += field.sub(Element{dm[i]}, Element{dmp[i]}).index() * place[i];
      acc += g.values[mp] * k.values[idx];
    }
    out.values[m] = acc;
  }
  return out;
}

}  // namespace ffext

#endif  // FFEXT_FOURIER_HPP_
