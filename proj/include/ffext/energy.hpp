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

#ifndef FFEXT_ENERGY_HPP_
#define FFEXT_ENERGY_HPP_

// Additive energy of subsets of the paraboloid and the character-sum
// decomposition used to bound it.
//
// Everything here works from the xbar coordinates of the members of E, so
// subsets of paraboloids far too large to enumerate are still usable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffext/characters.hpp"
#include "ffext/finite_field.hpp"
#include "ffext/geometry.hpp"

namespace ffext {

/// r_E(v) = #{(x, y) in E^2 : x + y = v}, stored sparsely as (index of v in
/// F_q^d, count) sorted by index.
struct RepresentationFunction {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [v, c] : entries) s += c;
    return s;
  }

  /// sum_v r_E(v)^2
  std::uint64_t energy() const {
    std::uint64_t s = 0;
    for (const auto& [v, c] : entries) s += c * c;
    return s;
  }
};

namespace detail {

// xbar coordinates and xbar.xbar for each member of E.
struct LiftedSubset {
  unsigned k = 0;  // d - 1
  std::vector<Element> coords;
  std::vector<Element> norms;

  std::size_t size() const { return norms.size(); }
  std::span<const Element> at(std::size_t i) const { return {coords.data() + i * k, k}; }
};

inline Element dot(const Field& f, std::span<const Element> a, std::span<const Element> b) {
  Element acc = f.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

inline LiftedSubset lift(const Field& field, unsigned d, const SubsetOfS& subset) {
  if (subset.q() != field.order() || subset.dim() != d) {
    throw std::invalid_argument("subset does not belong to this paraboloid");
  }
  const std::uint32_t q = field.order();
  LiftedSubset out;
  out.k = d - 1;
  out.coords.resize(subset.size() * out.k);
  out.norms.resize(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    std::span<Element> x(out.coords.data() + i * out.k, out.k);
    std::uint64_t idx = subset.members()[i];
    for (unsigned j = out.k; j-- > 0;) {
      x[j] = Element{static_cast<std::uint32_t>(idx % q)};
      idx /= q;
    }
    out.norms[i] = dot(field, x, x);
  }
  return out;
}

}  // namespace detail

/// r_E via the sorted list of pair sums.
inline RepresentationFunction representation_function(const Field& field, unsigned d,
                                                      const SubsetOfS& subset) {
  const auto e = detail::lift(field, d, subset);
  const std::uint32_t q = field.order();
  const std::size_t n = e.size();
  auto key = [&](std::size_t i, std::size_t j) {
    const auto x = e.at(i), y = e.at(j);
    std::uint64_t v = 0;
    for (unsigned c = 0; c < e.k; ++c) v = v * q + field.add(x[c], y[c]).index();
    return v * q + field.add(e.norms[i], e.norms[j]).index();
  };
  std::vector<std::uint64_t> off;
  off.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) off.push_back(key(i, j));
  }
  std::vector<std::uint64_t> diag;
  diag.reserve(n);
  for (std::size_t i = 0; i < n; ++i) diag.push_back(key(i, i));
  std::sort(off.begin(), off.end());
  std::sort(diag.begin(), diag.end());

  // Ordered pairs: each off-diagonal sum counts twice, each diagonal once.
  RepresentationFunction r;
  std::size_t a = 0, b = 0;
  while (a < off.size() || b < diag.size()) {
    const std::uint64_t v = (b == diag.size() || (a < off.size() && off[a] < diag[b])) ? off[a] : diag[b];
    std::uint64_t count = 0;
    while (a < off.size() && off[a] == v) {
      count += 2;
      ++a;
    }
    while (b < diag.size() && diag[b] == v) {
      count += 1;
      ++b;
    }
    r.entries.emplace_back(v, count);
  }
  return r;
}

/// Lambda_4(E) = #{(x, y, z, w) in E^4 : x + y = z + w}.
inline std::uint64_t lambda4(const Field& field, unsigned d, const SubsetOfS& subset) {
  return representation_function(field, d, subset).energy();
}

/// ||(E dsigma)^v||_{L^4(dm)} = q^{d/4} |S|^{-1} Lambda_4(E)^{1/4}.
inline double l4_norm_via_energy(std::uint32_t q, unsigned d, std::uint64_t energy) {
  const double qd = static_cast<double>(q);
  const double surface = std::pow(qd, static_cast<double>(d) - 1.0);
  return std::pow(qd, d / 4.0) / surface * std::pow(static_cast<double>(energy), 0.25);
}

inline double l4_norm_via_energy(const Field& field, unsigned d, const SubsetOfS& subset) {
  return l4_norm_via_energy(field.order(), d, lambda4(field, d, subset));
}

enum class Parity { kEven, kOdd };

inline const char* to_string(Parity p) { return p == Parity::kEven ? "even" : "odd"; }

/// Hypotheses of the energy bound for the chosen parity; empty when they
/// hold, otherwise a description of the violation.
inline std::string energy_bound_precondition(const Field& field, unsigned d, Parity parity) {
  if (parity == Parity::kEven) {
    if (d < 4 || d % 2 != 0) return "even-dimension bound needs d >= 4 even, got d = " + std::to_string(d);
    return {};
  }
  if (d % 2 == 0) return "odd-dimension bound needs odd d, got d = " + std::to_string(d);
  if (field.characteristic() % 4 != 3) {
    return "odd-dimension bound needs p = 3 mod 4, got p = " + std::to_string(field.characteristic());
  }
  if ((field.degree() * (d - 1)) % 4 == 0) {
    return "odd-dimension bound needs l(d-1) not divisible by 4, got l(d-1) = " +
           std::to_string(field.degree() * (d - 1));
  }
  return {};
}

struct EnergyBoundReport {
  std::uint64_t size = 0;
  std::uint64_t lambda4 = 0;
  double trivial = 0.0;       // |E|^3
  double cubic_over_q = 0.0;  // q^{-1} |E|^3
  double middle = 0.0;        // q^{(d-2)/4} |E|^{5/2}, or q^{(d-3)/4} |E|^{5/2} for odd d
  double quadratic = 0.0;     // q^{(d-2)/2} |E|^2
  double bound = 0.0;         // min{trivial, cubic_over_q + middle + quadratic}
  double ratio = 0.0;         // lambda4 / bound
  std::string branch;         // term realizing the bound
  std::string regime;         // size regime from the piecewise table
  bool precondition_ok = true;
  std::string warning;
};

/// Size regime of |E| in the piecewise form of the energy bound.
inline std::string energy_regime(double size, double q, unsigned d, Parity parity) {
  const double dd = d;
  if (size <= std::pow(q, (dd - 2.0) / 2.0)) return "|E|^3";
  if (parity == Parity::kEven) {
    if (size <= std::pow(q, (dd + 2.0) / 2.0)) return "q^((d-2)/4)|E|^(5/2)";
    return "q^-1|E|^3";
  }
  if (size <= std::pow(q, (dd - 1.0) / 2.0)) return "q^((d-2)/2)|E|^2";
  if (size <= std::pow(q, (dd + 1.0) / 2.0)) return "q^((d-3)/4)|E|^(5/2)";
  return "q^-1|E|^3";
}

inline EnergyBoundReport energy_bound_report(const Field& field, unsigned d, Parity parity,
                                             std::uint64_t size, std::uint64_t energy) {
  EnergyBoundReport rep;
  rep.size = size;
  rep.lambda4 = energy;
  rep.warning = energy_bound_precondition(field, d, parity);
  rep.precondition_ok = rep.warning.empty();
  const double q = field.order();
  const double n = static_cast<double>(size);
  const double dd = d;
  rep.trivial = n * n * n;
  rep.cubic_over_q = rep.trivial / q;
  const double mid_exp = parity == Parity::kEven ? (dd - 2.0) / 4.0 : (dd - 3.0) / 4.0;
  rep.middle = std::pow(q, mid_exp) * std::pow(n, 2.5);
  rep.quadratic = std::pow(q, (dd - 2.0) / 2.0) * n * n;
  const double sum = rep.cubic_over_q + rep.middle + rep.quadratic;
  rep.bound = std::min(rep.trivial, sum);
  rep.ratio = rep.bound > 0.0 ? static_cast<double>(energy) / rep.bound : 0.0;
  if (size == 0) {
    rep.branch = "empty";
  } else if (rep.trivial <= sum) {
    rep.branch = "|E|^3";
  } else if (rep.cubic_over_q >= rep.middle && rep.cubic_over_q >= rep.quadratic) {
    rep.branch = "q^-1|E|^3";
  } else if (rep.middle >= rep.quadratic) {
    rep.branch = parity == Parity::kEven ? "q^((d-2)/4)|E|^(5/2)" : "q^((d-3)/4)|E|^(5/2)";
  } else {
    rep.branch = "q^((d-2)/2)|E|^2";
  }
  rep.regime = size == 0 ? "empty" : energy_regime(n, q, d, parity);
  return rep;
}

/// Lambda_4(E) against min{|E|^3, q^{-1}|E|^3 + q^{(d-2)/4}|E|^{5/2} +
/// q^{(d-2)/2}|E|^2} (even d) or the same with q^{(d-3)/4} (odd d). A
/// violated hypothesis is reported in the warning field.
inline EnergyBoundReport check_lemma_key(const Field& field, unsigned d, const SubsetOfS& subset,
                                         Parity parity) {
  return energy_bound_report(field, d, parity, subset.size(), lambda4(field, d, subset));
}

/// The decomposition M(x) = I + II for a fixed x in Ebar, where
/// M(x) = sum_z |sum_{y in Ebar, s != 0} chi(s phi(x, y, z))|^2 and
/// phi(x, y, z) = x.y - y.z - x.z + z.z.
struct ProofTrace {
  std::int64_t m_exact = 0;       // M(x), exact integer
  std::int64_t i_exact = 0;       // s = s' part, exact integer from the full sum
  std::int64_t i_formula = 0;     // q^{d-1}(q-1)|Ebar|
  bool i_is_integer = false;      // the s = s' character sum collapsed to a rational integer
  Complex ii_direct;              // s != s' part, summed over z, y, y', s, s'
  Complex ii_closed;              // z-sum replaced by the completed-square closed form
  Complex ii_gamma;               // additionally summed over a in closed form
  Complex g1_power;               // G_1^{d-1}
  bool odd_hypotheses = false;    // d odd, p = 3 mod 4, l(d-1) not divisible by 4
  double ii_bound = 0.0;          // q^{(d+1)/2}|E|^2 (odd) or q^{d/2}(q-2)|E|^2 (even)
};

inline ProofTrace proof_trace_terms(const CharacterTable& chars, unsigned d, const SubsetOfS& subset,
                                    std::uint64_t x_member) {
  const Field& f = chars.field();
  if (!subset.contains(x_member)) throw std::invalid_argument("x must be a member of E");
  const auto e = detail::lift(f, d, subset);
  const std::uint32_t q = f.order(), p = f.characteristic();
  const unsigned k = d - 1;
  const std::size_t n = e.size();
  const std::size_t xi = static_cast<std::size_t>(
      std::lower_bound(subset.members().begin(), subset.members().end(), x_member) -
      subset.members().begin());
  const auto x = e.at(xi);

  ProofTrace out;
  std::uint64_t zcount = 1;
  for (unsigned j = 0; j < k; ++j) zcount *= q;

  PhaseHistogram hist_i(p), hist_ii(p);
  std::vector<Element> z(k, f.zero());
  std::vector<Element> phi(n);
  std::vector<std::uint32_t> tr_s(n * q);  // tr(s phi_y) for each y, s
  for (std::uint64_t zi = 0; zi < zcount; ++zi) {
    std::uint64_t t = zi;
    for (unsigned j = k; j-- > 0;) {
      z[j] = Element{static_cast<std::uint32_t>(t % q)};
      t /= q;
    }
    const Element xz = detail::dot(f, x, z), zz = detail::dot(f, z, z);
    std::int64_t amplitude = 0;  // sum_{y, s != 0} chi(s phi_y), an integer
    for (std::size_t y = 0; y < n; ++y) {
      const auto yv = e.at(y);
      phi[y] = f.add(f.sub(f.sub(detail::dot(f, x, yv), detail::dot(f, yv, z)), xz), zz);
      amplitude += phi[y].index() == 0 ? static_cast<std::int64_t>(q) - 1 : -1;
      for (std::uint32_t s = 1; s < q; ++s) tr_s[y * q + s] = f.trace(f.mul(Element{s}, phi[y]));
    }
    out.m_exact += amplitude * amplitude;
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t yp = 0; yp < n; ++yp) {
        for (std::uint32_t s = 1; s < q; ++s) {
          const std::uint32_t a = tr_s[y * q + s];
          hist_i.add((a + p - tr_s[yp * q + s]) % p);
          for (std::uint32_t sp = 1; sp < q; ++sp) {
            if (sp == s) continue;
            hist_ii.add((a + p - tr_s[yp * q + sp]) % p);
          }
        }
      }
    }
  }
  const auto i_int = hist_i.as_integer();
  out.i_is_integer = i_int.has_value();
  out.i_exact = i_int.value_or(0);
  out.i_formula = static_cast<std::int64_t>(zcount) * (q - 1) * static_cast<std::int64_t>(n);
  out.ii_direct = hist_ii.value();

  // II with the z-sum in closed form: for a = s, b = s'/s,
  // t = a(1-b), beta = a(-y - x + b(y' + x)), times chi(a(y - b y').x).
  std::vector<Element> beta(k);
  Complex closed{};
  for (std::size_t y = 0; y < n; ++y) {
    const auto yv = e.at(y);
    for (std::size_t yp = 0; yp < n; ++yp) {
      const auto ypv = e.at(yp);
      for (std::uint32_t bi = 2; bi < q; ++bi) {
        const Element b{bi};  // indices 0 and 1 are the elements 0 and 1
        for (std::uint32_t ai = 1; ai < q; ++ai) {
          const Element a{ai};
          for (unsigned j = 0; j < k; ++j) {
            const Element inner = f.add(f.neg(f.add(yv[j], x[j])), f.mul(b, f.add(ypv[j], x[j])));
            beta[j] = f.mul(a, inner);
          }
          Element lin = f.zero();
          for (unsigned j = 0; j < k; ++j) lin = f.add(lin, f.mul(f.sub(yv[j], f.mul(b, ypv[j])), x[j]));
          const Element t = f.mul(a, f.sub(f.one(), b));
          closed += chars.chi(f.mul(a, lin)) * chars.completed_square_closed(t, beta);
        }
      }
    }
  }
  out.ii_closed = closed;

  // II with the a-sum done too: Gamma = |(-y - x) + b(y' + x)|^2 / (-4(1-b)) + (y - b y').x,
  // and sum_{a != 0} eta^{d-1}(a) chi(a Gamma) is q - 1 or -1 (odd d) or eta(Gamma) G_1 (even d).
  out.g1_power = ipow(chars.g1(), k);
  Complex gamma_sum{};
  for (std::size_t y = 0; y < n; ++y) {
    const auto yv = e.at(y);
    for (std::size_t yp = 0; yp < n; ++yp) {
      const auto ypv = e.at(yp);
      for (std::uint32_t bi = 2; bi < q; ++bi) {
        const Element b{bi};
        Element norm = f.zero(), lin = f.zero();
        for (unsigned j = 0; j < k; ++j) {
          const Element c = f.add(f.neg(f.add(yv[j], x[j])), f.mul(b, f.add(ypv[j], x[j])));
          norm = f.add(norm, f.mul(c, c));
          lin = f.add(lin, f.mul(f.sub(yv[j], f.mul(b, ypv[j])), x[j]));
        }
        const Element one_minus_b = f.sub(f.one(), b);
        const Element gamma =
            f.add(f.div(norm, f.mul(f.from_int(-4), one_minus_b)), lin);
        if (k % 2 == 0) {
          gamma_sum += gamma.index() == 0 ? static_cast<double>(q - 1) : -1.0;
        } else {
          gamma_sum += static_cast<double>(chars.eta(one_minus_b) * chars.eta(gamma)) * chars.g1();
        }
      }
    }
  }
  out.ii_gamma = out.g1_power * gamma_sum;

  out.odd_hypotheses = energy_bound_precondition(f, d, Parity::kOdd).empty();
  const double qd = q, nn = static_cast<double>(n);
  out.ii_bound = (d % 2 == 1) ? std::pow(qd, (d + 1.0) / 2.0) * nn * nn
                              : std::pow(qd, d / 2.0) * (qd - 2.0) * nn * nn;
  return out;
}

}  // namespace ffext

#endif  // FFEXT_ENERGY_HPP_
