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


#ifndef FFEXT_NORMS_LAB_HPP_
#define FFEXT_NORMS_LAB_HPP_

// Lower-bound estimation of the extension constant R*(p -> r), the endpoint
// sweeps, and the checks on the kernel K = (dsigma)^v - delta_0.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffext/characters.hpp"
#include "ffext/energy.hpp"
#include "ffext/fourier.hpp"
#include "ffext/geometry.hpp"
#include "ffext/rng.hpp"

namespace ffext {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Least-squares slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return kNaN;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : kNaN;
}

/// ||u||_{L^r(dm)} / ||f||_{L^p(S, dsigma)} for u = (f dsigma)^v.
inline double ratio_of(std::span<const Complex> u, std::span<const Complex> f, double p, double r) {
  const double den = weighted_norm(f, p, 1.0 / static_cast<double>(f.size()));
  if (den == 0.0) throw std::invalid_argument("ratio: f must be nonzero");
  return weighted_norm(u, r, 1.0) / den;
}

inline double ratio(const ExtensionOperator& op, const SurfaceFunction& f, double p, double r) {
  return ratio_of(op.apply(f.values), f.values, p, r);
}

/// Extension ratio of the characteristic function of E.
inline double indicator_ratio(const ExtensionOperator& op, const SubsetOfS& e, double p, double r) {
  if (e.empty()) throw std::invalid_argument("ratio: E must be nonempty");
  const double density = static_cast<double>(e.size()) / static_cast<double>(op.surface_size());
  const double den = std::isinf(p) ? 1.0 : std::pow(density, 1.0 / p);
  return weighted_norm(op.apply_indicator(e), r, 1.0) / den;
}

/// ||hat_dual(g)|_S||_{L^{p'}(S, dsigma)} / ||g||_{L^{r'}(dm)}; by duality
/// every g bounds R*(p -> r) from below as well.
inline double restriction_ratio(const ExtensionOperator& op, const GridFunction& g, double p, double r) {
  const double den = weighted_norm(g.values, dual_exponent(r), 1.0);
  if (den == 0.0) throw std::invalid_argument("restriction ratio: g must be nonzero");
  const auto v = op.adjoint(g.values);
  return weighted_norm(v, dual_exponent(p), 1.0 / static_cast<double>(v.size())) / den;
}

/// Ratio of the indicator of an n-dimensional subspace H of S:
/// q^{(n-d+1)(1-1/p) + (d-n)/r}.
inline double subspace_witness_ratio(double q, double d, double n, double p, double r) {
  return std::pow(q, (n - d + 1.0) * (1.0 - 1.0 / p) + (d - n) / r);
}

enum class WitnessKind { kCharacteristic, kStructured, kGradient, kDual };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::kCharacteristic: return "characteristic";
    case WitnessKind::kStructured: return "structured";
    case WitnessKind::kGradient: return "gradient";
    case WitnessKind::kDual: return "dual";
  }
  return "unknown";
}

/// A test function on S: either the indicator of a subset or a complex vector.
struct Witness {
  WitnessKind kind = WitnessKind::kStructured;
  std::string label;
  std::optional<SubsetOfS> subset;
  std::vector<Complex> values;
};

/// The ratio of a witness, through the same code path used by the search.
inline double witness_ratio(const ExtensionOperator& op, const Witness& w, double p, double r) {
  if (w.subset) return indicator_ratio(op, *w.subset, p, r);
  return ratio_of(op.apply(w.values), w.values, p, r);
}

struct EstimateOptions {
  std::uint64_t seed = 1;
  /// Work budget; one unit is one (m, x) character term.
  std::uint64_t budget = 4'000'000'000;
  unsigned restarts = 50;
  unsigned max_iterations = 300;
  double gain_tol = 1e-6;
  double smoothing = 1e-9;
  std::size_t random_subsets = 200;
  /// All 2^|S| subsets are scanned when |S| is at most this.
  unsigned exhaustive_limit = 20;
  unsigned dual_random = 8;
  unsigned power_iterations = 60;
  bool gradient = true;
  bool dual = true;
};

struct NormEstimate {
  std::uint32_t q = 0;
  unsigned d = 0;
  double p = 0;
  double r = 0;
  double lower_bound = 0;       // ratio of the stored witness
  Witness witness;
  std::string method;           // pool that produced the witness
  double restricted_type = 0;   // best ratio over characteristic functions
  std::optional<SubsetOfS> restricted_witness;
  bool exhaustive = false;      // characteristic pool covered every subset
  double dual_best = 0;         // best restriction ratio seen in the dual pool
  double stationarity = kNaN;   // gradient norm at the best ascent endpoint
  bool exhausted = false;       // budget ran out
  std::uint64_t work = 0;
  std::uint64_t evaluations = 0;
};

namespace detail {

class WorkMeter {
 public:
  explicit WorkMeter(std::uint64_t budget) : budget_(budget) {}
  bool charge(std::uint64_t units) {
    if (used_ + units > budget_) {
      exhausted_ = true;
      return false;
    }
    used_ += units;
    return true;
  }
  bool exhausted() const { return exhausted_; }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  bool exhausted_ = false;
};

// a^{e/2} with the common exponents done exactly.
inline double half_pow(double a, double e) {
  if (e == 2.0) return a;
  if (e == 4.0) return a * a;
  return std::pow(a, e / 2.0);
}

// Smoothed objective log ||Ef||_r - log ||f||_{p, eps} and its gradient.
struct Objective {
  double value = 0;
  double ratio = 0;
  std::vector<Complex> gradient;
};

inline Objective objective(const ExtensionOperator& op, std::span<const Complex> f, double p, double r,
                           double eps) {
  const auto u = op.apply(f);
  const double n = static_cast<double>(f.size());
  const double eps2 = eps * eps;
  double su = 0, sf = 0;
  std::vector<Complex> w(u.size());
  for (std::size_t m = 0; m < u.size(); ++m) {
    const double a = std::norm(u[m]);
    if (a == 0.0) continue;
    const double ar = half_pow(a, r);
    su += ar;
    w[m] = u[m] * (ar / a);
  }
  for (const auto& z : f) sf += half_pow(std::norm(z) + eps2, p);
  Objective out;
  out.value = std::log(su) / r - std::log(sf / n) / p;
  out.ratio = ratio_of(u, f, p, r);
  const auto v = op.adjoint(w);
  out.gradient.resize(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double t = half_pow(std::norm(f[x]) + eps2, p) / (std::norm(f[x]) + eps2);
    out.gradient[x] = v[x] / (n * su) - f[x] * (t / sf);
  }
  return out;
}

inline void normalize(std::vector<Complex>& f, double p) {
  const double s = weighted_norm(f, p, 1.0 / static_cast<double>(f.size()));
  if (s > 0) {
    for (auto& z : f) z /= s;
  }
}

// Euclidean norm of g with its component along f removed.
inline double tangent_norm(std::span<const Complex> g, std::span<const Complex> f) {
  double gf = 0, ff = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    gf += (std::conj(f[i]) * g[i]).real();
    ff += std::norm(f[i]);
  }
  const double c = ff > 0 ? gf / ff : 0.0;
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(g[i] - c * f[i]);
  return std::sqrt(s);
}

struct AscentResult {
  std::vector<Complex> f;
  double ratio = 0;
  double gradient_norm = kNaN;
  unsigned iterations = 0;
  bool converged = false;
};

// Gradient ascent on the unit sphere of L^p(S, dsigma) with step halving on
// failure and step growth on success.
inline AscentResult ascend(const ExtensionOperator& op, std::vector<Complex> f, double p, double r,
                           const EstimateOptions& opt, WorkMeter& meter) {
  const std::uint64_t cost = 2 * std::uint64_t{op.grid_size()} * op.surface_size();
  AscentResult out;
  normalize(f, p);
  if (!meter.charge(cost)) return out;
  Objective cur = objective(op, f, p, r, opt.smoothing);
  double gnorm = tangent_norm(cur.gradient, f);
  double fnorm = std::sqrt(power_sum(f, 2.0));
  double step = gnorm > 0 ? 0.5 * fnorm / gnorm : 0.0;
  out.f = f;
  out.ratio = cur.ratio;
  out.gradient_norm = gnorm;
  for (unsigned it = 0; it < opt.max_iterations && step > 0; ++it) {
    out.iterations = it + 1;
    std::vector<Complex> trial(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) trial[x] = f[x] + step * cur.gradient[x];
    normalize(trial, p);
    if (!meter.charge(cost)) break;
    Objective next = objective(op, trial, p, r, opt.smoothing);
    if (next.value > cur.value) {
      const double gain = next.value - cur.value;  // log of the ratio gain
      f = std::move(trial);
      cur = std::move(next);
      gnorm = tangent_norm(cur.gradient, f);
      fnorm = std::sqrt(power_sum(f, 2.0));
      out.f = f;
      out.ratio = cur.ratio;
      out.gradient_norm = gnorm;
      if (gain < opt.gain_tol) {
        out.converged = true;
        break;
      }
      step *= 2.0;
    } else {
      step *= 0.5;
      if (step * gnorm < 1e-15 * fnorm) {
        out.converged = true;
        break;
      }
    }
  }
  return out;
}

// f = |v|^{p'-2} v for v = R(g): the Hoelder partner of a dual witness g, whose
// extension ratio is at least the restriction ratio of g.
// Inputs are rescaled to unit max modulus first, so repeated powers stay finite.
inline std::vector<Complex> signed_power(std::span<const Complex> v, double e) {
  double top = 0;
  for (const auto& z : v) top = std::max(top, std::abs(z));
  std::vector<Complex> out(v.size());
  if (top == 0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) / top;
    out[i] = a > 0 ? (v[i] / top) * std::pow(a, e) : Complex{};
  }
  return out;
}

inline std::vector<Complex> holder_partner(std::span<const Complex> v, double p) {
  return signed_power(v, dual_exponent(p) - 2.0);
}

// g = |u|^{r-2} u, the function attaining ||u||_{L^r(dm)} by duality.
inline std::vector<Complex> dual_partner(std::span<const Complex> u, double r) {
  return signed_power(u, r - 2.0);
}

}  // namespace detail

/// Lower bound for R*(p -> r) on S from four witness pools:
///   (a) characteristic functions, all of them when |S| <= exhaustive_limit,
///       otherwise seeded random subsets at regime densities;
///   (b) S, a point, the subspace H and translates of H;
///   (c) gradient ascent from random and warm starts;
///   (d) dual witnesses g on F_q^d converted to f = |Rg|^{p'-2} Rg and refined
///       by alternating Hoelder partners.
/// The returned lower bound is recomputed from the stored witness.
inline NormEstimate estimate_rstar(const Paraboloid& surface, const ExtensionOperator& op, double p, double r,
                                   const EstimateOptions& opt = {}) {
  if (opt.budget == 0) throw std::invalid_argument("estimate: budget must be positive");
  if (p < 1.0 || r < 1.0) throw std::invalid_argument("estimate: exponents must be >= 1");
  const std::uint32_t q = surface.field().order();
  const unsigned d = surface.dim();
  const std::size_t ns = op.surface_size(), ng = op.grid_size();
  detail::WorkMeter meter(opt.budget);
  Rng rng(opt.seed);

  NormEstimate est;
  est.q = q;
  est.d = d;
  est.p = p;
  est.r = r;
  double best = -1.0;
  auto offer = [&](Witness w, double value, const char* method) {
    ++est.evaluations;
    if (w.subset && value > est.restricted_type) {
      est.restricted_type = value;
      est.restricted_witness = w.subset;
    }
    if (value > best) {
      best = value;
      est.witness = std::move(w);
      est.method = method;
    }
  };
  auto offer_subset = [&](SubsetOfS e, WitnessKind kind, std::string label, const char* method) {
    if (!meter.charge(std::uint64_t{ng} * e.size())) return false;
    const double v = indicator_ratio(op, e, p, r);
    offer(Witness{kind, std::move(label), std::move(e), {}}, v, method);
    return true;
  };

  // (b) structured families.
  offer_subset(SubsetOfS::full(q, d), WitnessKind::kStructured, "S", "structured");
  offer_subset(SubsetOfS(q, d, {0}), WitnessKind::kStructured, "point", "structured");
  if (d >= 3) {
    if (auto h = build_subspace_H(surface.field(), d)) {
      offer_subset(*h, WitnessKind::kStructured, "H", "structured");
      for (int t = 0; t < 3; ++t) {
        Point shift(d - 1);
        for (auto& c : shift) c = Element{static_cast<std::uint32_t>(rng.below(q))};
        offer_subset(translate(surface, *h, shift), WitnessKind::kStructured, "H+t", "structured");
      }
    }
  }

  // (a) characteristic functions.
  if (ns <= opt.exhaustive_limit) {
    // Gray-code walk: flipping point x adds or removes the column chi(x.m)/|S|.
    const std::uint64_t total = std::uint64_t{1} << ns;
    if (meter.charge(total * 2 * ng)) {
      std::vector<Complex> u(ng);
      std::vector<bool> in(ns, false);
      std::size_t size = 0;
      double best_local = -1.0;
      std::uint64_t best_code = 0;
      const double scale = 1.0 / static_cast<double>(ns);
      for (std::uint64_t i = 1; i < total; ++i) {
        const std::size_t x = static_cast<std::size_t>(std::countr_zero(i));
        const double sign = in[x] ? -1.0 : 1.0;
        in[x] = !in[x];
        if (in[x]) {
          ++size;
        } else {
          --size;
        }
        for (std::size_t m = 0; m < ng; ++m) u[m] += sign * scale * op.characters().root(op.phase(m, x));
        const double den = std::isinf(p) ? 1.0 : std::pow(static_cast<double>(size) * scale, 1.0 / p);
        const double v = weighted_norm(u, r, 1.0) / den;
        if (v > best_local) {
          best_local = v;
          best_code = i ^ (i >> 1);
        }
      }
      std::vector<std::uint64_t> members;
      for (std::size_t x = 0; x < ns; ++x) {
        if (best_code >> x & 1u) members.push_back(x);
      }
      offer(Witness{WitnessKind::kCharacteristic, "exhaustive", SubsetOfS(q, d, members), {}},
            indicator_ratio(op, SubsetOfS(q, d, members), p, r), "characteristic");
      est.exhaustive = true;
    }
  } else {
    // Sizes around the regime boundaries q^{(d-2)/2}, q^{(d-1)/2}, q^{d/2}, q^{(d+1)/2}.
    std::vector<std::size_t> sizes;
    for (double e : {0.0, 0.5, (d - 2.0) / 2.0, (d - 1.0) / 2.0, d / 2.0, (d + 1.0) / 2.0, d - 1.5}) {
      const double s = std::round(std::pow(static_cast<double>(q), e));
      sizes.push_back(static_cast<std::size_t>(std::clamp(s, 1.0, static_cast<double>(ns))));
    }
    sizes.push_back(std::max<std::size_t>(1, ns / 2));
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    for (std::size_t k = 0; k < opt.random_subsets; ++k) {
      const std::size_t size = sizes[k % sizes.size()];
      SubsetOfS e(q, d, sample_distinct(rng, ns, size));
      if (!offer_subset(std::move(e), WitnessKind::kCharacteristic, "random", "characteristic")) break;
    }
  }

  // (d) dual witnesses.
  if (opt.dual && p > 1.0 && !std::isinf(r)) {
    std::vector<std::pair<std::string, std::vector<Complex>>> seeds;
    {
      std::vector<Complex> g(ng);
      g[0] = 1.0;
      seeds.emplace_back("delta", std::move(g));
    }
    {
      std::vector<Complex> g(ng);
      for (std::size_t m = 0; m < ng; ++m) g[m] = op.grid_point(m)[d - 1].index() == 0 ? 1.0 : 0.0;
      seeds.emplace_back("hyperplane", std::move(g));
    }
    for (unsigned k = 0; k < opt.dual_random; ++k) {
      std::vector<Complex> g(ng);
      const std::uint64_t size = 1 + rng.below(std::max<std::uint64_t>(1, ng / 4));
      for (auto m : sample_distinct(rng, ng, size)) g[m] = 1.0;
      seeds.emplace_back("random", std::move(g));
    }
    const std::uint64_t cost = std::uint64_t{ng} * ns;
    for (auto& [label, g] : seeds) {
      if (!meter.charge(cost)) break;
      const auto v = op.adjoint(g);
      const double den = weighted_norm(g, dual_exponent(r), 1.0);
      est.dual_best = std::max(
          est.dual_best, weighted_norm(v, dual_exponent(p), 1.0 / static_cast<double>(ns)) / den);
      auto f = detail::holder_partner(v, p);
      if (power_sum(f, 2.0) == 0.0) continue;
      double prev = -1.0;
      for (unsigned it = 0; it < opt.power_iterations; ++it) {
        if (!meter.charge(cost)) break;
        const auto u = op.apply(f);
        const double val = ratio_of(u, f, p, r);
        offer(Witness{WitnessKind::kDual, label, std::nullopt, f}, val, "dual");
        if (prev > 0 && val - prev < opt.gain_tol * prev) break;
        prev = std::max(prev, val);
        if (!meter.charge(cost)) break;
        auto next = detail::holder_partner(op.adjoint(detail::dual_partner(u, r)), p);
        if (power_sum(next, 2.0) == 0.0) break;
        detail::normalize(next, p);
        f = std::move(next);
      }
    }
  }

  // (c) gradient ascent.
  if (opt.gradient && !std::isinf(p) && !std::isinf(r)) {
    for (unsigned k = 0; k < opt.restarts && !meter.exhausted(); ++k) {
      std::vector<Complex> f(ns);
      if (k == 0 && est.witness.subset) {
        for (auto x : est.witness.subset->members()) f[x] = 1.0;
        for (auto& z : f) z += 1e-3 * rng.complex_normal();
      } else if (k == 1 && !est.witness.values.empty()) {
        f = est.witness.values;
      } else {
        for (auto& z : f) z = rng.complex_normal();
      }
      auto res = detail::ascend(op, std::move(f), p, r, opt, meter);
      if (res.f.empty()) break;
      const double v = ratio_of(op.apply(res.f), res.f, p, r);
      if (v > best) est.stationarity = res.gradient_norm;
      offer(Witness{WitnessKind::kGradient, "restart " + std::to_string(k), std::nullopt, std::move(res.f)}, v,
            "gradient");
    }
  }

  est.exhausted = meter.exhausted();
  est.work = meter.used();
  est.lower_bound = witness_ratio(op, est.witness, p, r);
  return est;
}

/// sup over a fixed pool of witnesses of the extension ratio at (p, r).
inline double pool_supremum(const ExtensionOperator& op, std::span<const Witness> pool, double p, double r) {
  double best = 0;
  for (const auto& w : pool) best = std::max(best, witness_ratio(op, w, p, r));
  return best;
}

// ---------------------------------------------------------------------------
// Endpoint sweeps

enum class Theorem { kP4, k2R, kOdd };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::kP4: return "p4";
    case Theorem::k2R: return "2r";
    case Theorem::kOdd: return "odd";
  }
  return "unknown";
}

inline Theorem parse_theorem(const std::string& s) {
  if (s == "p4") return Theorem::kP4;
  if (s == "2r") return Theorem::k2R;
  if (s == "odd") return Theorem::kOdd;
  throw std::invalid_argument("unknown theorem '" + s + "' (expected p4, 2r or odd)");
}

/// 4d / (3d - 2)
inline double p4_endpoint(double d) { return 4.0 * d / (3.0 * d - 2.0); }
/// 2d^2 / (d^2 - 2d + 2)
inline double r_endpoint(double d) { return 2.0 * d * d / (d * d - 2.0 * d + 2.0); }

/// Empty when (field, d) satisfies the hypotheses of the theorem.
inline std::string theorem_precondition(Theorem t, const Field& field, unsigned d) {
  if (t != Theorem::kOdd) {
    if (d < 4 || d % 2 != 0) return std::string(to_string(t)) + " needs even d >= 4, got d = " + std::to_string(d);
    return {};
  }
  if (d < 7 || d % 2 == 0) return "odd needs odd d >= 7, got d = " + std::to_string(d);
  return energy_bound_precondition(field, d, Parity::kOdd);
}

struct SweepOptions {
  EstimateOptions estimate;
  double delta = 0.1;    // distance below the threshold for the sharpness rows
  double epsilon = 0.25; // allowed log-log growth of the estimates
};

struct SweepRow {
  std::string kind;  // "endpoint" or "sharpness"
  std::uint32_t q = 0;
  unsigned d = 0;
  double p = 0;
  double r = 0;
  double estimate = 0;
  std::string witness_kind;
  std::string witness_label;
  double restricted_type = kNaN;
  double slope_so_far = kNaN;
  bool exhausted = false;
  std::uint64_t work = 0;
};

struct SweepResult {
  Theorem theorem = Theorem::kP4;
  unsigned d = 0;
  std::vector<SweepRow> rows;
  double endpoint_slope = kNaN;
  bool trend_ok = true;
  double sharpness_slope = kNaN;
  bool sharpness_increasing = false;
  std::string sharpness_note;
};

/// Runs estimate_rstar at the endpoint exponents for every field, fits the
/// log-log trend of the estimates, and evaluates the H witness just below the
/// subspace threshold (which must grow with q).
inline SweepResult theorem_endpoint_sweep(Theorem theorem, std::span<const FieldPtr> fields, unsigned d,
                                          const SweepOptions& opt = {}) {
  if (fields.empty()) throw std::invalid_argument("sweep: empty field list");
  for (const auto& f : fields) {
    if (auto why = theorem_precondition(theorem, *f, d); !why.empty()) {
      throw std::invalid_argument("sweep precondition failed for q = " + std::to_string(f->order()) + ": " + why);
    }
  }
  std::vector<std::pair<double, double>> endpoints;
  if (theorem == Theorem::k2R) {
    endpoints.emplace_back(2.0, r_endpoint(d));
  } else {
    endpoints.emplace_back(p4_endpoint(d), 4.0);
    if (theorem == Theorem::kOdd) endpoints.emplace_back(2.0, r_endpoint(d));
  }
  // Sharpness exponents: H has dimension n = (d-2)/2 and forces
  // r >= p(d-n)/((p-1)(d-n-1)).
  const double n = (d - 2.0) / 2.0;
  double sharp_p = 0, sharp_r = 0;
  if (theorem == Theorem::k2R) {
    sharp_p = 2.0;
    sharp_r = necessary_r_threshold(2.0, d, n) - opt.delta;
  } else {
    sharp_p = p4_endpoint(d) - opt.delta;
    sharp_r = 4.0;
  }

  SweepResult out;
  out.theorem = theorem;
  out.d = d;
  std::vector<std::vector<double>> qs(endpoints.size()), ests(endpoints.size());
  std::vector<double> hq, hv;
  bool h_missing = false;
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const auto& field = fields[fi];
    const CharacterTable chars(field);
    const Paraboloid surface(field, d);
    const ExtensionOperator op(surface, chars);
    for (std::size_t k = 0; k < endpoints.size(); ++k) {
      EstimateOptions eo = opt.estimate;
      eo.seed = opt.estimate.seed + 1000003ull * field->order() + k;
      const auto est = estimate_rstar(surface, op, endpoints[k].first, endpoints[k].second, eo);
      qs[k].push_back(field->order());
      ests[k].push_back(est.lower_bound);
      SweepRow row;
      row.kind = "endpoint";
      row.q = field->order();
      row.d = d;
      row.p = est.p;
      row.r = est.r;
      row.estimate = est.lower_bound;
      row.witness_kind = to_string(est.witness.kind);
      row.witness_label = est.witness.label;
      row.restricted_type = est.restricted_type;
      row.slope_so_far = loglog_slope(qs[k], ests[k]);
      row.exhausted = est.exhausted;
      row.work = est.work;
      out.rows.push_back(row);
    }
    if (theorem == Theorem::kOdd) {
      h_missing = true;
      continue;
    }
    if (auto h = build_subspace_H(*field, d)) {
      const double v = indicator_ratio(op, *h, sharp_p, sharp_r);
      hq.push_back(field->order());
      hv.push_back(v);
      SweepRow row;
      row.kind = "sharpness";
      row.q = field->order();
      row.d = d;
      row.p = sharp_p;
      row.r = sharp_r;
      row.estimate = v;
      row.witness_kind = "structured";
      row.witness_label = "H";
      row.slope_so_far = loglog_slope(hq, hv);
      out.rows.push_back(row);
    } else {
      h_missing = true;
    }
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < endpoints.size(); ++k) {
    const double s = loglog_slope(qs[k], ests[k]);
    if (!std::isnan(s)) worst = std::max(worst, s);
  }
  out.endpoint_slope = std::isinf(worst) ? kNaN : worst;
  out.trend_ok = std::isnan(out.endpoint_slope) || out.endpoint_slope <= opt.epsilon;
  if (hv.size() >= 2) {
    out.sharpness_slope = loglog_slope(hq, hv);
    out.sharpness_increasing = true;
    for (std::size_t i = 1; i < hv.size(); ++i) out.sharpness_increasing &= hv[i] > hv[i - 1];
  }
  if (theorem == Theorem::kOdd) {
    out.sharpness_note = "n/a: -1 is a nonsquare under the hypotheses, so S contains no subspace H";
  } else if (h_missing) {
    out.sharpness_note = "H exists only for q = 1 mod 4; other fields skipped";
  } else if (hv.size() < 2) {
    out.sharpness_note = "needs at least two fields with q = 1 mod 4";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernel checks

/// K = (dsigma)^v - delta_0 on F_q^d.
inline GridFunction bochner_riesz_kernel(const ExtensionOperator& op) {
  const std::vector<Complex> ones(op.surface_size(), Complex{1.0, 0.0});
  GridFunction k{op.q(), op.dim(), op.apply(ones)};
  k.values[0] -= 1.0;
  return k;
}

/// max over x of |hat_dual(K)(x) - (q 1_S(x) - 1)|.
inline double kernel_transform_defect(const CharacterTable& chars, const Paraboloid& surface, const GridFunction& k) {
  const auto kh = hat_dual(chars, k);
  const double q = surface.field().order();
  double worst = 0;
  Point x(surface.dim());
  for (std::size_t i = 0; i < kh.values.size(); ++i) {
    surface.ambient().decode(i, x);
    const double expected = surface.contains(x) ? q - 1.0 : -1.0;
    worst = std::max(worst, std::abs(kh.values[i] - expected));
  }
  return worst;
}

struct SteinTomasCheck {
  double e1_lhs = 0;    // ||g * K||_{L^2(dm)}
  double e1_rhs = 0;    // q ||g||_{L^2(dm)}
  bool e1_ok = false;
  double e2_lhs = kNaN; // ||g * K||_{L^4(dm)}
  double e2_rhs = kNaN; // q^{(4-d)/4} ||g||_{L^{4d/(3d-2)}(dm)}
  double e2_ratio = kNaN;
};

inline SteinTomasCheck stein_tomas_check(const Field& field, const GridFunction& k, const GridFunction& g) {
  const auto gk = convolve(field, g, k);
  SteinTomasCheck out;
  const double q = field.order();
  out.e1_lhs = weighted_norm(gk.values, 2.0, 1.0);
  out.e1_rhs = q * weighted_norm(g.values, 2.0, 1.0);
  out.e1_ok = out.e1_lhs <= out.e1_rhs * (1.0 + 1e-12);
  if (g.d >= 4 && g.d % 2 == 0) {
    const double d = g.d;
    out.e2_lhs = weighted_norm(gk.values, 4.0, 1.0);
    out.e2_rhs = std::pow(q, (4.0 - d) / 4.0) * weighted_norm(g.values, p4_endpoint(d), 1.0);
    out.e2_ratio = out.e2_rhs > 0 ? out.e2_lhs / out.e2_rhs : kNaN;
  }
  return out;
}

}  // namespace ffext

#endif  // FFEXT_NORMS_LAB_HPP_
