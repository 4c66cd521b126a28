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


#ifndef FFEXT_EXPERIMENTS_HPP_
#define FFEXT_EXPERIMENTS_HPP_

// Experiment runner behind the command-line tool: configuration,
// validation, and one report-producing routine per subcommand.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffext/characters.hpp"
#include "ffext/energy.hpp"
#include "ffext/finite_field.hpp"
#include "ffext/fourier.hpp"
#include "ffext/geometry.hpp"
#include "ffext/norms_lab.hpp"
#include "ffext/report.hpp"
#include "ffext/rng.hpp"
#include "json.hpp"

namespace ffext {

/// Invalid configuration; field() names the offending option.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument("--" + field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Command { kGauss, kSigmaCheck, kEnergy, kNorms, kSweep };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::kGauss: return "gauss";
    case Command::kSigmaCheck: return "sigma-check";
    case Command::kEnergy: return "energy";
    case Command::kNorms: return "norms";
    case Command::kSweep: return "sweep";
  }
  return "unknown";
}

inline Command parse_command(const std::string& s) {
  for (auto c : {Command::kGauss, Command::kSigmaCheck, Command::kEnergy, Command::kNorms, Command::kSweep}) {
    if (s == to_string(c)) return c;
  }
  throw ConfigError("command", "unknown subcommand '" + s + "'");
}

struct ExperimentConfig {
  std::string command = "sweep";
  std::vector<std::string> fields;  // "p^l" or "q"
  std::vector<unsigned> dims;
  std::uint64_t seed = 7;
  std::uint64_t cap = kDefaultEnumerationCap;
  double tol = 1e-9;

  // energy
  std::string parity = "auto";  // auto | even | odd
  std::size_t samples = 1000;
  std::vector<double> densities;  // exponents e, |E| = q^e; empty: regime breakpoints, then uniform
  std::size_t max_subset = 2048;
  double desk_constant = 16.0;
  double slope_limit = 0.1;

  // norms
  std::string theorem = "p4";
  std::uint64_t budget = 4'000'000'000;
  unsigned restarts = 50;
  double delta = 0.1;
  double epsilon = 0.25;

  // sweep identity checks
  std::size_t functions = 100;
  std::size_t trace_cases = 100;

  std::string format = "csv";

  nlohmann::json to_json() const {
    return {{"command", command},
            {"q", fields},
            {"d", dims},
            {"seed", seed},
            {"cap", cap},
            {"tol", tol},
            {"parity", parity},
            {"samples", samples},
            {"densities", densities},
            {"max_subset", max_subset},
            {"desk_constant", desk_constant},
            {"slope_limit", slope_limit},
            {"theorem", theorem},
            {"budget", budget},
            {"restarts", restarts},
            {"delta", delta},
            {"epsilon", epsilon},
            {"functions", functions},
            {"trace_cases", trace_cases},
            {"format", format}};
  }
};

/// A validated configuration with the fields constructed.
struct Plan {
  Command command = Command::kSweep;
  ExperimentConfig config;
  std::vector<FieldPtr> fields;
};

/// Checks every option and every (q, d) pair against the enumeration cap
/// before any work is done. Throws ConfigError or CapExceeded.
inline Plan validate(const ExperimentConfig& c) {
  Plan plan;
  plan.command = parse_command(c.command);
  plan.config = c;
  if (c.fields.empty()) throw ConfigError("q", "at least one field is required");
  for (const auto& s : c.fields) {
    FieldPtr f;
    try {
      f = parse_field(s);
    } catch (const std::exception& e) {
      throw ConfigError("q", "'" + s + "': " + e.what());
    }
    if (f->characteristic() == 2) throw ConfigError("q", "'" + s + "': characteristic 2 is not supported");
    for (const auto& g : plan.fields) {
      if (g->order() == f->order()) throw ConfigError("q", "field " + s + " listed twice");
    }
    plan.fields.push_back(f);
  }
  if (plan.command != Command::kGauss) {
    if (c.dims.empty()) throw ConfigError("d", "at least one dimension is required");
    for (unsigned d : c.dims) {
      if (d < 2) throw ConfigError("d", "dimension must be >= 2, got " + std::to_string(d));
      if (d > 64) throw ConfigError("d", "dimension must be <= 64, got " + std::to_string(d));
    }
  }
  if (c.format != "csv" && c.format != "json") throw ConfigError("format", "expected csv or json, got '" + c.format + "'");
  if (!(c.tol > 0)) throw ConfigError("tol", "must be positive");
  if (c.cap == 0) throw ConfigError("cap", "must be positive");
  if (c.parity != "auto" && c.parity != "even" && c.parity != "odd") {
    throw ConfigError("parity", "expected auto, even or odd, got '" + c.parity + "'");
  }
  if (c.samples == 0) throw ConfigError("samples", "must be positive");
  if (c.max_subset == 0) throw ConfigError("max-subset", "must be positive");
  for (double e : c.densities) {
    if (!(e >= 0) || !std::isfinite(e)) throw ConfigError("densities", "exponents must be finite and >= 0");
  }
  if (!(c.desk_constant > 0)) throw ConfigError("desk-constant", "must be positive");
  if (!std::isfinite(c.slope_limit)) throw ConfigError("slope-limit", "must be finite");
  try {
    parse_theorem(c.theorem);
  } catch (const std::exception&) {
    throw ConfigError("theorem", "expected p4, 2r or odd, got '" + c.theorem + "'");
  }
  if (c.budget == 0) throw ConfigError("budget", "must be positive");
  if (c.restarts == 0) throw ConfigError("restarts", "must be positive");
  if (!(c.delta > 0 && c.delta < 1)) throw ConfigError("delta", "must lie in (0, 1)");
  if (!(c.epsilon > 0)) throw ConfigError("epsilon", "must be positive");
  if (c.functions == 0) throw ConfigError("functions", "must be positive");
  if (c.trace_cases == 0) throw ConfigError("trace-cases", "must be positive");

  auto refuse = [&](const std::string& what, std::uint32_t q, unsigned e, std::uint64_t limit) {
    try {
      detail::checked_pow(q, e, limit);
    } catch (const std::length_error&) {
      throw CapExceeded("refusing q = " + std::to_string(q) + ", d = " + std::to_string(e) + ": " + what +
                        " exceeds the enumeration cap " + std::to_string(limit) + " (--cap)");
    }
  };
  if (plan.command == Command::kNorms) {
    const Theorem t = parse_theorem(c.theorem);
    for (unsigned d : c.dims) {
      for (const auto& f : plan.fields) {
        if (auto why = theorem_precondition(t, *f, d); !why.empty()) {
          throw ConfigError("theorem", "q = " + std::to_string(f->order()) + ": " + why);
        }
      }
    }
  }
  for (unsigned d : c.dims) {
    for (const auto& f : plan.fields) {
      if (plan.command == Command::kEnergy) {
        // Only sampled subsets and keys in F_q^d are enumerated.
        refuse("q^d", f->order(), d, UINT64_MAX / 64);
        if (c.max_subset > c.cap) {
          throw CapExceeded("refusing --max-subset " + std::to_string(c.max_subset) +
                            ": exceeds the enumeration cap " + std::to_string(c.cap) + " (--cap)");
        }
        if (c.parity != "auto") {
          const Parity par = c.parity == "even" ? Parity::kEven : Parity::kOdd;
          if ((par == Parity::kEven) != (d % 2 == 0)) {
            throw ConfigError("parity", std::string(to_string(par)) + " parity does not match d = " + std::to_string(d));
          }
        }
      } else {
        refuse("q^d", f->order(), d, c.cap);
      }
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Shared pieces

namespace detail {

/// An independent stream per (section, q, d), so results do not depend on
/// the order in which grid points are visited.
inline Rng stream(std::uint64_t seed, std::uint64_t section, std::uint64_t q, std::uint64_t d) {
  return Rng(seed).fork(section * 1000003ull * 1009ull + q * 1009ull + d);
}

inline std::string point_text(std::span<const Element> x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(x[i].index());
  }
  return out;
}

inline std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

inline Parity parity_for(const std::string& parity, unsigned d) {
  if (parity == "even") return Parity::kEven;
  if (parity == "odd") return Parity::kOdd;
  return d % 2 == 0 ? Parity::kEven : Parity::kOdd;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Energy survey

struct EnergySurveyOptions {
  std::size_t samples = 1000;
  std::vector<double> densities;
  std::size_t max_subset = 2048;
};

struct EnergyRecord {
  std::string family;
  EnergyBoundReport report;
};

struct EnergySurvey {
  std::uint32_t q = 0;
  unsigned d = 0;
  Parity parity = Parity::kEven;
  std::vector<EnergyRecord> records;
  double max_ratio = 0;
  std::size_t argmax = 0;
};

/// Size exponents at which the piecewise bound changes branch.
inline std::vector<double> energy_breakpoints(unsigned d) {
  const double dd = d;
  return {0.0, (dd - 2.0) / 2.0, (dd - 1.0) / 2.0, dd / 2.0, (dd + 1.0) / 2.0, (dd + 2.0) / 2.0, dd - 1.0};
}

/// Named subsets of S with at most max_subset points: a point, a line and
/// a plane of xbar coordinates, the null cone xbar.xbar = 0, H and its
/// translates, and S itself.
inline std::vector<std::pair<std::string, SubsetOfS>> structured_subsets(const Paraboloid& surface,
                                                                         std::size_t max_subset, Rng& rng) {
  const Field& f = surface.field();
  const std::uint32_t q = f.order();
  const unsigned d = surface.dim(), k = d - 1;
  const std::uint64_t ns = surface.size();
  std::vector<std::pair<std::string, SubsetOfS>> out;
  out.emplace_back("point", SubsetOfS(q, d, {0}));
  std::uint64_t top = 1;
  for (unsigned i = 1; i < k; ++i) top *= q;
  if (q <= max_subset) {
    std::vector<std::uint64_t> line;
    for (std::uint32_t t = 0; t < q; ++t) line.push_back(t * top);
    out.emplace_back("line", SubsetOfS(q, d, std::move(line)));
  }
  if (k >= 2 && std::uint64_t{q} * q <= max_subset) {
    std::vector<std::uint64_t> plane;
    for (std::uint32_t s = 0; s < q; ++s) {
      for (std::uint32_t t = 0; t < q; ++t) plane.push_back(s * top + t * (top / q));
    }
    out.emplace_back("plane", SubsetOfS(q, d, std::move(plane)));
  }
  if (ns <= (std::uint64_t{1} << 22)) {
    std::vector<std::uint64_t> cone;
    Point x(k);
    for (std::uint64_t i = 0; i < ns && cone.size() <= max_subset; ++i) {
      surface.base().decode(i, x);
      if (surface.base().dot(x, x).index() == 0) cone.push_back(i);
    }
    if (cone.size() <= max_subset) out.emplace_back("null-cone", SubsetOfS(q, d, std::move(cone)));
  }
  if (d >= 3) {
    if (auto h = build_subspace_H(f, d); h && h->size() <= max_subset) {
      out.emplace_back("H", *h);
      std::vector<std::uint64_t> joined(h->members().begin(), h->members().end());
      for (int t = 1; t <= 2; ++t) {
        const auto shift = surface.base().decode(rng.below(ns));
        auto moved = translate(surface, *h, shift);
        if (t == 1) joined.insert(joined.end(), moved.members().begin(), moved.members().end());
        out.emplace_back("H+t" + std::to_string(t), std::move(moved));
      }
      if (joined.size() <= max_subset) out.emplace_back("H+H+t1", SubsetOfS(q, d, std::move(joined)));
    }
  }
  if (ns <= max_subset) out.emplace_back("S", SubsetOfS::full(q, d));
  return out;
}

/// Lambda_4 against the piecewise bound over structured subsets and random
/// subsets spanning the size regimes.
inline EnergySurvey energy_survey(const Paraboloid& surface, Parity parity, const EnergySurveyOptions& opt,
                                  Rng& rng) {
  const Field& f = surface.field();
  const std::uint32_t q = f.order();
  const unsigned d = surface.dim();
  const std::uint64_t limit = std::min<std::uint64_t>(surface.size(), opt.max_subset);
  const double top = std::log(static_cast<double>(limit)) / std::log(static_cast<double>(q));
  EnergySurvey out;
  out.q = q;
  out.d = d;
  out.parity = parity;
  auto record = [&](std::string family, const SubsetOfS& e) {
    auto rep = energy_bound_report(f, d, parity, e.size(), lambda4(f, d, e));
    if (out.records.empty() || rep.ratio > out.max_ratio) {
      out.max_ratio = rep.ratio;
      out.argmax = out.records.size();
    }
    out.records.push_back({std::move(family), std::move(rep)});
  };
  for (const auto& [name, e] : structured_subsets(surface, opt.max_subset, rng)) record(name, e);

  std::vector<double> exps = opt.densities;
  const bool uniform_tail = exps.empty();
  if (uniform_tail) {
    for (double e : energy_breakpoints(d)) exps.push_back(std::min(e, top));
  }
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const double e = (i < exps.size() || !uniform_tail) ? exps[i % exps.size()] : rng.uniform() * top;
    const double target = std::round(std::pow(static_cast<double>(q), e));
    const auto size = static_cast<std::uint64_t>(std::clamp(target, 1.0, static_cast<double>(limit)));
    record("random", SubsetOfS(q, d, sample_distinct(rng, surface.size(), size)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace detail {

inline Report make_report(const Plan& plan) {
  Report rep;
  rep.command = to_string(plan.command);
  rep.config = plan.config.to_json();
  for (const auto& f : plan.fields) rep.add_field(*f);
  return rep;
}

inline void run_gauss(const Plan& plan, Report& rep) {
  auto& t = rep.table("gauss", {"q", "p", "l", "direct_re", "direct_im", "closed_re", "closed_im", "abs_diff"});
  for (const auto& f : plan.fields) {
    const CharacterTable chars(f);
    const Complex direct = chars.gauss_sum(f->one());
    const Complex closed = chars.explicit_gauss_value();
    const double diff = std::abs(direct - closed);
    t.add({as_int(f->order()), as_int(f->characteristic()), as_int(f->degree()), direct.real(), direct.imag(),
           closed.real(), closed.imag(), diff},
          pass_if(diff < plan.config.tol));
  }
}

/// Extension of the constant 1 at every point of F_q^d against its closed form.
inline void sigma_rows(const FieldPtr& field, unsigned d, double tol, Table* rows, Table& summary) {
  const CharacterTable chars(field);
  const Paraboloid surface(field, d);
  const ExtensionOperator op(surface, chars);
  const auto direct = op.apply(std::vector<Complex>(op.surface_size(), Complex{1.0, 0.0}));
  double worst = 0;
  for (std::size_t m = 0; m < op.grid_size(); ++m) {
    const Complex closed = sigma_inverse_closed_form(chars, op.grid_point(m));
    const double diff = std::abs(direct[m] - closed);
    worst = std::max(worst, diff);
    if (rows) {
      rows->add({as_int(field->order()), as_int(d), as_int(m), point_text(op.grid_point(m)), direct[m].real(),
                 direct[m].imag(), closed.real(), closed.imag(), diff},
                pass_if(diff < tol));
    }
  }
  summary.add({as_int(field->order()), as_int(d), as_int(op.grid_size()), worst}, pass_if(worst < tol));
}

inline void run_sigma_check(const Plan& plan, Report& rep) {
  auto& rows = rep.table("sigma-check", {"q", "d", "m_index", "m", "direct_re", "direct_im", "closed_re",
                                         "closed_im", "abs_diff"});
  auto& summary = rep.table("sigma-check-summary", {"q", "d", "points", "max_abs_diff"});
  for (unsigned d : plan.config.dims) {
    for (const auto& f : plan.fields) sigma_rows(f, d, plan.config.tol, &rows, summary);
  }
}

/// Lambda_4 against the three-term sum alone, without the |E|^3 cap.
inline double sum_ratio(const EnergyBoundReport& b) {
  const double sum = b.cubic_over_q + b.middle + b.quadratic;
  return sum > 0 ? static_cast<double>(b.lambda4) / sum : 0.0;
}

inline void energy_tables(const Plan& plan, Report& rep, bool with_rows) {
  const auto& c = plan.config;
  Table* rows = nullptr;
  if (with_rows) {
    rows = &rep.table("energy", {"q", "d", "parity", "family", "size", "lambda4", "bound", "ratio", "sum_ratio",
                                 "branch", "regime"});
  }
  auto& summary = rep.table("energy-summary", {"q", "d", "parity", "subsets", "max_ratio", "argmax_family",
                                               "argmax_size", "max_sum_ratio", "desk_constant", "precondition"});
  auto& trend = rep.table("energy-trend", {"d", "fields", "slope", "slope_limit"});
  EnergySurveyOptions opt{c.samples, c.densities, c.max_subset};
  for (unsigned d : c.dims) {
    std::vector<double> qs, maxima;
    for (const auto& f : plan.fields) {
      const Parity parity = parity_for(c.parity, d);
      const Paraboloid surface(f, d, UINT64_MAX / 64);
      Rng rng = stream(c.seed, 3, f->order(), d);
      const auto survey = energy_survey(surface, parity, opt, rng);
      const std::string why = energy_bound_precondition(*f, d, parity);
      for (const auto& r : survey.records) {
        const auto& b = r.report;
        const bool ok = b.ratio <= c.desk_constant && static_cast<double>(b.lambda4) <= b.trivial;
        const Verdict v = !ok ? Verdict::kFail : (b.precondition_ok ? Verdict::kPass : Verdict::kWarn);
        if (rows) {
          rows->add({as_int(f->order()), as_int(d), std::string(to_string(parity)), r.family, as_int(b.size),
                     as_int(b.lambda4), b.bound, b.ratio, sum_ratio(b), b.branch, b.regime},
                    v);
        }
      }
      const auto& top = survey.records[survey.argmax];
      double max_sum = 0;
      for (const auto& r : survey.records) max_sum = std::max(max_sum, sum_ratio(r.report));
      const Verdict v = survey.max_ratio > c.desk_constant ? Verdict::kFail
                        : why.empty()                      ? Verdict::kPass
                                                           : Verdict::kWarn;
      summary.add({as_int(f->order()), as_int(d), std::string(to_string(parity)), as_int(survey.records.size()),
                   survey.max_ratio, top.family, as_int(top.report.size), max_sum, c.desk_constant,
                   why.empty() ? std::string("ok") : why},
                  v);
      qs.push_back(f->order());
      maxima.push_back(survey.max_ratio);
    }
    if (qs.size() >= 2) {
      const double s = loglog_slope(qs, maxima);
      trend.add({as_int(d), as_int(qs.size()), s, c.slope_limit}, pass_if(s <= c.slope_limit));
    }
  }
}

inline SweepOptions sweep_options(const ExperimentConfig& c) {
  SweepOptions o;
  o.estimate.seed = c.seed;
  o.estimate.budget = c.budget;
  o.estimate.restarts = c.restarts;
  o.delta = c.delta;
  o.epsilon = c.epsilon;
  return o;
}

struct NormTables {
  Table* rows;
  Table* summary;
};

inline NormTables norm_tables(Report& rep) {
  auto& rows = rep.table("norms", {"theorem", "kind", "q", "d", "p", "r", "estimate", "witness_kind",
                                   "witness_label", "restricted_type", "slope_so_far", "exhausted", "work"});
  auto& summary = rep.table("norms-summary", {"theorem", "d", "fields", "endpoint_slope", "epsilon",
                                              "sharpness_slope", "sharpness_increasing", "note"});
  return {&rows, &summary};
}

inline void norm_sweep(Theorem theorem, std::span<const FieldPtr> fields, unsigned d, const ExperimentConfig& c,
                       const NormTables& t) {
  const auto res = theorem_endpoint_sweep(theorem, fields, d, sweep_options(c));
  const std::string name = to_string(theorem);
  for (const auto& r : res.rows) {
    t.rows->add({name, r.kind, as_int(r.q), as_int(r.d), r.p, r.r, r.estimate, r.witness_kind, r.witness_label,
                 r.restricted_type, r.slope_so_far, as_int(r.exhausted), as_int(r.work)},
                r.exhausted ? Verdict::kWarn : Verdict::kPass);
  }
  Verdict v = pass_if(res.trend_ok);
  if (v == Verdict::kPass && !res.sharpness_note.empty()) v = Verdict::kWarn;
  if (!std::isnan(res.sharpness_slope) && !res.sharpness_increasing) v = Verdict::kFail;
  t.summary->add({name, as_int(d), as_int(fields.size()), res.endpoint_slope, c.epsilon, res.sharpness_slope,
                  as_int(res.sharpness_increasing), res.sharpness_note.empty() ? std::string("ok") : res.sharpness_note},
                 v);
}

inline void run_norms(const Plan& plan, Report& rep) {
  const auto t = norm_tables(rep);
  for (unsigned d : plan.config.dims) norm_sweep(parse_theorem(plan.config.theorem), plan.fields, d, plan.config, t);
}

inline std::vector<Complex> random_values(Rng& rng, std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline void completed_square_rows(const FieldPtr& field, unsigned kmax, const ExperimentConfig& c, Table& t) {
  const CharacterTable chars(field);
  const Field& f = *field;
  const std::uint32_t q = f.order();
  for (unsigned k = 1; k <= kmax; ++k) {
    const PointSpace beta_space(field, k);
    const double cost = (q - 1.0) * std::pow(static_cast<double>(q), 2.0 * k);
    const bool exhaustive = cost <= 5e7;
    Rng rng = stream(c.seed, 4, q, k);
    std::uint64_t cases = 0;
    double worst = 0;
    Point beta(k);
    auto check = [&](Element tt) {
      const auto s = completed_square_sum(chars, tt, beta);
      worst = std::max(worst, std::abs(s.direct - s.closed));
      ++cases;
    };
    if (exhaustive) {
      for (std::uint32_t ti = 1; ti < q; ++ti) {
        for (std::uint64_t b = 0; b < beta_space.size(); ++b) {
          beta_space.decode(b, beta);
          check(Element{ti});
        }
      }
    } else {
      for (std::size_t i = 0; i < c.functions; ++i) {
        beta_space.decode(rng.below(beta_space.size()), beta);
        check(Element{static_cast<std::uint32_t>(1 + rng.below(q - 1))});
      }
    }
    t.add({as_int(q), as_int(k), std::string(exhaustive ? "exhaustive" : "random"), as_int(cases), worst},
          pass_if(worst < c.tol));
  }
}

inline void identity_rows(const FieldPtr& field, unsigned d, const ExtensionOperator& op, const ExperimentConfig& c,
                          Table& t) {
  const CharacterTable& chars = op.characters();
  const std::uint32_t q = field->order();
  Rng rng = stream(c.seed, 5, q, d);
  double plancherel = 0, l2 = 0, r22 = 0;
  const bool with_plancherel = static_cast<double>(op.grid_size()) * op.grid_size() * c.functions <= 2e9;
  for (std::size_t i = 0; i < c.functions; ++i) {
    const SurfaceFunction f{q, d, random_values(rng, op.surface_size())};
    const auto id = l2_identity_check(op, f);
    l2 = std::max(l2, rel_err(id.lhs, id.rhs));
    r22 = std::max(r22, std::abs(ratio(op, f, 2.0, 2.0) - std::sqrt(static_cast<double>(q))));
    if (with_plancherel) {
      const GridFunction g{q, d, random_values(rng, op.grid_size())};
      const auto gh = hat(chars, g);
      plancherel = std::max(plancherel, rel_err(static_cast<double>(op.grid_size()) * power_sum(gh.values, 2.0),
                                                power_sum(g.values, 2.0)));
    }
  }
  const double p_cell = with_plancherel ? plancherel : kNaN;
  const bool ok = l2 < c.tol && r22 < c.tol && (!with_plancherel || plancherel < c.tol);
  t.add({as_int(q), as_int(d), as_int(c.functions), p_cell, l2, r22}, pass_if(ok));
}

inline void stein_tomas_rows(const FieldPtr& field, unsigned d, const ExtensionOperator& op, const Paraboloid& surface,
                             const ExperimentConfig& c, Table& t, std::vector<std::string>& notes) {
  const std::uint32_t q = field->order();
  const auto k = bochner_riesz_kernel(op);
  const double defect = kernel_transform_defect(op.characters(), surface, k);
  const double cost = static_cast<double>(op.grid_size()) * op.grid_size();
  std::size_t count = c.functions;
  if (cost * count > 4e9) {
    count = static_cast<std::size_t>(std::max(1.0, 4e9 / cost));
    notes.push_back("stein-tomas q=" + std::to_string(q) + " d=" + std::to_string(d) + ": " + std::to_string(count) +
                    " functions (convolution cost)");
  }
  Rng rng = stream(c.seed, 6, q, d);
  double worst_e1 = 0, worst_e2 = kNaN;
  bool e1_ok = true;
  for (std::size_t i = 0; i < count; ++i) {
    const GridFunction g{q, d, random_values(rng, op.grid_size())};
    const auto st = stein_tomas_check(*field, k, g);
    e1_ok &= st.e1_ok;
    worst_e1 = std::max(worst_e1, st.e1_lhs / st.e1_rhs);
    if (!std::isnan(st.e2_ratio)) worst_e2 = std::isnan(worst_e2) ? st.e2_ratio : std::max(worst_e2, st.e2_ratio);
  }
  t.add({as_int(q), as_int(d), as_int(count), defect, worst_e1, worst_e2}, pass_if(e1_ok && defect < c.tol));
}

inline void proof_trace_rows(const FieldPtr& field, unsigned d, const Paraboloid& surface, const ExperimentConfig& c,
                             Table& t) {
  const CharacterTable chars(field);
  const std::uint32_t q = field->order();
  Rng rng = stream(c.seed, 7, q, d);
  const double tol = 1e-8;
  for (std::size_t i = 0; i < c.trace_cases; ++i) {
    const std::uint64_t size = 1 + rng.below(std::min<std::uint64_t>(4, surface.size()));
    const SubsetOfS e(q, d, sample_distinct(rng, surface.size(), size));
    const std::uint64_t x = e.members()[rng.below(e.size())];
    const auto tr = proof_trace_terms(chars, d, e, x);
    const double scale = std::max(1.0, std::abs(tr.ii_direct));
    const double d_closed = std::abs(tr.ii_direct - tr.ii_closed) / scale;
    const double d_gamma = std::abs(tr.ii_direct - tr.ii_gamma) / scale;
    const double d_total = std::abs(static_cast<double>(tr.m_exact - tr.i_exact) - tr.ii_direct.real()) / scale;
    double g1_defect = kNaN;
    bool ok = tr.i_is_integer && tr.i_exact == tr.i_formula && d_closed < tol && d_gamma < tol && d_total < tol;
    if (tr.odd_hypotheses) {
      const Complex want{-std::pow(static_cast<double>(q), (d - 1.0) / 2.0), 0.0};
      g1_defect = std::abs(tr.g1_power - want) / std::abs(want);
      ok &= g1_defect < tol;
    }
    t.add({as_int(q), as_int(d), as_int(e.size()), as_int(x), tr.m_exact, tr.i_exact, tr.i_formula,
           tr.ii_direct.real(), d_closed, d_gamma, g1_defect},
          pass_if(ok));
  }
}

inline void run_sweep(const Plan& plan, Report& rep) {
  const auto& c = plan.config;
  run_gauss(plan, rep);
  auto& cs = rep.table("completed-square", {"q", "k", "mode", "cases", "max_abs_diff"});
  auto& sigma = rep.table("sigma-check-summary", {"q", "d", "points", "max_abs_diff"});
  auto& ids = rep.table("identities", {"q", "d", "functions", "plancherel_rel_err", "l2_identity_rel_err",
                                       "ratio22_abs_err"});
  auto& st = rep.table("stein-tomas", {"q", "d", "functions", "kernel_transform_defect", "e1_max_ratio",
                                       "e2_max_ratio"});
  auto& pt = rep.table("proof-trace", {"q", "d", "size", "x", "m_exact", "i_exact", "i_formula", "ii_direct_re",
                                       "ii_closed_rel_diff", "ii_gamma_rel_diff", "g1_power_rel_defect"});
  unsigned kmax = 1;
  for (unsigned d : c.dims) kmax = std::max(kmax, d - 1);
  for (const auto& f : plan.fields) completed_square_rows(f, kmax, c, cs);
  for (unsigned d : c.dims) {
    for (const auto& f : plan.fields) {
      const CharacterTable chars(f);
      const Paraboloid surface(f, d, c.cap);
      const ExtensionOperator op(surface, chars);
      sigma_rows(f, d, 1e-8, nullptr, sigma);
      identity_rows(f, d, op, c, ids);
      stein_tomas_rows(f, d, op, surface, c, st, rep.notes);
      if (d >= 3) proof_trace_rows(f, d, surface, c, pt);
    }
  }
  energy_tables(plan, rep, true);
  const auto nt = norm_tables(rep);
  for (unsigned d : c.dims) {
    for (Theorem th : {Theorem::kP4, Theorem::k2R, Theorem::kOdd}) {
      std::vector<FieldPtr> eligible;
      for (const auto& f : plan.fields) {
        if (auto why = theorem_precondition(th, *f, d); why.empty()) {
          eligible.push_back(f);
        } else {
          rep.notes.push_back(std::string("norms ") + to_string(th) + " q=" + std::to_string(f->order()) +
                              " d=" + std::to_string(d) + " skipped: " + why);
        }
      }
      if (!eligible.empty()) norm_sweep(th, eligible, d, c, nt);
    }
  }
}

}  // namespace detail

/// Runs a validated plan. The report's timestamp is the only field that
/// differs between runs of the same configuration.
inline Report run(const Plan& plan) {
  Report rep = detail::make_report(plan);
  switch (plan.command) {
    case Command::kGauss: detail::run_gauss(plan, rep); break;
    case Command::kSigmaCheck: detail::run_sigma_check(plan, rep); break;
    case Command::kEnergy: detail::energy_tables(plan, rep, true); break;
    case Command::kNorms: detail::run_norms(plan, rep); break;
    case Command::kSweep: detail::run_sweep(plan, rep); break;
  }
  return rep;
}

inline Report run(const ExperimentConfig& config) { return run(validate(config)); }

/// 0 when no row failed, 1 otherwise.
inline int exit_status(const Report& rep) { return rep.passed() ? 0 : 1; }

}  // namespace ffext

#endif  // FFEXT_EXPERIMENTS_HPP_
