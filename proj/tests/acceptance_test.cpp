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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <unistd.h>

#include "ffext/characters.hpp"
#include "ffext/energy.hpp"
#include "ffext/experiments.hpp"
#include "ffext/fourier.hpp"
#include "ffext/geometry.hpp"
#include "ffext/norms_lab.hpp"
#include "ffext/rng.hpp"
#include "oracles.hpp"

namespace {

using namespace ffext;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::uint32_t> odd_prime_powers(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 3; q <= limit; q += 2) {
    const auto f = detail::prime_factors(q);
    if (f.size() == 1) out.push_back(q);
  }
  return out;
}

Outcome gauss_exactness() {
  double worst = 0, worst_oracle = 0;
  std::size_t fields = 0;
  const auto t0 = Clock::now();
  for (auto q : odd_prime_powers(121)) {
    const CharacterTable chars(parse_field(std::to_string(q)));
    worst = std::max(worst, std::abs(chars.gauss_sum(chars.field().one()) - chars.explicit_gauss_value()));
    ++fields;
  }
  const double elapsed = seconds_since(t0);
  for (auto q : odd_prime_powers(121)) {
    const auto f = parse_field(std::to_string(q));
    Complex direct{};
    for (std::uint32_t s = 1; s < q; ++s) direct += static_cast<double>(oracle::eta(*f, Element{s})) * oracle::chi(*f, Element{s});
    worst_oracle = std::max(worst_oracle, std::abs(direct - CharacterTable::explicit_gauss_value(*f)));
  }
  return {worst < 1e-9 && worst_oracle < 1e-9 && elapsed < 1.0,
          std::to_string(fields) + " fields, max |diff| " + fmt("%.2e", worst) + ", oracle " +
              fmt("%.2e", worst_oracle) + ", library time " + fmt("%.3f s", elapsed)};
}

Outcome sigma_exactness() {
  double worst = 0, worst_oracle = 0;
  std::uint64_t points = 0;
  const auto t0 = Clock::now();
  for (std::uint32_t q : {3u, 5u, 7u, 9u}) {
    for (unsigned d : {2u, 3u, 4u}) {
      const auto field = parse_field(std::to_string(q));
      const CharacterTable chars(field);
      const Paraboloid surface(field, d, 1'000'000);
      const ExtensionOperator op(surface, chars);
      const auto direct = op.apply(std::vector<Complex>(op.surface_size(), Complex{1.0, 0.0}));
      for (std::size_t m = 0; m < op.grid_size(); ++m) {
        worst = std::max(worst, std::abs(direct[m] - sigma_inverse_closed_form(chars, op.grid_point(m))));
      }
      points += op.grid_size();
      if (op.grid_size() <= 729) {
        const auto pts = surface.points();
        const std::vector<Complex> ones(pts.size(), Complex{1.0, 0.0});
        for (std::size_t m = 0; m < op.grid_size(); ++m) {
          const Point mp(op.grid_point(m).begin(), op.grid_point(m).end());
          worst_oracle = std::max(worst_oracle, std::abs(oracle::extension_at(*field, pts, ones, mp) -
                                                         sigma_inverse_closed_form(chars, mp)));
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-8 && worst_oracle < 1e-8 && elapsed < 60.0,
          std::to_string(points) + " points, max |diff| " + fmt("%.2e", worst) + ", oracle " +
              fmt("%.2e", worst_oracle) + ", " + fmt("%.1f s", elapsed)};
}

Outcome completed_square_exactness() {
  double worst = 0;
  std::uint64_t exhaustive = 0, random = 0;
  Rng rng(3);
  for (std::uint32_t q : {3u, 5u, 7u, 9u, 11u, 13u}) {
    const auto field = parse_field(std::to_string(q));
    const CharacterTable chars(field);
    for (unsigned k = 1; k <= 5; ++k) {
      const PointSpace space(field, k);
      Point beta(k);
      auto check = [&](std::uint32_t t) {
        const auto s = completed_square_sum(chars, Element{t}, beta);
        worst = std::max(worst, std::abs(s.direct - s.closed));
      };
      if (space.size() <= 10'000) {
        for (std::uint32_t t = 1; t < q; ++t) {
          for (std::uint64_t b = 0; b < space.size(); ++b) {
            space.decode(b, beta);
            check(t);
            ++exhaustive;
          }
        }
      } else {
        for (int i = 0; i < 1000; ++i) {
          space.decode(rng.below(space.size()), beta);
          check(static_cast<std::uint32_t>(1 + rng.below(q - 1)));
          ++random;
        }
      }
    }
  }
  return {worst < 1e-9, std::to_string(exhaustive) + " exhaustive and " + std::to_string(random) +
                            " random (t, beta), max |diff| " + fmt("%.2e", worst)};
}

Outcome l2_and_plancherel() {
  double l2 = 0, planch = 0, r22 = 0;
  std::size_t configs = 0;
  for (std::uint32_t q : {3u, 5u, 7u, 9u}) {
    for (unsigned d : {2u, 3u, 4u}) {
      if (q == 9 && d == 4) continue;
      const auto field = parse_field(std::to_string(q));
      const CharacterTable chars(field);
      const Paraboloid surface(field, d);
      const ExtensionOperator op(surface, chars);
      Rng rng(1000 * q + d);
      for (int i = 0; i < 100; ++i) {
        SurfaceFunction f{q, d, std::vector<Complex>(op.surface_size())};
        for (auto& z : f.values) z = rng.complex_normal();
        const auto id = l2_identity_check(op, f);
        l2 = std::max(l2, std::abs(id.lhs - id.rhs) / id.rhs);
        r22 = std::max(r22, std::abs(ratio(op, f, 2.0, 2.0) - std::sqrt(static_cast<double>(q))));
        GridFunction g{q, d, std::vector<Complex>(op.grid_size())};
        for (auto& z : g.values) z = rng.complex_normal();
        const double lhs = power_sum(g.values, 2.0);
        const double rhs = static_cast<double>(op.grid_size()) * power_sum(hat(chars, g).values, 2.0);
        planch = std::max(planch, std::abs(lhs - rhs) / lhs);
      }
      ++configs;
    }
  }
  return {l2 < 1e-9 && planch < 1e-9 && r22 < 1e-9,
          std::to_string(configs) + " (q, d) configurations x 100 functions; max rel err L2 " + fmt("%.2e", l2) +
              ", Plancherel " + fmt("%.2e", planch) + ", |ratio(f,2,2) - sqrt q| " + fmt("%.2e", r22)};
}

std::vector<Point> lifted(const Paraboloid& s, const SubsetOfS& e) {
  std::vector<Point> out;
  for (auto i : e.members()) out.push_back(s.point(i));
  return out;
}

Outcome energy_oracle() {
  std::uint64_t compared = 0, mismatches = 0;
  Rng rng(5);
  for (std::uint32_t q : {3u, 5u}) {
    for (unsigned d : {2u, 3u, 4u}) {
      const auto field = parse_field(std::to_string(q));
      const Paraboloid surface(field, d);
      auto check = [&](const SubsetOfS& e) {
        ++compared;
        if (lambda4(*field, d, e) != oracle::lambda4_quadruples(*field, lifted(surface, e))) ++mismatches;
      };
      const std::uint64_t n = surface.size();
      if (n <= 9) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
          std::vector<std::uint64_t> m;
          for (std::uint64_t i = 0; i < n; ++i) {
            if (mask >> i & 1) m.push_back(i);
          }
          check(SubsetOfS(q, d, m));
        }
      } else {
        for (std::uint64_t size = 1; size <= 12; ++size) {
          for (int i = 0; i < 8; ++i) check(SubsetOfS(q, d, sample_distinct(rng, n, size)));
        }
      }
    }
  }
  const auto f3 = make_field(3, 1);
  const std::uint64_t full = lambda4(*f3, 2, SubsetOfS::full(3, 2));

  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t q = i % 2 ? 5 : 3;
    const unsigned d = 2 + i % 3;
    const auto field = parse_field(std::to_string(q));
    const CharacterTable chars(field);
    const Paraboloid surface(field, d);
    const ExtensionOperator op(surface, chars);
    const auto e = SubsetOfS(q, d, sample_distinct(rng, surface.size(), 1 + rng.below(surface.size())));
    const double via_energy = l4_norm_via_energy(*field, d, e);
    const double direct = weighted_norm(op.apply_indicator(e), 4.0, 1.0);
    worst = std::max(worst, std::abs(via_energy - direct) / direct);
  }
  return {mismatches == 0 && full == 15 && worst < 1e-9,
          std::to_string(compared) + " subsets vs quadruple enumeration, " + std::to_string(mismatches) +
              " mismatches; Lambda_4(S) for q=3, d=2 is " + std::to_string(full) +
              "; 500 L4 norms, max rel diff " + fmt("%.2e", worst)};
}

Outcome energy_monitor(unsigned d, std::initializer_list<std::uint32_t> qs, std::size_t samples) {
  std::vector<double> xs, maxima;
  std::string detail;
  bool ok = true;
  double worst_sum = 0;
  for (auto q : qs) {
    const auto field = parse_field(std::to_string(q));
    const Paraboloid surface(field, d, UINT64_MAX / 64);
    const Parity parity = d % 2 == 0 ? Parity::kEven : Parity::kOdd;
    ok &= energy_bound_precondition(*field, d, parity).empty();
    Rng rng(1000 * q + d);
    const auto survey = energy_survey(surface, parity, {samples, {}, 2048}, rng);
    std::size_t randoms = 0;
    for (const auto& r : survey.records) {
      randoms += r.family == "random";
      worst_sum = std::max(worst_sum, static_cast<double>(r.report.lambda4) /
                                          (r.report.cubic_over_q + r.report.middle + r.report.quadratic));
    }
    ok &= randoms >= 1000;
    xs.push_back(q);
    maxima.push_back(survey.max_ratio);
    detail += "q=" + std::to_string(q) + ": " + std::to_string(survey.records.size()) + " subsets, max " +
              fmt("%.4f", survey.max_ratio) + "; ";
  }
  const double top = *std::max_element(maxima.begin(), maxima.end());
  const double slope = loglog_slope(xs, maxima);
  ok &= top <= 16.0 && slope <= 0.1;
  return {ok, detail + "slope " + fmt("%.4f", slope) + " (C = 16, limit 0.1); max ratio to the three-term sum " +
                  fmt("%.4f", worst_sum)};
}

Outcome sharpness() {
  const double d = 4, n = 1, r = 4, p0 = p4_endpoint(4);
  std::vector<double> xs, below, at;
  double worst_closed = 0;
  for (std::uint32_t q : {5u, 13u, 17u}) {
    const auto field = parse_field(std::to_string(q));
    const CharacterTable chars(field);
    const Paraboloid surface(field, 4);
    const ExtensionOperator op(surface, chars);
    const auto h = build_subspace_H(*field, 4);
    if (!h) return {false, "H missing for q = " + std::to_string(q)};
    xs.push_back(q);
    below.push_back(indicator_ratio(op, *h, p0 - 0.1, r));
    at.push_back(indicator_ratio(op, *h, p0, r));
    worst_closed = std::max(worst_closed, std::abs(below.back() - subspace_witness_ratio(q, d, n, p0 - 0.1, r)) / below.back());
  }
  const bool increasing = below[0] < below[1] && below[1] < below[2];
  const double slope = loglog_slope(xs, below);
  const double spread = *std::max_element(at.begin(), at.end()) / *std::min_element(at.begin(), at.end());
  return {increasing && slope >= 0.05 && spread <= 4.0 && worst_closed < 1e-9,
          "p0-0.1: " + fmt("%.4f", below[0]) + " < " + fmt("%.4f", below[1]) + " < " + fmt("%.4f", below[2]) +
              ", slope " + fmt("%.4f", slope) + "; p0 spread x" + fmt("%.4f", spread) +
              "; closed-form rel diff " + fmt("%.1e", worst_closed)};
}

Outcome stein_tomas() {
  bool ok = true;
  double worst = 0, defect = 0;
  for (std::uint32_t q : {3u, 5u}) {
    const auto field = parse_field(std::to_string(q));
    const CharacterTable chars(field);
    const Paraboloid surface(field, 4);
    const ExtensionOperator op(surface, chars);
    const auto k = bochner_riesz_kernel(op);
    defect = std::max(defect, kernel_transform_defect(chars, surface, k));
    Rng rng(q);
    for (int i = 0; i < 200; ++i) {
      GridFunction g{q, 4, std::vector<Complex>(op.grid_size())};
      for (auto& z : g.values) z = rng.complex_normal();
      const auto st = stein_tomas_check(*field, k, g);
      ok &= st.e1_ok;
      worst = std::max(worst, st.e1_lhs / st.e1_rhs);
    }
  }
  return {ok && defect < 1e-9, "400 functions, max ||g*K||_2 / (q ||g||_2) = " + fmt("%.4f", worst) +
                                   "; max |K^ - (qS - 1)| = " + fmt("%.2e", defect)};
}

Outcome proof_trace() {
  std::string detail;
  bool ok = true;
  for (auto [q, d] : {std::pair{3u, 4u}, std::pair{5u, 4u}, std::pair{3u, 7u}}) {
    const auto field = parse_field(std::to_string(q));
    const CharacterTable chars(field);
    const Paraboloid surface(field, d);
    Rng rng(100 * q + d);
    int i_ok = 0, ii_ok = 0, sign_ok = 0, cases = q == 5 ? 50 : (d == 4 ? 50 : 100);
    for (int c = 0; c < cases; ++c) {
      const SubsetOfS e(q, d, sample_distinct(rng, surface.size(), 1 + rng.below(5)));
      const auto tr = proof_trace_terms(chars, d, e, e.members()[rng.below(e.size())]);
      i_ok += tr.i_is_integer && tr.i_exact == tr.i_formula;
      const double scale = std::max(1.0, std::abs(tr.ii_direct));
      ii_ok += std::abs(tr.ii_direct - tr.ii_closed) / scale < 1e-8 &&
               std::abs(tr.ii_direct - tr.ii_gamma) / scale < 1e-8;
      if (d % 2 == 1) {
        const double want = -std::pow(static_cast<double>(q), (d - 1.0) / 2.0);
        sign_ok += tr.odd_hypotheses && std::abs(tr.g1_power - Complex{want, 0.0}) < 1e-8 * std::abs(want);
      }
    }
    ok &= i_ok == cases && ii_ok == cases && (d % 2 == 0 || sign_ok == cases);
    detail += "q=" + std::to_string(q) + " d=" + std::to_string(d) + ": I " + std::to_string(i_ok) + "/" +
              std::to_string(cases) + ", II " + std::to_string(ii_ok) + "/" + std::to_string(cases);
    if (d % 2 == 1) detail += ", G1 sign " + std::to_string(sign_ok) + "/" + std::to_string(cases);
    detail += "; ";
  }
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome sweep_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ffext_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  double worst = 0;
  int status = 0;
  for (const char* name : {"a.csv", "b.csv"}) {
    const auto t0 = Clock::now();
    const std::string cmd = std::string(FFEXT_CLI_PATH) + " sweep --q 3,5 --d 4 --out " + (dir / name).string() +
                            " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    status = std::max(status, WIFEXITED(raw) ? WEXITSTATUS(raw) : 99);
    worst = std::max(worst, seconds_since(t0));
  }
  const std::regex stamp("# timestamp: [^\n]*");
  const auto a = std::regex_replace(slurp(dir / "a.csv"), stamp, "");
  const auto b = std::regex_replace(slurp(dir / "b.csv"), stamp, "");
  fs::remove_all(dir);
  const bool same = !a.empty() && a == b;
  return {same && worst < 600 && status <= 1,
          std::string(same ? "identical" : "different") + " modulo timestamp (" + std::to_string(a.size()) +
              " bytes), exit status " + std::to_string(status) + ", slowest run " + fmt("%.1f s", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Gauss sums match the closed form for odd q <= 121", gauss_exactness},
      {"extension of 1 matches its closed form at every point", sigma_exactness},
      {"completed-square sums match their closed form", completed_square_exactness},
      {"L2 identity, Plancherel and ratio(f,2,2) = sqrt q", l2_and_plancherel},
      {"Lambda_4 matches quadruple enumeration", energy_oracle},
      {"energy constant monitor, d = 4", [] { return energy_monitor(4, {3, 5, 7, 9, 13}, 1000); }},
      {"energy constant monitor, d = 7", [] { return energy_monitor(7, {3, 27}, 1000); }},
      {"H-witness sharpness", sharpness},
      {"kernel bound (e1) and kernel transform", stein_tomas},
      {"proof-trace decomposition", proof_trace},
      {"sweep determinism and runtime", sweep_determinism},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    passed += o.ok;
    std::printf("%s criterion %zu: %s: %s [%.1f s]\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
