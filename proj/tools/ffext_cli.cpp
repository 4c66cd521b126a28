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


// ffext: experiment runner.
//
//   ffext gauss --q 3,5,7,9,11,13
//   ffext sigma-check --q 3 --d 3
//   ffext energy --q 3,5,7 --d 4 --samples 1000
//   ffext norms --theorem p4 --q 5,13 --d 4 --out norms.csv
//   ffext sweep --q 3,5 --d 4 --seed 7
//
// Exit status: 0 no failed rows, 1 failed rows, 2 configuration error or
// cap refusal.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ffext/experiments.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;

void add_options(CLI::App& cmd, ffext::ExperimentConfig& c, std::string& out) {
  cmd.add_option("--q,--q-list", c.fields, "fields as q or p^l, comma separated")->delimiter(',')->required();
  cmd.add_option("--seed", c.seed, "seed for all randomness")->capture_default_str();
  cmd.add_option("--cap", c.cap, "enumeration cap on q^d")->capture_default_str();
  cmd.add_option("--tol", c.tol, "tolerance for exact identities")->capture_default_str();
  cmd.add_option("--out", out, "report path; format follows the extension unless --format is given");
  cmd.add_option("--format", c.format, "csv or json");
  if (c.command == "gauss") return;
  cmd.add_option("--d", c.dims, "dimensions, comma separated")->delimiter(',')->required();
  if (c.command == "energy" || c.command == "sweep") {
    cmd.add_option("--parity", c.parity, "auto, even or odd")->capture_default_str();
    cmd.add_option("--samples", c.samples, "random subsets per (q, d)")->capture_default_str();
    cmd.add_option("--densities", c.densities, "size exponents e with |E| = q^e")->delimiter(',');
    cmd.add_option("--max-subset", c.max_subset, "largest sampled subset")->capture_default_str();
    cmd.add_option("--desk-constant", c.desk_constant, "fail above this ratio")->capture_default_str();
    cmd.add_option("--slope-limit", c.slope_limit, "fail above this log-log slope")->capture_default_str();
  }
  if (c.command == "norms" || c.command == "sweep") {
    if (c.command == "norms") cmd.add_option("--theorem", c.theorem, "p4, 2r or odd")->capture_default_str();
    cmd.add_option("--budget", c.budget, "work budget per estimate")->capture_default_str();
    cmd.add_option("--restarts", c.restarts, "gradient ascent restarts")->capture_default_str();
    cmd.add_option("--delta", c.delta, "offset below the threshold for sharpness rows")->capture_default_str();
    cmd.add_option("--epsilon", c.epsilon, "allowed log-log growth of endpoint estimates")->capture_default_str();
  }
  if (c.command == "sweep") {
    cmd.add_option("--functions", c.functions, "random functions per identity check")->capture_default_str();
    cmd.add_option("--trace-cases", c.trace_cases, "random cases per proof-trace check")->capture_default_str();
  }
}

// First unused <dir>/<command>-seed<seed>-<n>.<format>.
fs::path default_path(const fs::path& dir, const ffext::ExperimentConfig& c) {
  for (unsigned n = 1;; ++n) {
    fs::path p = dir / (c.command + "-seed" + std::to_string(c.seed) + "-" + std::to_string(n) + "." + c.format);
    if (!fs::exists(p)) return p;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extension-operator experiments over finite fields", "ffext"};
  app.set_version_flag("--version", ffext::kVersion);
  app.require_subcommand(1);
  const char* names[] = {"gauss", "sigma-check", "energy", "norms", "sweep"};
  const char* blurbs[] = {"Gauss sums against their closed form", "extension of 1 against its closed form",
                          "additive energy against the piecewise bound", "lower bounds for extension norms",
                          "every check over a (q, d) grid"};
  ffext::ExperimentConfig configs[5];
  std::string outs[5];
  bool format_given[5] = {};
  for (int i = 0; i < 5; ++i) {
    configs[i].command = names[i];
    auto* cmd = app.add_subcommand(names[i], blurbs[i]);
    add_options(*cmd, configs[i], outs[i]);
    cmd->callback([&, i, cmd] { format_given[i] = cmd->count("--format") > 0; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  int which = 0;
  while (!app.got_subcommand(names[which])) ++which;
  ffext::ExperimentConfig& config = configs[which];
  std::string out = outs[which];
  if (!format_given[which] && !out.empty()) {
    const auto ext = fs::path(out).extension().string();
    if (ext == ".json") config.format = "json";
  }

  ffext::Plan plan;
  try {
    plan = ffext::validate(config);
  } catch (const ffext::ConfigError& e) {
    std::cerr << "ffext " << config.command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const ffext::CapExceeded& e) {
    std::cerr << "ffext " << config.command << ": " << e.what() << "\n";
    return kExitConfig;
  }

  fs::path path;
  if (!out.empty()) {
    path = out;
  } else if (const char* dir = std::getenv("FFEXT_OUT_DIR"); dir && *dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      std::cerr << "ffext: cannot create FFEXT_OUT_DIR " << dir << ": " << ec.message() << "\n";
      return kExitConfig;
    }
    path = default_path(dir, config);
  }
  if (!path.empty() && fs::exists(path)) {
    std::cerr << "ffext: refusing to overwrite existing report " << path.string() << "\n";
    return kExitConfig;
  }

  ffext::Report report;
  try {
    report = ffext::run(plan);
  } catch (const ffext::CapExceeded& e) {
    std::cerr << "ffext " << config.command << ": " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string text = report.render(config.format);
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(path, std::ios::binary);
    file << text;
    if (!file) {
      std::cerr << "ffext: cannot write " << path.string() << "\n";
      return kExitConfig;
    }
  }
  std::cerr << "ffext " << config.command << ": pass=" << report.count(ffext::Verdict::kPass)
            << " warn=" << report.count(ffext::Verdict::kWarn) << " fail=" << report.count(ffext::Verdict::kFail);
  if (!path.empty()) std::cerr << " -> " << path.string();
  std::cerr << "\n";
  return ffext::exit_status(report);
}
