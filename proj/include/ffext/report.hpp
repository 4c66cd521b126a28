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


#ifndef FFEXT_REPORT_HPP_
#define FFEXT_REPORT_HPP_

// Experiment records: a header (tool, version, config echo, field moduli,
// timestamp) followed by named tables whose rows carry pass/warn/fail
// verdicts. Serialized as CSV with '#' header lines, or as JSON.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>
#include <string>
#include <deque>
#include <variant>
#include <vector>

#include "ffext/finite_field.hpp"
#include "json.hpp"

namespace ffext {

inline constexpr const char* kVersion = "0.1.0";

enum class Verdict { kPass, kWarn, kFail };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kWarn: return "warn";
    case Verdict::kFail: return "fail";
  }
  return "unknown";
}

inline Verdict pass_if(bool ok) { return ok ? Verdict::kPass : Verdict::kFail; }

using Cell = std::variant<std::int64_t, double, std::string>;

/// %.17g, with nan and inf spelled out.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return csv_escape(std::get<std::string>(c));
}

inline nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  return std::get<std::string>(c);
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Verdict> verdicts;

  void add(std::vector<Cell> row, Verdict v = Verdict::kPass) {
    if (row.size() != columns.size()) {
      throw std::logic_error("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
    verdicts.push_back(v);
  }
};

/// Current UTC time as an ISO 8601 string.
inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Report {
  std::string tool = "ffext";
  std::string version = kVersion;
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::pair<std::string, std::vector<std::uint32_t>>> moduli;
  std::string timestamp = utc_timestamp();
  std::vector<std::string> notes;
  std::deque<Table> tables;

  Table& table(std::string name, std::vector<std::string> columns) {
    tables.push_back(Table{std::move(name), std::move(columns), {}, {}});
    return tables.back();
  }

  void add_field(const Field& f) {
    for (const auto& [name, m] : moduli) {
      if (name == f.name()) return;
    }
    moduli.emplace_back(f.name(), f.modulus());
  }

  std::size_t count(Verdict v) const {
    std::size_t n = 0;
    for (const auto& t : tables) {
      for (auto x : t.verdicts) n += x == v;
    }
    return n;
  }

  bool passed() const { return count(Verdict::kFail) == 0; }

  std::string to_csv() const {
    std::ostringstream out;
    out << "# tool: " << tool << " " << version << "\n";
    out << "# command: " << command << "\n";
    out << "# config: " << config.dump() << "\n";
    for (const auto& [name, m] : moduli) {
      out << "# modulus " << name << ":";
      for (auto c : m) out << " " << c;
      out << "\n";
    }
    out << "# timestamp: " << timestamp << "\n";
    out << "# verdicts: pass=" << count(Verdict::kPass) << " warn=" << count(Verdict::kWarn)
        << " fail=" << count(Verdict::kFail) << "\n";
    for (const auto& n : notes) out << "# note: " << n << "\n";
    for (const auto& t : tables) {
      out << "\n## table: " << t.name << "\n";
      for (const auto& c : t.columns) out << csv_escape(c) << ",";
      out << "verdict\n";
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (const auto& c : t.rows[i]) out << cell_text(c) << ",";
        out << to_string(t.verdicts[i]) << "\n";
      }
    }
    return out.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    j["config"] = config;
    nlohmann::json mod = nlohmann::json::object();
    for (const auto& [name, m] : moduli) mod[name] = m;
    j["moduli"] = mod;
    j["timestamp"] = timestamp;
    j["verdicts"] = {{"pass", count(Verdict::kPass)}, {"warn", count(Verdict::kWarn)}, {"fail", count(Verdict::kFail)}};
    j["notes"] = notes;
    nlohmann::json tabs = nlohmann::json::array();
    for (const auto& t : tables) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) row[t.columns[c]] = cell_json(t.rows[i][c]);
        row["verdict"] = to_string(t.verdicts[i]);
        rows.push_back(std::move(row));
      }
      tabs.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
    }
    j["tables"] = std::move(tabs);
    return j;
  }

  std::string render(const std::string& format) const {
    if (format == "csv") return to_csv();
    if (format == "json") return to_json().dump(2) + "\n";
    throw std::invalid_argument("unknown report format '" + format + "'");
  }
};

}  // namespace ffext

#endif  // FFEXT_REPORT_HPP_
