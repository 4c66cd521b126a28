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


#ifndef FFEXT_IO_HPP_
#define FFEXT_IO_HPP_

// JSON import/export of grid functions, surface functions and subsets of S.
//
//   {"kind": "grid" | "surface", "q": 9, "d": 3, "values": [[re, im], ...]}
//   {"q": 5, "d": 4, "size": 12, "bits": "<hex>"}

#include <cmath>
#include <stdexcept>
#include <string>

#include "ffext/fourier.hpp"
#include "ffext/geometry.hpp"
#include "json.hpp"

namespace ffext {

using Json = nlohmann::json;

namespace detail {

inline Json values_to_json(std::span<const Complex> v) {
  Json arr = Json::array();
  for (const auto& z : v) arr.push_back(Json::array({z.real(), z.imag()}));
  return arr;
}

inline std::vector<Complex> values_from_json(const Json& arr, std::uint64_t expected) {
  if (!arr.is_array()) throw std::invalid_argument("values must be an array of [re, im] pairs");
  if (arr.size() != expected) {
    throw std::invalid_argument("values has length " + std::to_string(arr.size()) + ", expected " +
                                std::to_string(expected));
  }
  std::vector<Complex> out;
  out.reserve(arr.size());
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("each value must be [re, im]");
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

inline void read_header(const Json& j, std::uint32_t& q, unsigned& d) {
  q = j.at("q").get<std::uint32_t>();
  d = j.at("d").get<unsigned>();
}

}  // namespace detail

inline Json to_json(const GridFunction& f) {
  return {{"kind", "grid"}, {"q", f.q}, {"d", f.d}, {"values", detail::values_to_json(f.values)}};
}

inline Json to_json(const SurfaceFunction& f) {
  return {{"kind", "surface"}, {"q", f.q}, {"d", f.d}, {"values", detail::values_to_json(f.values)}};
}

inline Json to_json(const SubsetOfS& e) {
  return {{"q", e.q()}, {"d", e.dim()}, {"size", e.size()}, {"bits", e.to_hex()}};
}

inline GridFunction grid_function_from_json(const Json& j) {
  if (j.value("kind", "grid") != "grid") throw std::invalid_argument("expected kind 'grid'");
  GridFunction f;
  detail::read_header(j, f.q, f.d);
  f.values = detail::values_from_json(j.at("values"), detail::checked_pow(f.q, f.d, UINT64_MAX / 64));
  return f;
}

inline SurfaceFunction surface_function_from_json(const Json& j) {
  if (j.value("kind", "surface") != "surface") throw std::invalid_argument("expected kind 'surface'");
  SurfaceFunction f;
  detail::read_header(j, f.q, f.d);
  if (f.d < 2) throw std::invalid_argument("surface functions need d >= 2");
  f.values = detail::values_from_json(j.at("values"), detail::checked_pow(f.q, f.d - 1, UINT64_MAX / 64));
  return f;
}

inline SubsetOfS subset_from_json(const Json& j) {
  std::uint32_t q = 0;
  unsigned d = 0;
  detail::read_header(j, q, d);
  auto e = SubsetOfS::from_hex(q, d, j.at("bits").get<std::string>());
  if (j.contains("size") && j.at("size").get<std::size_t>() != e.size()) {
    throw std::invalid_argument("subset size does not match its bit string");
  }
  return e;
}

}  // namespace ffext

#endif  // FFEXT_IO_HPP_
