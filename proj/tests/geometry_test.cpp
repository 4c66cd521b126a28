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


#include "ffext/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ffext/energy.hpp"
#include "ffext/fourier.hpp"
#include "oracles.hpp"

namespace ffext {
namespace {

TEST(Paraboloid, ThreePointsOverF3) {
  const auto s = build_paraboloid(make_field(3, 1), 2);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.points(), (std::vector<Point>{{Element{0}, Element{0}}, {Element{1}, Element{1}}, {Element{2}, Element{1}}}));
  EXPECT_EQ(build_paraboloid(make_field(3, 1), 3).size(), 9u);
}

TEST(Paraboloid, MembershipAgreesWithEnumeration) {
  for (auto [q, d] : std::vector<std::pair<std::uint32_t, unsigned>>{{5, 4}, {3, 3}, {9, 3}, {7, 2}}) {
    const auto field = parse_field(std::to_string(q));
    const auto s = build_paraboloid(field, d);
    EXPECT_EQ(s.size(), static_cast<std::uint64_t>(std::pow(q, d - 1)));
    const auto pts = s.points();
    std::set<Point> on(pts.begin(), pts.end());
    EXPECT_EQ(on.size(), pts.size());
    std::uint64_t count = 0;
    for (std::uint64_t m = 0; m < s.ambient().size(); ++m) {
      const Point x = s.ambient().decode(m);
      Point xbar(x.begin(), x.end() - 1);
      const bool member = oracle::dot(*field, xbar, xbar) == x.back();
      EXPECT_EQ(s.contains(x), member);
      EXPECT_EQ(on.count(x) == 1, member);
      if (member) {
        ++count;
        EXPECT_EQ(s.point(*s.index_of(x)), x);
      } else {
        EXPECT_FALSE(s.index_of(x).has_value());
      }
    }
    EXPECT_EQ(count, s.size());
    EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
  }
}

TEST(Paraboloid, CapIsEnforced) {
  EXPECT_THROW(build_paraboloid(make_field(3, 3), 7, 1000), CapExceeded);
  EXPECT_THROW(build_paraboloid(make_field(3, 1), 1), std::invalid_argument);
  EXPECT_NO_THROW(build_paraboloid(make_field(3, 3), 5));
}

TEST(SubspaceH, Examples) {
  const auto f5 = make_field(5, 1);
  const auto s4 = build_paraboloid(f5, 4);
  const auto h = build_subspace_H(*f5, 4);
  ASSERT_TRUE(h.has_value());
  ASSERT_EQ(h->size(), 5u);
  for (std::uint32_t t = 0; t < 5; ++t) {
    const Point x{Element{t}, Element{2 * t % 5}, Element{0}, Element{0}};
    EXPECT_TRUE(h->contains(*s4.index_of(x)));
  }
  const auto h3 = build_subspace_H(*f5, 3);
  ASSERT_TRUE(h3.has_value());
  EXPECT_EQ(h3->size(), 5u);
  EXPECT_FALSE(build_subspace_H(*make_field(3, 1), 4).has_value());
}

TEST(SubspaceH, ClosedSubspaceOnS) {
  for (auto [q, d] : std::vector<std::pair<std::uint32_t, unsigned>>{{5, 4}, {5, 5}, {13, 4}, {9, 4}, {5, 6}, {9, 5}, {25, 4}}) {
    const auto field = parse_field(std::to_string(q));
    const auto s = build_paraboloid(field, d);
    const auto h = build_subspace_H(*field, d);
    ASSERT_TRUE(h.has_value());
    const unsigned n = d % 2 == 0 ? (d - 2) / 2 : (d - 1) / 2;
    EXPECT_EQ(h->size(), static_cast<std::size_t>(std::pow(q, n)));
    if (h->size() > 125) continue;
    std::set<Point> members;
    for (auto i : h->members()) {
      const Point x = s.point(i);
      EXPECT_TRUE(s.contains(x));
      members.insert(x);
    }
    for (const auto& a : members) {
      for (const auto& b : members) {
        Point sum(d);
        for (unsigned k = 0; k < d; ++k) sum[k] = field->add(a[k], b[k]);
        EXPECT_EQ(members.count(sum), 1u);
      }
      for (std::uint32_t c = 0; c < q; ++c) {
        Point scaled(d);
        for (unsigned k = 0; k < d; ++k) scaled[k] = field->mul(Element{c}, a[k]);
        EXPECT_EQ(members.count(scaled), 1u);
      }
    }
  }
}

TEST(SubsetOfS, HexRoundTrip) {
  const SubsetOfS e(3, 3, {0, 3, 8, 3});
  EXPECT_EQ(e.size(), 3u);
  EXPECT_EQ(e.to_hex(), "0901");
  EXPECT_EQ(SubsetOfS::from_hex(3, 3, "0901"), e);
  EXPECT_THROW(SubsetOfS::from_hex(3, 3, "09"), std::invalid_argument);
  EXPECT_THROW(SubsetOfS::from_hex(3, 3, "0903"), std::invalid_argument);
  EXPECT_THROW(SubsetOfS(3, 3, {9}), std::out_of_range);
  std::mt19937_64 gen(3);
  for (int n = 0; n < 20; ++n) {
    std::vector<std::uint64_t> m;
    for (std::uint64_t i = 0; i < 125; ++i) {
      if (gen() % 3 == 0) m.push_back(i);
    }
    const SubsetOfS r(5, 4, m);
    EXPECT_EQ(SubsetOfS::from_hex(5, 4, r.to_hex()), r);
  }
}

TEST(Translate, StaysOnSAndPreservesEnergy) {
  const auto field = make_field(5, 1);
  const auto s = build_paraboloid(field, 3);
  const SubsetOfS e(5, 3, {1, 7, 12, 13, 20});
  const Point shift{Element{2}, Element{4}};
  const auto moved = translate(s, e, shift);
  EXPECT_EQ(moved.size(), e.size());
  EXPECT_EQ(lambda4(*field, 3, moved), lambda4(*field, 3, e));
}

TEST(NecessaryCondition, EqualityAtThreshold) {
  const auto field = make_field(5, 1);
  const auto h = *build_subspace_H(*field, 4);
  const double p = 1.7;
  const double r = necessary_r_threshold(p, 4, 1);
  const auto sides = necessary_condition_sides(h, p, r);
  EXPECT_NEAR(sides.n, 1.0, 1e-12);
  EXPECT_NEAR(sides.left / sides.right, 1.0, 1e-12);
}

TEST(NecessaryCondition, BoundedAtEndpointGrowsBelowThreshold) {
  std::vector<double> at_endpoint, below;
  for (auto q : {5u, 13u, 17u}) {
    const auto field = parse_field(std::to_string(q));
    const auto h = *build_subspace_H(*field, 4);
    const auto e = necessary_condition_sides(h, 1.6, 4.0);
    at_endpoint.push_back(e.left / e.right);
    const double r_low = necessary_r_threshold(1.6, 4, 1) - 0.5;
    const auto b = necessary_condition_sides(h, 1.6, r_low);
    below.push_back(b.left / b.right);
  }
  for (double v : at_endpoint) EXPECT_LE(v, 1.0 + 1e-12);
  EXPECT_LT(below[0], below[1]);
  EXPECT_LT(below[1], below[2]);
}

TEST(NecessaryCondition, TrueRatioDominatesSides) {
  // The true extension ratio of the indicator of H is at least left/right.
  for (auto q : {5u, 13u}) {
    const auto field = parse_field(std::to_string(q));
    const CharacterTable chars(field);
    const auto s = build_paraboloid(field, 4);
    const ExtensionOperator op(s, chars);
    const auto h = *build_subspace_H(*field, 4);
    for (auto [p, r] : std::vector<std::pair<double, double>>{{1.6, 4}, {2, 4}, {1.4, 3}}) {
      const auto u = op.apply_indicator(h);
      const double num = weighted_norm(u, r, 1.0);
      const double den = std::pow(static_cast<double>(h.size()) / s.size(), 1.0 / p);
      const auto sides = necessary_condition_sides(h, p, r);
      EXPECT_GE(num / den, sides.left / sides.right * (1 - 1e-9));
    }
  }
}

}  // namespace
}  // namespace ffext
