#include "doctest.h"
#include "monoproj/monoid.hpp"

#include "oracles.hpp"

using namespace monoproj;

TEST_CASE("monomial arithmetic") {
  const MonoidCtx m = free_graded_monoid(2);
  REQUIRE(m.ngens() == 3);
  const MonoidValue a = MonoidValue::monomial({2, 0, 1});
  const MonoidValue b = MonoidValue::monomial({0, 3, 1});

  CHECK(valid_in(m, a));
  CHECK(mul(m, a, b) == MonoidValue::monomial({2, 3, 2}));
  CHECK(mul(m, a, MonoidValue::zero()).is_zero);
  CHECK(mul(m, a, MonoidValue::one(3)) == a);
  CHECK(degree(m, a) == 3);
  CHECK(degree(m, MonoidValue::one(3)) == 0);
  CHECK_THROWS_AS(degree(m, MonoidValue::zero()), Error);

  CHECK(!valid_in(m, MonoidValue::monomial({1, -1, 0})));
  CHECK(!valid_in(m, MonoidValue::monomial({1, 1})));
}

TEST_CASE("divisibility witnesses") {
  const MonoidCtx m = free_graded_monoid(1);
  const MonoidValue a = MonoidValue::monomial({1, 2});
  const MonoidValue b = MonoidValue::monomial({3, 2});
  const auto w = divides(m, a, b);
  REQUIRE(w.has_value());
  CHECK(mul(m, a, *w) == b);
  CHECK(!divides(m, b, a).has_value());
  CHECK(divides(m, a, MonoidValue::zero()).has_value());
  CHECK(!divides(m, MonoidValue::zero(), a).has_value());
}

TEST_CASE("printing and parsing round trip") {
  const MonoidCtx m = free_graded_monoid(2);
  CHECK(to_string(m, MonoidValue::zero()) == "0");
  CHECK(to_string(m, MonoidValue::one(3)) == "1");
  CHECK(to_string(m, MonoidValue::monomial({2, 0, 1})) == "x0^2*x2");

  for (const std::string s : {"0", "1", "x1", "x0^2*x2", "x0*x1*x2"}) {
    const MonoidValue v = parse_value(m, s);
    CHECK(to_string(m, v) == s);
  }
  CHECK(parse_value(m, "x2*x0^2") == MonoidValue::monomial({2, 0, 1}));
  CHECK_THROWS_AS(parse_value(m, "y3"), Error);
  CHECK_THROWS_AS(parse_value(m, "x0^"), Error);
}

TEST_CASE("chart localization inverts one generator") {
  const MonoidCtx m = free_graded_monoid(1);
  const Chart c0 = localize_chart(m, 0);
  CHECK(c0.r == 1);
  CHECK(c0.index == 0);
  CHECK(c0.monoid.ngens() == 1);
  CHECK(c0.monoid.inverted.empty());
  CHECK(valid_in(c0.monoid, MonoidValue::monomial({5})));

  // x0^2*x1 at the x0 chart is (x1/x0) in degree 3
  const auto [v, d] = chart_embed(c0, MonoidValue::monomial({2, 1}));
  CHECK(v == MonoidValue::monomial({1}));
  CHECK(d == 3);

  const Chart c1 = localize_chart(m, 1);
  const auto [w, e] = chart_embed(c1, MonoidValue::monomial({2, 1}));
  CHECK(w == MonoidValue::monomial({2}));
  CHECK(e == 3);
}

TEST_CASE("mproj point counts") {
  CHECK(mproj_points(0).size() == 1);
  CHECK(mproj_points(1).size() == 3);
  CHECK(mproj_points(2).size() == 7);
  for (int r = 0; r <= 4; ++r) {
    const auto pts = mproj_points(r);
    CHECK(static_cast<long long>(pts.size()) == (1LL << (r + 1)) - 1);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    for (const PrimePoint& p : pts) CHECK(p.T.size() <= static_cast<size_t>(r));
    // every proper subset appears exactly once
    const std::set<PrimePoint> uniq(pts.begin(), pts.end());
    CHECK(uniq.size() == pts.size());
  }
}
