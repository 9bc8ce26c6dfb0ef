#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "monoproj/error.hpp"

namespace monoproj {

using Exp = long long;

/// A pointed commutative monoid of monomials: the free monoid on named
/// generators, a subset of which may be inverted, plus an absorbing zero.
struct MonoidCtx {
  std::vector<std::string> gens;
  std::set<int> inverted;  // indices of invertible generators
  bool graded = true;      // all generators have weight 1

  int ngens() const { return static_cast<int>(gens.size()); }
};

/// Either the absorbing zero or an exponent vector over the context generators.
struct MonoidValue {
  bool is_zero = false;
  std::vector<Exp> exps;  // empty when is_zero

  static MonoidValue zero() { return MonoidValue{true, {}}; }
  static MonoidValue one(int ngens) {
    return MonoidValue{false, std::vector<Exp>(static_cast<size_t>(ngens), 0)};
  }
  static MonoidValue monomial(std::vector<Exp> e) {
    return MonoidValue{false, std::move(e)};
  }
  bool operator==(const MonoidValue&) const = default;
  bool operator<(const MonoidValue& o) const {
    if (is_zero != o.is_zero) return is_zero;
    return exps < o.exps;
  }
};

/// Exponents must be nonnegative except on inverted generators.
bool valid_in(const MonoidCtx& ctx, const MonoidValue& v);

MonoidValue mul(const MonoidCtx& ctx, const MonoidValue& a, const MonoidValue& b);

/// Sum of exponents. Throws on the zero element or an ungraded context.
Exp degree(const MonoidCtx& ctx, const MonoidValue& a);

/// Witness c with a * c == b, or nullopt when a does not divide b.
std::optional<MonoidValue> divides(const MonoidCtx& ctx, const MonoidValue& a,
                                   const MonoidValue& b);

/// "x0^2*x1" style; the zero element prints as "0".
std::string to_string(const MonoidCtx& ctx, const MonoidValue& v);

MonoidValue parse_value(const MonoidCtx& ctx, const std::string& text);

/// The free graded monoid on x_0..x_r.
MonoidCtx free_graded_monoid(int r);

/// The i-th standard chart of MProj of the free graded monoid on x_0..x_r:
/// the degree-zero part of the localization at x_i, a free monoid on the r
/// generators x_j/x_i.
struct Chart {
  MonoidCtx monoid;
  int index = 0;  // which generator was inverted
  int r = 0;      // the ambient monoid has r+1 generators
};

Chart localize_chart(const MonoidCtx& ambient, int i);

/// Image of a degree-d ambient monomial in the chart: (m / x_i^d, d).
std::pair<MonoidValue, Exp> chart_embed(const Chart& chart, const MonoidValue& ambient_value);

/// A point of MProj of the free graded monoid on x_0..x_r: the prime ideal
/// generated by { x_i : i in T } for a proper subset T of {0..r}.
struct PrimePoint {
  std::set<int> T;
  bool operator==(const PrimePoint&) const = default;
  bool operator<(const PrimePoint& o) const { return T < o.T; }
};

/// All 2^(r+1) - 1 points of MProj, sorted.
std::vector<PrimePoint> mproj_points(int r);

}  // namespace monoproj
