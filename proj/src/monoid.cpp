#include "monoproj/monoid.hpp"

#include <algorithm>
#include <sstream>

namespace monoproj {

bool valid_in(const MonoidCtx& ctx, const MonoidValue& v) {
  if (v.is_zero) return v.exps.empty();
  if (static_cast<int>(v.exps.size()) != ctx.ngens()) return false;
  for (int i = 0; i < ctx.ngens(); ++i) {
    if (v.exps[static_cast<size_t>(i)] < 0 && !ctx.inverted.count(i)) return false;
  }
  return true;
}

MonoidValue mul(const MonoidCtx& ctx, const MonoidValue& a, const MonoidValue& b) {
  if (!valid_in(ctx, a) || !valid_in(ctx, b))
    throw Error("mul: operand does not belong to the monoid");
  if (a.is_zero || b.is_zero) return MonoidValue::zero();
  MonoidValue c = a;
  for (size_t i = 0; i < c.exps.size(); ++i) c.exps[i] += b.exps[i];
  return c;
}

Exp degree(const MonoidCtx& ctx, const MonoidValue& a) {
  if (!ctx.graded) throw Error("degree: context is not graded");
  if (a.is_zero) throw Error("degree: the zero element has no degree");
  if (!valid_in(ctx, a)) throw Error("degree: value does not belong to the monoid");
  Exp d = 0;
  for (Exp e : a.exps) d += e;
  return d;
}

std::optional<MonoidValue> divides(const MonoidCtx& ctx, const MonoidValue& a,
                                   const MonoidValue& b) {
  if (!valid_in(ctx, a) || !valid_in(ctx, b))
    throw Error("divides: operand does not belong to the monoid");
  if (b.is_zero) return MonoidValue::zero();
  if (a.is_zero) return std::nullopt;
  MonoidValue c = b;
  for (size_t i = 0; i < c.exps.size(); ++i) c.exps[i] -= a.exps[i];
  if (!valid_in(ctx, c)) return std::nullopt;
  return c;
}

std::string to_string(const MonoidCtx& ctx, const MonoidValue& v) {
  if (v.is_zero) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < ctx.ngens(); ++i) {
    Exp e = v.exps[static_cast<size_t>(i)];
    if (e == 0) continue;
    if (!first) out << "*";
    out << ctx.gens[static_cast<size_t>(i)];
    if (e != 1) out << "^" << e;
    first = false;
  }
  if (first) return "1";
  return out.str();
}

MonoidValue parse_value(const MonoidCtx& ctx, const std::string& text) {
  if (text == "0") return MonoidValue::zero();
  MonoidValue v = MonoidValue::one(ctx.ngens());
  if (text == "1") return v;
  std::stringstream in(text);
  std::string factor;
  while (std::getline(in, factor, '*')) {
    std::string name = factor;
    Exp e = 1;
    auto caret = factor.find('^');
    if (caret != std::string::npos) {
      name = factor.substr(0, caret);
      try {
        e = std::stoll(factor.substr(caret + 1));
      } catch (const std::exception&) {
        throw Error("parse_value: bad exponent in '" + factor + "'");
      }
    }
    auto it = std::find(ctx.gens.begin(), ctx.gens.end(), name);
    if (it == ctx.gens.end()) throw Error("parse_value: unknown generator '" + name + "'");
    v.exps[static_cast<size_t>(it - ctx.gens.begin())] += e;
  }
  if (!valid_in(ctx, v)) throw Error("parse_value: value not in monoid: " + text);
  return v;
}

MonoidCtx free_graded_monoid(int r) {
  if (r < 0) throw Error("free_graded_monoid: need r >= 0");
  MonoidCtx ctx;
  for (int i = 0; i <= r; ++i) ctx.gens.push_back("x" + std::to_string(i));
  ctx.graded = true;
  return ctx;
}

Chart localize_chart(const MonoidCtx& ambient, int i) {
  if (!ambient.graded || !ambient.inverted.empty())
    throw Error("localize_chart: ambient monoid must be free and graded");
  int r = ambient.ngens() - 1;
  if (i < 0 || i > r) throw Error("localize_chart: chart index out of range");
  Chart chart;
  chart.index = i;
  chart.r = r;
  for (int j = 0; j <= r; ++j) {
    if (j == i) continue;
    chart.monoid.gens.push_back(ambient.gens[static_cast<size_t>(j)] + "/" +
                                ambient.gens[static_cast<size_t>(i)]);
  }
  chart.monoid.graded = false;
  return chart;
}

std::pair<MonoidValue, Exp> chart_embed(const Chart& chart, const MonoidValue& ambient_value) {
  if (ambient_value.is_zero) return {MonoidValue::zero(), 0};
  if (static_cast<int>(ambient_value.exps.size()) != chart.r + 1)
    throw Error("chart_embed: value does not live in the ambient monoid");
  Exp d = 0;
  for (Exp e : ambient_value.exps) {
    if (e < 0) throw Error("chart_embed: ambient exponents must be nonnegative");
    d += e;
  }
  MonoidValue img = MonoidValue::one(chart.r);
  int k = 0;
  for (int j = 0; j <= chart.r; ++j) {
    if (j == chart.index) continue;
    img.exps[static_cast<size_t>(k++)] = ambient_value.exps[static_cast<size_t>(j)];
  }
  return {img, d};
}

std::vector<PrimePoint> mproj_points(int r) {
  if (r < 0) throw Error("mproj_points: need r >= 0");
  std::vector<PrimePoint> pts;
  const unsigned full = (1u << (r + 1)) - 1u;
  for (unsigned mask = 0; mask < full; ++mask) {
    PrimePoint p;
    for (int i = 0; i <= r; ++i)
      if (mask & (1u << i)) p.T.insert(i);
    pts.push_back(std::move(p));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace monoproj
