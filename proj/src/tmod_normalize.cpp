#include <algorithm>
#include <deque>
#include <utility>

#include "monoproj/tmod.hpp"
#include "tmod_internal.hpp"

namespace monoproj {

void TPresentation::validate() const {
  const int n = ngens();
  for (const TRel& r : rels) {
    if (r.gi < 0 || r.gi >= n) throw Error("presentation: generator index out of range");
    if (r.a < 0) throw Error("presentation: negative exponent");
    if (!r.to_zero) {
      if (r.gj < 0 || r.gj >= n) throw Error("presentation: generator index out of range");
      if (r.b < 0) throw Error("presentation: negative exponent");
    }
  }
}

void FunctionalGraph::validate() const {
  const int n = size();
  if (static_cast<int>(tag.size()) != n)
    throw InternalError("graph: tag array size mismatch");
  if (!label.empty() && static_cast<int>(label.size()) != n)
    throw InternalError("graph: label array size mismatch");

  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    const int s = succ[static_cast<size_t>(v)];
    if (s < -1 || s >= n) throw InternalError("graph: successor out of range");
    if ((s >= 0) != (tag[static_cast<size_t>(v)] == Tag::None))
      throw InternalError("graph: tag inconsistent with successor");
    if (s >= 0) ++indeg[static_cast<size_t>(s)];
  }
  for (int v = 0; v < n; ++v)
    if (tag[static_cast<size_t>(v)] == Tag::Free && indeg[static_cast<size_t>(v)] == 1)
      throw InternalError("graph: unretracted free vertex");

  // Exactly one terminal vertex or one cycle per component.
  detail::DSU dsu(n);
  for (int v = 0; v < n; ++v)
    if (succ[static_cast<size_t>(v)] >= 0) dsu.unite(v, succ[static_cast<size_t>(v)]);
  std::vector<int> terminals(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    if (succ[static_cast<size_t>(v)] < 0) ++terminals[static_cast<size_t>(dsu.find(v))];

  // Cycle detection: colors 0 = new, 1 = on current path, 2 = finished.
  std::vector<int> color(static_cast<size_t>(n), 0);
  std::vector<int> cycles(static_cast<size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (color[static_cast<size_t>(start)] != 0) continue;
    std::vector<int> path;
    int v = start;
    while (v >= 0 && color[static_cast<size_t>(v)] == 0) {
      color[static_cast<size_t>(v)] = 1;
      path.push_back(v);
      v = succ[static_cast<size_t>(v)];
    }
    if (v >= 0 && color[static_cast<size_t>(v)] == 1)
      ++cycles[static_cast<size_t>(dsu.find(v))];
    for (int u : path) color[static_cast<size_t>(u)] = 2;
  }
  for (int v = 0; v < n; ++v) {
    if (dsu.find(v) != v) continue;
    if (terminals[static_cast<size_t>(v)] + cycles[static_cast<size_t>(v)] != 1)
      throw InternalError("graph: component without a unique terminal or cycle");
  }
}

bool elem_valid(const FunctionalGraph& g, const Elem& e) {
  switch (e.kind) {
    case Elem::Kind::Star:
      return true;
    case Elem::Kind::Vertex:
      return e.v >= 0 && e.v < g.size() && e.h == 0;
    case Elem::Kind::Tail:
      return e.v >= 0 && e.v < g.size() && g.tag[static_cast<size_t>(e.v)] == Tag::Free &&
             e.h >= 1;
  }
  return false;
}

Elem t_act(const FunctionalGraph& g, Elem e, Exp power) {
  if (power < 0) throw Error("t_act: negative power");
  while (power > 0) {
    switch (e.kind) {
      case Elem::Kind::Star:
        return Elem::star();
      case Elem::Kind::Tail:
        e.h += power;
        return e;
      case Elem::Kind::Vertex: {
        const int s = g.succ[static_cast<size_t>(e.v)];
        if (s >= 0) {
          e.v = s;
        } else if (g.tag[static_cast<size_t>(e.v)] == Tag::Zero) {
          return Elem::star();
        } else {
          e = Elem::tail(e.v, 0);
          continue;  // stays in the Tail branch
        }
        --power;
        break;
      }
    }
  }
  if (e.kind == Elem::Kind::Tail && e.h == 0) e = Elem::vertex(e.v);
  return e;
}

namespace detail {

bool split_t_label(const std::string& label, Exp& c, std::string& name) {
  if (label.rfind("t*", 0) == 0) {
    c = 1;
    name = label.substr(2);
    return true;
  }
  if (label.rfind("t^", 0) == 0) {
    auto star = label.find('*');
    if (star == std::string::npos) return false;
    try {
      c = std::stoll(label.substr(2, star - 2));
    } catch (...) {
      return false;
    }
    name = label.substr(star + 1);
    return true;
  }
  c = 0;
  name = label;
  return true;
}

std::string make_t_label(Exp c, const std::string& name) {
  if (c == 0) return name;
  if (c == 1) return "t*" + name;
  return "t^" + std::to_string(c) + "*" + name;
}

RetractResult retract(const FunctionalGraph& g) {
  const int n = g.size();
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  std::vector<int> unique_pred(static_cast<size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    const int s = g.succ[static_cast<size_t>(v)];
    if (s >= 0) {
      ++indeg[static_cast<size_t>(s)];
      unique_pred[static_cast<size_t>(s)] = v;
    }
  }

  std::vector<char> alive(static_cast<size_t>(n), 1);
  std::vector<int> merged_into(static_cast<size_t>(n), -1);
  std::vector<Tag> tag = g.tag;
  std::vector<int> succ = g.succ;

  std::deque<int> queue;
  for (int v = 0; v < n; ++v)
    if (tag[static_cast<size_t>(v)] == Tag::Free && indeg[static_cast<size_t>(v)] == 1)
      queue.push_back(v);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (!alive[static_cast<size_t>(v)]) continue;
    if (tag[static_cast<size_t>(v)] != Tag::Free || indeg[static_cast<size_t>(v)] != 1) continue;
    const int u = unique_pred[static_cast<size_t>(v)];
    alive[static_cast<size_t>(v)] = 0;
    merged_into[static_cast<size_t>(v)] = u;
    succ[static_cast<size_t>(u)] = -1;
    tag[static_cast<size_t>(u)] = Tag::Free;
    if (indeg[static_cast<size_t>(u)] == 1) queue.push_back(u);
  }

  RetractResult out;
  std::vector<int> newid(static_cast<size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (!alive[static_cast<size_t>(v)]) continue;
    newid[static_cast<size_t>(v)] = out.graph.size();
    out.graph.succ.push_back(-1);
    out.graph.tag.push_back(tag[static_cast<size_t>(v)]);
    if (!g.label.empty()) out.graph.label.push_back(g.label[static_cast<size_t>(v)]);
  }
  for (int v = 0; v < n; ++v) {
    if (!alive[static_cast<size_t>(v)]) continue;
    const int s = succ[static_cast<size_t>(v)];
    if (s >= 0) out.graph.succ[static_cast<size_t>(newid[static_cast<size_t>(v)])] =
        newid[static_cast<size_t>(s)];
  }
  out.remap.resize(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    int u = v;
    Exp h = 0;
    while (!alive[static_cast<size_t>(u)]) {
      u = merged_into[static_cast<size_t>(u)];
      ++h;
    }
    const int w = newid[static_cast<size_t>(u)];
    out.remap[static_cast<size_t>(v)] = (h == 0) ? Elem::vertex(w) : Elem::tail(w, h);
  }
  return out;
}

}  // namespace detail

std::string elem_label(const FunctionalGraph& g, const Elem& e) {
  if (e.is_star()) return "0";
  std::string base = g.label.empty() ? ("v" + std::to_string(e.v))
                                     : g.label[static_cast<size_t>(e.v)];
  if (e.kind == Elem::Kind::Vertex) return base;
  Exp c = 0;
  std::string name;
  if (detail::split_t_label(base, c, name)) return detail::make_t_label(c + e.h, name);
  return detail::make_t_label(e.h, base);
}

NormalizeResult normalize(const TPresentation& p) {
  p.validate();
  const int n = p.ngens();

  // Subterm universe: bottom at index 0, then t^c * g_i for 0 <= c <= maxexp[i].
  std::vector<Exp> maxexp(static_cast<size_t>(n), 0);
  for (const TRel& r : p.rels) {
    maxexp[static_cast<size_t>(r.gi)] = std::max(maxexp[static_cast<size_t>(r.gi)], r.a);
    if (!r.to_zero)
      maxexp[static_cast<size_t>(r.gj)] = std::max(maxexp[static_cast<size_t>(r.gj)], r.b);
  }
  std::vector<int> base(static_cast<size_t>(n) + 1, 1);
  for (int i = 0; i < n; ++i)
    base[static_cast<size_t>(i) + 1] = base[static_cast<size_t>(i)] +
                                       static_cast<int>(maxexp[static_cast<size_t>(i)]) + 1;
  const int nterms = base[static_cast<size_t>(n)];
  auto term = [&](int i, Exp c) { return base[static_cast<size_t>(i)] + static_cast<int>(c); };

  // succ_term[x] is t * x when that lies in the universe, else -1; t * bottom = bottom.
  std::vector<int> succ_term(static_cast<size_t>(nterms), -1);
  succ_term[0] = 0;
  for (int i = 0; i < n; ++i)
    for (Exp c = 0; c < maxexp[static_cast<size_t>(i)]; ++c)
      succ_term[static_cast<size_t>(term(i, c))] = term(i, c + 1);

  detail::DSU dsu(nterms);
  // Per root: some term whose class is the t-image of this class, or -1.
  std::vector<int> root_succ = succ_term;

  std::deque<std::pair<int, int>> pending;
  for (const TRel& r : p.rels)
    pending.emplace_back(term(r.gi, r.a), r.to_zero ? 0 : term(r.gj, r.b));

  while (!pending.empty()) {
    auto [x, y] = pending.front();
    pending.pop_front();
    const int rx = dsu.find(x);
    const int ry = dsu.find(y);
    if (rx == ry) continue;
    const int sx = root_succ[static_cast<size_t>(rx)];
    const int sy = root_succ[static_cast<size_t>(ry)];
    const int r = dsu.unite(rx, ry);
    if (sx == -1) {
      root_succ[static_cast<size_t>(r)] = sy;
    } else if (sy == -1) {
      root_succ[static_cast<size_t>(r)] = sx;
    } else {
      root_succ[static_cast<size_t>(r)] = sx;
      pending.emplace_back(sx, sy);
    }
  }

  const int dead = dsu.find(0);
  std::vector<int> vert_of(static_cast<size_t>(nterms), -1);
  FunctionalGraph raw;
  for (int x = 1; x < nterms; ++x) {
    const int r = dsu.find(x);
    if (r == dead || vert_of[static_cast<size_t>(r)] >= 0) continue;
    vert_of[static_cast<size_t>(r)] = raw.size();
    raw.succ.push_back(-1);
    raw.tag.push_back(Tag::Free);
    raw.label.push_back("");
  }
  // Minimal witness label per class, by (exponent, generator index).
  {
    std::vector<std::pair<Exp, int>> best(static_cast<size_t>(raw.size()),
                                          {static_cast<Exp>(-1), -1});
    for (int i = 0; i < n; ++i) {
      for (Exp c = 0; c <= maxexp[static_cast<size_t>(i)]; ++c) {
        const int r = dsu.find(term(i, c));
        if (r == dead) continue;
        const int v = vert_of[static_cast<size_t>(r)];
        auto& b = best[static_cast<size_t>(v)];
        if (b.second < 0 || c < b.first || (c == b.first && i < b.second)) b = {c, i};
      }
    }
    for (int v = 0; v < raw.size(); ++v) {
      const auto& b = best[static_cast<size_t>(v)];
      raw.label[static_cast<size_t>(v)] =
          detail::make_t_label(b.first, p.gens[static_cast<size_t>(b.second)]);
    }
  }
  for (int r = 0; r < nterms; ++r) {
    if (dsu.find(r) != r || r == dead) continue;
    const int v = vert_of[static_cast<size_t>(r)];
    const int sp = root_succ[static_cast<size_t>(r)];
    if (sp == -1) continue;  // free tail
    const int sr = dsu.find(sp);
    if (sr == dead) {
      raw.tag[static_cast<size_t>(v)] = Tag::Zero;
    } else {
      raw.succ[static_cast<size_t>(v)] = vert_of[static_cast<size_t>(sr)];
      raw.tag[static_cast<size_t>(v)] = Tag::None;
    }
  }

  auto retracted = detail::retract(raw);
  retracted.graph.validate();

  NormalizeResult out;
  out.graph = std::move(retracted.graph);
  out.gen_image.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int r = dsu.find(term(i, 0));
    if (r == dead) {
      out.gen_image.push_back(Elem::star());
    } else {
      out.gen_image.push_back(
          retracted.remap[static_cast<size_t>(vert_of[static_cast<size_t>(r)])]);
    }
  }
  return out;
}

}  // namespace monoproj
