#include <algorithm>
#include <set>
#include <sstream>

#include "monoproj/tmod.hpp"
#include "tmod_internal.hpp"

namespace monoproj {

TPresentation tensor(const TPresentation& p, const TPresentation& q) {
  p.validate();
  q.validate();
  TPresentation out;
  const int nq = q.ngens();
  auto idx = [&](int i, int j) { return i * nq + j; };
  for (int i = 0; i < p.ngens(); ++i)
    for (int j = 0; j < nq; ++j)
      out.gens.push_back("(" + p.gens[static_cast<size_t>(i)] + "," +
                         q.gens[static_cast<size_t>(j)] + ")");
  for (const TRel& r : p.rels)
    for (int j = 0; j < nq; ++j)
      out.rels.push_back(TRel{idx(r.gi, j), r.a, r.to_zero ? 0 : idx(r.gj, j), r.b, r.to_zero});
  for (const TRel& r : q.rels)
    for (int i = 0; i < p.ngens(); ++i)
      out.rels.push_back(TRel{idx(i, r.gi), r.a, r.to_zero ? 0 : idx(i, r.gj), r.b, r.to_zero});
  return out;
}

bool submodule_contains(const FunctionalGraph& g, const Submodule& s, const Elem& e) {
  (void)g;
  switch (e.kind) {
    case Elem::Kind::Star:
      return true;
    case Elem::Kind::Vertex:
      return s.has[static_cast<size_t>(e.v)] != 0;
    case Elem::Kind::Tail: {
      if (s.has[static_cast<size_t>(e.v)]) return true;
      auto it = s.tailcut.find(e.v);
      return it != s.tailcut.end() && e.h >= it->second;
    }
  }
  return false;
}

bool submodule_full(const FunctionalGraph& g, const Submodule& s) {
  for (int v = 0; v < g.size(); ++v)
    if (!s.has[static_cast<size_t>(v)]) return false;
  return true;
}

Submodule submodule_generated(const FunctionalGraph& g, const std::vector<Elem>& gens) {
  Submodule s;
  s.has.assign(static_cast<size_t>(g.size()), 0);
  for (const Elem& e : gens) {
    if (e.is_star()) continue;
    MONOPROJ_CHECK(elem_valid(g, e), "submodule_generated: element not in graph");
    if (e.kind == Elem::Kind::Tail) {
      if (!s.has[static_cast<size_t>(e.v)]) {
        auto [it, fresh] = s.tailcut.try_emplace(e.v, e.h);
        if (!fresh) it->second = std::min(it->second, e.h);
      }
      continue;
    }
    int v = e.v;
    while (v >= 0 && !s.has[static_cast<size_t>(v)]) {
      s.has[static_cast<size_t>(v)] = 1;
      v = g.succ[static_cast<size_t>(v)];
    }
  }
  for (auto it = s.tailcut.begin(); it != s.tailcut.end();)
    it = s.has[static_cast<size_t>(it->first)] ? s.tailcut.erase(it) : std::next(it);
  return s;
}

Submodule torsion_submodule(const FunctionalGraph& g) {
  auto d = decompose(g);
  auto types = classify(g);
  Submodule s;
  s.has.assign(static_cast<size_t>(g.size()), 0);
  for (int v = 0; v < g.size(); ++v)
    if (types[static_cast<size_t>(d.comp_of[static_cast<size_t>(v)])].type == 1)
      s.has[static_cast<size_t>(v)] = 1;
  return s;
}

std::optional<long long> length(const FunctionalGraph& g) {
  for (Tag t : g.tag)
    if (t == Tag::Free) return std::nullopt;
  return g.size();
}

std::optional<Exp> elem_annihilator(const FunctionalGraph& g, const Elem& e) {
  Elem x = e;
  Exp k = 0;
  std::set<int> visited;
  while (true) {
    if (x.is_star()) return k;
    if (x.kind == Elem::Kind::Tail) return std::nullopt;
    if (!visited.insert(x.v).second) return std::nullopt;
    x = t_act(g, x);
    ++k;
  }
}

std::optional<Exp> annihilator(const FunctionalGraph& g) {
  Exp worst = 0;
  for (int v = 0; v < g.size(); ++v) {
    auto a = elem_annihilator(g, Elem::vertex(v));
    if (!a) return std::nullopt;
    worst = std::max(worst, *a);
  }
  return worst;
}

SubGraphResult sub_to_graph(const FunctionalGraph& g, const Submodule& s) {
  FunctionalGraph raw;
  std::vector<int> rawid(static_cast<size_t>(g.size()), -1);
  for (int v = 0; v < g.size(); ++v) {
    if (!s.has[static_cast<size_t>(v)]) continue;
    rawid[static_cast<size_t>(v)] = raw.size();
    raw.succ.push_back(-1);
    raw.tag.push_back(g.tag[static_cast<size_t>(v)]);
    raw.label.push_back(elem_label(g, Elem::vertex(v)));
  }
  std::map<int, int> cut_raw;
  for (const auto& [f, c] : s.tailcut) {
    MONOPROJ_CHECK(g.tag[static_cast<size_t>(f)] == Tag::Free && c >= 1,
                   "sub_to_graph: bad tail cut");
    cut_raw[f] = raw.size();
    raw.succ.push_back(-1);
    raw.tag.push_back(Tag::Free);
    raw.label.push_back(elem_label(g, Elem::tail(f, c)));
  }
  for (int v = 0; v < g.size(); ++v) {
    if (!s.has[static_cast<size_t>(v)]) continue;
    const int sc = g.succ[static_cast<size_t>(v)];
    if (sc >= 0) {
      MONOPROJ_CHECK(s.has[static_cast<size_t>(sc)], "sub_to_graph: submodule not closed");
      raw.succ[static_cast<size_t>(rawid[static_cast<size_t>(v)])] =
          rawid[static_cast<size_t>(sc)];
    }
  }

  auto retracted = detail::retract(raw);
  retracted.graph.validate();

  SubGraphResult out;
  out.graph = std::move(retracted.graph);
  out.vertex_image.assign(static_cast<size_t>(g.size()), Elem::star());
  for (int v = 0; v < g.size(); ++v)
    if (s.has[static_cast<size_t>(v)])
      out.vertex_image[static_cast<size_t>(v)] =
          retracted.remap[static_cast<size_t>(rawid[static_cast<size_t>(v)])];
  for (const auto& [f, rid] : cut_raw) {
    const Elem e = retracted.remap[static_cast<size_t>(rid)];
    MONOPROJ_CHECK(e.kind == Elem::Kind::Vertex, "sub_to_graph: cut base retracted");
    out.cut_base[f] = e.v;
  }
  return out;
}

std::optional<Elem> sub_elem(const FunctionalGraph& g, const Submodule& s,
                             const SubGraphResult& r, const Elem& e) {
  if (e.is_star()) return Elem::star();
  if (!submodule_contains(g, s, e)) return std::nullopt;
  if (e.kind == Elem::Kind::Vertex) return r.vertex_image[static_cast<size_t>(e.v)];
  if (s.has[static_cast<size_t>(e.v)])
    return t_act(r.graph, r.vertex_image[static_cast<size_t>(e.v)], e.h);
  const Exp c = s.tailcut.at(e.v);
  return t_act(r.graph, Elem::vertex(r.cut_base.at(e.v)), e.h - c);
}

QuotientResult quotient(const FunctionalGraph& g, const Submodule& s) {
  QuotientResult out;
  out.vertex_image.assign(static_cast<size_t>(g.size()), Elem::star());
  std::vector<int> newid(static_cast<size_t>(g.size()), -1);
  FunctionalGraph& q = out.graph;
  for (int v = 0; v < g.size(); ++v) {
    if (s.has[static_cast<size_t>(v)]) continue;
    newid[static_cast<size_t>(v)] = q.size();
    out.vertex_image[static_cast<size_t>(v)] = Elem::vertex(q.size());
    q.succ.push_back(-1);
    q.tag.push_back(Tag::Zero);
    q.label.push_back(elem_label(g, Elem::vertex(v)));
  }
  for (int v = 0; v < g.size(); ++v) {
    if (s.has[static_cast<size_t>(v)]) continue;
    const int nv = newid[static_cast<size_t>(v)];
    const int sc = g.succ[static_cast<size_t>(v)];
    if (sc >= 0) {
      if (s.has[static_cast<size_t>(sc)]) continue;  // killed successor: Zero tag stands
      q.succ[static_cast<size_t>(nv)] = newid[static_cast<size_t>(sc)];
      q.tag[static_cast<size_t>(nv)] = Tag::None;
    } else if (g.tag[static_cast<size_t>(v)] == Tag::Free) {
      auto it = s.tailcut.find(v);
      if (it == s.tailcut.end()) {
        q.tag[static_cast<size_t>(nv)] = Tag::Free;
      } else if (it->second >= 2) {
        // Materialize the surviving tail heights 1..c-1 as a chain ending in zero.
        const Exp c = it->second;
        out.tail_chain[v] = q.size();
        q.succ[static_cast<size_t>(nv)] = q.size();
        q.tag[static_cast<size_t>(nv)] = Tag::None;
        for (Exp h = 1; h < c; ++h) {
          q.succ.push_back(h + 1 < c ? q.size() + 1 : -1);
          q.tag.push_back(h + 1 < c ? Tag::None : Tag::Zero);
          q.label.push_back(elem_label(g, Elem::tail(v, h)));
        }
      }
      // cut at height 1: the Free vertex becomes Zero-tagged, which is the default
    }
  }
  q.validate();
  return out;
}

Elem quotient_elem(const FunctionalGraph& g, const Submodule& s, const QuotientResult& r,
                   const Elem& e) {
  if (e.is_star() || submodule_contains(g, s, e)) return Elem::star();
  if (e.kind == Elem::Kind::Vertex) return r.vertex_image[static_cast<size_t>(e.v)];
  auto it = s.tailcut.find(e.v);
  if (it == s.tailcut.end())
    return t_act(r.graph, r.vertex_image[static_cast<size_t>(e.v)], e.h);
  // e.h < cut here, so the chain vertex exists
  return Elem::vertex(r.tail_chain.at(e.v) + static_cast<int>(e.h) - 1);
}

QuotientResult truncate(const FunctionalGraph& g, Exp h) {
  if (h < 0) throw Error("truncate: negative height");
  std::vector<Elem> cuts;
  for (int v = 0; v < g.size(); ++v)
    if (g.tag[static_cast<size_t>(v)] == Tag::Free) cuts.push_back(Elem::tail(v, h + 1));
  return quotient(g, submodule_generated(g, cuts));
}

Elem map_apply(const FunctionalGraph& tgt, const TModMap& f, const Elem& e) {
  if (e.is_star()) return Elem::star();
  return t_act(tgt, f.image[static_cast<size_t>(e.v)], e.h);
}

bool map_check(const FunctionalGraph& src, const FunctionalGraph& tgt, const TModMap& f) {
  if (static_cast<int>(f.image.size()) != src.size()) return false;
  for (int v = 0; v < src.size(); ++v) {
    const Elem& img = f.image[static_cast<size_t>(v)];
    if (!elem_valid(tgt, img)) return false;
    const Elem timg = t_act(tgt, img);
    const int sc = src.succ[static_cast<size_t>(v)];
    if (sc >= 0) {
      if (f.image[static_cast<size_t>(sc)] != timg) return false;
    } else if (src.tag[static_cast<size_t>(v)] == Tag::Zero) {
      if (!timg.is_star()) return false;
    }
  }
  return true;
}

Submodule map_image(const FunctionalGraph& src, const FunctionalGraph& tgt, const TModMap& f) {
  (void)src;
  return submodule_generated(tgt, f.image);
}

Submodule map_kernel(const FunctionalGraph& src, const FunctionalGraph& tgt, const TModMap& f) {
  Submodule s;
  s.has.assign(static_cast<size_t>(src.size()), 0);
  for (int v = 0; v < src.size(); ++v) {
    const Elem& img = f.image[static_cast<size_t>(v)];
    if (img.is_star()) {
      s.has[static_cast<size_t>(v)] = 1;
    } else if (src.tag[static_cast<size_t>(v)] == Tag::Free) {
      if (auto a = elem_annihilator(tgt, img)) s.tailcut[v] = *a;
    }
  }
  return s;
}

TPresentation presentation_from_graph(const FunctionalGraph& g) {
  TPresentation p;
  std::set<std::string> used;
  for (int v = 0; v < g.size(); ++v) {
    std::string name = g.label.empty() ? "" : g.label[static_cast<size_t>(v)];
    if (name.empty() || used.count(name)) name = "v" + std::to_string(v);
    used.insert(name);
    p.gens.push_back(name);
  }
  for (int v = 0; v < g.size(); ++v) {
    const int sc = g.succ[static_cast<size_t>(v)];
    if (sc >= 0)
      p.rels.push_back(TRel{v, 1, sc, 0, false});
    else if (g.tag[static_cast<size_t>(v)] == Tag::Zero)
      p.rels.push_back(TRel{v, 1, 0, 0, true});
  }
  return p;
}

TPresentation leaf_presentation(const FunctionalGraph& g, std::vector<Elem>* gen_of) {
  const int n = g.size();
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    if (g.succ[static_cast<size_t>(v)] >= 0) ++indeg[static_cast<size_t>(g.succ[static_cast<size_t>(v)])];

  TPresentation p;
  if (gen_of) gen_of->clear();
  // witness[v] = (generator index, exponent) for the first walk that reached v
  std::vector<std::pair<int, Exp>> witness(static_cast<size_t>(n), {-1, 0});

  auto walk = [&](int start) {
    const int gen = p.ngens();
    p.gens.push_back("g" + std::to_string(gen));
    if (gen_of) gen_of->push_back(Elem::vertex(start));
    witness[static_cast<size_t>(start)] = {gen, 0};
    int v = start;
    Exp d = 0;
    while (true) {
      const int sc = g.succ[static_cast<size_t>(v)];
      if (sc < 0) {
        if (g.tag[static_cast<size_t>(v)] == Tag::Zero)
          p.rels.push_back(TRel{gen, d + 1, 0, 0, true});
        return;
      }
      const auto& w = witness[static_cast<size_t>(sc)];
      if (w.first >= 0) {
        p.rels.push_back(TRel{gen, d + 1, w.first, w.second, false});
        return;
      }
      witness[static_cast<size_t>(sc)] = {gen, d + 1};
      v = sc;
      ++d;
    }
  };

  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) walk(v);
  for (int v = 0; v < n; ++v)
    if (witness[static_cast<size_t>(v)].first < 0) walk(v);  // generator-free cycles
  return p;
}

std::string graph_to_dot(const FunctionalGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=10, shape=circle, height=0.3];\n";
  bool need_star = false;
  for (int v = 0; v < g.size(); ++v) {
    out << "  v" << v << " [label=\"" << elem_label(g, Elem::vertex(v)) << "\"];\n";
    if (g.tag[static_cast<size_t>(v)] == Tag::Zero) need_star = true;
  }
  if (need_star) out << "  star [label=\"*\", shape=plaintext];\n";
  for (int v = 0; v < g.size(); ++v) {
    const int sc = g.succ[static_cast<size_t>(v)];
    if (sc >= 0) {
      out << "  v" << v << " -> v" << sc << ";\n";
    } else if (g.tag[static_cast<size_t>(v)] == Tag::Zero) {
      out << "  v" << v << " -> star;\n";
    } else {
      out << "  tail" << v << " [label=\"...\", shape=plaintext];\n";
      out << "  v" << v << " -> tail" << v << " [style=dashed];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace monoproj
