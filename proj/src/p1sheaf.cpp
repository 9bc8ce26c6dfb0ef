#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "monoproj/grproj.hpp"
#include "monoproj/p1sheaf.hpp"

namespace monoproj {

namespace {

Exp norm_mod(Exp x, Exp k) { return ((x % k) + k) % k; }

bool orbit_touched(const ZOrbitData& z, const Submodule& s, int orbit) {
  const int f = z.orbits[static_cast<size_t>(orbit)].base;
  if (s.has[static_cast<size_t>(f)]) return true;
  return s.tailcut.count(f) > 0;
}

// Any element of the submodule lying on the orbit; the orbit base works
// because submodules are closed under the action.
Elem touch_witness(const ZOrbitData& z, const Submodule& s, int orbit) {
  const int f = z.orbits[static_cast<size_t>(orbit)].base;
  if (s.has[static_cast<size_t>(f)]) return Elem::vertex(f);
  return Elem::tail(f, s.tailcut.at(f));
}

}  // namespace

P1Sheaf make_sheaf(FunctionalGraph plus, FunctionalGraph minus,
                   std::vector<MatchedPair> matching) {
  plus.validate();
  minus.validate();
  P1Sheaf F;
  F.plus = std::move(plus);
  F.minus = std::move(minus);
  F.matching = std::move(matching);
  F.zplus = localize(F.plus);
  F.zminus = localize(F.minus);

  std::vector<int> pseen(F.zplus.orbits.size(), 0);
  std::vector<int> mseen(F.zminus.orbits.size(), 0);
  for (MatchedPair& mp : F.matching) {
    if (mp.plus_orbit < 0 || mp.plus_orbit >= static_cast<int>(F.zplus.orbits.size()) ||
        mp.minus_orbit < 0 || mp.minus_orbit >= static_cast<int>(F.zminus.orbits.size()))
      throw Error("make_sheaf: matched orbit index out of range");
    const Orbit& op = F.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    const Orbit& om = F.zminus.orbits[static_cast<size_t>(mp.minus_orbit)];
    if (op.cycle != om.cycle)
      throw Error("make_sheaf: matched orbits have different kinds");
    if (op.cycle) {
      if (op.k != om.k) throw Error("make_sheaf: matched cycles have different lengths");
      mp.shift = norm_mod(mp.shift, op.k);
    }
    ++pseen[static_cast<size_t>(mp.plus_orbit)];
    ++mseen[static_cast<size_t>(mp.minus_orbit)];
  }
  for (int c : pseen)
    if (c != 1) throw Error("make_sheaf: plus orbits not matched bijectively");
  for (int c : mseen)
    if (c != 1) throw Error("make_sheaf: minus orbits not matched bijectively");
  std::sort(F.matching.begin(), F.matching.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.plus_orbit < b.plus_orbit; });
  return F;
}

P1Sheaf sheaf_twist(const P1Sheaf& F, Exp n) {
  const Exp u = twist_unit_shift(n);
  P1Sheaf G = F;
  for (MatchedPair& mp : G.matching) {
    const Orbit& op = G.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    mp.shift = op.cycle ? norm_mod(mp.shift + u, op.k) : mp.shift + u;
  }
  return G;
}

std::vector<GlobalSection> global_sections(const P1Sheaf& F) {
  std::vector<GlobalSection> secs;

  // Torsion elements restrict to zero on the overlap, so any pairing of a
  // torsion-or-zero element on each side is a section.
  std::vector<Elem> torsP, torsM;
  for (int v = 0; v < F.plus.size(); ++v)
    if (F.zplus.orbit_of[static_cast<size_t>(v)] < 0) torsP.push_back(Elem::vertex(v));
  for (int v = 0; v < F.minus.size(); ++v)
    if (F.zminus.orbit_of[static_cast<size_t>(v)] < 0) torsM.push_back(Elem::vertex(v));
  for (const Elem& x : torsP) secs.push_back({x, Elem::star()});
  for (const Elem& y : torsM) secs.push_back({Elem::star(), y});
  for (const Elem& x : torsP)
    for (const Elem& y : torsM) secs.push_back({x, y});

  for (const MatchedPair& mp : F.matching) {
    const Orbit& op = F.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    const Orbit& om = F.zminus.orbits[static_cast<size_t>(mp.minus_orbit)];
    const Exp n = mp.shift;

    std::map<Exp, std::vector<Elem>> pfib, mfib;
    Exp minP = 0, minQ = 0;
    for (int v = 0; v < F.plus.size(); ++v)
      if (F.zplus.orbit_of[static_cast<size_t>(v)] == mp.plus_orbit) {
        pfib[F.zplus.pos[static_cast<size_t>(v)]].push_back(Elem::vertex(v));
        minP = std::min(minP, F.zplus.pos[static_cast<size_t>(v)]);
      }
    for (int v = 0; v < F.minus.size(); ++v)
      if (F.zminus.orbit_of[static_cast<size_t>(v)] == mp.minus_orbit) {
        mfib[F.zminus.pos[static_cast<size_t>(v)]].push_back(Elem::vertex(v));
        minQ = std::min(minQ, F.zminus.pos[static_cast<size_t>(v)]);
      }

    if (!op.cycle) {
      // explicit positions lie in [minP, 0] and [minQ, 0]; tails fill h >= 1
      for (const auto& [p, xs] : pfib) {
        const Exp q = n - p;
        if (auto it = mfib.find(q); it != mfib.end())
          for (const Elem& x : xs)
            for (const Elem& y : it->second) secs.push_back({x, y});
        if (q >= 1)
          for (const Elem& x : xs) secs.push_back({x, Elem::tail(om.base, q)});
      }
      for (Exp p = 1; p <= n - minQ; ++p) {
        const Elem x = Elem::tail(op.base, p);
        const Exp q = n - p;
        if (auto it = mfib.find(q); it != mfib.end())
          for (const Elem& y : it->second) secs.push_back({x, y});
        if (q >= 1) secs.push_back({x, Elem::tail(om.base, q)});
      }
    } else {
      for (const auto& [p, xs] : pfib) {
        const Exp q = norm_mod(n - p, op.k);
        if (auto it = mfib.find(q); it != mfib.end())
          for (const Elem& x : xs)
            for (const Elem& y : it->second) secs.push_back({x, y});
      }
    }
  }
  std::sort(secs.begin(), secs.end());
  return secs;
}

bool sheaf_map_check(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f) {
  if (!map_check(src.plus, tgt.plus, f.plus)) return false;
  if (!map_check(src.minus, tgt.minus, f.minus)) return false;

  for (const MatchedPair& mp : src.matching) {
    const Orbit& op = src.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    const Orbit& om = src.zminus.orbits[static_cast<size_t>(mp.minus_orbit)];
    const Elem ip = map_apply(tgt.plus, f.plus, Elem::vertex(op.base));
    const Elem im = map_apply(tgt.minus, f.minus, Elem::vertex(om.base));
    const auto qp = elem_orbit_pos(tgt.zplus, ip);
    const auto qm = elem_orbit_pos(tgt.zminus, im);
    if (qp.has_value() != qm.has_value()) return false;
    if (!qp) continue;  // the source pair dies on the overlap

    const MatchedPair* tp = nullptr;
    for (const MatchedPair& cand : tgt.matching)
      if (cand.plus_orbit == qp->orbit) tp = &cand;
    MONOPROJ_CHECK(tp != nullptr, "sheaf_map_check: target orbit unmatched");
    if (tp->minus_orbit != qm->orbit) return false;

    const Orbit& top = tgt.zplus.orbits[static_cast<size_t>(tp->plus_orbit)];
    const Exp lhs = qp->pos + qm->pos + mp.shift;
    if (top.cycle) {
      if (op.cycle && op.k % top.k != 0) return false;
      if (norm_mod(lhs - tp->shift, top.k) != 0) return false;
    } else {
      if (op.cycle) return false;
      if (lhs != tp->shift) return false;
    }
  }
  return true;
}

SheafSub subsheaf_generated(const P1Sheaf& F, const std::vector<GlobalSection>& secs) {
  std::vector<Elem> ps, ms;
  for (const GlobalSection& s : secs) {
    ps.push_back(s.plus);
    ms.push_back(s.minus);
  }
  return SheafSub{submodule_generated(F.plus, ps), submodule_generated(F.minus, ms)};
}

SubSheafResult sub_to_sheaf(const P1Sheaf& F, const SheafSub& s) {
  SubSheafResult out;
  out.plus = sub_to_graph(F.plus, s.plus);
  out.minus = sub_to_graph(F.minus, s.minus);
  const ZOrbitData zp = localize(out.plus.graph);
  const ZOrbitData zm = localize(out.minus.graph);

  std::vector<MatchedPair> pairs;
  for (const MatchedPair& mp : F.matching) {
    const bool tp = orbit_touched(F.zplus, s.plus, mp.plus_orbit);
    const bool tm = orbit_touched(F.zminus, s.minus, mp.minus_orbit);
    if (tp != tm) throw Error("sub_to_sheaf: submodule pair is not gluing-compatible");
    if (!tp) continue;
    const Elem wp = touch_witness(F.zplus, s.plus, mp.plus_orbit);
    const Elem wm = touch_witness(F.zminus, s.minus, mp.minus_orbit);
    const Elem np = *sub_elem(F.plus, s.plus, out.plus, wp);
    const Elem nm = *sub_elem(F.minus, s.minus, out.minus, wm);
    const auto oldp = elem_orbit_pos(F.zplus, wp);
    const auto oldm = elem_orbit_pos(F.zminus, wm);
    const auto newp = elem_orbit_pos(zp, np);
    const auto newm = elem_orbit_pos(zm, nm);
    MONOPROJ_CHECK(oldp && oldm && newp && newm, "sub_to_sheaf: witness lost its orbit");
    MatchedPair np2{newp->orbit, newm->orbit,
                    mp.shift - (oldp->pos - newp->pos) - (oldm->pos - newm->pos)};
    pairs.push_back(np2);
  }
  out.sheaf = make_sheaf(out.plus.graph, out.minus.graph, std::move(pairs));

  // Inclusion into F: each vertex of the standalone graphs came from an
  // explicit vertex or a tail cut of the ambient chart.
  auto build_inclusion = [](const FunctionalGraph& amb, const Submodule& sub,
                            const SubGraphResult& sg) {
    TModMap inc;
    inc.image.assign(static_cast<size_t>(sg.graph.size()), Elem::star());
    for (int v = 0; v < amb.size(); ++v) {
      if (!sub.has[static_cast<size_t>(v)]) continue;
      const Elem e = sg.vertex_image[static_cast<size_t>(v)];
      if (e.kind == Elem::Kind::Vertex) inc.image[static_cast<size_t>(e.v)] = Elem::vertex(v);
    }
    for (const auto& [f, b] : sg.cut_base)
      inc.image[static_cast<size_t>(b)] = Elem::tail(f, sub.tailcut.at(f));
    return inc;
  };
  out.inclusion.plus = build_inclusion(F.plus, s.plus, out.plus);
  out.inclusion.minus = build_inclusion(F.minus, s.minus, out.minus);
  return out;
}

QuotSheafResult quotient_sheaf(const P1Sheaf& F, const SheafSub& s) {
  QuotSheafResult out;
  out.plus = quotient(F.plus, s.plus);
  out.minus = quotient(F.minus, s.minus);
  const ZOrbitData zp = localize(out.plus.graph);
  const ZOrbitData zm = localize(out.minus.graph);

  std::vector<MatchedPair> pairs;
  for (const MatchedPair& mp : F.matching) {
    const bool tp = orbit_touched(F.zplus, s.plus, mp.plus_orbit);
    const bool tm = orbit_touched(F.zminus, s.minus, mp.minus_orbit);
    if (tp != tm) throw Error("quotient_sheaf: submodule pair is not gluing-compatible");
    if (tp) continue;  // the orbit dies in the quotient
    const int bp = F.zplus.orbits[static_cast<size_t>(mp.plus_orbit)].base;
    const int bm = F.zminus.orbits[static_cast<size_t>(mp.minus_orbit)].base;
    const Elem np = out.plus.vertex_image[static_cast<size_t>(bp)];
    const Elem nm = out.minus.vertex_image[static_cast<size_t>(bm)];
    const auto newp = elem_orbit_pos(zp, np);
    const auto newm = elem_orbit_pos(zm, nm);
    MONOPROJ_CHECK(newp && newm, "quotient_sheaf: surviving orbit lost");
    pairs.push_back(MatchedPair{newp->orbit, newm->orbit,
                                mp.shift + newp->pos + newm->pos});
  }
  out.sheaf = make_sheaf(out.plus.graph, out.minus.graph, std::move(pairs));
  out.projection.plus.image = out.plus.vertex_image;
  out.projection.minus.image = out.minus.vertex_image;
  return out;
}

SheafSub sheaf_map_image(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f) {
  return SheafSub{map_image(src.plus, tgt.plus, f.plus),
                  map_image(src.minus, tgt.minus, f.minus)};
}

SheafSub sheaf_map_kernel(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f) {
  return SheafSub{map_kernel(src.plus, tgt.plus, f.plus),
                  map_kernel(src.minus, tgt.minus, f.minus)};
}

SubSheafResult sheaf_kernel(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f) {
  return sub_to_sheaf(src, sheaf_map_kernel(src, tgt, f));
}

SubSheafResult sheaf_image(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f) {
  return sub_to_sheaf(tgt, sheaf_map_image(src, tgt, f));
}

QuotSheafResult sheaf_cokernel(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f) {
  return quotient_sheaf(tgt, sheaf_map_image(src, tgt, f));
}

namespace {

bool sub_empty(const Submodule& s) {
  if (!s.tailcut.empty()) return false;
  return std::none_of(s.has.begin(), s.has.end(), [](char c) { return c != 0; });
}

bool component_closed(const FunctionalGraph& g, const Submodule& s) {
  if (!s.tailcut.empty()) return false;
  const auto d = decompose(g);
  for (size_t c = 0; c < d.old_of.size(); ++c) {
    int in = 0;
    for (int v : d.old_of[c])
      if (s.has[static_cast<size_t>(v)]) ++in;
    if (in != 0 && in != static_cast<int>(d.old_of[c].size())) return false;
  }
  return true;
}

}  // namespace

bool is_split(const P1Sheaf& S, const P1Sheaf& E, const P1Sheaf& Q, const SheafMap& inc,
              const SheafMap& proj) {
  if (!sheaf_map_check(S, E, inc) || !sheaf_map_check(E, Q, proj))
    throw Error("is_split: the given maps are not sheaf maps");
  const SheafSub ker_i = sheaf_map_kernel(S, E, inc);
  if (!sub_empty(ker_i.plus) || !sub_empty(ker_i.minus))
    throw Error("is_split: the inclusion is not injective");
  const SheafSub im_p = sheaf_map_image(E, Q, proj);
  if (!submodule_full(Q.plus, im_p.plus) || !submodule_full(Q.minus, im_p.minus))
    throw Error("is_split: the projection is not surjective");
  const SheafSub im_i = sheaf_map_image(S, E, inc);
  const SheafSub ker_p = sheaf_map_kernel(E, Q, proj);
  if (!(im_i == ker_p)) throw Error("is_split: sequence is not exact in the middle");

  return component_closed(E.plus, im_i.plus) && component_closed(E.minus, im_i.minus);
}

std::optional<long long> sheaf_rank(const P1Sheaf& F) {
  auto locally_free_rank = [](const FunctionalGraph& g) -> std::optional<long long> {
    for (int v = 0; v < g.size(); ++v)
      if (g.tag[static_cast<size_t>(v)] != Tag::Free) return std::nullopt;
    return g.size();  // free vertices with no edges are their own components
  };
  const auto rp = locally_free_rank(F.plus);
  const auto rm = locally_free_rank(F.minus);
  if (!rp || !rm || *rp != *rm) return std::nullopt;
  return rp;
}

bool sheaf_is_torsion(const P1Sheaf& F) { return F.matching.empty(); }

bool sheaf_is_torsion_free(const P1Sheaf& F) {
  auto no_tree_comp = [](const FunctionalGraph& g, const ZOrbitData& z) {
    for (int v = 0; v < g.size(); ++v)
      if (z.orbit_of[static_cast<size_t>(v)] < 0) return false;
    return true;
  };
  return no_tree_comp(F.plus, F.zplus) && no_tree_comp(F.minus, F.zminus);
}

std::vector<SheafSummand> sheaf_decompose(const P1Sheaf& F) {
  std::vector<SheafSummand> out;
  const Decomposition dp = decompose(F.plus);
  const Decomposition dm = decompose(F.minus);

  for (const MatchedPair& mp : F.matching) {
    const Orbit& op = F.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    const Orbit& om = F.zminus.orbits[static_cast<size_t>(mp.minus_orbit)];
    const FunctionalGraph& gp = dp.parts[static_cast<size_t>(op.component)];
    const FunctionalGraph& gm = dm.parts[static_cast<size_t>(om.component)];
    const ZOrbitData zp = localize(gp);
    const ZOrbitData zm = localize(gm);
    // Re-anchor the shift against the standalone components.
    const Exp pp = zp.pos[static_cast<size_t>(dp.index_in[static_cast<size_t>(op.base)])];
    const Exp pm = zm.pos[static_cast<size_t>(dm.index_in[static_cast<size_t>(om.base)])];
    Exp shift = mp.shift + pp + pm;

    SheafSummand s;
    s.kind = op.cycle ? SheafSummand::Kind::Cycle : SheafSummand::Kind::Line;
    s.sheaf = make_sheaf(gp, gm, {MatchedPair{0, 0, shift}});
    std::ostringstream tag;
    if (op.cycle) {
      const Exp g = std::gcd(zp.orbits[0].symmetry, zm.orbits[0].symmetry);
      tag << "C[" << canonical_component(gp) << ";" << canonical_component(gm) << ";"
          << norm_mod(shift, g) << "]";
    } else {
      tag << "L[" << canonical_component(gp) << ";" << canonical_component(gm) << ";" << shift
          << "]";
    }
    s.canonical = tag.str();
    out.push_back(std::move(s));
  }

  auto torsion_summands = [&](const FunctionalGraph& g, const Decomposition& d,
                              const ZOrbitData& z, bool plus_side) {
    for (size_t c = 0; c < d.parts.size(); ++c) {
      const int v0 = d.old_of[c].front();
      if (z.orbit_of[static_cast<size_t>(v0)] >= 0) continue;
      SheafSummand s;
      s.kind = plus_side ? SheafSummand::Kind::TorsionPlus : SheafSummand::Kind::TorsionMinus;
      FunctionalGraph empty;
      s.sheaf = plus_side ? make_sheaf(d.parts[c], empty, {})
                          : make_sheaf(empty, d.parts[c], {});
      s.canonical = (plus_side ? std::string("TP[") : std::string("TM[")) +
                    canonical_component(d.parts[c]) + "]";
      out.push_back(std::move(s));
    }
    (void)g;
  };
  torsion_summands(F.plus, dp, F.zplus, true);
  torsion_summands(F.minus, dm, F.zminus, false);
  return out;
}

std::string sheaf_canonical(const P1Sheaf& F) {
  std::vector<std::string> tags;
  for (const SheafSummand& s : sheaf_decompose(F)) tags.push_back(s.canonical);
  std::sort(tags.begin(), tags.end());
  std::string out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (i) out += " + ";
    out += tags[i];
  }
  return out;
}

bool sheaf_is_isomorphic(const P1Sheaf& F, const P1Sheaf& G) {
  return sheaf_canonical(F) == sheaf_canonical(G);
}

SheafSumResult sheaf_direct_sum(const P1Sheaf& a, const P1Sheaf& b) {
  SheafSumResult out;
  const SumResult sp = direct_sum(a.plus, b.plus);
  const SumResult sm = direct_sum(a.minus, b.minus);
  std::vector<MatchedPair> pairs = a.matching;
  const int po = static_cast<int>(a.zplus.orbits.size());
  const int mo = static_cast<int>(a.zminus.orbits.size());
  for (const MatchedPair& mp : b.matching)
    pairs.push_back(MatchedPair{mp.plus_orbit + po, mp.minus_orbit + mo, mp.shift});
  out.sheaf = make_sheaf(sp.graph, sm.graph, std::move(pairs));
  out.plus = sp;
  out.minus = sm;
  return out;
}

std::string sheaf_to_dot(const P1Sheaf& F, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=10, shape=circle, height=0.3];\n";
  auto chart = [&](const FunctionalGraph& g, const char* prefix, const char* title) {
    out << "  subgraph cluster_" << prefix << " {\n";
    out << "    label=\"" << title << "\";\n";
    bool need_star = false;
    for (int v = 0; v < g.size(); ++v) {
      out << "    " << prefix << v << " [label=\"" << elem_label(g, Elem::vertex(v))
          << "\"];\n";
      if (g.tag[static_cast<size_t>(v)] == Tag::Zero) need_star = true;
    }
    if (need_star) out << "    " << prefix << "star [label=\"*\", shape=plaintext];\n";
    for (int v = 0; v < g.size(); ++v) {
      const int sc = g.succ[static_cast<size_t>(v)];
      if (sc >= 0) {
        out << "    " << prefix << v << " -> " << prefix << sc << ";\n";
      } else if (g.tag[static_cast<size_t>(v)] == Tag::Zero) {
        out << "    " << prefix << v << " -> " << prefix << "star;\n";
      } else {
        out << "    " << prefix << "tail" << v << " [label=\"...\", shape=plaintext];\n";
        out << "    " << prefix << v << " -> " << prefix << "tail" << v
            << " [style=dashed];\n";
      }
    }
    out << "  }\n";
  };
  chart(F.plus, "p", "chart 0");
  chart(F.minus, "m", "chart infinity");
  for (const MatchedPair& mp : F.matching) {
    const Orbit& op = F.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    const Orbit& om = F.zminus.orbits[static_cast<size_t>(mp.minus_orbit)];
    out << "  p" << op.base << " -> m" << om.base << " [style=dotted, dir=none, label=\""
        << (op.cycle ? "cycle " : "line ") << "shift " << mp.shift << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace monoproj
