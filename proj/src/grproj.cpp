#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "monoproj/grproj.hpp"
#include "tmod_internal.hpp"

namespace monoproj {

namespace {

Exp norm_mod(Exp x, Exp k) { return ((x % k) + k) % k; }

}  // namespace

void GradedPresentation::validate() const {
  if (!ambient.graded) throw Error("graded module: ambient monoid is not graded");
  if (gens.size() != deg.size())
    throw Error("graded module: generator and degree lists differ in length");
  for (const GRel& rel : rels) {
    if (rel.gi < 0 || rel.gi >= ngens() || (!rel.to_zero && (rel.gj < 0 || rel.gj >= ngens())))
      throw Error("graded module: relation references an unknown generator");
    if (rel.a.is_zero || !valid_in(ambient, rel.a))
      throw Error("graded module: bad left coefficient");
    if (!rel.to_zero) {
      if (rel.b.is_zero || !valid_in(ambient, rel.b))
        throw Error("graded module: bad right coefficient");
      const Exp dl = degree(ambient, rel.a) + deg[static_cast<size_t>(rel.gi)];
      const Exp dr = degree(ambient, rel.b) + deg[static_cast<size_t>(rel.gj)];
      if (dl != dr) throw Error("graded module: inhomogeneous relation");
    }
  }
}

GradedPresentation free_module(int r) {
  GradedPresentation m;
  m.ambient = free_graded_monoid(r);
  m.gens = {"e"};
  m.deg = {0};
  return m;
}

GradedPresentation shift_module(const GradedPresentation& m, Exp n) {
  GradedPresentation out = m;
  for (Exp& d : out.deg) d -= n;
  return out;
}

TPresentation degree_zero_localization(const GradedPresentation& m, int chart) {
  m.validate();
  if (m.r() != 1) throw Error("degree_zero_localization: only defined for r = 1");
  if (chart != 0 && chart != 1) throw Error("degree_zero_localization: chart must be 0 or 1");
  const size_t other = static_cast<size_t>(1 - chart);
  TPresentation p;
  p.gens = m.gens;
  for (const GRel& rel : m.rels) {
    TRel t;
    t.gi = rel.gi;
    t.a = rel.a.exps[other];
    t.to_zero = rel.to_zero;
    if (!rel.to_zero) {
      t.gj = rel.gj;
      t.b = rel.b.exps[other];
    }
    p.rels.push_back(t);
  }
  return p;
}

std::vector<MonoidValue> gamma_On(int r, Exp n) {
  std::vector<MonoidValue> out;
  if (n < 0) return out;
  std::vector<Exp> e(static_cast<size_t>(r + 1), 0);
  auto rec = [&](auto&& self, int v, Exp left) -> void {
    if (v == r) {
      e[static_cast<size_t>(v)] = left;
      out.push_back(MonoidValue::monomial(e));
      return;
    }
    for (Exp c = 0; c <= left; ++c) {
      e[static_cast<size_t>(v)] = c;
      self(self, v + 1, left - c);
    }
  };
  rec(rec, 0, n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<long long> TruncatedModule::dims() const {
  std::vector<long long> out;
  out.reserve(reps.size());
  for (const auto& layer : reps) out.push_back(static_cast<long long>(layer.size()));
  return out;
}

TruncatedModule truncate_module(const GradedPresentation& m, Exp lo, Exp hi) {
  m.validate();
  if (lo > hi) throw Error("truncate_module: empty window");
  const int r = m.r();
  TruncatedModule out;
  out.lo = lo;
  out.hi = hi;
  out.nvars = r + 1;
  const size_t layers = static_cast<size_t>(hi - lo + 1);

  // Degree-d universe: all pairs (generator, monomial of degree d - deg gen),
  // plus a zero sink at index size(). Homogeneity keeps degrees independent:
  // a degree-d identity is a chain of degree-d instances u * rel, and the set
  // of instances is closed under multiplication by variables, so plain
  // union-find per degree is a complete congruence closure.
  std::vector<std::map<std::pair<int, MonoidValue>, int>> index(layers);
  std::vector<std::vector<std::pair<int, MonoidValue>>> terms(layers);
  for (Exp d = lo; d <= hi; ++d) {
    const size_t L = static_cast<size_t>(d - lo);
    for (int i = 0; i < m.ngens(); ++i)
      for (const MonoidValue& mon : gamma_On(r, d - m.deg[static_cast<size_t>(i)])) {
        index[L].emplace(std::make_pair(i, mon), static_cast<int>(terms[L].size()));
        terms[L].emplace_back(i, mon);
      }
  }

  std::vector<detail::DSU> dsu;
  dsu.reserve(layers);
  for (size_t L = 0; L < layers; ++L)
    dsu.emplace_back(static_cast<int>(terms[L].size()) + 1);
  auto zero_of = [&](size_t L) { return static_cast<int>(terms[L].size()); };

  for (const GRel& rel : m.rels) {
    const Exp base = degree(m.ambient, rel.a) + m.deg[static_cast<size_t>(rel.gi)];
    for (Exp d = std::max(base, lo); d <= hi; ++d) {
      const size_t L = static_cast<size_t>(d - lo);
      for (const MonoidValue& u : gamma_On(r, d - base)) {
        const MonoidValue ua = mul(m.ambient, u, rel.a);
        const int x = index[L].at(std::make_pair(rel.gi, ua));
        int y;
        if (rel.to_zero) {
          y = zero_of(L);
        } else {
          const MonoidValue ub = mul(m.ambient, u, rel.b);
          y = index[L].at(std::make_pair(rel.gj, ub));
        }
        dsu[L].unite(x, y);
      }
    }
  }

  out.reps.resize(layers);
  out.act.resize(layers);
  std::vector<std::map<int, int>> class_of(layers);  // dsu root -> class index
  for (size_t L = 0; L < layers; ++L) {
    const int dead = dsu[L].find(zero_of(L));
    for (int x = 0; x < static_cast<int>(terms[L].size()); ++x) {
      const int rt = dsu[L].find(x);
      if (rt == dead) continue;
      if (class_of[L].emplace(rt, static_cast<int>(out.reps[L].size())).second)
        out.reps[L].push_back(terms[L][static_cast<size_t>(x)]);
    }
  }
  for (size_t L = 0; L + 1 < layers; ++L) {
    const size_t next = L + 1;
    const int dead = dsu[next].find(zero_of(next));
    out.act[L].resize(out.reps[L].size());
    for (size_t c = 0; c < out.reps[L].size(); ++c) {
      out.act[L][c].assign(static_cast<size_t>(r + 1), -1);
      for (int v = 0; v <= r; ++v) {
        std::vector<Exp> e(static_cast<size_t>(r + 1), 0);
        e[static_cast<size_t>(v)] = 1;
        const MonoidValue shifted =
            mul(m.ambient, out.reps[L][c].second, MonoidValue::monomial(e));
        const int x = index[next].at(std::make_pair(out.reps[L][c].first, shifted));
        const int rt = dsu[next].find(x);
        if (rt != dead) out.act[L][c][static_cast<size_t>(v)] = class_of[next].at(rt);
      }
    }
  }
  if (layers > 0) out.act[layers - 1].assign(out.reps[layers - 1].size(), {});
  return out;
}

namespace {

// Union-find over generators of the double localization, tracking the t-power
// between each element and its class root, the gcd of self-loop discrepancies,
// and whether the class has been killed.
struct OffsetDSU {
  std::vector<int> parent;
  std::vector<Exp> off;
  std::vector<Exp> period;
  std::vector<char> dead;

  explicit OffsetDSU(int n)
      : parent(static_cast<size_t>(n)), off(static_cast<size_t>(n), 0),
        period(static_cast<size_t>(n), 0), dead(static_cast<size_t>(n), 0) {
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
  }

  std::pair<int, Exp> find(int x) {
    if (parent[static_cast<size_t>(x)] == x) return {x, 0};
    auto [r, p] = find(parent[static_cast<size_t>(x)]);
    parent[static_cast<size_t>(x)] = r;
    off[static_cast<size_t>(x)] += p;
    return {r, off[static_cast<size_t>(x)]};
  }

  // requires pot(x) - pot(y) = delta
  void unite(int x, int y, Exp delta) {
    auto [rx, px] = find(x);
    auto [ry, py] = find(y);
    if (rx == ry) {
      const Exp d = px - py - delta;
      if (d != 0)
        period[static_cast<size_t>(rx)] =
            std::gcd(period[static_cast<size_t>(rx)], d < 0 ? -d : d);
      return;
    }
    parent[static_cast<size_t>(ry)] = rx;
    off[static_cast<size_t>(ry)] = px - delta - py;
    period[static_cast<size_t>(rx)] =
        std::gcd(period[static_cast<size_t>(rx)], period[static_cast<size_t>(ry)]);
    dead[static_cast<size_t>(rx)] |= dead[static_cast<size_t>(ry)];
  }

  void kill(int x) { dead[static_cast<size_t>(find(x).first)] = 1; }
};

}  // namespace

SheafifyResult sheafify(const GradedPresentation& m) {
  m.validate();
  if (m.r() != 1) throw Error("sheafify: only defined on the projective line");
  const NormalizeResult np = normalize(degree_zero_localization(m, 0));
  const NormalizeResult nm = normalize(degree_zero_localization(m, 1));
  const ZOrbitData zp = localize(np.graph);
  const ZOrbitData zm = localize(nm.graph);

  OffsetDSU dsu(m.ngens());
  for (const GRel& rel : m.rels) {
    if (rel.to_zero) {
      dsu.kill(rel.gi);
    } else {
      dsu.unite(rel.gi, rel.gj, rel.b.exps[1] - rel.a.exps[1]);
    }
  }

  // Collect live classes and their chart orbits, checking both charts agree
  // on which generators survive the double localization.
  struct ClassData {
    int plus_orbit = -1;
    int minus_orbit = -1;
    bool have_shift = false;
    Exp shift = 0;
    Exp k = 0;  // cycle period, 0 on a line
  };
  std::map<int, ClassData> classes;
  for (int i = 0; i < m.ngens(); ++i) {
    auto [root, offi] = dsu.find(i);
    const Elem ip = np.gen_image[static_cast<size_t>(i)];
    const Elem im = nm.gen_image[static_cast<size_t>(i)];
    const auto qp = elem_orbit_pos(zp, ip);
    const auto qm = elem_orbit_pos(zm, im);
    const bool live = !dsu.dead[static_cast<size_t>(root)];
    MONOPROJ_CHECK(qp.has_value() == live && qm.has_value() == live,
                   "sheafify: chart orbits disagree with the double localization");
    if (!live) continue;

    ClassData& cd = classes[root];
    const Exp k = dsu.period[static_cast<size_t>(root)];
    cd.k = k;
    if (cd.plus_orbit < 0) {
      cd.plus_orbit = qp->orbit;
      cd.minus_orbit = qm->orbit;
    } else {
      MONOPROJ_CHECK(cd.plus_orbit == qp->orbit && cd.minus_orbit == qm->orbit,
                     "sheafify: generator class split across orbits");
    }
    const Exp tau_plus = offi - qp->pos;
    const Exp tau_minus = offi - m.deg[static_cast<size_t>(i)] + qm->pos;
    const Exp shift = tau_minus - tau_plus;
    if (!cd.have_shift) {
      cd.have_shift = true;
      cd.shift = shift;
    } else {
      const Exp d = cd.shift - shift;
      MONOPROJ_CHECK(k != 0 ? norm_mod(d, k) == 0 : d == 0,
                     "sheafify: inconsistent overlap shift");
    }
  }

  std::vector<MatchedPair> pairs;
  for (const auto& [root, cd] : classes) {
    const Orbit& op = zp.orbits[static_cast<size_t>(cd.plus_orbit)];
    const Orbit& om = zm.orbits[static_cast<size_t>(cd.minus_orbit)];
    if (cd.k == 0) {
      MONOPROJ_CHECK(!op.cycle && !om.cycle, "sheafify: line class met a cycle orbit");
    } else {
      MONOPROJ_CHECK(op.cycle && om.cycle && op.k == cd.k && om.k == cd.k,
                     "sheafify: cycle period mismatch");
    }
    pairs.push_back(MatchedPair{cd.plus_orbit, cd.minus_orbit, cd.shift});
  }

  SheafifyResult out;
  out.sheaf = make_sheaf(np.graph, nm.graph, std::move(pairs));
  out.plus_gen = np.gen_image;
  out.minus_gen = nm.gen_image;
  return out;
}

Exp twist_unit_shift(Exp n) {
  const SheafifyResult s = sheafify(shift_module(free_module(1), n));
  MONOPROJ_CHECK(s.sheaf.matching.size() == 1, "twist unit: unexpected gluing");
  return s.sheaf.matching[0].shift;
}

GradedPresentation gamma_star(const P1Sheaf& F, Exp window) {
  if (window < 0) throw Error("gamma_star: negative window");
  GradedPresentation out;
  out.ambient = free_graded_monoid(1);

  std::vector<std::vector<GlobalSection>> secs;
  for (Exp d = -window; d <= window; ++d)
    secs.push_back(global_sections(sheaf_twist(F, d)));

  std::vector<std::vector<int>> gen_id(secs.size());
  for (size_t L = 0; L < secs.size(); ++L) {
    const Exp d = -window + static_cast<Exp>(L);
    gen_id[L].resize(secs[L].size());
    for (size_t i = 0; i < secs[L].size(); ++i) {
      gen_id[L][static_cast<size_t>(i)] = out.ngens();
      out.gens.push_back("s" + std::to_string(d) + "_" + std::to_string(i));
      out.deg.push_back(d);
    }
  }

  // x0 fixes the plus coordinate and advances the minus one; x1 conversely.
  auto act = [&](const GlobalSection& s, int v) {
    GlobalSection r = s;
    if (v == 0) {
      if (!r.minus.is_star()) r.minus = t_act(F.minus, r.minus, 1);
    } else {
      if (!r.plus.is_star()) r.plus = t_act(F.plus, r.plus, 1);
    }
    return r;
  };
  for (size_t L = 0; L + 1 < secs.size(); ++L) {
    for (size_t i = 0; i < secs[L].size(); ++i) {
      for (int v = 0; v <= 1; ++v) {
        const GlobalSection img = act(secs[L][i], v);
        GRel rel;
        rel.gi = gen_id[L][i];
        std::vector<Exp> e = {0, 0};
        e[static_cast<size_t>(v)] = 1;
        rel.a = MonoidValue::monomial(e);
        if (img.plus.is_star() && img.minus.is_star()) {
          rel.to_zero = true;
        } else {
          const auto it = std::lower_bound(secs[L + 1].begin(), secs[L + 1].end(), img);
          MONOPROJ_CHECK(it != secs[L + 1].end() && *it == img,
                         "gamma_star: action left the section set");
          rel.gj = gen_id[L + 1][static_cast<size_t>(it - secs[L + 1].begin())];
          rel.b = MonoidValue::one(2);
        }
        out.rels.push_back(rel);
      }
    }
  }

  // The window relations stop at the top layer, so the presented module
  // continues freely above it. The true action keeps colliding and killing
  // pairs for a few more degrees before it settles into an injective shift,
  // and dropping those steps leaves debris that the chart localizations pick
  // up as spurious summands. Follow the action until every coordinate has
  // left its finite tree, identifying each word with the first word that
  // reaches the same pair and sending dying words to zero.
  if (!secs.empty() && !secs.back().empty()) {
    struct Word {
      Exp a = 0;
      Exp b = 0;
      int gi = 0;
    };
    const size_t top = secs.size() - 1;
    std::map<GlobalSection, Word> rep;
    for (size_t i = 0; i < secs[top].size(); ++i)
      rep[secs[top][i]] = Word{0, 0, gen_id[top][i]};
    const Exp settle =
        static_cast<Exp>(std::max(F.plus.size(), F.minus.size())) + 2;
    for (Exp k = 0; k < settle; ++k) {
      std::map<GlobalSection, Word> next;
      for (const auto& [s, w] : rep) {
        for (int v = 0; v <= 1; ++v) {
          const GlobalSection img = act(s, v);
          Word word = w;
          (v == 0 ? word.a : word.b) += 1;
          GRel rel;
          rel.gi = word.gi;
          rel.a = MonoidValue::monomial({word.a, word.b});
          if (img.plus.is_star() && img.minus.is_star()) {
            rel.to_zero = true;
            out.rels.push_back(rel);
          } else if (const auto it = next.find(img); it != next.end()) {
            rel.gj = it->second.gi;
            rel.b = MonoidValue::monomial({it->second.a, it->second.b});
            out.rels.push_back(rel);
          } else {
            next.emplace(img, word);
          }
        }
      }
      rep = std::move(next);
    }
  }
  out.validate();
  return out;
}

Exp gamma_star_default_window(const P1Sheaf& F) {
  Exp start = 4;
  for (const MatchedPair& mp : F.matching)
    start = std::max(start, (mp.shift < 0 ? -mp.shift : mp.shift) + 4);
  for (Exp p : F.zplus.pos) start = std::max(start, (p < 0 ? -p : p) + 4);
  for (Exp p : F.zminus.pos) start = std::max(start, (p < 0 ? -p : p) + 4);
  return start;
}

BetaCheckResult beta_check(const P1Sheaf& F, std::optional<Exp> window, Exp cap) {
  const Exp start = window ? *window : gamma_star_default_window(F);

  BetaCheckResult res;
  res.window = start;
  for (Exp w = start; w <= cap; w *= 2) {
    res.window = w;
    const SheafifyResult s = sheafify(gamma_star(F, w));
    if (sheaf_is_isomorphic(s.sheaf, F)) {
      res.ok = true;
      return res;
    }
    if (window) break;  // an explicit window is tried once
  }
  return res;
}

bool twist_globally_generated(const P1Sheaf& F, Exp n) {
  const P1Sheaf tw = sheaf_twist(F, n);
  const SheafSub sub = subsheaf_generated(tw, global_sections(tw));
  return submodule_full(tw.plus, sub.plus) && submodule_full(tw.minus, sub.minus);
}

std::optional<GlobalGenerationResult> global_generation(const P1Sheaf& F, Exp bound) {
  std::map<Exp, bool> memo;
  auto gen_at = [&](Exp n) {
    auto it = memo.find(n);
    if (it == memo.end()) it = memo.emplace(n, twist_globally_generated(F, n)).first;
    return it->second;
  };
  for (Exp n0 = -bound; n0 <= bound; ++n0) {
    bool all = true;
    for (Exp j = 0; j < 6 && all; ++j) all = gen_at(n0 + j);
    if (all) {
      GlobalGenerationResult res;
      res.n0 = n0;
      res.sections = global_sections(sheaf_twist(F, n0));
      return res;
    }
  }
  return std::nullopt;
}

QuotientPresentationResult quotient_presentation(const P1Sheaf& F, Exp n) {
  QuotientPresentationResult out;
  out.n = n;
  const std::vector<GlobalSection> secs = global_sections(sheaf_twist(F, n));
  out.k = static_cast<long long>(secs.size());

  FunctionalGraph gp, gm;
  std::vector<MatchedPair> pairs;
  const Exp u = twist_unit_shift(-n);
  for (long long i = 0; i < out.k; ++i) {
    gp.succ.push_back(-1);
    gp.tag.push_back(Tag::Free);
    gp.label.push_back("e" + std::to_string(i));
    gm.succ.push_back(-1);
    gm.tag.push_back(Tag::Free);
    gm.label.push_back("e" + std::to_string(i));
    pairs.push_back(MatchedPair{static_cast<int>(i), static_cast<int>(i), u});
  }
  out.source = make_sheaf(std::move(gp), std::move(gm), std::move(pairs));

  for (const GlobalSection& s : secs) {
    out.onto.plus.image.push_back(s.plus);
    out.onto.minus.image.push_back(s.minus);
  }
  MONOPROJ_CHECK(sheaf_map_check(out.source, F, out.onto),
                 "quotient_presentation: section map is not a sheaf map");
  const SheafSub im = sheaf_map_image(out.source, F, out.onto);
  out.surjective = submodule_full(F.plus, im.plus) && submodule_full(F.minus, im.minus);
  return out;
}

}  // namespace monoproj
