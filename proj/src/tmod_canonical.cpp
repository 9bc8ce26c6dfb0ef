#include <algorithm>
#include <map>
#include <numeric>

#include "monoproj/tmod.hpp"
#include "tmod_internal.hpp"

namespace monoproj {

Decomposition decompose(const FunctionalGraph& g) {
  const int n = g.size();
  detail::DSU dsu(n);
  for (int v = 0; v < n; ++v)
    if (g.succ[static_cast<size_t>(v)] >= 0) dsu.unite(v, g.succ[static_cast<size_t>(v)]);

  Decomposition d;
  d.comp_of.assign(static_cast<size_t>(n), -1);
  d.index_in.assign(static_cast<size_t>(n), -1);
  std::map<int, int> part_of_root;
  for (int v = 0; v < n; ++v) {
    const int r = dsu.find(v);
    auto [it, inserted] = part_of_root.try_emplace(r, static_cast<int>(d.parts.size()));
    if (inserted) {
      d.parts.emplace_back();
      d.old_of.emplace_back();
    }
    const int c = it->second;
    d.comp_of[static_cast<size_t>(v)] = c;
    d.index_in[static_cast<size_t>(v)] = static_cast<int>(d.old_of[static_cast<size_t>(c)].size());
    d.old_of[static_cast<size_t>(c)].push_back(v);
  }
  for (size_t c = 0; c < d.parts.size(); ++c) {
    FunctionalGraph& part = d.parts[c];
    for (int old : d.old_of[c]) {
      const int s = g.succ[static_cast<size_t>(old)];
      part.succ.push_back(s < 0 ? -1 : d.index_in[static_cast<size_t>(s)]);
      part.tag.push_back(g.tag[static_cast<size_t>(old)]);
      if (!g.label.empty()) part.label.push_back(g.label[static_cast<size_t>(old)]);
    }
  }
  return d;
}

namespace {

// AHU encodings of the trees hanging off each vertex in `verts` (children =
// predecessors, minus an excluded edge set given by skip_child).
std::vector<std::string> tree_encodings(const FunctionalGraph& g, const std::vector<int>& verts,
                                        const std::vector<char>& on_cycle) {
  const int n = g.size();
  std::vector<std::vector<int>> children(static_cast<size_t>(n));
  for (int v : verts) {
    const int s = g.succ[static_cast<size_t>(v)];
    if (s >= 0 && !on_cycle[static_cast<size_t>(v)]) children[static_cast<size_t>(s)].push_back(v);
  }
  // Process deepest-first: order vertices by decreasing tree depth via BFS
  // from the roots (cycle vertices and terminals).
  std::vector<int> order;
  std::vector<int> depth(static_cast<size_t>(n), -1);
  for (int v : verts)
    if (on_cycle[static_cast<size_t>(v)] || g.succ[static_cast<size_t>(v)] < 0) {
      depth[static_cast<size_t>(v)] = 0;
      order.push_back(v);
    }
  for (size_t i = 0; i < order.size(); ++i) {
    for (int c : children[static_cast<size_t>(order[i])]) {
      depth[static_cast<size_t>(c)] = depth[static_cast<size_t>(order[i])] + 1;
      order.push_back(c);
    }
  }
  std::vector<std::string> enc(static_cast<size_t>(n));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    std::vector<std::string> parts;
    for (int c : children[static_cast<size_t>(v)]) parts.push_back(enc[static_cast<size_t>(c)]);
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const std::string& part : parts) s += part;
    s += ")";
    enc[static_cast<size_t>(v)] = std::move(s);
  }
  return enc;
}

}  // namespace

namespace detail {

CompInfo analyze_component(const FunctionalGraph& g, const std::vector<int>& verts) {
  MONOPROJ_CHECK(!verts.empty(), "analyze_component: empty component");
  CompInfo info;

  // Walk from any vertex to the terminal or onto the cycle.
  std::map<int, int> seen;  // vertex -> step index on the walk
  std::vector<int> path;
  int v = verts.front();
  while (v >= 0 && !seen.count(v)) {
    seen[v] = static_cast<int>(path.size());
    path.push_back(v);
    v = g.succ[static_cast<size_t>(v)];
  }

  std::vector<char> on_cycle(static_cast<size_t>(g.size()), 0);
  if (v < 0) {
    const int root = path.back();
    info.root = root;
    info.type.type = (g.tag[static_cast<size_t>(root)] == Tag::Zero) ? 1 : 2;
    auto enc = tree_encodings(g, verts, on_cycle);
    info.canonical = (info.type.type == 1 ? "Z" : "F") + enc[static_cast<size_t>(root)];
    return info;
  }

  // Cycle found: path[seen[v]..] is the cycle in succ order.
  std::vector<int> cyc(path.begin() + seen[v], path.end());
  const int k = static_cast<int>(cyc.size());
  info.type.type = 3;
  info.type.cycle_len = k;
  for (int c : cyc) on_cycle[static_cast<size_t>(c)] = 1;
  auto enc = tree_encodings(g, verts, on_cycle);

  std::vector<std::string> deco(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) deco[static_cast<size_t>(i)] = enc[static_cast<size_t>(cyc[static_cast<size_t>(i)])];

  // Lexicographically minimal rotation (naive scan; cycles are short).
  auto rotation_less = [&](int a, int b) {
    for (int i = 0; i < k; ++i) {
      const std::string& x = deco[static_cast<size_t>((a + i) % k)];
      const std::string& y = deco[static_cast<size_t>((b + i) % k)];
      if (x != y) return x < y;
    }
    return false;
  };
  int anchor = 0;
  for (int i = 1; i < k; ++i)
    if (rotation_less(i, anchor)) anchor = i;

  // Minimal rotation period of the decorated cycle.
  Exp d = k;
  for (int r = 1; r < k; ++r) {
    bool fixed = true;
    for (int i = 0; i < k && fixed; ++i)
      fixed = deco[static_cast<size_t>(i)] == deco[static_cast<size_t>((i + r) % k)];
    if (fixed) {
      d = r;
      break;
    }
  }
  info.symmetry = d;

  info.cycle.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) info.cycle[static_cast<size_t>(i)] = cyc[static_cast<size_t>((anchor + i) % k)];

  std::string s = "C" + std::to_string(k) + "[";
  for (int i = 0; i < k; ++i) s += deco[static_cast<size_t>((anchor + i) % k)] + "|";
  s += "]";
  info.canonical = std::move(s);
  return info;
}

}  // namespace detail

ComponentType classify_component(const FunctionalGraph& g) {
  std::vector<int> verts(static_cast<size_t>(g.size()));
  std::iota(verts.begin(), verts.end(), 0);
  return detail::analyze_component(g, verts).type;
}

std::vector<ComponentType> classify(const FunctionalGraph& g) {
  auto d = decompose(g);
  std::vector<ComponentType> types;
  types.reserve(d.parts.size());
  for (const auto& part : d.parts) types.push_back(classify_component(part));
  return types;
}

std::string canonical_component(const FunctionalGraph& component) {
  std::vector<int> verts(static_cast<size_t>(component.size()));
  std::iota(verts.begin(), verts.end(), 0);
  return detail::analyze_component(component, verts).canonical;
}

std::string canonical_form(const FunctionalGraph& g) {
  auto d = decompose(g);
  std::vector<std::string> parts;
  parts.reserve(d.parts.size());
  for (const auto& part : d.parts) parts.push_back(canonical_component(part));
  std::sort(parts.begin(), parts.end());
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += "+";
    s += parts[i];
  }
  return s;
}

bool is_isomorphic(const FunctionalGraph& a, const FunctionalGraph& b) {
  return canonical_form(a) == canonical_form(b);
}

SumResult direct_sum(const FunctionalGraph& a, const FunctionalGraph& b) {
  SumResult out;
  out.graph = a;
  if (out.graph.label.empty() && !b.label.empty())
    out.graph.label.assign(static_cast<size_t>(a.size()), "");
  const int off = a.size();
  out.left.resize(static_cast<size_t>(a.size()));
  std::iota(out.left.begin(), out.left.end(), 0);
  for (int v = 0; v < b.size(); ++v) {
    const int s = b.succ[static_cast<size_t>(v)];
    out.graph.succ.push_back(s < 0 ? -1 : s + off);
    out.graph.tag.push_back(b.tag[static_cast<size_t>(v)]);
    if (!out.graph.label.empty())
      out.graph.label.push_back(b.label.empty() ? "" : b.label[static_cast<size_t>(v)]);
    out.right.push_back(v + off);
  }
  return out;
}

ZOrbitData localize(const FunctionalGraph& g) {
  ZOrbitData z;
  z.orbit_of.assign(static_cast<size_t>(g.size()), -1);
  z.pos.assign(static_cast<size_t>(g.size()), 0);

  auto d = decompose(g);
  for (size_t c = 0; c < d.parts.size(); ++c) {
    const auto info = detail::analyze_component(g, d.old_of[c]);
    if (info.type.type == 1) continue;

    Orbit orbit;
    orbit.component = static_cast<int>(c);
    const int oid = static_cast<int>(z.orbits.size());

    // Positions by walking each vertex forward to the anchored part.
    if (info.type.type == 2) {
      orbit.cycle = false;
      orbit.base = info.root;
      for (int v : d.old_of[c]) {
        int u = v;
        Exp dist = 0;
        while (u != info.root) {
          u = g.succ[static_cast<size_t>(u)];
          ++dist;
        }
        z.orbit_of[static_cast<size_t>(v)] = oid;
        z.pos[static_cast<size_t>(v)] = -dist;
      }
    } else {
      const Exp k = info.type.cycle_len;
      orbit.cycle = true;
      orbit.k = k;
      orbit.symmetry = info.symmetry;
      orbit.base = info.cycle.front();
      std::vector<char> on_cycle(static_cast<size_t>(g.size()), 0);
      std::map<int, Exp> cycle_pos;
      for (size_t i = 0; i < info.cycle.size(); ++i) {
        on_cycle[static_cast<size_t>(info.cycle[i])] = 1;
        cycle_pos[info.cycle[i]] = static_cast<Exp>(i);
      }
      for (int v : d.old_of[c]) {
        int u = v;
        Exp dist = 0;
        while (!on_cycle[static_cast<size_t>(u)]) {
          u = g.succ[static_cast<size_t>(u)];
          ++dist;
        }
        Exp p = ((cycle_pos[u] - dist) % k + k) % k;
        z.orbit_of[static_cast<size_t>(v)] = oid;
        z.pos[static_cast<size_t>(v)] = p;
      }
    }
    z.orbits.push_back(orbit);
  }
  return z;
}

std::optional<OrbitPos> elem_orbit_pos(const ZOrbitData& z, const Elem& e) {
  if (e.is_star()) return std::nullopt;
  const int o = z.orbit_of[static_cast<size_t>(e.v)];
  if (o < 0) return std::nullopt;
  Exp p = z.pos[static_cast<size_t>(e.v)] + e.h;
  if (z.orbits[static_cast<size_t>(o)].cycle) {
    const Exp k = z.orbits[static_cast<size_t>(o)].k;
    p = ((p % k) + k) % k;
  }
  return OrbitPos{o, p};
}

}  // namespace monoproj
