#pragma once

#include <string>
#include <vector>

#include "monoproj/tmod.hpp"

namespace monoproj {
namespace detail {

struct DSU {
  std::vector<int> parent;
  std::vector<int> size;

  explicit DSU(int n) : parent(n), size(n, 1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // Returns the surviving root, or -1 if already joined.
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return -1;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return a;
  }
};

struct RetractResult {
  FunctionalGraph graph;
  std::vector<Elem> remap;  // old vertex -> element of the retracted graph
};

/// Merge every Free vertex with in-degree exactly one into its predecessor,
/// repeatedly, and renumber. Confluent, so the result is canonical.
RetractResult retract(const FunctionalGraph& g);

struct CompInfo {
  ComponentType type;
  int root = -1;            // terminal vertex, types 1 and 2
  std::vector<int> cycle;   // type 3: cycle in succ order, starting at the anchor
  Exp symmetry = 0;         // type 3: minimal rotation period of the decorated cycle
  std::string canonical;    // canonical string of the component
};

/// Classification, canonical string and cycle anchoring of one component,
/// given as a vertex list of g.
CompInfo analyze_component(const FunctionalGraph& g, const std::vector<int>& verts);

/// Splits "t^c*name" (also "name", "t*name") into c and name.
/// Returns false when the label is not of that shape.
bool split_t_label(const std::string& label, Exp& c, std::string& name);
std::string make_t_label(Exp c, const std::string& name);

}  // namespace detail
}  // namespace monoproj
