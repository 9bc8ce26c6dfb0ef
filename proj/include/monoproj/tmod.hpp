#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoproj/error.hpp"
#include "monoproj/monoid.hpp"

namespace monoproj {

/// One relation of a finitely presented <t>-module:
/// t^a * g_i = t^b * g_j, or t^a * g_i = 0 when to_zero is set.
struct TRel {
  int gi = 0;
  Exp a = 0;
  int gj = 0;
  Exp b = 0;
  bool to_zero = false;
};

struct TPresentation {
  std::vector<std::string> gens;
  std::vector<TRel> rels;

  int ngens() const { return static_cast<int>(gens.size()); }
  void validate() const;  // throws Error on bad indices or negative exponents
};

enum class Tag { None, Zero, Free };

/// The functional graph of a finitely generated <t>-module: one vertex per
/// nonzero element off the free tails, an edge v -> succ[v] for the t-action,
/// and a tag on each successor-less vertex saying whether t kills it (Zero)
/// or starts an infinite free tail (Free).
///
/// Canonical form maintained everywhere: a Free vertex never has in-degree
/// exactly one (such a vertex is retracted into its predecessor).
struct FunctionalGraph {
  std::vector<int> succ;           // -1 when the vertex has no successor
  std::vector<Tag> tag;            // Tag::None exactly when succ >= 0
  std::vector<std::string> label;  // element names for output; same size as succ

  int size() const { return static_cast<int>(succ.size()); }
  void validate() const;  // throws InternalError on a structural violation
};

/// Position of a module element relative to a graph: the base point *, an
/// explicit vertex, or the tail element t^h * f above a Free vertex f.
struct Elem {
  enum class Kind { Star, Vertex, Tail };
  Kind kind = Kind::Star;
  int v = -1;
  Exp h = 0;  // tail height, >= 1

  static Elem star() { return Elem{}; }
  static Elem vertex(int v) { return Elem{Kind::Vertex, v, 0}; }
  static Elem tail(int v, Exp h) { return Elem{Kind::Tail, v, h}; }
  bool is_star() const { return kind == Kind::Star; }
  bool operator==(const Elem&) const = default;
  bool operator<(const Elem& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (v != o.v) return v < o.v;
    return h < o.h;
  }
};

bool elem_valid(const FunctionalGraph& g, const Elem& e);
Elem t_act(const FunctionalGraph& g, Elem e, Exp power = 1);
std::string elem_label(const FunctionalGraph& g, const Elem& e);

struct NormalizeResult {
  FunctionalGraph graph;
  std::vector<Elem> gen_image;  // one per presentation generator
};

/// Canonical graph of the module presented by p, by congruence closure over
/// the finite subterm universe { t^c * g_i : 0 <= c <= max exponent of g_i }
/// followed by tail retraction. Terminates on every input; a presentation
/// whose generators are all forced to zero yields the empty graph.
NormalizeResult normalize(const TPresentation& p);

struct ComponentType {
  int type = 1;       // 1 = rooted tree, 2 = tree with free tail, 3 = cycle
  Exp cycle_len = 0;  // set for type 3
  bool operator==(const ComponentType&) const = default;
};

struct Decomposition {
  std::vector<FunctionalGraph> parts;
  std::vector<int> comp_of;    // old vertex -> part index
  std::vector<int> index_in;   // old vertex -> vertex index inside its part
  std::vector<std::vector<int>> old_of;  // part -> new vertex -> old vertex
};

Decomposition decompose(const FunctionalGraph& g);

/// The graph must be connected.
ComponentType classify_component(const FunctionalGraph& g);

/// One entry per part of decompose(g), in the same order.
std::vector<ComponentType> classify(const FunctionalGraph& g);

/// Isomorphism-complete invariant string (tree hashing on components, with
/// minimal rotation on cycles).
std::string canonical_form(const FunctionalGraph& g);
std::string canonical_component(const FunctionalGraph& component);
bool is_isomorphic(const FunctionalGraph& a, const FunctionalGraph& b);

struct SumResult {
  FunctionalGraph graph;
  std::vector<int> left;   // vertex of a -> vertex of sum
  std::vector<int> right;  // vertex of b -> vertex of sum
};
SumResult direct_sum(const FunctionalGraph& a, const FunctionalGraph& b);

/// Presentation of the tensor product: generators g_i (x) h_j, every relation
/// of p instantiated at every generator of q and vice versa.
TPresentation tensor(const TPresentation& p, const TPresentation& q);

/// Orbit data of the localization M[t^-1]: one Line orbit per free-tail
/// component, one Cycle(k) orbit per cycle component; tree components vanish.
/// Line positions are anchored at the Free vertex (position 0, predecessors
/// negative, tail elements positive). Cycle positions are mod k, anchored at
/// the canonical rotation representative.
struct Orbit {
  bool cycle = false;
  Exp k = 0;           // cycle length, for cycle orbits
  Exp symmetry = 0;    // minimal rotation period of the decorated cycle
  int component = -1;  // component index in decompose order
  int base = -1;       // the Free vertex, or the anchor vertex on the cycle
};

struct ZOrbitData {
  std::vector<Orbit> orbits;
  std::vector<int> orbit_of;  // vertex -> orbit index, -1 on tree components
  std::vector<Exp> pos;       // vertex -> position (exact on lines, mod k on cycles)
};

ZOrbitData localize(const FunctionalGraph& g);

struct OrbitPos {
  int orbit = -1;
  Exp pos = 0;
};
/// Orbit and position of an element; nullopt when it dies in the localization.
std::optional<OrbitPos> elem_orbit_pos(const ZOrbitData& z, const Elem& e);

/// A t-stable subset of a graph's module: explicit vertices, plus for each
/// Free vertex not included itself optionally the tail from some height up.
/// Invariants: closed under succ; tailcut entries have height >= 1 and only
/// appear for Free vertices not in `has`.
struct Submodule {
  std::vector<char> has;
  std::map<int, Exp> tailcut;

  bool operator==(const Submodule&) const = default;
};

bool submodule_contains(const FunctionalGraph& g, const Submodule& s, const Elem& e);
bool submodule_full(const FunctionalGraph& g, const Submodule& s);
Submodule submodule_generated(const FunctionalGraph& g, const std::vector<Elem>& gens);

Submodule torsion_submodule(const FunctionalGraph& g);

/// Number of nonzero elements; nullopt when infinite (a free tail exists).
std::optional<long long> length(const FunctionalGraph& g);

/// Least e >= 0 with t^e * x = 0, or nullopt when x never dies.
std::optional<Exp> elem_annihilator(const FunctionalGraph& g, const Elem& e);

/// Least e with t^e * M = 0, or nullopt when the annihilator ideal is zero.
std::optional<Exp> annihilator(const FunctionalGraph& g);

struct SubGraphResult {
  FunctionalGraph graph;
  /// Images of the submodule's elements in its standalone graph:
  /// old explicit vertex v (when s.has[v]) -> vertex; the tail element at a
  /// cut height -> the new Free vertex. Query via sub_elem below.
  std::vector<Elem> vertex_image;       // old vertex -> Elem (Star when absent)
  std::map<int, int> cut_base;          // old Free vertex with a cut -> new vertex
};

SubGraphResult sub_to_graph(const FunctionalGraph& g, const Submodule& s);
/// Image in the standalone graph of an element of the submodule; nullopt when
/// the element is not in the submodule.
std::optional<Elem> sub_elem(const FunctionalGraph& g, const Submodule& s,
                             const SubGraphResult& r, const Elem& e);

struct QuotientResult {
  FunctionalGraph graph;
  std::vector<Elem> vertex_image;  // old vertex -> Elem of the quotient (Star when killed)
  std::map<int, int> tail_chain;   // old Free vertex with cut c -> vertex for its height-1
                                   // tail element (chain of c-1 vertices, contiguous ids)
};

QuotientResult quotient(const FunctionalGraph& g, const Submodule& s);
Elem quotient_elem(const FunctionalGraph& g, const Submodule& s, const QuotientResult& r,
                   const Elem& e);

/// Kill all tail elements of height > h on every Free vertex.
QuotientResult truncate(const FunctionalGraph& g, Exp h);

/// A homomorphism of <t>-modules, as the images of the source vertices.
/// Images of tail elements are forced: f(t^h * v) = t^h * f(v).
struct TModMap {
  std::vector<Elem> image;
};

/// Check equivariance: f(t * x) = t * f(x) for every source element.
bool map_check(const FunctionalGraph& src, const FunctionalGraph& tgt, const TModMap& f);
Elem map_apply(const FunctionalGraph& tgt, const TModMap& f, const Elem& e);

Submodule map_image(const FunctionalGraph& src, const FunctionalGraph& tgt, const TModMap& f);
Submodule map_kernel(const FunctionalGraph& src, const FunctionalGraph& tgt, const TModMap& f);

/// Vertex-per-element presentation of a graph's module; gen i is vertex i.
TPresentation presentation_from_graph(const FunctionalGraph& g);

/// Sparser presentation: one generator per in-degree-zero vertex (plus one
/// chosen vertex per generator-free cycle), relations from path merges.
TPresentation leaf_presentation(const FunctionalGraph& g, std::vector<Elem>* gen_of = nullptr);

std::string graph_to_dot(const FunctionalGraph& g, const std::string& name);

}  // namespace monoproj
