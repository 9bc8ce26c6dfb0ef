#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monoproj/tmod.hpp"

namespace monoproj {

/// A matched orbit pair of a gluing triple. On a Line pair with shift n, the
/// plus element x is identified with the minus element y on the overlap iff
/// p+(x) + p-(y) = n; a Cycle(k) pair identifies iff p+ + p- = shift (mod k).
struct MatchedPair {
  int plus_orbit = -1;
  int minus_orbit = -1;
  Exp shift = 0;
};

/// A coherent sheaf on the projective line: a graph over <t> on the chart at
/// zero, a graph over the inverse coordinate on the chart at infinity, and a
/// bijective kind-preserving matching of their localization orbits.
struct P1Sheaf {
  FunctionalGraph plus;
  FunctionalGraph minus;
  std::vector<MatchedPair> matching;
  ZOrbitData zplus;  // derived from the charts by make_sheaf
  ZOrbitData zminus;
};

/// Validates a gluing triple and derives the orbit data. Throws Error when
/// the matching is not a bijection between orbits of matching kind, or a
/// cycle pair has mismatched lengths.
P1Sheaf make_sheaf(FunctionalGraph plus, FunctionalGraph minus,
                   std::vector<MatchedPair> matching);

/// Indecomposable summands: one glued piece per matched pair, one torsion
/// piece per unmatched tree component of either chart.
struct SheafSummand {
  enum class Kind { TorsionPlus, TorsionMinus, Line, Cycle };
  Kind kind = Kind::TorsionPlus;
  P1Sheaf sheaf;
  std::string canonical;
};

std::vector<SheafSummand> sheaf_decompose(const P1Sheaf& F);

/// Isomorphism-complete invariant: sorted multiset of summand strings. Line
/// shifts are compared exactly; cycle shifts modulo the rotation symmetries
/// of the two decorated cycles.
std::string sheaf_canonical(const P1Sheaf& F);
bool sheaf_is_isomorphic(const P1Sheaf& F, const P1Sheaf& G);

struct SheafSumResult {
  P1Sheaf sheaf;
  SumResult plus;
  SumResult minus;
};

SheafSumResult sheaf_direct_sum(const P1Sheaf& a, const P1Sheaf& b);

/// Serre twist, by the gluing convention derived from the twisted structure
/// sheaf (see twist_unit_shift in grproj.hpp).
P1Sheaf sheaf_twist(const P1Sheaf& F, Exp n);

/// A global section: a plus element and a minus element agreeing on the
/// overlap; at most one side is zero.
struct GlobalSection {
  Elem plus;
  Elem minus;
  bool operator==(const GlobalSection&) const = default;
  bool operator<(const GlobalSection& o) const {
    if (!(plus == o.plus)) return plus < o.plus;
    return minus < o.minus;
  }
};

/// All global sections (always a finite set), sorted.
std::vector<GlobalSection> global_sections(const P1Sheaf& F);

struct SheafMap {
  TModMap plus;
  TModMap minus;
};

/// Chart equivariance plus overlap compatibility on every matched pair.
bool sheaf_map_check(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f);

struct SheafSub {
  Submodule plus;
  Submodule minus;
  bool operator==(const SheafSub&) const = default;
};

/// Subsheaf generated by global sections; gluing-compatible by construction.
SheafSub subsheaf_generated(const P1Sheaf& F, const std::vector<GlobalSection>& secs);

struct SubSheafResult {
  P1Sheaf sheaf;
  SubGraphResult plus;
  SubGraphResult minus;
  SheafMap inclusion;  // standalone subsheaf -> F
};

/// The subsheaf as a sheaf of its own. Throws Error when s touches the two
/// sides of a matched pair inconsistently.
SubSheafResult sub_to_sheaf(const P1Sheaf& F, const SheafSub& s);

struct QuotSheafResult {
  P1Sheaf sheaf;
  QuotientResult plus;
  QuotientResult minus;
  SheafMap projection;  // F -> quotient
};

QuotSheafResult quotient_sheaf(const P1Sheaf& F, const SheafSub& s);

SheafSub sheaf_map_image(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f);
SheafSub sheaf_map_kernel(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f);
SubSheafResult sheaf_kernel(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f);
SubSheafResult sheaf_image(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f);
QuotSheafResult sheaf_cokernel(const P1Sheaf& src, const P1Sheaf& tgt, const SheafMap& f);

/// True when 0 -> S -i-> E -p-> Q -> 0 is exact and splits as E = S + Q.
/// Exactness is verified (i injective, p surjective, im i = ker p); the
/// sequence splits iff the image of i is a union of whole chart components.
bool is_split(const P1Sheaf& S, const P1Sheaf& E, const P1Sheaf& Q, const SheafMap& inc,
              const SheafMap& proj);

/// Rank when F is locally free (all chart components are single free
/// vertices); nullopt otherwise.
std::optional<long long> sheaf_rank(const P1Sheaf& F);
bool sheaf_is_torsion(const P1Sheaf& F);
bool sheaf_is_torsion_free(const P1Sheaf& F);

std::string sheaf_to_dot(const P1Sheaf& F, const std::string& name);

}  // namespace monoproj
