#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monoproj/monoid.hpp"
#include "monoproj/p1sheaf.hpp"
#include "monoproj/tmod.hpp"

namespace monoproj {

/// Homogeneous relation a * g_i = b * g_j (or = 0) with monomial coefficients
/// in the ambient graded monoid.
struct GRel {
  int gi = 0;
  MonoidValue a;
  int gj = 0;
  MonoidValue b;
  bool to_zero = false;
};

/// A finitely presented graded module over the free graded monoid on
/// x_0..x_r, with generator degrees in Z.
struct GradedPresentation {
  MonoidCtx ambient;
  std::vector<std::string> gens;
  std::vector<Exp> deg;
  std::vector<GRel> rels;

  int ngens() const { return static_cast<int>(gens.size()); }
  int r() const { return ambient.ngens() - 1; }
  void validate() const;  // throws Error on inhomogeneous or malformed relations
};

/// The rank-one free module: A over itself, one generator of degree zero.
GradedPresentation free_module(int r);

/// M(n): every generator degree drops by n.
GradedPresentation shift_module(const GradedPresentation& m, Exp n);

/// Degree-zero part of the localization at x_chart, for r = 1 only. The
/// relation a * g = b * h becomes t^(a's exponent of the other variable) on
/// each side; generator names carry over.
TPresentation degree_zero_localization(const GradedPresentation& m, int chart);

/// All monomials of degree n in r+1 variables, sorted; empty for n < 0.
std::vector<MonoidValue> gamma_On(int r, Exp n);

/// Exact degree-by-degree enumeration of a graded module inside a window
/// (homogeneity makes per-degree congruence closure exact). Works for any r;
/// this is the enumerative interface for r >= 2.
struct TruncatedModule {
  Exp lo = 0;
  Exp hi = 0;
  int nvars = 0;
  // reps[d - lo]: one representative pair (generator, monomial) per nonzero class
  std::vector<std::vector<std::pair<int, MonoidValue>>> reps;
  // act[d - lo][class][v]: class index in degree d+1 of x_v * class, -1 when zero
  // or out of the window
  std::vector<std::vector<std::vector<int>>> act;

  std::vector<long long> dims() const;
};

TruncatedModule truncate_module(const GradedPresentation& m, Exp lo, Exp hi);

struct SheafifyResult {
  P1Sheaf sheaf;
  std::vector<Elem> plus_gen;   // generator images in the plus chart
  std::vector<Elem> minus_gen;  // generator images in the minus chart
};

/// The sheaf associated to a graded module on the projective line (r = 1):
/// chart modules by degree-zero localization, gluing derived through the
/// common localization at x_0 x_1.
SheafifyResult sheafify(const GradedPresentation& m);

/// Line shift of the sheaf of A(n); the unit of the twisting convention.
Exp twist_unit_shift(Exp n);

/// The graded module of twisted global sections, windowed to degrees
/// [-window, window]: one generator per global section of F(n), relations
/// from the two variable actions.
GradedPresentation gamma_star(const P1Sheaf& F, Exp window);

/// Window large enough to see every matched shift and every vertex position
/// of F, with slack; the starting point for reconstruction and section scans.
Exp gamma_star_default_window(const P1Sheaf& F);

struct BetaCheckResult {
  bool ok = false;
  Exp window = 0;  // the window that succeeded, or the last one tried
};

/// Reconstruction check: sheafify(gamma_star(F)) = F, starting from a
/// size-derived window and doubling on failure up to the cap.
BetaCheckResult beta_check(const P1Sheaf& F, std::optional<Exp> window = std::nullopt,
                           Exp cap = 64);

/// Do the global sections of F(n) generate both chart modules?
bool twist_globally_generated(const P1Sheaf& F, Exp n);

struct GlobalGenerationResult {
  Exp n0 = 0;
  std::vector<GlobalSection> sections;  // sections of F(n0)
};

/// Smallest n0 in [-bound, bound] from which six consecutive twists generate;
/// nullopt when no such run exists within the bound.
std::optional<GlobalGenerationResult> global_generation(const P1Sheaf& F, Exp bound = 64);

struct QuotientPresentationResult {
  Exp n = 0;
  long long k = 0;   // number of copies of O(-n)
  P1Sheaf source;    // the free sheaf
  SheafMap onto;
  bool surjective = false;
};

/// The surjection O(-n)^k -> F induced by the global sections of F(n),
/// with the cokernel verified empty.
QuotientPresentationResult quotient_presentation(const P1Sheaf& F, Exp n);

}  // namespace monoproj
