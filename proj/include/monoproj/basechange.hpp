#pragma once

#include <string>
#include <utility>
#include <vector>

#include "monoproj/p1sheaf.hpp"

namespace monoproj {

/// Coefficient field for base change: the rationals, or a prime field F_p.
struct FieldCtx {
  bool rational = true;
  long long p = 0;

  static FieldCtx Q() { return FieldCtx{}; }
  static FieldCtx Fp(long long p);  // throws Error unless p is prime
  std::string name() const;
};

/// Dimension over any field of the base change of a finite module: one basis
/// vector per nonzero element. Throws Error when the module has a free tail.
long long linear_dim(const FunctionalGraph& g);

/// A vector over K in labelled coordinates; coefficients are exact strings
/// ("1", "-2/3", or a residue mod p).
struct BasisVector {
  std::vector<std::pair<std::string, std::string>> terms;
};

/// Result of the section-space computation over K and of the comparison with
/// the F1 sections. gamma_K fills the gamma_* fields; phi_K fills everything.
struct LinearSystemReport {
  FieldCtx field;
  long long gamma_dim = 0;
  std::vector<BasisVector> gamma_basis;
  long long sections = 0;   // nonzero sections over F1, = global_sections size
  long long rank = 0;       // rank of the K-span of the F1 sections
  long long kernel_dim = 0;
  bool surjective = false;
  // kernel vectors as formal combinations of the F1 sections; the index is
  // into global_sections(F)
  std::vector<std::vector<std::pair<int, std::string>>> kernel;
};

/// Sections of the base-changed sheaf: the equalizer of the two chart
/// restrictions, solved exactly over K on a finite coordinate window (tail
/// coordinates beyond the window are forced to zero by a singleton fiber).
LinearSystemReport gamma_K(const P1Sheaf& F, const FieldCtx& K);

/// gamma_K plus the linear map sending each F1 section (x, y) to e_x + e_y:
/// rank, kernel basis, and surjectivity onto the K-section space.
LinearSystemReport phi_K(const P1Sheaf& F, const FieldCtx& K);

}  // namespace monoproj
