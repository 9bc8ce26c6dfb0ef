#include "monoproj/basechange.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace monoproj {

namespace {

using Rat = boost::multiprecision::cpp_rational;

struct RatOps {
  using T = Rat;
  T zero() const { return T(0); }
  T one() const { return T(1); }
  bool is_zero(const T& a) const { return a.is_zero(); }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T div(const T& a, const T& b) const { return a / b; }
  T neg(const T& a) const { return -a; }
  std::string str(const T& a) const { return a.str(); }
};

struct ModOps {
  long long p = 2;
  using T = long long;
  T norm(long long a) const {
    long long r = a % p;
    return r < 0 ? r + p : r;
  }
  T zero() const { return 0; }
  T one() const { return 1; }
  bool is_zero(T a) const { return norm(a) == 0; }
  T add(T a, T b) const { return norm(a + b); }
  T sub(T a, T b) const { return norm(a - b); }
  T mul(T a, T b) const {
    return static_cast<T>(static_cast<unsigned __int128>(norm(a)) * norm(b) % p);
  }
  T inv(T a) const {
    long long t = 0, nt = 1, r = p, nr = norm(a);
    while (nr != 0) {
      const long long q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    MONOPROJ_CHECK(r == 1, "inverse of a zero residue");
    return norm(t);
  }
  T div(T a, T b) const { return mul(a, inv(b)); }
  T neg(T a) const { return norm(-a); }
  std::string str(T a) const { return std::to_string(norm(a)); }
};

unsigned long long pow_mod(unsigned long long b, unsigned long long e, unsigned long long m) {
  unsigned long long r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<unsigned long long>(static_cast<unsigned __int128>(r) * b % m);
    b = static_cast<unsigned long long>(static_cast<unsigned __int128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  unsigned long long d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (unsigned long long a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    unsigned long long x = pow_mod(a, d, n);
    if (x == 1 || x == static_cast<unsigned long long>(n - 1)) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = static_cast<unsigned long long>(static_cast<unsigned __int128>(x) * x % n);
      if (x == static_cast<unsigned long long>(n - 1)) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Reduced row echelon form in place; returns the pivot column of each row.
template <class Ops>
std::vector<int> rref(const Ops& F, std::vector<std::vector<typename Ops::T>>& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i) {
      if (!F.is_zero(a[i][c])) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(a[sel], a[r]);
    const auto piv = a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] = F.div(a[r][j], piv);
    for (int i = 0; i < rows; ++i) {
      if (i == r || F.is_zero(a[i][c])) continue;
      const auto f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] = F.sub(a[i][j], F.mul(f, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Basis of the null space of a, one vector per free column.
template <class Ops>
std::vector<std::vector<typename Ops::T>> kernel_basis(const Ops& F,
                                                       std::vector<std::vector<typename Ops::T>> a,
                                                       int cols) {
  std::vector<std::vector<typename Ops::T>> basis;
  if (a.empty()) {
    for (int c = 0; c < cols; ++c) {
      std::vector<typename Ops::T> v(cols, F.zero());
      v[c] = F.one();
      basis.push_back(std::move(v));
    }
    return basis;
  }
  const auto pivots = rref(F, a);
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<typename Ops::T> v(cols, F.zero());
    v[c] = F.one();
    for (int i = 0; i < static_cast<int>(pivots.size()); ++i) v[pivots[i]] = F.neg(a[i][c]);
    basis.push_back(std::move(v));
  }
  return basis;
}

Exp norm_mod(Exp a, Exp k) {
  Exp r = a % k;
  return r < 0 ? r + k : r;
}

// Finite coordinate window for the section space of F over a field: one
// coordinate per torsion vertex, per explicit vertex on a matched orbit, and
// per tail element up to the largest height that can meet the other chart.
// Coordinates beyond the window only appear in singleton equations and are
// zero in every section.
struct Coords {
  std::vector<std::pair<int, Elem>> elems;  // chart (0 plus, 1 minus), element
  std::vector<std::string> labels;
  std::map<std::pair<int, Elem>, int> index;
  std::vector<std::vector<std::pair<int, int>>> eqs;  // (coordinate, +-1) terms

  int add(const P1Sheaf& F, int chart, const Elem& e) {
    const auto key = std::make_pair(chart, e);
    const auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(elems.size());
    elems.push_back(key);
    const FunctionalGraph& g = chart == 0 ? F.plus : F.minus;
    labels.push_back((chart == 0 ? "plus:" : "minus:") + elem_label(g, e));
    index.emplace(key, id);
    return id;
  }
};

Coords build_coords(const P1Sheaf& F) {
  Coords C;
  for (int v = 0; v < F.plus.size(); ++v)
    if (F.zplus.orbit_of[v] < 0) C.add(F, 0, Elem::vertex(v));
  for (int v = 0; v < F.minus.size(); ++v)
    if (F.zminus.orbit_of[v] < 0) C.add(F, 1, Elem::vertex(v));

  for (const MatchedPair& mp : F.matching) {
    const Orbit& op = F.zplus.orbits[mp.plus_orbit];
    const Orbit& om = F.zminus.orbits[mp.minus_orbit];
    std::vector<std::pair<Exp, int>> pside, mside;  // position, coordinate
    Exp min_p = 0, min_q = 0;
    for (int v = 0; v < F.plus.size(); ++v) {
      if (F.zplus.orbit_of[v] != mp.plus_orbit) continue;
      pside.emplace_back(F.zplus.pos[v], C.add(F, 0, Elem::vertex(v)));
      min_p = std::min(min_p, F.zplus.pos[v]);
    }
    for (int v = 0; v < F.minus.size(); ++v) {
      if (F.zminus.orbit_of[v] != mp.minus_orbit) continue;
      mside.emplace_back(F.zminus.pos[v], C.add(F, 1, Elem::vertex(v)));
      min_q = std::min(min_q, F.zminus.pos[v]);
    }
    if (!op.cycle) {
      for (Exp h = 1; h <= mp.shift - min_q; ++h)
        pside.emplace_back(h, C.add(F, 0, Elem::tail(op.base, h)));
      for (Exp h = 1; h <= mp.shift - min_p; ++h)
        mside.emplace_back(h, C.add(F, 1, Elem::tail(om.base, h)));
      std::map<Exp, std::vector<std::pair<int, int>>> at;
      for (const auto& [pos, id] : pside) at[pos].emplace_back(id, 1);
      for (const auto& [pos, id] : mside) at[mp.shift - pos].emplace_back(id, -1);
      for (auto& [pos, eq] : at) C.eqs.push_back(std::move(eq));
    } else {
      const Exp k = op.k;
      std::map<Exp, std::vector<std::pair<int, int>>> at;
      for (const auto& [pos, id] : pside) at[norm_mod(pos, k)].emplace_back(id, 1);
      for (const auto& [pos, id] : mside) at[norm_mod(mp.shift - pos, k)].emplace_back(id, -1);
      for (auto& [pos, eq] : at) C.eqs.push_back(std::move(eq));
    }
  }
  return C;
}

template <class Ops>
void solve_gamma(const Ops& F, const Coords& C, LinearSystemReport& rep) {
  const int cols = static_cast<int>(C.elems.size());
  std::vector<std::vector<typename Ops::T>> a(
      C.eqs.size(), std::vector<typename Ops::T>(cols, F.zero()));
  for (size_t i = 0; i < C.eqs.size(); ++i)
    for (const auto& [id, sign] : C.eqs[i])
      a[i][id] = F.add(a[i][id], sign > 0 ? F.one() : F.neg(F.one()));
  const auto basis = kernel_basis(F, std::move(a), cols);
  rep.gamma_dim = static_cast<long long>(basis.size());
  for (const auto& v : basis) {
    BasisVector bv;
    for (int c = 0; c < cols; ++c)
      if (!F.is_zero(v[c])) bv.terms.emplace_back(C.labels[c], F.str(v[c]));
    rep.gamma_basis.push_back(std::move(bv));
  }
}

template <class Ops>
void solve_phi(const Ops& F, const Coords& C, const std::vector<GlobalSection>& secs,
               LinearSystemReport& rep) {
  const int rows = static_cast<int>(C.elems.size());
  const int cols = static_cast<int>(secs.size());
  std::vector<std::vector<typename Ops::T>> b(rows, std::vector<typename Ops::T>(cols, F.zero()));
  for (int j = 0; j < cols; ++j) {
    if (!secs[j].plus.is_star()) {
      const auto it = C.index.find({0, secs[j].plus});
      MONOPROJ_CHECK(it != C.index.end(), "section element outside the coordinate window");
      b[it->second][j] = F.add(b[it->second][j], F.one());
    }
    if (!secs[j].minus.is_star()) {
      const auto it = C.index.find({1, secs[j].minus});
      MONOPROJ_CHECK(it != C.index.end(), "section element outside the coordinate window");
      b[it->second][j] = F.add(b[it->second][j], F.one());
    }
  }
  const auto basis = kernel_basis(F, std::move(b), cols);
  rep.kernel_dim = static_cast<long long>(basis.size());
  rep.rank = cols - rep.kernel_dim;
  rep.surjective = rep.rank == rep.gamma_dim;
  for (const auto& v : basis) {
    std::vector<std::pair<int, std::string>> combo;
    for (int j = 0; j < cols; ++j)
      if (!F.is_zero(v[j])) combo.emplace_back(j, F.str(v[j]));
    rep.kernel.push_back(std::move(combo));
  }
}

}  // namespace

FieldCtx FieldCtx::Fp(long long p) {
  if (!is_prime(p)) throw Error("field modulus " + std::to_string(p) + " is not prime");
  FieldCtx k;
  k.rational = false;
  k.p = p;
  return k;
}

std::string FieldCtx::name() const {
  return rational ? "Q" : "F" + std::to_string(p);
}

long long linear_dim(const FunctionalGraph& g) {
  const auto len = length(g);
  if (!len) throw Error("module has a free tail: its base change is infinite dimensional");
  return *len;
}

LinearSystemReport gamma_K(const P1Sheaf& F, const FieldCtx& K) {
  LinearSystemReport rep;
  rep.field = K;
  rep.sections = static_cast<long long>(global_sections(F).size());
  const Coords C = build_coords(F);
  if (K.rational)
    solve_gamma(RatOps{}, C, rep);
  else
    solve_gamma(ModOps{K.p}, C, rep);
  return rep;
}

LinearSystemReport phi_K(const P1Sheaf& F, const FieldCtx& K) {
  LinearSystemReport rep;
  rep.field = K;
  const auto secs = global_sections(F);
  rep.sections = static_cast<long long>(secs.size());
  const Coords C = build_coords(F);
  if (K.rational) {
    const RatOps ops;
    solve_gamma(ops, C, rep);
    solve_phi(ops, C, secs, rep);
  } else {
    const ModOps ops{K.p};
    solve_gamma(ops, C, rep);
    solve_phi(ops, C, secs, rep);
  }
  return rep;
}

}  // namespace monoproj
