#include "doctest.h"
#include "monoproj/p1sheaf.hpp"

#include "monoproj/grproj.hpp"
#include "oracles.hpp"

using namespace monoproj;

namespace {
TPresentation prs(std::vector<std::string> g, std::vector<TRel> r) {
  TPresentation p;
  p.gens = std::move(g);
  p.rels = std::move(r);
  return p;
}

FunctionalGraph graph_of(const TPresentation& p) { return normalize(p).graph; }

FunctionalGraph decorated_c2() {
  return graph_of(prs({"u", "v"}, {{0, 2, 0, 0, false}, {1, 1, 0, 1, false}}));
}
}  // namespace

TEST_CASE("make_sheaf validates the matching") {
  const FunctionalGraph lad = graph_of(fixtures::ladder_pres());
  const FunctionalGraph fr = graph_of(fixtures::free_one());
  const FunctionalGraph c2 = graph_of(prs({"u"}, {{0, 2, 0, 0, false}}));
  const FunctionalGraph c3 = graph_of(prs({"u"}, {{0, 3, 0, 0, false}}));

  CHECK_NOTHROW(make_sheaf(lad, fr, {MatchedPair{0, 0, -1}}));
  // missing pair
  CHECK_THROWS_AS(make_sheaf(lad, fr, {}), Error);
  // duplicated orbit
  CHECK_THROWS_AS(
      make_sheaf(lad, fr, {MatchedPair{0, 0, 0}, MatchedPair{0, 0, 1}}), Error);
  // kind mismatch: line against cycle
  CHECK_THROWS_AS(make_sheaf(lad, c2, {MatchedPair{0, 0, 0}}), Error);
  // cycle length mismatch
  CHECK_THROWS_AS(make_sheaf(c2, c3, {MatchedPair{0, 0, 0}}), Error);
  // orbit index out of range
  CHECK_THROWS_AS(make_sheaf(lad, fr, {MatchedPair{1, 0, 0}}), Error);
  // torsion charts need no matching at all
  const FunctionalGraph z1 = graph_of(prs({"x"}, {{0, 1, 0, 0, true}}));
  CHECK_NOTHROW(make_sheaf(z1, FunctionalGraph{}, {}));
}

TEST_CASE("twists compose additively") {
  std::mt19937_64 rng = oracle::seeded_rng();
  const std::vector<P1Sheaf> base = {fixtures::o_n(0), fixtures::ex71(), fixtures::g_n(2),
                                     fixtures::torsion_zero(),
                                     make_sheaf(decorated_c2(), decorated_c2(),
                                                {MatchedPair{0, 0, 0}})};
  for (const P1Sheaf& F : base) {
    for (Exp n = -3; n <= 3; ++n) {
      for (Exp m = -2; m <= 2; ++m) {
        CHECK(sheaf_is_isomorphic(sheaf_twist(sheaf_twist(F, n), m),
                                  sheaf_twist(F, n + m)));
      }
    }
    CHECK(sheaf_is_isomorphic(sheaf_twist(F, 0), F));
  }
  for (int it = 0; it < 20; ++it) {
    const P1Sheaf F = oracle::random_sheaf(rng);
    const Exp n = std::uniform_int_distribution<Exp>(-3, 3)(rng);
    const Exp m = std::uniform_int_distribution<Exp>(-3, 3)(rng);
    CHECK(sheaf_is_isomorphic(sheaf_twist(sheaf_twist(F, n), m), sheaf_twist(F, n + m)));
  }
}

TEST_CASE("twisting a torsion sheaf changes nothing") {
  const P1Sheaf T = fixtures::torsion_zero();
  for (Exp n = -4; n <= 4; ++n) CHECK(sheaf_is_isomorphic(sheaf_twist(T, n), T));
}

TEST_CASE("cycle sheaves twist with period k") {
  const FunctionalGraph cd = decorated_c2();
  const P1Sheaf C0 = make_sheaf(cd, cd, {MatchedPair{0, 0, 0}});
  const P1Sheaf C1 = make_sheaf(cd, cd, {MatchedPair{0, 0, 1}});
  CHECK(!sheaf_is_isomorphic(C0, C1));
  CHECK(sheaf_is_isomorphic(sheaf_twist(C0, 1), C1));
  CHECK(sheaf_is_isomorphic(sheaf_twist(C0, 2), C0));

  // full rotational symmetry folds the shift away entirely
  const FunctionalGraph c2 = graph_of(prs({"u"}, {{0, 2, 0, 0, false}}));
  const P1Sheaf P0 = make_sheaf(c2, c2, {MatchedPair{0, 0, 0}});
  const P1Sheaf P1v = make_sheaf(c2, c2, {MatchedPair{0, 0, 1}});
  CHECK(sheaf_is_isomorphic(P0, P1v));
}

TEST_CASE("global section counts on the standard fixtures") {
  for (Exp n = -5; n <= 20; ++n)
    CHECK(static_cast<Exp>(global_sections(fixtures::o_n(n)).size()) ==
          std::max<Exp>(0, n + 1));

  const auto s71 = global_sections(fixtures::ex71());
  REQUIRE(s71.size() == 4);
  // exactly the four leaf pairs
  const P1Sheaf F = fixtures::ex71();
  for (const GlobalSection& s : s71) {
    const std::string lp = elem_label(F.plus, s.plus);
    const std::string lm = elem_label(F.minus, s.minus);
    CHECK((lp == "a" || lp == "b"));
    CHECK((lm == "a" || lm == "b"));
  }
  CHECK(std::is_sorted(s71.begin(), s71.end()));

  CHECK(global_sections(fixtures::g_n(1)).size() == 2);
  for (Exp n = 2; n <= 6; ++n) CHECK(global_sections(fixtures::g_n(n)).size() == 1);
  CHECK(global_sections(fixtures::torsion_zero()).size() == 1);
}

TEST_CASE("global sections agree with the windowed oracle") {
  std::mt19937_64 rng = oracle::seeded_rng();
  const std::vector<P1Sheaf> fixed = {fixtures::o_n(0), fixtures::o_n(3), fixtures::o_n(-1),
                                      fixtures::ex71(), fixtures::g_n(3),
                                      fixtures::torsion_zero()};
  for (const P1Sheaf& F : fixed) {
    const Exp W = gamma_star_default_window(F) + F.plus.size() + F.minus.size();
    CHECK(static_cast<long long>(global_sections(F).size()) ==
          oracle::windowed_sections(F, W));
  }
  for (int it = 0; it < 40; ++it) {
    const P1Sheaf F = oracle::random_sheaf(rng);
    const Exp W = gamma_star_default_window(F) + F.plus.size() + F.minus.size();
    const long long n = static_cast<long long>(global_sections(F).size());
    CHECK(n == oracle::windowed_sections(F, W));
    CHECK(n == oracle::windowed_sections(F, W + 3));
  }
}

TEST_CASE("sheaf maps respect the overlap") {
  const P1Sheaf F = fixtures::ex71();
  SheafMap id;
  for (int v = 0; v < F.plus.size(); ++v) id.plus.image.push_back(Elem::vertex(v));
  for (int v = 0; v < F.minus.size(); ++v) id.minus.image.push_back(Elem::vertex(v));
  CHECK(sheaf_map_check(F, F, id));

  // swapping the two leaves on one chart only is still compatible: the leaves
  // agree in the localization
  const NormalizeResult n = normalize(fixtures::ladder_pres());
  SheafMap swap = id;
  std::swap(swap.plus.image[static_cast<size_t>(n.gen_image[0].v)],
            swap.plus.image[static_cast<size_t>(n.gen_image[1].v)]);
  CHECK(sheaf_map_check(F, F, swap));

  // multiplying one chart by t shifts the overlap and fails
  SheafMap skew = id;
  for (int v = 0; v < F.plus.size(); ++v)
    skew.plus.image[static_cast<size_t>(v)] = t_act(F.plus, Elem::vertex(v));
  CHECK(map_check(F.plus, F.plus, skew.plus));
  CHECK(!sheaf_map_check(F, F, skew));
}

TEST_CASE("the euler style sequence of the origin point") {
  const P1Sheaf O = fixtures::o_n(0);
  const P1Sheaf T = fixtures::torsion_zero();
  SheafMap ev;
  ev.plus.image = {Elem::vertex(0)};
  ev.minus.image = {Elem::star()};
  REQUIRE(sheaf_map_check(O, T, ev));

  const SubSheafResult ker = sheaf_kernel(O, T, ev);
  CHECK(sheaf_is_isomorphic(ker.sheaf, fixtures::o_n(-1)));
  CHECK(sheaf_is_isomorphic(sheaf_image(O, T, ev).sheaf, T));
  const QuotSheafResult cok = sheaf_cokernel(O, T, ev);
  CHECK(cok.sheaf.plus.size() == 0);
  CHECK(cok.sheaf.minus.size() == 0);

  // the induced short sequence does not split
  const QuotSheafResult q = quotient_sheaf(O, sheaf_map_kernel(O, T, ev));
  CHECK(sheaf_is_isomorphic(q.sheaf, T));
  CHECK(!is_split(ker.sheaf, O, q.sheaf, ker.inclusion, q.projection));
}

TEST_CASE("subsheaf and quotient of the width two extensions") {
  for (Exp n = 1; n <= 5; ++n) {
    const P1Sheaf G = fixtures::g_n(n);
    const auto secs = global_sections(G);
    int ai = -1;
    for (size_t i = 0; i < secs.size(); ++i)
      if (!secs[i].plus.is_star() && elem_label(G.plus, secs[i].plus) == "a")
        ai = static_cast<int>(i);
    REQUIRE(ai >= 0);
    const SheafSub sub = subsheaf_generated(G, {secs[static_cast<size_t>(ai)]});
    const SubSheafResult S = sub_to_sheaf(G, sub);
    const QuotSheafResult Q = quotient_sheaf(G, sub);
    CHECK(sheaf_is_isomorphic(S.sheaf, fixtures::o_n(0)));
    CHECK(sheaf_is_isomorphic(Q.sheaf, fixtures::torsion_zero()));
    CHECK(sheaf_map_check(S.sheaf, G, S.inclusion));
    CHECK(sheaf_map_check(G, Q.sheaf, Q.projection));
    CHECK(!is_split(S.sheaf, G, Q.sheaf, S.inclusion, Q.projection));
  }
}

TEST_CASE("split sequences are recognized") {
  const P1Sheaf O = fixtures::o_n(0);
  const P1Sheaf T = fixtures::torsion_zero();
  const SheafSumResult E = sheaf_direct_sum(O, T);
  SheafMap inc, proj;
  for (int v = 0; v < O.plus.size(); ++v)
    inc.plus.image.push_back(Elem::vertex(E.plus.left[static_cast<size_t>(v)]));
  for (int v = 0; v < O.minus.size(); ++v)
    inc.minus.image.push_back(Elem::vertex(E.minus.left[static_cast<size_t>(v)]));
  for (int v = 0; v < E.sheaf.plus.size(); ++v) {
    int src = -1;
    for (size_t j = 0; j < T.plus.succ.size(); ++j)
      if (E.plus.right[j] == v) src = static_cast<int>(j);
    proj.plus.image.push_back(src >= 0 ? Elem::vertex(src) : Elem::star());
  }
  for (int v = 0; v < E.sheaf.minus.size(); ++v) proj.minus.image.push_back(Elem::star());
  REQUIRE(sheaf_map_check(O, E.sheaf, inc));
  REQUIRE(sheaf_map_check(E.sheaf, T, proj));
  CHECK(is_split(O, E.sheaf, T, inc, proj));

  // a non exact triple is rejected outright
  SheafMap zero;
  zero.plus.image.assign(static_cast<size_t>(O.plus.size()), Elem::star());
  zero.minus.image.assign(static_cast<size_t>(O.minus.size()), Elem::star());
  CHECK_THROWS_AS(is_split(O, E.sheaf, T, zero, proj), Error);
}

TEST_CASE("rank and torsion predicates") {
  CHECK(sheaf_rank(fixtures::o_n(0)) == 1);
  CHECK(sheaf_rank(fixtures::o_n(-3)) == 1);
  CHECK(!sheaf_rank(fixtures::ex71()).has_value());
  const P1Sheaf OO = sheaf_direct_sum(fixtures::o_n(0), fixtures::o_n(2)).sheaf;
  CHECK(sheaf_rank(OO) == 2);

  CHECK(sheaf_is_torsion(fixtures::torsion_zero()));
  CHECK(!sheaf_is_torsion(fixtures::o_n(0)));
  CHECK(sheaf_is_torsion_free(fixtures::o_n(0)));
  CHECK(sheaf_is_torsion_free(fixtures::ex71()));
  const P1Sheaf mix = sheaf_direct_sum(fixtures::o_n(0), fixtures::torsion_zero()).sheaf;
  CHECK(!sheaf_is_torsion(mix));
  CHECK(!sheaf_is_torsion_free(mix));
}

TEST_CASE("decomposition into indecomposable summands") {
  const FunctionalGraph cd = decorated_c2();
  const P1Sheaf C = make_sheaf(cd, cd, {MatchedPair{0, 0, 1}});
  const P1Sheaf A =
      sheaf_direct_sum(sheaf_direct_sum(fixtures::o_n(1), fixtures::torsion_zero()).sheaf, C)
          .sheaf;
  const auto parts = sheaf_decompose(A);
  REQUIRE(parts.size() == 3);
  std::multiset<int> kinds;
  for (const SheafSummand& s : parts) kinds.insert(static_cast<int>(s.kind));
  CHECK(kinds.count(static_cast<int>(SheafSummand::Kind::Line)) == 1);
  CHECK(kinds.count(static_cast<int>(SheafSummand::Kind::TorsionPlus)) == 1);
  CHECK(kinds.count(static_cast<int>(SheafSummand::Kind::Cycle)) == 1);

  // construction order does not matter
  const P1Sheaf B =
      sheaf_direct_sum(C, sheaf_direct_sum(fixtures::torsion_zero(), fixtures::o_n(1)).sheaf)
          .sheaf;
  CHECK(sheaf_canonical(A) == sheaf_canonical(B));
  CHECK(sheaf_is_isomorphic(A, B));
  // the summand canonical tags match the whole
  for (const SheafSummand& s : parts) CHECK(s.canonical == sheaf_canonical(s.sheaf));
}

TEST_CASE("random sheaves decompose consistently") {
  std::mt19937_64 rng = oracle::seeded_rng();
  for (int it = 0; it < 40; ++it) {
    const P1Sheaf F = oracle::random_sheaf(rng);
    const auto parts = sheaf_decompose(F);
    REQUIRE(!parts.empty());
    P1Sheaf sum = parts[0].sheaf;
    for (size_t i = 1; i < parts.size(); ++i)
      sum = sheaf_direct_sum(sum, parts[i].sheaf).sheaf;
    CHECK(sheaf_is_isomorphic(F, sum));
    // re-decomposing the reassembled sum gives the same summand multiset
    std::multiset<std::string> before, after;
    for (const SheafSummand& s : parts) before.insert(s.canonical);
    for (const SheafSummand& s : sheaf_decompose(sum)) after.insert(s.canonical);
    CHECK(before == after);
  }
}
