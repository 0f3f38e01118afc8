#include <array>
#include <random>

#include "doctest.h"
#include "nodal/builtins.hpp"

using namespace nodal;

namespace {

AlgElem random_elem(const PathAlgebra& a, std::mt19937& rng, int src, int dst) {
  AlgElem e = a.zero(src, dst);
  std::uniform_int_distribution<int> coef(0, 6);
  for (int b : a.basis_between(src, dst))
    if (a.basis_length(b) <= 5) e += Fp(coef(rng) - 3) * a.basis_elem(b);
  return e;
}

// 2x2 matrices over k[t]/(t^n), entries stored as coefficient vectors.
using Poly = std::vector<Fp>;
using PMat = std::array<std::array<Poly, 2>, 2>;

PMat pmat_mul(const PMat& a, const PMat& b, int n) {
  PMat c;
  for (auto& row : c)
    for (auto& e : row) e.assign(static_cast<size_t>(n), Fp(0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int p = 0; p < n; ++p)
          for (int q = 0; p + q < n; ++q)
            c[i][j][static_cast<size_t>(p + q)] += a[i][k][static_cast<size_t>(p)] * b[k][j][static_cast<size_t>(q)];
  return c;
}

bool pmat_zero(const PMat& a) {
  for (const auto& row : a)
    for (const auto& e : row)
      for (Fp c : e)
        if (!c.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("dihedral multiplication") {
  auto n = builtin("dihedral");
  const PathAlgebra& a = *n.A;
  AlgElem x = a.arrow(0), y = a.arrow(1), e = a.idempotent(0);
  CHECK(a.mul(x, x).is_zero());
  CHECK(a.mul(y, y).is_zero());
  CHECK(a.mul(e, e) == e);
  CHECK(a.mul(e, x) == x);
  AlgElem xy = a.mul(x, y);
  AlgElem xyx = a.mul(xy, x);
  CHECK(a.str(a.mul(xy, xyx)) == "xyxyx");
  CHECK(a.path(a.parse_path("xyxyx")) == a.mul(xy, xyx));
  CHECK(a.in_radical_power(x, 1));
  CHECK_FALSE(a.in_radical_power(e, 1));
  CHECK(a.in_radical_power(xyx, 3));
  CHECK_FALSE(a.in_radical_power(xyx, 4));
  // Words of length l avoiding xx and yy: two per length.
  CHECK(a.dim() == 1 + 2 * (a.truncation() - 1));
  CHECK(a.mul(a.path(Path(11, 0)), x).is_zero());
}

TEST_CASE("truncation kills long paths") {
  auto n = builtin("dihedral", 1, 4);
  const PathAlgebra& a = *n.A;
  CHECK_FALSE(a.parse_elem("xyx", 0, 0).is_zero());
  CHECK(a.parse_elem("xyxy", 0, 0).is_zero());
  CHECK(a.mul(a.parse_elem("xy", 0, 0), a.parse_elem("xy", 0, 0)).is_zero());
}

TEST_CASE("tag mismatch is rejected") {
  auto n = builtin("gelfand");
  const PathAlgebra& a = *n.A;
  AlgElem ap = a.arrow(*a.quiver().find_arrow("ap"));
  CHECK_THROWS_AS(a.mul(ap, ap), std::invalid_argument);
  CHECK_THROWS_AS(a.path(a.parse_path("ap.bp")), std::invalid_argument);
}

TEST_CASE("gelfand commutativity relation") {
  auto n = builtin("gelfand");
  const PathAlgebra& a = *n.A;
  int v3 = *a.quiver().find_vertex("3");
  AlgElem lhs = a.parse_elem("am.ap", v3, v3), rhs = a.parse_elem("bm.bp", v3, v3);
  CHECK(lhs == rhs);
  CHECK(a.parse_elem("am.ap - bm.bp", v3, v3).is_zero());
  CHECK(a.paths_of_length(v3, v3, 2).size() == 1);
}

TEST_CASE("associativity on random triples") {
  std::mt19937 rng(2024);
  for (const char* name : {"dihedral", "gelfand", "harish_chandra_even", "twin_node_gentle"}) {
    auto n = builtin(name, 2, 8);
    const PathAlgebra& a = *n.A;
    std::uniform_int_distribution<int> vd(0, a.num_vertices() - 1);
    for (int trial = 0; trial < 40; ++trial) {
      int i = vd(rng), j = vd(rng), k = vd(rng), l = vd(rng);
      AlgElem p = random_elem(a, rng, i, j), q = random_elem(a, rng, j, k), r = random_elem(a, rng, k, l);
      CHECK(a.mul(a.mul(p, q), r) == a.mul(p, a.mul(q, r)));
      CHECK(a.mul(p, a.idempotent(j)) == p);
    }
  }
}

TEST_CASE("presentation text round trip") {
  const char* text =
      "# dihedral\n"
      "1 -> 1 : x\n"
      "1 -> 1 : y\n"
      "xx = 0\n"
      "yy = 0\n"
      "truncate 9\n";
  Presentation p = parse_presentation(text);
  CHECK(p.truncation == 9);
  CHECK(p.relations.size() == 2);
  Presentation again = parse_presentation(format_presentation(p));
  CHECK(format_presentation(again) == format_presentation(p));
  PathAlgebra a(p);
  CHECK(a.dim() == 1 + 2 * 8);
  CHECK_THROWS_AS(parse_presentation("1 -> 2 : x\nz = 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(PathAlgebra(parse_presentation("1 -> 1 : x\nxx + x = 0\n")), std::invalid_argument);
  CHECK_THROWS_AS(parse_presentation("1 -> 1 : x\n1 -> 1 : x\n"), std::invalid_argument);
}

TEST_CASE("non-monomial relations reduce to the smaller word") {
  Presentation p = parse_presentation("1 -> 1 : x\n1 -> 1 : y\nxy - 2*yx = 0\ntruncate 5\n");
  PathAlgebra a(p);
  AlgElem xy = a.parse_elem("xy", 0, 0), yx = a.parse_elem("yx", 0, 0);
  CHECK(xy == Fp(2) * yx);
  // Quantum plane: one monomial x^i y^j per length.
  for (int l = 1; l < 5; ++l) CHECK(a.paths_of_length(0, 0, l).size() == static_cast<size_t>(l + 1));
  AlgElem x = a.arrow(0), y = a.arrow(1);
  CHECK(a.mul(a.mul(x, y), y) == Fp(4) * a.mul(a.mul(y, y), x));
}

TEST_CASE("builtin catalogue") {
  auto d = builtin("dihedral");
  CHECK(d.A->num_vertices() == 1);
  CHECK(d.A->quiver().num_arrows() == 2);
  CHECK(d.A->presentation().relations.size() == 2);
  auto gt = builtin("gelfand_tilde");
  CHECK(gt.A->num_vertices() == 2);
  CHECK(gt.A->quiver().num_arrows() == 2);
  auto c1 = builtin("cycle", 1);
  CHECK(c1.A->num_vertices() == 1);
  CHECK(c1.A->quiver().arrow(0).label == "t");
  CHECK(builtin("cycle", 3).A->quiver().num_arrows() == 3);
  CHECK_THROWS_AS(builtin("no_such_algebra"), std::invalid_argument);
  CHECK_THROWS_AS(builtin("cycle", 0), std::invalid_argument);

  auto ho = builtin("harish_chandra_odd", 2);
  CHECK(ho.A->presentation().vacuous.size() == 2);
  CHECK(ho.first_type[2]);
  auto he = builtin("harish_chandra_even", 1);
  CHECK(he.A->num_vertices() == 3);
  CHECK(he.first_type[2]);
  for (const auto& name : builtin_names()) {
    int param = name == "twin_node_chain" ? 2 : 1;
    CHECK_NOTHROW(builtin(name, param, 6));
  }
}

TEST_CASE("harish_chandra_even(1) has the Gelfand dimension profile") {
  auto he = builtin("harish_chandra_even", 1);
  auto g = builtin("gelfand");
  CHECK(he.A->dim() == g.A->dim());
}

TEST_CASE("phi_of_length") {
  auto d = builtin("dihedral");
  const PathAlgebra& t = *d.tilde;
  auto phi = phi_of_length(t, 1, 0, 1);
  CHECK(t.str(phi.at(0, 0)) == "x");
  CHECK(morphisms_equal(phi_of_length(t, 0, 0, 0), identity_morphism(t, {0})));
  CHECK_THROWS_AS(phi_of_length(t, 0, 0, 1), std::invalid_argument);
  auto g = builtin("gelfand");
  auto loop = phi_of_length(*g.tilde, 0, 0, 2);
  CHECK(g.tilde->str(loop.at(0, 0)) == "ac");
  // Lengths add under composition while the path survives.
  for (int l1 = 0; l1 < 4; ++l1)
    for (int l2 = 0; l2 < 4; ++l2) {
      int mid = l1 % 2, end = (l1 + l2) % 2;
      auto f = phi_of_length(t, 0, mid == 0 ? 0 : 1, l1);
      auto h = phi_of_length(t, mid == 0 ? 0 : 1, end == 0 ? 0 : 1, l2);
      CHECK(morphisms_equal(compose(t, h, f), phi_of_length(t, 0, end, l1 + l2)));
    }
  // Several paths of length 2 in A: xy and yx.
  CHECK_THROWS_AS(phi_of_length(*d.A, 0, 0, 2), std::invalid_argument);
}

TEST_CASE("dihedral band differentials compose to zero") {
  auto d = builtin("dihedral");
  const PathAlgebra& a = *d.A;
  for (Fp lambda : {Fp(1), Fp(3)}) {
    ProjMorphism d1({0}, {0, 0}), d2({0, 0}, {0});
    d1.set(0, 0, a.parse_elem("xyx", 0, 0));
    d1.set(1, 0, a.parse_elem("yx", 0, 0));
    d2.set(0, 0, a.parse_elem("xy", 0, 0));
    d2.set(0, 1, lambda * a.parse_elem("x", 0, 0));
    CHECK(compose(a, d2, d1).is_zero());
    CHECK_FALSE(compose(a, d1, d2).is_zero());
  }
  ProjMorphism px({0}, {0}), py({0}, {0});
  px.set(0, 0, a.arrow(0));
  py.set(0, 0, a.arrow(1));
  // First ·x, then ·y: the path x then y.
  CHECK(compose(a, py, px).at(0, 0) == a.parse_elem("xy", 0, 0));
  ProjMorphism id = identity_morphism(a, {0, 0});
  ProjMorphism g({0}, {0, 0});
  g.set(0, 0, a.arrow(0));
  CHECK(morphisms_equal(compose(a, id, g), g));
}

TEST_CASE("matrix realization of the dihedral algebra") {
  const int n = 12;
  PMat x, y;
  for (auto* m : {&x, &y})
    for (auto& row : *m)
      for (auto& e : row) e.assign(n, Fp(0));
  x[0][1][1] = Fp(1);  // t
  y[1][0][0] = Fp(1);  // 1
  CHECK(pmat_zero(pmat_mul(x, x, n)));
  CHECK(pmat_zero(pmat_mul(y, y, n)));
  CHECK_FALSE(pmat_zero(pmat_mul(x, y, n)));
  // The shipped embedding follows the same pattern.
  auto d = builtin("dihedral");
  auto ex = d.embed(d.A->arrow(0)), ey = d.embed(d.A->arrow(1));
  CHECK(ex.at(0, 1) == d.tilde->arrow(*d.tilde->quiver().find_arrow("x")));
  CHECK(ex.at(0, 0).is_zero());
  CHECK(ex.at(1, 0).is_zero());
  CHECK(ex.at(1, 1).is_zero());
  CHECK(ey.at(1, 0) == d.tilde->arrow(*d.tilde->quiver().find_arrow("y")));
  CHECK(d.embed(d.A->mul(d.A->arrow(0), d.A->arrow(0))).is_zero());
}

TEST_CASE("radical of A and of its hereditary cover agree") {
  for (const char* name : {"dihedral", "gelfand"}) {
    auto n = builtin(name);
    auto [a, t] = n.radical_profiles();
    CHECK(a == t);
  }
}

TEST_CASE("lifting through the embedding") {
  auto g = builtin("gelfand");
  const PathAlgebra& a = *g.A;
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int i = trial % 3, j = (trial / 3) % 3;
    AlgElem e = random_elem(a, rng, i, j);
    auto back = g.lift(g.embed(e), i, j);
    REQUIRE(back.has_value());
    CHECK(*back == e);
  }
  // The identity of P on the first-type vertex is not an element from vertex 1 to 3.
  ProjMorphism blk({0}, {1});
  blk.set(0, 0, g.tilde->arrow(0));
  CHECK(g.lift(blk, 0, 2).has_value());
  auto d = builtin("dihedral");
  ProjMorphism half = identity_morphism(*d.tilde, {0, 1});
  half.at(1, 1) = d.tilde->zero(1, 1);
  CHECK_FALSE(d.lift(half, 0, 0).has_value());
  CHECK(d.lift(identity_morphism(*d.tilde, {0, 1}), 0, 0).has_value());
}
