#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "nodal/triples.hpp"

using namespace nodal;

namespace {

std::shared_ptr<const NodalAlgebra> algebra(const std::string& name) {
  return std::make_shared<const NodalAlgebra>(builtin(name));
}

ProjComplex single(const std::shared_ptr<const NodalAlgebra>& a, const std::string& v, int deg) {
  ProjComplex c(a->A, deg, deg);
  c.set_module(deg, {*a->A->quiver().find_vertex(v)});
  return c;
}

// Complex of the dihedral band with m = 1: A -> A^2 -> A.
ProjComplex dihedral_band_complex(const std::shared_ptr<const NodalAlgebra>& a, Fp lambda) {
  const PathAlgebra& A = *a->A;
  int v = 0;
  ProjComplex c(a->A, 0, 2);
  c.set_module(2, {v});
  c.set_module(1, {v, v});
  c.set_module(0, {v});
  ProjMorphism d2(A, {v}, {v, v});
  d2.set(0, 0, A.parse_elem("xyx", v, v));
  d2.set(1, 0, A.parse_elem("yx", v, v));
  ProjMorphism d1(A, {v, v}, {v});
  d1.set(0, 0, A.parse_elem("xy", v, v));
  d1.set(0, 1, (-lambda) * A.parse_elem("x", v, v));
  c.set_differential(2, d2);
  c.set_differential(1, d1);
  return c;
}

}  // namespace

TEST_CASE("single projective gives the identity triple") {
  auto a = algebra("dihedral");
  Triple t = functor_F(a, single(a, "1", 0));
  CHECK(t.tilde.module(0).size() == 2);
  CHECK(t.m.at(0).size() == 1);
  CHECK(t.H.at(0) == MatF::Constant(2, 1, Fp(1)));
  CHECK(check_nondegenerate(t));
  CHECK(chain_isomorphic(functor_G(t), single(a, "1", 0)).isomorphic);
  auto g = algebra("gelfand");
  Triple tg = functor_F(g, single(g, "2", 3));
  CHECK(tg.comparison(3, 1) == MatF::Constant(1, 1, Fp(1)));
  CHECK(check_nondegenerate(tg));
}

TEST_CASE("degenerate triples are detected") {
  auto a = algebra("gelfand");
  Triple t = functor_F(a, single(a, "1", 0));
  t.H.at(0).setZero();
  std::string why;
  CHECK_FALSE(check_nondegenerate(t, &why));
  CHECK(why.find("singular") != std::string::npos);
  t.m.at(0).push_back(1);
  t.H.at(0) = MatF::Zero(1, 2);
  CHECK_FALSE(check_nondegenerate(t, &why));
  CHECK(why.find("square") != std::string::npos);
  CHECK_THROWS_AS(functor_G(t), std::invalid_argument);
}

TEST_CASE("dihedral band complex reduces to ladders and round trips") {
  auto a = algebra("dihedral");
  for (Fp lambda : {Fp(1), Fp(3)}) {
    ProjComplex c = dihedral_band_complex(a, lambda);
    REQUIRE(check(c).is_complex);
    Triple t = functor_F(a, c);
    CHECK(check_nondegenerate(t));
    CHECK(ladders(t.tilde).size() == 4);
    CHECK(chain_isomorphic(functor_G(t), c).isomorphic);
    auto b = std::make_shared<const Bunch>(dihedral_bunch({0, 2, 3}));
    BunchRep r = triple_to_bunchrep(t, b);
    CHECK(is_indecomposable(r));
    Word w = parse_word(
        "a(1,2,2,0) ~ b(1,2,2,1) - g(2,1) ~ g(1,1) - a(1,1,3,1) ~ b(1,2,3,2) - g(2,2) ~ g(1,2) - b(1,1,2,2) ~ "
        "a(1,1,2,1) - g(1,1) ~ g(2,1) - b(1,2,1,1) ~ a(1,1,1,0) - g(1,0) ~ g(2,0)");
    w.cyclic = true;
    bool any = false;
    for (Fp mu : {lambda, lambda.inv(), -lambda, -lambda.inv()})
      any = any || are_isomorphic(r, rep_from_datum(b, make_band(w, 1, mu))).isomorphic;
    CHECK(any);
  }
}

TEST_CASE("triples text round trip") {
  auto a = algebra("dihedral");
  Triple t = functor_F(a, dihedral_band_complex(a, Fp(3)));
  Triple u = parse_triple(format_triple(t), a);
  CHECK(format_triple(u) == format_triple(t));
}

TEST_CASE("data through triples: F(G(T)) matches the representation") {
  struct Case {
    std::string alg;
    Window w;
  };
  for (Case cs : {Case{"dihedral", {0, 2, 3}}, Case{"gelfand", {0, 2, 4}}, Case{"gelfand", {0, 3, 3}}}) {
    auto a = algebra(cs.alg);
    auto b = std::make_shared<const Bunch>(nodal_bunch(config_from_nodal(*a), cs.w));
    std::mt19937 rng(1234);
    for (int t = 0; t < 15; ++t) {
      Datum d = gen::random_datum(*b, rng, 12);
      INFO(datum_str(d));
      BunchRep r = rep_from_datum(b, d);
      Triple tr = triple_from_bunchrep(r, a);
      REQUIRE(check_nondegenerate(tr));
      ProjComplex c = functor_G(tr);
      auto rep = check(c);
      CHECK(rep.is_complex);
      CHECK(rep.is_minimal);
      Triple back = functor_F(a, c);
      CHECK(check_nondegenerate(back));
      CHECK(are_isomorphic(triple_to_bunchrep(back, b), r).isomorphic);
      CHECK(chain_isomorphic(functor_G(back), c).isomorphic);
    }
  }
}
