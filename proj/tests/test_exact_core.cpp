#include <random>

#include "doctest.h"
#include "nodal/algebra.hpp"

using namespace nodal;

namespace {

MatF random_matrix(std::mt19937& rng, Index r, Index c, int zero_bias = 0) {
  MatF m(r, c);
  std::uniform_int_distribution<int> d(0, 100 + zero_bias);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) {
      int v = d(rng);
      m(i, j) = v > 100 ? Fp(0) : Fp(v);
    }
  return m;
}

bool is_rref(const MatF& r) {
  Index last = -1;
  bool seen_zero = false;
  for (Index i = 0; i < r.rows(); ++i) {
    Index lead = -1;
    for (Index j = 0; j < r.cols(); ++j)
      if (!r(i, j).is_zero()) {
        lead = j;
        break;
      }
    if (lead < 0) {
      seen_zero = true;
      continue;
    }
    if (seen_zero || lead <= last || r(i, lead) != Fp(1)) return false;
    for (Index k = 0; k < r.rows(); ++k)
      if (k != i && !r(k, lead).is_zero()) return false;
    last = lead;
  }
  return true;
}

}  // namespace

TEST_CASE("rref of identity and zero") {
  auto a = rref<Fp>(identity<Fp>(3));
  CHECK(a.R == identity<Fp>(3));
  CHECK(a.T == identity<Fp>(3));
  CHECK(a.rank == 3);
  auto z = rref<Fp>(MatF::Zero(2, 2));
  CHECK(is_zero<Fp>(z.R));
  CHECK(z.T == identity<Fp>(2));
  CHECK(z.rank == 0);
}

TEST_CASE("rref multiply-back on random matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Index r = 1 + trial % 6, c = 1 + (trial * 7) % 5;
    MatF m = random_matrix(rng, r, c, trial % 3 == 0 ? 300 : 0);
    auto res = rref<Fp>(m);
    CHECK(MatF(res.T * m) == res.R);
    CHECK(is_invertible<Fp>(res.T));
    CHECK(is_rref(res.R));
    Index nonzero_rows = 0;
    for (Index i = 0; i < r; ++i)
      if (!is_zero<Fp>(VecF(res.R.row(i).transpose()))) ++nonzero_rows;
    CHECK(nonzero_rows == res.rank);
  }
}

TEST_CASE("rref over the rationals") {
  Mat<Rational> m(2, 2);
  m << Rational(1, 2), Rational(1), Rational(3), Rational(6);
  auto r = rref<Rational>(m);
  CHECK(r.rank == 1);
  CHECK(Mat<Rational>(r.T * m) == r.R);
  CHECK(r.R(0, 1) == Rational(2));
}

TEST_CASE("solve") {
  VecF b(3);
  b << Fp(4), Fp(-2), Fp(17);
  auto s = solve<Fp>(identity<Fp>(3), b);
  REQUIRE(s.consistent);
  CHECK(s.particular == b);
  CHECK(s.kernel.cols() == 0);

  auto z = solve<Fp>(MatF::Zero(2, 2), VecF::Zero(2));
  REQUIRE(z.consistent);
  CHECK(z.kernel.cols() == 2);
  CHECK(rank<Fp>(z.kernel) == 2);

  MatF a = MatF::Zero(2, 2);
  a(0, 0) = Fp(1);
  VecF bad(2);
  bad << Fp(0), Fp(1);
  CHECK_FALSE(solve<Fp>(a, bad).consistent);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    MatF m = random_matrix(rng, 5, 4 + trial % 3, trial % 2 ? 200 : 0);
    VecF x = random_matrix(rng, m.cols(), 1);
    VecF rhs = m * x;
    auto sol = solve<Fp>(m, rhs);
    REQUIRE(sol.consistent);
    CHECK(is_zero<Fp>(VecF(m * sol.particular - rhs)));
    CHECK(is_zero<Fp>(MatF(m * sol.kernel)));
    CHECK(sol.kernel.cols() == m.cols() - rank<Fp>(m));
  }
}

TEST_CASE("idempotent_from_element") {
  auto a = truncated_polynomial_algebra<Fp>(4);
  VecF t = a.basis(1);
  CHECK(is_zero<Fp>(idempotent_from_element(a, t)));
  VecF u = a.unit() + t;
  CHECK(idempotent_from_element(a, u) == a.unit());

  auto d = diagonal_algebra<Fp>(3);
  VecF e = VecF::Zero(3);
  e(0) = Fp(1);
  e(2) = Fp(1);
  CHECK(idempotent_from_element(d, e) == e);

  CharacteristicGuard g(5);
  auto d2 = diagonal_algebra<Fp>(2);
  VecF x(2);
  x << Fp(2), Fp(0);
  VecF got = idempotent_from_element(d2, x);
  // Oracle: nonzero idempotents among c1 x + c2 x^2 over F_5.
  std::vector<VecF> hits;
  for (int c1 = 0; c1 < 5; ++c1)
    for (int c2 = 0; c2 < 5; ++c2) {
      VecF p = Fp(c1) * x + Fp(c2) * d2.mul(x, x);
      if (!is_zero<Fp>(p) && d2.mul(p, p) == p) hits.push_back(p);
    }
  REQUIRE(!hits.empty());
  for (const auto& h : hits) CHECK(h == got);
  VecF want(2);
  want << Fp(1), Fp(0);
  CHECK(got == want);
}

TEST_CASE("idempotent_from_element properties on random upper triangular elements") {
  auto a = upper_triangular_algebra<Fp>(3);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    VecF x = random_matrix(rng, a.dim(), 1, trial % 4 == 0 ? 400 : 0);
    if (trial % 5 == 0) x(0) = x(3) = x(5) = Fp(0);  // diagonal entries zero
    VecF e = idempotent_from_element(a, x);
    CHECK(a.mul(e, e) == e);
    CHECK(a.mul(e, x) == a.mul(x, e));
    CHECK(is_zero<Fp>(e) == a.is_nilpotent(x));
    CHECK((e == a.unit()) == a.is_invertible(x));
  }
}

TEST_CASE("lift_idempotent in k[t]/(t^16)") {
  auto a = truncated_polynomial_algebra<Fp>(16);
  auto filt = valuation_filtration<Fp>(16);
  VecF e0 = a.unit() + a.basis(1);
  auto res = lift_idempotent(a, filt, e0, 16);
  CHECK(a.mul(res.e, res.e) == res.e);
  CHECK(res.iterations <= 4);
  for (size_t s = 0; s < res.defect_orders.size(); ++s)
    CHECK(res.defect_orders[s] >= (1 << s));
  CHECK(filt.order(VecF(res.e - e0)) >= 1);

  auto fixed = lift_idempotent(a, filt, VecF(a.unit()), 16);
  CHECK(fixed.e == a.unit());
  CHECK(fixed.iterations == 0);
  auto zero = lift_idempotent(a, filt, VecF(VecF::Zero(16)), 16);
  CHECK(is_zero<Fp>(zero.e));

  VecF bad = Fp(2) * a.unit();
  CHECK_THROWS_AS(lift_idempotent(a, filt, bad, 16), std::invalid_argument);
}

TEST_CASE("radical") {
  CHECK(radical(diagonal_algebra<Fp>(2)).cols() == 0);
  auto k2 = truncated_polynomial_algebra<Fp>(2);
  MatF r = radical(k2);
  REQUIRE(r.cols() == 1);
  CHECK(r(0, 0).is_zero());

  auto ut = upper_triangular_algebra<Fp>(3);
  MatF ru = radical(ut);
  CHECK(ru.cols() == 3);
  for (Index c = 0; c < ru.cols(); ++c) CHECK(ut.is_nilpotent(ru.col(c)));
  auto q = quotient(ut, ru);
  CHECK(q.dim() == 3);
  CHECK(radical(q).cols() == 0);
  // rad^dim = 0: products of dim(A) radical elements vanish.
  VecF prod = ru.col(0) + ru.col(1) + ru.col(2);
  CHECK(is_zero<Fp>(ut.pow(prod, 3)));

  CharacteristicGuard g(2);
  auto small = truncated_polynomial_algebra<Fp>(3);
  CHECK(radical(small).cols() == 2);  // brute-force path
  auto big = truncated_polynomial_algebra<Fp>(12);
  CHECK_THROWS_AS(radical(big), std::domain_error);
}

TEST_CASE("is_local and locality") {
  CHECK(is_local(truncated_polynomial_algebra<Fp>(3)));
  CHECK_FALSE(is_local(diagonal_algebra<Fp>(2)));
  // F_101[t]/(t^2+1): -1 is not a square mod 101? 101 = 1 mod 4, so use t^2 - 2.
  // 2 is a non-residue mod 101 (101 = 5 mod 8).
  std::vector<MatF> mult(2, MatF::Zero(2, 2));
  mult[0] = identity<Fp>(2);
  mult[1] << Fp(0), Fp(2), Fp(1), Fp(0);
  VecF u(2);
  u << Fp(1), Fp(0);
  FinDimAlgebra<Fp> ext({"1", "s"}, mult, u);
  auto loc = locality(ext);
  CHECK(loc.quotient_dim == 2);
  CHECK(loc.local);
  CHECK_FALSE(loc.split);
  CHECK_FALSE(is_local(ext));
  auto loc2 = locality(diagonal_algebra<Fp>(2));
  CHECK_FALSE(loc2.local);
}

TEST_CASE("local algebras have only trivial idempotents") {
  auto a = truncated_polynomial_algebra<Fp>(5);
  REQUIRE(is_local(a));
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    VecF x = random_matrix(rng, 5, 1, trial % 3 ? 0 : 500);
    VecF e = idempotent_from_element(a, x);
    CHECK((is_zero<Fp>(e) || e == a.unit()));
  }
}

TEST_CASE("structure validation rejects non-associative tables") {
  std::vector<MatF> mult(2, MatF::Zero(2, 2));
  mult[0] = identity<Fp>(2);
  mult[1] << Fp(0), Fp(1), Fp(1), Fp(1);
  mult[1](0, 0) = Fp(1);
  VecF u(2);
  u << Fp(1), Fp(0);
  // e1*e1 = e0 + e1 but left multiplication by e1 sends e0 to e0 + e1: not unital.
  CHECK_THROWS_AS(FinDimAlgebra<Fp>({"a", "b"}, mult, u), std::invalid_argument);
}
