// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria. All comparisons are exact over F_101; time limits are wall
// clock on a single core.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "brute_force.hpp"
#include "generators.hpp"
#include "nodal/catalog.hpp"
#include "nodal/triples.hpp"

using namespace nodal;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
};

int failures = 0;

void criterion(int n, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double t = std::chrono::duration<double>(Clock::now() - t0).count();
  if (t > limit_s) o.require(false, "runtime over " + std::to_string(limit_s) + "s");
  if (!o.pass) ++failures;
  std::printf("criterion %d %-28s %s  (%.2fs, limit %.0fs)%s%s\n", n, name.c_str(), o.pass ? "PASS" : "FAIL", t,
              limit_s, o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

std::shared_ptr<const NodalAlgebra> algebra(const std::string& name) {
  return std::make_shared<const NodalAlgebra>(builtin(name));
}

std::shared_ptr<const Bunch> bunch_for(const std::shared_ptr<const NodalAlgebra>& a, Window w) {
  return std::make_shared<const Bunch>(nodal_bunch(config_from_nodal(*a), w));
}

AlgElem path(const NodalAlgebra& a, const std::string& text) { return a.A->parse_elem(text, 0, 0); }

// Every entry of the block of d_k at (r0, c0) equals coef(i, j) * p.
bool block_is(const ProjComplex& c, int k, int r0, int c0, const MatF& coef, const AlgElem& p) {
  ProjMorphism d = c.differential(k);
  for (Index i = 0; i < coef.rows(); ++i)
    for (Index j = 0; j < coef.cols(); ++j)
      if (!(d.at(r0 + static_cast<int>(i), c0 + static_cast<int>(j)) - coef(i, j) * p).is_zero()) return false;
  return true;
}

const char* kDihedralBand =
    "a(1,2,2,0) ~ b(1,2,2,1) - g(2,1) ~ g(1,1) - a(1,1,3,1) ~ b(1,2,3,2) - g(2,2) ~ g(1,2) - b(1,1,2,2) ~ "
    "a(1,1,2,1) - g(1,1) ~ g(2,1) - b(1,2,1,1) ~ a(1,1,1,0) - g(1,0) ~ g(2,0)";

std::string resolution_of_k(int n) {
  std::vector<std::string> left{"b(1,1,1,1)"};
  for (int k = 1; k <= n; ++k) {
    auto K = std::to_string(k);
    for (const std::string& t : {std::string("-"), "g(1," + K + ")", std::string("~"), "g(2," + K + ")",
                                 std::string("-"), "a(1,2,1," + K + ")"})
      left.push_back(t);
    if (k < n) left.push_back("~"), left.push_back("b(1,1,1," + std::to_string(k + 1) + ")");
  }
  std::string s = "string{... ~";
  for (auto it = left.rbegin(); it != left.rend(); ++it) s += " " + *it;
  s += " ~ a(1,2,1,0) - g(2,0) ~ g(1,0) - a(1,1,1,0)";
  for (int k = 1; k <= n; ++k) {
    auto K = std::to_string(k);
    s += " ~ b(1,2,1," + K + ") - g(2," + K + ") ~ g(1," + K + ") - a(1,1,1," + K + ")";
  }
  return s + " ~ ...}";
}

struct Sample {
  std::shared_ptr<const NodalAlgebra> a;
  std::shared_ptr<const Bunch> b;
  Datum d;
};

// 25 dihedral and 25 Gelfand data of total dimension at most 12.
std::vector<Sample> random_samples() {
  std::vector<Sample> out;
  std::mt19937 rng(31337);
  auto dih = algebra("dihedral");
  auto gel = algebra("gelfand");
  auto bd = bunch_for(dih, {0, 2, 3});
  auto bg = bunch_for(gel, {0, 2, 4});
  for (int i = 0; i < 25; ++i) out.push_back({dih, bd, gen::random_datum(*bd, rng, 12)});
  for (int i = 0; i < 25; ++i) out.push_back({gel, bg, gen::random_datum(*bg, rng, 12)});
  return out;
}

}  // namespace

int main() {
  std::printf("acceptance over F_%u\n", Fp::characteristic());

  criterion(1, "special matrices", 1, [] {
    Outcome o;
    auto rows = [](std::initializer_list<std::initializer_list<int>> r) {
      MatF m = MatF::Zero(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
      Index i = 0;
      for (auto& row : r) {
        Index j = 0;
        for (int v : row) m(i, j++) = Fp(v);
        ++i;
      }
      return m;
    };
    o.require(special_matrix(SpecialKind::Ir_plus, 5) ==
                  rows({{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, 1}, {0, 1, 0, 0, 0}, {0, 0, 0, 1, 0}}),
              "I_5^{r+}");
    o.require(special_matrix(SpecialKind::Jr_minus, 5) ==
                  rows({{0, 1, 1, 0, 0}, {0, 0, 0, 1, 1}, {1, 1, 0, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 0, 1}}),
              "J_5^{r-}");
    o.require(special_matrix(SpecialKind::Ic_plus, 4) ==
                  rows({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}),
              "I_4^{c+}");
    o.require(special_matrix(SpecialKind::Jr_plus, 4) ==
                  rows({{1, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 1, 0}, {0, 0, 0, 1}}),
              "J_4^{r+}");
    return o;
  });

  for (int m : {1, 2, 3})
    for (int lam : {1, 3}) {
      std::string name = "dihedral band m=" + std::to_string(m) + " l=" + std::to_string(lam);
      criterion(2, name, 1, [m, lam] {
        Outcome o;
        auto a = algebra("dihedral");
        auto b = bunch_for(a, {0, 2, 3});
        Word w = parse_word(kDihedralBand);
        w.cyclic = true;
        ProjComplex c = glue_complex(a, b, make_band(w, m, Fp(lam)));
        CheckReport rep = check(c);
        o.require(rep.is_complex && rep.is_minimal, "check = {true, true}");
        o.require(c.lo() == 0 && c.hi() == 2, "degrees 0..2");
        o.require(c.module(2).size() == static_cast<size_t>(m) && c.module(1).size() == static_cast<size_t>(2 * m) &&
                      c.module(0).size() == static_cast<size_t>(m),
                  "ranks m, 2m, m");
        if (!o.pass) return o;
        MatF I = identity<Fp>(m);
        o.require(block_is(c, 2, 0, 0, I, path(*a, "xyx")), "xyx I block");
        o.require(block_is(c, 2, m, 0, I, path(*a, "yx")), "yx I block");
        o.require(block_is(c, 1, 0, 0, I, path(*a, "xy")), "xy I block");
        o.require(block_is(c, 1, 0, m, jordan_block(m, Fp(lam)), path(*a, "x")), "x J_m(lambda) block");
        return o;
      });
    }

  criterion(3, "homology at truncation 12", 5, [] {
    Outcome o;
    auto a = algebra("dihedral");
    o.require(a->A->truncation() == 12, "truncation 12");
    int n = 6;
    ProjComplex c = glue_complex(a, bunch_for(a, {0, n, 1}), parse_datum(resolution_of_k(n)));
    o.require(homology_dims(c, 0).dim == 1, "resolution of k: H_0 = 1");
    for (int k = 1; k <= 5; ++k) o.require(homology_dims(c, k).dim == 0, "resolution of k: H_" + std::to_string(k) + " = 0");
    auto g = algebra("gelfand");
    ProjComplex s = glue_complex(g, bunch_for(g, {0, 2, 2}), parse_datum("string{b(1,1) - g(1) ~ g(1) - a(1,1)}"));
    // With a minimal differential the top of H_0 is the top of the degree-0 module.
    int h0 = homology_dims(s, 0).dim;
    std::string top;
    for (int v : s.module(0)) top += (top.empty() ? "" : "+") + g->A->quiver().vertex(v);
    o.require(h0 == 1 && top == "1", "killed-vertex string: H_0 = U_1 (got dim " + std::to_string(h0) +
                                         " with top U_" + top + ")");
    return o;
  });

  std::vector<Sample> samples = random_samples();

  criterion(4, "triple roundtrip", 60, [&] {
    Outcome o;
    int ok = 0;
    for (auto& s : samples) {
      ProjComplex c = glue_complex(s.a, s.b, s.d);
      if (chain_isomorphic(functor_G(functor_F(s.a, c)), c).isomorphic)
        ++ok;
      else
        o.require(false, datum_str(s.d));
    }
    o.detail = std::to_string(ok) + "/" + std::to_string(samples.size()) + " roundtrips" +
               (o.detail.empty() ? "" : "; " + o.detail);
    return o;
  });

  criterion(5, "local endomorphism rings", 60, [&] {
    Outcome o;
    int ok = 0;
    for (auto& s : samples) {
      Locality l = locality(endomorphisms(rep_from_datum(s.b, s.d)));
      if (l.local && l.split && l.quotient_dim == 1)
        ++ok;
      else
        o.require(false, datum_str(s.d));
    }
    o.detail = std::to_string(ok) + "/" + std::to_string(samples.size()) + " local with split quotient" +
               (o.detail.empty() ? "" : "; " + o.detail);
    return o;
  });

  criterion(6, "Krull-Schmidt on pairs", 120, [] {
    Outcome o;
    std::mt19937 rng(4711);
    auto dih = algebra("dihedral");
    auto gel = algebra("gelfand");
    auto bd = bunch_for(dih, {0, 2, 3});
    auto bg = bunch_for(gel, {0, 2, 4});
    int ok = 0;
    for (int i = 0; i < 25; ++i) {
      auto b = i % 2 ? bg : bd;
      BunchRep r1 = rep_from_datum(b, gen::random_datum(*b, rng, 8));
      BunchRep r2 = rep_from_datum(b, gen::random_datum(*b, rng, 8));
      auto parts = decompose(direct_sum(r1, r2), rng());
      bool match = parts.size() == 2 &&
                   ((are_isomorphic(parts[0], r1).isomorphic && are_isomorphic(parts[1], r2).isomorphic) ||
                    (are_isomorphic(parts[0], r2).isomorphic && are_isomorphic(parts[1], r1).isomorphic));
      if (match)
        ++ok;
      else
        o.require(false, "pair " + std::to_string(i));
    }
    o.detail = std::to_string(ok) + "/25 pairs" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
  });

  criterion(7, "band equivalence invariance", 120, [] {
    Outcome o;
    std::mt19937 rng(2718);
    auto dih = algebra("dihedral");
    auto gel = algebra("gelfand");
    auto bd = bunch_for(dih, {0, 2, 3});
    auto bg = bunch_for(gel, {0, 2, 4});
    int shifts = 0;
    for (int i = 0; i < 25; ++i) {
      auto b = i % 2 ? bg : bd;
      BandDatum band = gen::random_band_datum(*b, rng, 12);
      BunchRep r = rep_from_datum(b, band);
      for (int k = 0; k < band.w.length(); k += 2) {
        Poly f = twist_parity(k, band.w) ? poly_reciprocal(band.f) : band.f;
        BandDatum moved = make_band(shift_cycle(band.w, k), f);
        ++shifts;
        o.require(are_isomorphic(r, rep_from_datum(b, moved)).isomorphic,
                  "shift " + std::to_string(k) + " of " + datum_str(band));
      }
      // A parameter outside the equivalence class gives a different object.
      for (int x = 2; x < 101; ++x) {
        BandDatum other = make_band(band.w, band.d, Fp(x));
        if (!validate_datum(*b, other).empty() || data_equivalent(*b, band, other)) continue;
        o.require(!are_isomorphic(r, rep_from_datum(b, other)).isomorphic, "lambda " + std::to_string(x));
        break;
      }
    }
    if (o.pass) o.detail = std::to_string(shifts) + " shifts";
    return o;
  });

  criterion(8, "idempotent lifting", 1, [] {
    Outcome o;
    auto A = truncated_polynomial_algebra<Fp>(16);
    Vec<Fp> e0 = A.unit() + A.basis(1);
    LiftResult<Fp> res = lift_idempotent(A, valuation_filtration<Fp>(16), e0, 16);
    o.require(res.iterations <= 4, "at most 4 iterations (took " + std::to_string(res.iterations) + ")");
    o.require(A.mul(res.e, res.e) == res.e, "exact idempotent");
    o.require(res.e == A.unit(), "lift of 1 + t is 1");
    for (size_t s = 0; s + 1 < res.defect_orders.size(); ++s)
      o.require(res.defect_orders[s] >= (1 << s), "defect in (t^" + std::to_string(1 << s) + ") at step " +
                                                       std::to_string(s));
    return o;
  });

  criterion(9, "catalog versus brute force", 120, [] {
    Outcome o;
    struct Case {
      std::string alg;
      Window w;
      int letters;
    };
    std::ostringstream counts;
    for (const Case& cs : {Case{"gelfand", {0, 1, 4}, 8}, Case{"dihedral", {0, 1, 3}, 8}}) {
      auto a = algebra(cs.alg);
      auto b = bunch_for(a, cs.w);
      CatalogBounds cb;
      cb.max_letters = cs.letters;
      cb.max_mult = 2;
      cb.lambdas = {Fp(1), Fp(3)};
      auto entries = catalog(a, b, cb);
      std::vector<Datum> listed;
      int kinds[3] = {0, 0, 0};
      for (auto& e : entries) {
        ++kinds[static_cast<int>(e.kind)];
        if (e.datum) listed.push_back(*e.datum);
      }
      for (size_t i = 0; i < listed.size(); ++i)
        for (size_t j = i + 1; j < listed.size(); ++j)
          if (data_equivalent(*b, listed[i], listed[j])) o.require(false, "duplicate " + datum_str(listed[j]));
      std::vector<bool> hit(listed.size(), false);
      for (const Datum& d : brute::all_data(b, cs.letters, cb.max_mult, cb.lambdas)) {
        bool found = false;
        for (size_t i = 0; i < listed.size() && !found; ++i)
          if (data_equivalent(*b, d, listed[i])) found = hit[i] = true;
        if (!found) o.require(false, "omitted " + datum_str(d));
      }
      for (size_t i = 0; i < listed.size(); ++i)
        if (!hit[i]) o.require(false, "not produced by brute force " + datum_str(listed[i]));
      int expected_exceptional = 0;
      if (a->has_tilde())
        for (int l = 1; l <= cs.w.L; ++l)
          for (int f = cs.w.kmin; f < cs.w.kmax; ++f) try {
              exceptional_complex(a, l, f);
              ++expected_exceptional;
            } catch (const std::invalid_argument&) {
            }
      o.require(kinds[2] == expected_exceptional, cs.alg + " exceptional count");
      counts << cs.alg << ": " << kinds[0] << " strings, " << kinds[1] << " bands, " << kinds[2] << " exceptional; ";
      if (cs.alg == "gelfand") o.require(kinds[0] > 0 && kinds[1] > 0 && kinds[2] > 0, "all three families");
    }
    o.detail = counts.str() + o.detail;
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
