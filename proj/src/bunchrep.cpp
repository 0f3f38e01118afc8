#include "nodal/bunchrep.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace nodal {

std::string stripe_str(const Bunch& b, Stripe s) {
  std::string out = element_str(b.element(s.elem));
  if (s.part == 1) out += "'";
  if (s.part == 2) out += "''";
  return out;
}

namespace {

Stripe parse_stripe(const Bunch& b, std::string t) {
  int part = 0;
  while (!t.empty() && t.back() == '\'') {
    ++part;
    t.pop_back();
  }
  if (part > 2) throw std::invalid_argument("bad stripe: " + t);
  return {b.id(parse_element(t)), part};
}

MatF zeros(Index r, Index c) { return MatF::Zero(r, c); }

}  // namespace

// ---------------------------------------------------------------- BunchRep

BunchRep::BunchRep(std::shared_ptr<const Bunch> b) : bunch_(std::move(b)) {}

std::vector<Stripe> BunchRep::stripes_of(int elem) const {
  if (bunch_->self_related(elem)) return {{elem, 1}, {elem, 2}};
  return {{elem, 0}};
}

Stripe BunchRep::class_of(Stripe s) const {
  if (s.part != 0) return s;
  int p = bunch_->partner(s.elem);
  if (p >= 0 && p != s.elem) return {std::min(s.elem, p), 0};
  return s;
}

int BunchRep::dim(Stripe s) const {
  auto it = dims_.find(class_of(s));
  return it == dims_.end() ? 0 : it->second;
}

void BunchRep::set_dim(Stripe s, int n) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  Stripe c = class_of(s);
  if (n == 0)
    dims_.erase(c);
  else
    dims_[c] = n;
  mats_.erase(bunch_->block_of(s.elem));
  int p = bunch_->partner(s.elem);
  if (p >= 0) mats_.erase(bunch_->block_of(p));
}

std::vector<Stripe> BunchRep::row_stripes(int block) const {
  std::vector<Stripe> out;
  for (int x : bunch_->block(block).E)
    for (Stripe s : stripes_of(x))
      if (dim(s) > 0) out.push_back(s);
  return out;
}

std::vector<Stripe> BunchRep::col_stripes(int block) const {
  std::vector<Stripe> out;
  for (int x : bunch_->block(block).F)
    for (Stripe s : stripes_of(x))
      if (dim(s) > 0) out.push_back(s);
  return out;
}

int BunchRep::rows(int block) const {
  int n = 0;
  for (Stripe s : row_stripes(block)) n += dim(s);
  return n;
}

int BunchRep::cols(int block) const {
  int n = 0;
  for (Stripe s : col_stripes(block)) n += dim(s);
  return n;
}

int BunchRep::row_offset(int block, Stripe s) const {
  int off = 0;
  for (Stripe t : row_stripes(block)) {
    if (t == s) return off;
    off += dim(t);
  }
  throw std::invalid_argument("row stripe not in block: " + stripe_str(*bunch_, s));
}

int BunchRep::col_offset(int block, Stripe s) const {
  int off = 0;
  for (Stripe t : col_stripes(block)) {
    if (t == s) return off;
    off += dim(t);
  }
  throw std::invalid_argument("column stripe not in block: " + stripe_str(*bunch_, s));
}

MatF BunchRep::matrix(int block) const {
  auto it = mats_.find(block);
  if (it != mats_.end() && it->second.rows() == rows(block) && it->second.cols() == cols(block))
    return it->second;
  return zeros(rows(block), cols(block));
}

void BunchRep::set_matrix(int block, MatF m) {
  if (m.rows() != rows(block) || m.cols() != cols(block))
    throw std::invalid_argument("block matrix has the wrong shape");
  mats_[block] = std::move(m);
}

void BunchRep::set_entry(int block, int r, int c, Fp v) {
  MatF m = matrix(block);
  m(r, c) = v;
  mats_[block] = std::move(m);
}

std::vector<int> BunchRep::blocks() const {
  std::vector<int> out;
  for (int k = 0; k < bunch_->num_blocks(); ++k)
    if (rows(k) > 0 || cols(k) > 0) out.push_back(k);
  return out;
}

std::vector<Stripe> BunchRep::classes() const {
  std::vector<Stripe> out;
  for (auto& [c, n] : dims_)
    if (n > 0) out.push_back(c);
  return out;
}

int BunchRep::total_dim() const {
  int n = 0;
  for (auto& [c, d] : dims_) n += d;
  return n;
}

bool BunchRep::nondegenerate(std::string* why) const {
  for (int k : blocks()) {
    const auto& bl = bunch_->block(k);
    std::ostringstream os;
    os << "block (" << bl.n << "," << bl.v << "," << bl.f << ")";
    if (rows(k) != cols(k)) {
      if (why) *why = os.str() + " is not square";
      return false;
    }
    if (!is_invertible(matrix(k))) {
      if (why) *why = os.str() + " is singular";
      return false;
    }
  }
  return true;
}

BunchRep direct_sum(const BunchRep& a, const BunchRep& b) {
  BunchRep out(a.bunch_ptr());
  for (Stripe c : a.classes()) out.set_dim(c, a.dim(c));
  for (Stripe c : b.classes()) out.set_dim(c, out.dim(c) + b.dim(c));
  for (int k : out.blocks()) {
    MatF m = zeros(out.rows(k), out.cols(k));
    MatF ma = a.matrix(k), mb = b.matrix(k);
    for (Stripe rs : out.row_stripes(k))
      for (Stripe cs : out.col_stripes(k)) {
        int r0 = out.row_offset(k, rs), c0 = out.col_offset(k, cs);
        int ra = a.dim(rs), ca = a.dim(cs), rb = b.dim(rs), cb = b.dim(cs);
        if (ra > 0 && ca > 0)
          m.block(r0, c0, ra, ca) = ma.block(a.row_offset(k, rs), a.col_offset(k, cs), ra, ca);
        if (rb > 0 && cb > 0)
          m.block(r0 + ra, c0 + ca, rb, cb) = mb.block(b.row_offset(k, rs), b.col_offset(k, cs), rb, cb);
      }
    out.set_matrix(k, m);
  }
  return out;
}

bool reps_equal(const BunchRep& a, const BunchRep& b) {
  if (a.classes() != b.classes()) return false;
  for (Stripe c : a.classes())
    if (a.dim(c) != b.dim(c)) return false;
  for (int k : a.blocks())
    if (a.matrix(k) != b.matrix(k)) return false;
  return true;
}

// ---------------------------------------------------------------- transforms

namespace {

MatF random_matrix(std::mt19937& rng, Index r, Index c) {
  std::uniform_int_distribution<uint32_t> d(0, Fp::characteristic() - 1);
  MatF m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = Fp(d(rng));
  return m;
}

MatF random_invertible(std::mt19937& rng, Index n) {
  for (;;) {
    MatF m = random_matrix(rng, n, n);
    if (is_invertible(m)) return m;
  }
}

}  // namespace

BunchRep apply(const AdmissibleTransform& t, const BunchRep& r) {
  BunchRep out = r;
  const Bunch& b = r.bunch();
  for (int k : r.blocks()) {
    int R = r.rows(k), C = r.cols(k);
    MatF S = identity<Fp>(R), Cm = identity<Fp>(C);
    auto rs = r.row_stripes(k), cs = r.col_stripes(k);
    for (Stripe s : rs) {
      auto it = t.diag.find(r.class_of(s));
      if (it != t.diag.end()) S.block(r.row_offset(k, s), r.row_offset(k, s), r.dim(s), r.dim(s)) = it->second;
    }
    for (Stripe s : cs) {
      auto it = t.diag.find(r.class_of(s));
      if (it != t.diag.end()) Cm.block(r.col_offset(k, s), r.col_offset(k, s), r.dim(s), r.dim(s)) = it->second;
    }
    for (Stripe x : rs)
      for (Stripe y : rs) {
        if (!b.less(x.elem, y.elem)) continue;
        auto it = t.add.find({x, y});
        if (it != t.add.end()) S.block(r.row_offset(k, y), r.row_offset(k, x), r.dim(y), r.dim(x)) = it->second;
      }
    for (Stripe x : cs)
      for (Stripe y : cs) {
        if (!b.less(x.elem, y.elem)) continue;
        auto it = t.add.find({x, y});
        if (it != t.add.end()) Cm.block(r.col_offset(k, x), r.col_offset(k, y), r.dim(x), r.dim(y)) = it->second;
      }
    out.set_matrix(k, S * r.matrix(k) * Cm);
  }
  return out;
}

AdmissibleTransform random_transform(const BunchRep& r, uint32_t seed) {
  std::mt19937 rng(seed);
  AdmissibleTransform t;
  for (Stripe c : r.classes()) t.diag[c] = random_invertible(rng, r.dim(c));
  const Bunch& b = r.bunch();
  for (int k : r.blocks()) {
    for (Stripe x : r.row_stripes(k))
      for (Stripe y : r.row_stripes(k))
        if (b.less(x.elem, y.elem)) t.add[{x, y}] = random_matrix(rng, r.dim(y), r.dim(x));
    for (Stripe x : r.col_stripes(k))
      for (Stripe y : r.col_stripes(k))
        if (b.less(x.elem, y.elem)) t.add[{x, y}] = random_matrix(rng, r.dim(x), r.dim(y));
  }
  return t;
}

// ---------------------------------------------------------------- Hom

namespace {

struct VarBlock {
  int offset, rows, cols;
};

// Unknowns of Hom(a, b): class blocks shared across the bunch, plus per-block
// additions between distinct stripes of a chain.
struct HomSystem {
  const BunchRep* a;
  const BunchRep* b;
  std::map<Stripe, VarBlock> cls;
  std::map<std::tuple<int, Stripe, Stripe>, VarBlock> rowadd;  // (block, x from a, y in b)
  std::map<std::tuple<int, Stripe, Stripe>, VarBlock> coladd;  // (block, x in b, y from a)
  int nvars = 0;
  std::vector<int> blocks;

  HomSystem(const BunchRep& ra, const BunchRep& rb) : a(&ra), b(&rb) {
    auto add = [&](int r, int c) {
      VarBlock v{nvars, r, c};
      nvars += r * c;
      return v;
    };
    for (Stripe c : ra.classes())
      if (rb.dim(c) > 0) cls[c] = add(rb.dim(c), ra.dim(c));
    const Bunch& bu = ra.bunch();
    for (int k = 0; k < bu.num_blocks(); ++k) {
      bool occ = ra.rows(k) + ra.cols(k) + rb.rows(k) + rb.cols(k) > 0;
      if (!occ) continue;
      blocks.push_back(k);
      for (Stripe x : ra.row_stripes(k))
        for (Stripe y : rb.row_stripes(k))
          if (bu.less(x.elem, y.elem)) rowadd[{k, x, y}] = add(rb.dim(y), ra.dim(x));
      for (Stripe x : rb.col_stripes(k))
        for (Stripe y : ra.col_stripes(k))
          if (bu.less(x.elem, y.elem)) coladd[{k, x, y}] = add(rb.dim(x), ra.dim(y));
    }
  }

  // Variable index of S_k[i2][i1] (rows) or T_k[i2][i1] (columns), -1 if structurally zero.
  struct Layout {
    std::vector<Stripe> s1, s2;
    std::vector<int> o1, o2;  // position within the stripe
  };
  static Layout layout(const BunchRep& r1, const BunchRep& r2, const std::vector<Stripe>& st1,
                       const std::vector<Stripe>& st2) {
    Layout l;
    for (Stripe s : st1)
      for (int i = 0; i < r1.dim(s); ++i) {
        l.s1.push_back(s);
        l.o1.push_back(i);
      }
    for (Stripe s : st2)
      for (int i = 0; i < r2.dim(s); ++i) {
        l.s2.push_back(s);
        l.o2.push_back(i);
      }
    return l;
  }

  int var_S(int k, const Layout& l, int i2, int i1) const {
    Stripe x = l.s1[i1], y = l.s2[i2];
    if (x == y) {
      auto it = cls.find(a->class_of(x));
      if (it == cls.end()) return -1;
      return it->second.offset + l.o2[i2] * it->second.cols + l.o1[i1];
    }
    auto it = rowadd.find({k, x, y});
    if (it == rowadd.end()) return -1;
    return it->second.offset + l.o2[i2] * it->second.cols + l.o1[i1];
  }

  int var_T(int k, const Layout& l, int i2, int i1) const {
    Stripe y = l.s1[i1], x = l.s2[i2];
    if (x == y) {
      auto it = cls.find(a->class_of(x));
      if (it == cls.end()) return -1;
      return it->second.offset + l.o2[i2] * it->second.cols + l.o1[i1];
    }
    auto it = coladd.find({k, x, y});
    if (it == coladd.end()) return -1;
    return it->second.offset + l.o2[i2] * it->second.cols + l.o1[i1];
  }

  MatF equations() const {
    std::vector<VecF> rows;
    for (int k : blocks) {
      Layout lr = layout(*a, *b, a->row_stripes(k), b->row_stripes(k));
      Layout lc = layout(*a, *b, a->col_stripes(k), b->col_stripes(k));
      MatF m1 = a->matrix(k), m2 = b->matrix(k);
      int R2 = static_cast<int>(lr.s2.size()), R1 = static_cast<int>(lr.s1.size());
      int C2 = static_cast<int>(lc.s2.size()), C1 = static_cast<int>(lc.s1.size());
      for (int i = 0; i < R2; ++i)
        for (int j = 0; j < C1; ++j) {
          VecF e = VecF::Zero(nvars);
          bool any = false;
          for (int q = 0; q < R1; ++q) {
            if (m1(q, j).is_zero()) continue;
            int v = var_S(k, lr, i, q);
            if (v < 0) continue;
            e(v) += m1(q, j);
            any = true;
          }
          for (int q = 0; q < C2; ++q) {
            if (m2(i, q).is_zero()) continue;
            int v = var_T(k, lc, q, j);
            if (v < 0) continue;
            e(v) -= m2(i, q);
            any = true;
          }
          if (any) rows.push_back(std::move(e));
        }
    }
    MatF out(static_cast<Index>(rows.size()), nvars);
    for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = rows[i].transpose();
    return out;
  }

  RepMorphism morphism(const VecF& x) const {
    RepMorphism out;
    for (int k : blocks) {
      Layout lr = layout(*a, *b, a->row_stripes(k), b->row_stripes(k));
      Layout lc = layout(*a, *b, a->col_stripes(k), b->col_stripes(k));
      MatF S = zeros(static_cast<Index>(lr.s2.size()), static_cast<Index>(lr.s1.size()));
      MatF T = zeros(static_cast<Index>(lc.s2.size()), static_cast<Index>(lc.s1.size()));
      for (Index i = 0; i < S.rows(); ++i)
        for (Index j = 0; j < S.cols(); ++j) {
          int v = var_S(k, lr, static_cast<int>(i), static_cast<int>(j));
          if (v >= 0) S(i, j) = x(v);
        }
      for (Index i = 0; i < T.rows(); ++i)
        for (Index j = 0; j < T.cols(); ++j) {
          int v = var_T(k, lc, static_cast<int>(i), static_cast<int>(j));
          if (v >= 0) T(i, j) = x(v);
        }
      out.S[k] = S;
      out.T[k] = T;
    }
    return out;
  }

  MatF solutions() const {
    if (nvars == 0) return zeros(0, 0);
    MatF eq = equations();
    if (eq.rows() == 0) return identity<Fp>(nvars);
    return kernel(eq);
  }
};

// Block diagonal image of an endomorphism, faithful on End.
MatF flatten(const RepMorphism& m) {
  Index n = 0;
  for (auto& [k, s] : m.S) n += s.rows();
  for (auto& [k, t] : m.T) n += t.rows();
  MatF out = zeros(n, n);
  Index o = 0;
  for (auto& [k, s] : m.S) {
    out.block(o, o, s.rows(), s.cols()) = s;
    o += s.rows();
  }
  for (auto& [k, t] : m.T) {
    out.block(o, o, t.rows(), t.cols()) = t;
    o += t.rows();
  }
  return out;
}

struct EndData {
  HomSystem sys;
  MatF sol;  // columns: basis of End in variable coordinates
  FinDimAlgebra<Fp> alg;

  explicit EndData(const BunchRep& r) : sys(r, r), sol(sys.solutions()) {
    std::vector<MatF> mats;
    for (Index i = 0; i < sol.cols(); ++i) mats.push_back(flatten(sys.morphism(sol.col(i))));
    alg = algebra_from_matrix_basis(mats);
  }
  RepMorphism morphism(const VecF& coords) const { return sys.morphism(sol * coords); }
};

}  // namespace

std::vector<RepMorphism> hom_basis(const BunchRep& a, const BunchRep& b) {
  HomSystem sys(a, b);
  MatF sol = sys.solutions();
  std::vector<RepMorphism> out;
  for (Index i = 0; i < sol.cols(); ++i) out.push_back(sys.morphism(sol.col(i)));
  return out;
}

FinDimAlgebra<Fp> endomorphisms(const BunchRep& r) { return EndData(r).alg; }

bool is_indecomposable(const BunchRep& r) {
  if (r.is_zero()) return false;
  return locality(endomorphisms(r)).local;
}

namespace {

// Every class block of the morphism is invertible.
bool classes_invertible(const HomSystem& sys, const VecF& x) {
  for (auto& [c, v] : sys.cls) {
    if (v.rows != v.cols) return false;
    MatF m(v.rows, v.cols);
    for (int i = 0; i < v.rows; ++i)
      for (int j = 0; j < v.cols; ++j) m(i, j) = x(v.offset + i * v.cols + j);
    if (!is_invertible(m)) return false;
  }
  return true;
}

}  // namespace

RepIso are_isomorphic(const BunchRep& a, const BunchRep& b, uint32_t seed) {
  RepIso out;
  if (a.classes() != b.classes()) return out;
  for (Stripe c : a.classes())
    if (a.dim(c) != b.dim(c)) return out;
  HomSystem sys(a, b);
  MatF sol = sys.solutions();
  if (a.is_zero()) {
    out.isomorphic = true;
    return out;
  }
  Index d = sol.cols();
  if (d == 0) return out;
  std::mt19937 rng(seed);
  auto check = [&](const VecF& coords) {
    VecF x = sol * coords;
    if (!classes_invertible(sys, x)) return false;
    out.isomorphic = true;
    out.witness = sys.morphism(x);
    return true;
  };
  for (int t = 0; t < 64; ++t)
    if (check(random_matrix(rng, d, 1).col(0))) return out;
  // Small Hom spaces: enumerate.
  double total = std::pow(static_cast<double>(Fp::characteristic()), static_cast<double>(d));
  if (total <= static_cast<double>(1 << 20)) {
    VecF c = VecF::Zero(d);
    for (;;) {
      if (check(c)) return out;
      Index i = 0;
      while (i < d) {
        c(i) += Fp(1);
        if (!c(i).is_zero()) break;
        ++i;
      }
      if (i == d) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- decompose

namespace {

// Diagonal (class) part of an endomorphism, per block.
RepMorphism diagonal_part(const BunchRep& r, const RepMorphism& e) {
  RepMorphism out = e;
  for (auto& [k, S] : out.S) {
    MatF d = zeros(S.rows(), S.cols());
    for (Stripe s : r.row_stripes(k)) {
      int o = r.row_offset(k, s), n = r.dim(s);
      d.block(o, o, n, n) = S.block(o, o, n, n);
    }
    S = d;
  }
  for (auto& [k, T] : out.T) {
    MatF d = zeros(T.rows(), T.cols());
    for (Stripe s : r.col_stripes(k)) {
      int o = r.col_offset(k, s), n = r.dim(s);
      d.block(o, o, n, n) = T.block(o, o, n, n);
    }
    T = d;
  }
  return out;
}

MatF class_block(const BunchRep& r, const RepMorphism& m, Stripe c) {
  for (int k : r.blocks()) {
    for (Stripe s : r.row_stripes(k))
      if (r.class_of(s) == c) {
        int o = r.row_offset(k, s), n = r.dim(s);
        return m.S.at(k).block(o, o, n, n);
      }
    for (Stripe s : r.col_stripes(k))
      if (r.class_of(s) == c) {
        int o = r.col_offset(k, s), n = r.dim(s);
        return m.T.at(k).block(o, o, n, n);
      }
  }
  throw std::logic_error("class without stripes");
}

std::optional<VecF> nontrivial_idempotent(const EndData& end, std::mt19937& rng) {
  const auto& alg = end.alg;
  Index n = alg.dim();
  uint32_t p = Fp::characteristic();
  auto nontrivial = [&](const VecF& e) { return !is_zero(e) && e != alg.unit(); };
  for (int attempt = 0; attempt < 200; ++attempt) {
    VecF x = attempt < n ? alg.basis(attempt) : VecF(random_matrix(rng, n, 1).col(0));
    std::vector<VecF> cand;
    auto mp = minimal_polynomial(alg, x);
    for (uint32_t c = 0; c < p; ++c) {
      Fp acc(0);
      for (size_t i = mp.size(); i-- > 0;) acc = acc * Fp(c) + mp[i];
      if (acc.is_zero()) cand.push_back(x - Fp(c) * alg.unit());
    }
    unsigned long long q = 1;
    for (int d = 1; d <= 3; ++d) {
      q *= p;
      Fp c(std::uniform_int_distribution<uint32_t>(0, p - 1)(rng));
      cand.push_back(alg.pow(x + c * alg.unit(), (q - 1) / 2) - alg.unit());
    }
    for (const VecF& y : cand) {
      VecF e = idempotent_from_element(alg, y);
      if (nontrivial(e)) return e;
    }
  }
  return std::nullopt;
}

std::pair<BunchRep, BunchRep> split(const BunchRep& r, const RepMorphism& e) {
  RepMorphism eb = diagonal_part(r, e);
  // u = e eb + (1-e)(1-eb) is unipotent and conjugates e to eb.
  BunchRep rp = r;
  for (int k : r.blocks()) {
    auto u_of = [](const MatF& x, const MatF& y) {
      MatF I = identity<Fp>(x.rows());
      return MatF(x * y + (I - x) * (I - y));
    };
    MatF uS = u_of(e.S.at(k), eb.S.at(k));
    MatF uT = u_of(e.T.at(k), eb.T.at(k));
    rp.set_matrix(k, *inverse(uS) * r.matrix(k) * uT);
  }
  // Per class basis [image | kernel] of the diagonal idempotent.
  std::map<Stripe, MatF> Q;
  std::map<Stripe, int> rk;
  for (Stripe c : r.classes()) {
    MatF ec = class_block(r, eb, c);
    MatF im = column_space(ec), ker = kernel(ec);
    MatF q(ec.rows(), ec.cols());
    q.leftCols(im.cols()) = im;
    q.rightCols(ker.cols()) = ker;
    Q[c] = q;
    rk[c] = static_cast<int>(im.cols());
  }
  BunchRep r1(r.bunch_ptr()), r2(r.bunch_ptr());
  for (Stripe c : r.classes()) {
    r1.set_dim(c, rk[c]);
    r2.set_dim(c, r.dim(c) - rk[c]);
  }
  for (int k : r.blocks()) {
    auto rs = r.row_stripes(k), cs = r.col_stripes(k);
    MatF qr = zeros(r.rows(k), r.rows(k)), qc = zeros(r.cols(k), r.cols(k));
    for (Stripe s : rs) {
      int o = r.row_offset(k, s);
      qr.block(o, o, r.dim(s), r.dim(s)) = Q[r.class_of(s)];
    }
    for (Stripe s : cs) {
      int o = r.col_offset(k, s);
      qc.block(o, o, r.dim(s), r.dim(s)) = Q[r.class_of(s)];
    }
    MatF m = *inverse(qr) * rp.matrix(k) * qc;
    MatF m1 = zeros(r1.rows(k), r1.cols(k)), m2 = zeros(r2.rows(k), r2.cols(k));
    for (Stripe s : rs)
      for (Stripe t : cs) {
        int ro = r.row_offset(k, s), co = r.col_offset(k, t);
        int a = rk[r.class_of(s)], bcol = rk[r.class_of(t)];
        int na = r.dim(s) - a, nb = r.dim(t) - bcol;
        if (!is_zero(MatF(m.block(ro, co + bcol, a, nb))) || !is_zero(MatF(m.block(ro + a, co, na, bcol))))
          throw std::logic_error("decompose: idempotent did not split the matrix");
        if (a > 0 && bcol > 0) m1.block(r1.row_offset(k, s), r1.col_offset(k, t), a, bcol) = m.block(ro, co, a, bcol);
        if (na > 0 && nb > 0)
          m2.block(r2.row_offset(k, s), r2.col_offset(k, t), na, nb) = m.block(ro + a, co + bcol, na, nb);
      }
    if (r1.rows(k) + r1.cols(k) > 0) r1.set_matrix(k, m1);
    if (r2.rows(k) + r2.cols(k) > 0) r2.set_matrix(k, m2);
  }
  return {r1, r2};
}

void decompose_into(const BunchRep& r, std::mt19937& rng, std::vector<BunchRep>& out) {
  if (r.is_zero()) return;
  EndData end(r);
  if (locality(end.alg).local) {
    out.push_back(r);
    return;
  }
  auto e = nontrivial_idempotent(end, rng);
  if (!e) throw std::runtime_error("decompose: no idempotent found in a non-local endomorphism ring");
  auto [a, b] = split(r, end.morphism(*e));
  decompose_into(a, rng, out);
  decompose_into(b, rng, out);
}

}  // namespace

std::vector<BunchRep> decompose(const BunchRep& r, uint32_t seed) {
  if (r.total_dim() > 64) throw DeskScaleLimit("representation dimension exceeds 64");
  std::mt19937 rng(seed);
  std::vector<BunchRep> out;
  decompose_into(r, rng, out);
  return out;
}

// ---------------------------------------------------------------- canonical matrices

MatF jordan_block(int d, Fp lambda) {
  MatF m = lambda * identity<Fp>(d);
  for (int i = 0; i + 1 < d; ++i) m(i, i + 1) = Fp(1);
  return m;
}

MatF companion(const Poly& f) {
  int d = static_cast<int>(f.size()) - 1;
  Fp lead_inv = f.back().inv();
  MatF m = zeros(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = Fp(1);
  for (int i = 0; i < d; ++i) m(i, d - 1) = -f[static_cast<size_t>(i)] * lead_inv;
  return m;
}

MatF unipotent_J(int m) { return jordan_block(m, Fp(1)); }

namespace {
std::vector<int> regroup_order(int m, int delta) {
  std::vector<int> ord;
  int first = delta > 0 ? 0 : 1;  // 0-based index of position 1 is 0 (odd)
  for (int i = first; i < m; i += 2) ord.push_back(i);
  for (int i = 1 - first; i < m; i += 2) ord.push_back(i);
  return ord;
}
}  // namespace

MatF regrouped_columns(const MatF& m, int delta) {
  auto ord = regroup_order(static_cast<int>(m.cols()), delta);
  MatF out(m.rows(), m.cols());
  for (size_t j = 0; j < ord.size(); ++j) out.col(static_cast<Index>(j)) = m.col(ord[j]);
  return out;
}

MatF regrouped_rows(const MatF& m, int delta) {
  auto ord = regroup_order(static_cast<int>(m.rows()), delta);
  MatF out(m.rows(), m.cols());
  for (size_t i = 0; i < ord.size(); ++i) out.row(static_cast<Index>(i)) = m.row(ord[i]);
  return out;
}

int first_group_size(int m, int delta) { return delta > 0 ? (m + 1) / 2 : m / 2; }

// ---------------------------------------------------------------- datum -> rep

std::optional<bool> orient_pair(const Bunch& b, const Word& w, int p) {
  int m = w.length();
  for (int j = 0;; ++j) {
    int l = p - 1 - j, r = p + 2 + j;
    if (w.cyclic) {
      if (2 * j + 2 > m) return true;  // symmetric about this axis
      l = ((l % m) + m) % m;
      r %= m;
    } else if (l < 0 || r >= m) {
      return std::nullopt;
    }
    const Element& x = w.x[static_cast<size_t>(l)];
    const Element& y = w.x[static_cast<size_t>(r)];
    if (x == y) continue;
    auto ix = b.find(x), iy = b.find(y);
    if (!ix || !iy) return std::nullopt;
    if (b.less(*ix, *iy)) return true;
    if (b.less(*iy, *ix)) return false;
    return std::nullopt;
  }
}

namespace {

struct Letter {
  int id;
  enum Kind { EPlain, FPlain, FPair, FSpecial } kind;
  int off = 0;          // rows (E) or columns (FPlain) offset inside the stripe
  int off1 = 0, off2 = 0;  // FPair / FSpecial: offsets in the ' and '' stripes
  int pair_first = -1;  // FPair: word position of the first letter of the pair
  int delta = 1;        // FSpecial
  bool last = false;    // FSpecial: right end
};

struct Layout {
  std::vector<Letter> letters;
  std::map<Stripe, int> count;
  std::vector<int> pairs;  // first positions of self-related pairs
};

Layout layout_word(const BunchRep& proto, const Word& w, int s, const StringDatum* sd) {
  const Bunch& b = proto.bunch();
  int m = w.length();
  Layout L;
  L.letters.resize(static_cast<size_t>(m));
  auto rel = [&](int i) {  // relation between i and i+1
    if (i + 1 < m) return w.r[static_cast<size_t>(i)];
    return Rel::Dash;
  };
  std::vector<bool> done(static_cast<size_t>(m), false);
  for (int i = 0; i < m; ++i) {
    if (done[static_cast<size_t>(i)]) continue;
    int id = b.id(w.x[static_cast<size_t>(i)]);
    const Element& e = b.element(id);
    bool paired = i + 1 < m && rel(i) == Rel::Tilde;
    int id2 = paired ? b.id(w.x[static_cast<size_t>(i + 1)]) : -1;
    if (b.self_related(id)) {
      Letter lt{id, Letter::FSpecial};
      if (paired && id2 == id) {
        lt.kind = Letter::FPair;
        lt.pair_first = i;
        lt.off1 = L.count[{id, 1}];
        lt.off2 = L.count[{id, 2}];
        L.count[{id, 1}] += s;
        L.count[{id, 2}] += s;
        L.letters[static_cast<size_t>(i)] = lt;
        L.letters[static_cast<size_t>(i + 1)] = lt;
        done[static_cast<size_t>(i + 1)] = true;
        L.pairs.push_back(i);
        continue;
      }
      if (!sd || (i != 0 && i != m - 1) || m < 2)
        throw std::invalid_argument("self-related letter outside a pair or special end");
      lt.last = (i == m - 1) && !(i == 0);
      if (sd->kind == StringDatum::Kind::Bispecial)
        lt.delta = lt.last ? sd->d2 : sd->d1;
      else
        lt.delta = sd->delta;
      int a = first_group_size(s, lt.delta);
      lt.off1 = L.count[{id, 1}];
      lt.off2 = L.count[{id, 2}];
      L.count[{id, 1}] += a;
      L.count[{id, 2}] += s - a;
      L.letters[static_cast<size_t>(i)] = lt;
      continue;
    }
    Stripe c = proto.class_of({id, 0});
    int off = L.count[c];
    L.count[c] += s;
    Letter lt{id, e.is_E() ? Letter::EPlain : Letter::FPlain};
    lt.off = off;
    L.letters[static_cast<size_t>(i)] = lt;
    if (paired) {
      if (b.partner(id) != id2) throw std::invalid_argument("~ joins non-partners");
      if (e.is_E() != b.element(id2).is_E()) throw std::invalid_argument("~ between E and F is not supported");
      Letter l2{id2, lt.kind};
      l2.off = off;
      L.letters[static_cast<size_t>(i + 1)] = l2;
      done[static_cast<size_t>(i + 1)] = true;
    }
  }
  return L;
}

BunchRep build_rep(std::shared_ptr<const Bunch> bp, const Word& w, int s, const MatF& twist,
                   const StringDatum* sd, const std::map<int, bool>& orient) {
  const Bunch& b = *bp;
  BunchRep r(bp);
  Layout L = layout_word(r, w, s, sd);
  for (auto& [st, n] : L.count) r.set_dim(st, n);
  std::map<int, MatF> mats;
  for (int k : r.blocks()) mats[k] = zeros(r.rows(k), r.cols(k));
  int m = w.length();
  std::vector<std::pair<int, int>> links;
  for (int i = 0; i + 1 < m; ++i)
    if (w.r[static_cast<size_t>(i)] == Rel::Dash) links.push_back({i, i + 1});
  if (w.cyclic) links.push_back({m - 1, 0});
  for (auto [i, j] : links) {
    bool closing = w.cyclic && i == m - 1;
    int ei = i, fi = j;
    if (!b.element(L.letters[static_cast<size_t>(ei)].id).is_E()) std::swap(ei, fi);
    const Letter& E = L.letters[static_cast<size_t>(ei)];
    const Letter& F = L.letters[static_cast<size_t>(fi)];
    if (!b.element(E.id).is_E() || b.element(F.id).is_E()) throw std::invalid_argument("- must join E and F");
    int k = b.block_of(E.id);
    if (b.block_of(F.id) != k) throw std::invalid_argument("- joins different blocks");
    MatF K = closing ? twist : identity<Fp>(s);
    MatF& M = mats.at(k);
    int r0 = r.row_offset(k, {E.id, 0}) + E.off;
    switch (F.kind) {
      case Letter::FPlain:
        M.block(r0, r.col_offset(k, {F.id, 0}) + F.off, s, s) += K;
        break;
      case Letter::FPair: {
        bool u_left = orient.at(F.pair_first);
        int first = F.pair_first;
        int left = w.cyclic ? (first - 1 + m) % m : first - 1;
        bool e_is_left = ei == left;
        bool e_is_u = e_is_left == u_left;
        M.block(r0, r.col_offset(k, {F.id, 2}) + F.off2, s, s) += K;
        if (e_is_u) M.block(r0, r.col_offset(k, {F.id, 1}) + F.off1, s, s) += K;
        break;
      }
      case Letter::FSpecial: {
        MatF base = F.last ? *inverse(unipotent_J(s)) : identity<Fp>(s);
        MatF th = K * regrouped_columns(base, F.delta);
        int a = first_group_size(s, F.delta);
        if (a > 0) M.block(r0, r.col_offset(k, {F.id, 1}) + F.off1, s, a) += th.leftCols(a);
        if (s - a > 0) M.block(r0, r.col_offset(k, {F.id, 2}) + F.off2, s, s - a) += th.rightCols(s - a);
        break;
      }
      default:
        break;
    }
  }
  for (auto& [k, M] : mats) r.set_matrix(k, M);
  return r;
}

}  // namespace

namespace {

struct Prepared {
  const Word* w;
  int s;
  MatF twist;
  const StringDatum* sd = nullptr;
};

Prepared prepare(const Bunch& b, const Datum& d) {
  auto problems = validate_datum(b, d);
  if (!problems.empty()) {
    std::string msg = "invalid datum:";
    for (auto& p : problems) msg += " " + p + ";";
    throw std::invalid_argument(msg);
  }
  Prepared P;
  if (const auto* band = std::get_if<BandDatum>(&d)) {
    P.w = &band->w;
    P.s = band->dim();
    P.twist = band->split_form ? jordan_block(band->d, band->lambda) : companion(band->f);
  } else {
    P.sd = &std::get<StringDatum>(d);
    P.w = &P.sd->w;
    P.s = P.sd->kind == StringDatum::Kind::Bispecial ? P.sd->m : 1;
    P.twist = identity<Fp>(P.s);
  }
  return P;
}

// Orientations plus the representation they produce.
std::pair<std::map<int, bool>, BunchRep> oriented_rep(std::shared_ptr<const Bunch> bp, const Datum& d) {
  Prepared P = prepare(*bp, d);
  BunchRep proto(bp);
  Layout L = layout_word(proto, *P.w, P.s, P.sd);
  std::map<int, bool> orient;
  std::vector<int> open;
  for (int p : L.pairs) {
    auto o = orient_pair(*bp, *P.w, p);
    orient[p] = o.value_or(true);
    if (!o) open.push_back(p);
  }
  if (open.empty() || open.size() > 6) return {orient, build_rep(bp, *P.w, P.s, P.twist, P.sd, orient)};
  // Undecided orientations: keep the first indecomposable choice.
  std::optional<std::pair<std::map<int, bool>, BunchRep>> first;
  for (unsigned mask = 0; mask < (1u << open.size()); ++mask) {
    for (size_t i = 0; i < open.size(); ++i) orient[open[i]] = ((mask >> i) & 1u) == 0;
    BunchRep r = build_rep(bp, *P.w, P.s, P.twist, P.sd, orient);
    if (!first) first.emplace(orient, r);
    if (is_indecomposable(r)) return {orient, r};
  }
  return *first;
}

}  // namespace

BunchRep rep_from_datum(std::shared_ptr<const Bunch> bp, const Datum& d) { return oriented_rep(bp, d).second; }

std::map<int, bool> pair_orientations(std::shared_ptr<const Bunch> bp, const Datum& d) {
  return oriented_rep(bp, d).first;
}

// ---------------------------------------------------------------- text

std::string format_rep(const BunchRep& r) {
  std::ostringstream os;
  const Bunch& b = r.bunch();
  os << "bunchrep " << b.config().name << "\n";
  for (Stripe c : r.classes()) os << "dim " << stripe_str(b, c) << " " << r.dim(c) << "\n";
  for (int k : r.blocks()) {
    const auto& bl = b.block(k);
    os << "block " << bl.n << " " << bl.v << " " << bl.f << " " << r.rows(k) << " " << r.cols(k) << "\n";
    MatF m = r.matrix(k);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).centered();
      os << "\n";
    }
  }
  os << "end\n";
  return os.str();
}

BunchRep parse_rep(const std::string& text, std::shared_ptr<const Bunch> bp) {
  std::istringstream is(text);
  std::string tok;
  if (!(is >> tok) || tok != "bunchrep") throw std::invalid_argument("expected 'bunchrep'");
  std::string name;
  is >> name;
  if (name != bp->config().name) throw std::invalid_argument("bunch mismatch: " + name);
  BunchRep r(bp);
  while (is >> tok) {
    if (tok == "end") return r;
    if (tok == "dim") {
      std::string st;
      int n;
      if (!(is >> st >> n)) throw std::invalid_argument("bad dim line");
      r.set_dim(parse_stripe(*bp, st), n);
    } else if (tok == "block") {
      int n, v, f, rows, cols;
      if (!(is >> n >> v >> f >> rows >> cols)) throw std::invalid_argument("bad block line");
      auto k = bp->find_block(n, v, f);
      if (!k) throw std::invalid_argument("unknown block");
      if (rows != r.rows(*k) || cols != r.cols(*k)) throw std::invalid_argument("block shape mismatch");
      MatF m(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
          long long x;
          if (!(is >> x)) throw std::invalid_argument("bad matrix entry");
          m(i, j) = Fp(x);
        }
      r.set_matrix(*k, m);
    } else {
      throw std::invalid_argument("unexpected token: " + tok);
    }
  }
  throw std::invalid_argument("missing 'end'");
}

}  // namespace nodal
