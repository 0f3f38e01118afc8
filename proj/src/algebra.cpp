#include "nodal/algebra.hpp"

#include <set>
#include <stdexcept>

namespace nodal {

namespace {

template <class S>
using Poly = std::vector<S>;

template <class S>
void trim(Poly<S>& p) {
  while (!p.empty() && FieldTraits<S>::is_zero(p.back())) p.pop_back();
}

template <class S>
Poly<S> pmul(const Poly<S>& a, const Poly<S>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<S> r(a.size() + b.size() - 1, S(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

template <class S>
Poly<S> psub(Poly<S> a, const Poly<S>& b) {
  if (a.size() < b.size()) a.resize(b.size(), S(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// a = q*b + r
template <class S>
void pdivmod(Poly<S> a, const Poly<S>& b, Poly<S>& q, Poly<S>& r) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  trim(a);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, S(0));
  S lead_inv = FieldTraits<S>::inv(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    size_t shift = a.size() - b.size();
    S c = a.back() * lead_inv;
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  r = a;
}

// u*a + v*b = gcd, gcd monic
template <class S>
Poly<S> ext_gcd(Poly<S> a, Poly<S> b, Poly<S>& u, Poly<S>& v) {
  Poly<S> u0{S(1)}, v0{}, u1{}, v1{S(1)};
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly<S> q, r;
    pdivmod(a, b, q, r);
    a = b;
    b = r;
    Poly<S> u2 = psub(u0, pmul(q, u1));
    Poly<S> v2 = psub(v0, pmul(q, v1));
    u0 = u1;
    v0 = v1;
    u1 = u2;
    v1 = v2;
  }
  S li = FieldTraits<S>::inv(a.back());
  for (auto& c : a) c *= li;
  for (auto& c : u0) c *= li;
  for (auto& c : v0) c *= li;
  u = u0;
  v = v0;
  return a;
}

template <class S>
Vec<S> eval_poly(const FinDimAlgebra<S>& alg, const Poly<S>& p, const Vec<S>& x) {
  Vec<S> r = Vec<S>::Zero(alg.dim());
  for (size_t i = p.size(); i-- > 0;) r = alg.mul(r, x) + p[i] * alg.unit();
  return r;
}

}  // namespace

template <class S>
FinDimAlgebra<S>::FinDimAlgebra(std::vector<std::string> labels, std::vector<Mat<S>> mult,
                                Vec<S> unit, bool validate)
    : labels_(std::move(labels)), mult_(std::move(mult)), unit_(std::move(unit)) {
  const Index n = dim();
  if (static_cast<Index>(labels_.size()) != n || unit_.size() != n)
    throw std::invalid_argument("algebra: inconsistent dimensions");
  for (const auto& m : mult_)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("algebra: structure constants have wrong shape");
  if (validate) {
    if (!associative()) throw std::invalid_argument("algebra: multiplication is not associative");
    if (!unital()) throw std::invalid_argument("algebra: unit is not a two-sided identity");
  }
}

template <class S>
Vec<S> FinDimAlgebra<S>::basis(Index i) const {
  Vec<S> v = Vec<S>::Zero(dim());
  v(i) = S(1);
  return v;
}

template <class S>
Mat<S> FinDimAlgebra<S>::left_matrix(const Vec<S>& a) const {
  Mat<S> l = Mat<S>::Zero(dim(), dim());
  for (Index i = 0; i < dim(); ++i)
    if (!FieldTraits<S>::is_zero(a(i))) l += a(i) * mult_[static_cast<size_t>(i)];
  return l;
}

template <class S>
Vec<S> FinDimAlgebra<S>::mul(const Vec<S>& a, const Vec<S>& b) const {
  return left_matrix(a) * b;
}

template <class S>
Vec<S> FinDimAlgebra<S>::pow(const Vec<S>& a, unsigned long long k) const {
  Vec<S> r = unit_, b = a;
  while (k) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

template <class S>
bool FinDimAlgebra<S>::is_nilpotent(const Vec<S>& a) const {
  return is_zero<S>(pow(a, static_cast<unsigned long long>(dim()) + 1));
}

template <class S>
bool FinDimAlgebra<S>::is_invertible(const Vec<S>& a) const {
  return nodal::is_invertible<S>(left_matrix(a));
}

template <class S>
bool FinDimAlgebra<S>::is_commutative() const {
  for (Index i = 0; i < dim(); ++i)
    for (Index j = i + 1; j < dim(); ++j)
      if (mult_[i].col(j) != mult_[j].col(i)) return false;
  return true;
}

template <class S>
bool FinDimAlgebra<S>::associative() const {
  // L_{e_i e_j} = L_{e_i} L_{e_j} on all basis pairs.
  for (Index i = 0; i < dim(); ++i)
    for (Index j = 0; j < dim(); ++j) {
      Vec<S> prod = mult_[i].col(j);
      if (left_matrix(prod) != Mat<S>(mult_[i] * mult_[j])) return false;
    }
  return true;
}

template <class S>
bool FinDimAlgebra<S>::unital() const {
  Mat<S> lu = left_matrix(unit_);
  if (lu != identity<S>(dim())) return false;
  for (Index i = 0; i < dim(); ++i)
    if (Vec<S>(mult_[i] * unit_) != basis(i)) return false;
  return true;
}

template <class S>
FinDimAlgebra<S> algebra_from_matrix_basis(const std::vector<Mat<S>>& basis) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  const Index n = basis[0].rows(), d = static_cast<Index>(basis.size());
  const Index sq = n * basis[0].cols();
  Mat<S> v(d, sq);
  for (Index i = 0; i < d; ++i)
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < basis[i].cols(); ++c) v(i, r * basis[i].cols() + c) = basis[i](r, c);
  Mat<S> red = v;
  auto piv = detail::gauss_jordan<S>(red, nullptr);
  if (static_cast<Index>(piv.size()) != d) throw std::invalid_argument("matrix basis is dependent");
  // Coordinates are determined by the entries at the pivot positions.
  Mat<S> vp(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) vp(i, k) = v(i, piv[k]);
  auto vpi = inverse<S>(vp);
  const Index w = basis[0].cols();
  auto coords = [&](auto&& entry) {
    Vec<S> t(d);
    for (Index k = 0; k < d; ++k) t(k) = entry(piv[k] / w, piv[k] % w);
    return Vec<S>(vpi->transpose() * t);
  };
  std::vector<Mat<S>> mult(d, Mat<S>::Zero(d, d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      Vec<S> c = coords([&](Index r, Index col) -> S {
        return basis[i].row(r).dot(basis[j].col(col));
      });
      mult[i].col(j) = c;
    }
  Vec<S> unit = coords([&](Index r, Index c) -> S { return r == c ? S(1) : S(0); });
  std::vector<std::string> labels;
  for (Index i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i));
  return FinDimAlgebra<S>(labels, mult, unit, false);
}

template <class S>
FinDimAlgebra<S> truncated_polynomial_algebra(int n) {
  std::vector<Mat<S>> mult;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    Mat<S> m = Mat<S>::Zero(n, n);
    for (int j = 0; i + j < n; ++j) m(i + j, j) = S(1);
    mult.push_back(m);
    labels.push_back("t^" + std::to_string(i));
  }
  Vec<S> u = Vec<S>::Zero(n);
  u(0) = S(1);
  return FinDimAlgebra<S>(labels, mult, u);
}

template <class S>
FinDimAlgebra<S> diagonal_algebra(int n) {
  std::vector<Mat<S>> mult;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    Mat<S> m = Mat<S>::Zero(n, n);
    m(i, i) = S(1);
    mult.push_back(m);
    labels.push_back("e" + std::to_string(i));
  }
  return FinDimAlgebra<S>(labels, mult, Vec<S>::Constant(n, S(1)));
}

template <class S>
FinDimAlgebra<S> upper_triangular_algebra(int n) {
  std::vector<Mat<S>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat<S> m = Mat<S>::Zero(n, n);
      m(i, j) = S(1);
      basis.push_back(m);
    }
  return algebra_from_matrix_basis(basis);
}

namespace {

template <class S>
Mat<S> radical_brute_force(const FinDimAlgebra<S>& a) {
  const uint64_t p = FieldTraits<S>::characteristic();
  const Index d = a.dim();
  uint64_t count = 1;
  for (Index i = 0; i < d; ++i) count *= p;
  auto element = [&](uint64_t code) {
    Vec<S> v(d);
    for (Index i = 0; i < d; ++i) {
      v(i) = S(static_cast<long long>(code % p));
      code /= p;
    }
    return v;
  };
  std::vector<Vec<S>> members;
  for (uint64_t x = 0; x < count; ++x) {
    Vec<S> ax = element(x);
    bool ok = true;
    for (uint64_t y = 0; y < count && ok; ++y) ok = a.is_nilpotent(a.mul(ax, element(y)));
    if (ok) members.push_back(ax);
  }
  Mat<S> m(d, static_cast<Index>(members.size()));
  for (size_t i = 0; i < members.size(); ++i) m.col(static_cast<Index>(i)) = members[i];
  return column_space<S>(m);
}

}  // namespace

template <class S>
Mat<S> radical(const FinDimAlgebra<S>& a) {
  const uint64_t p = FieldTraits<S>::characteristic();
  const Index d = a.dim();
  if (p != 0 && p <= static_cast<uint64_t>(d)) {
    uint64_t count = 1;
    for (Index i = 0; i < d && count <= 256; ++i) count *= p;
    if (count <= 256) return radical_brute_force(a);
    throw std::domain_error("unsupported characteristic");
  }
  Mat<S> t(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) t(i, j) = (a.left_basis(i) * a.left_basis(j)).trace();
  return kernel<S>(t);
}

template <class S>
FinDimAlgebra<S> quotient(const FinDimAlgebra<S>& a, const Mat<S>& ideal) {
  const Index d = a.dim();
  Mat<S> rows = ideal.transpose();
  auto piv = detail::gauss_jordan<S>(rows, nullptr);
  std::vector<bool> is_piv(d, false);
  for (Index c : piv) is_piv[c] = true;
  std::vector<Index> keep;
  for (Index i = 0; i < d; ++i)
    if (!is_piv[i]) keep.push_back(i);
  auto reduce = [&](Vec<S> v) {
    for (size_t r = 0; r < piv.size(); ++r) {
      S c = v(piv[r]);
      if (!FieldTraits<S>::is_zero(c)) v -= c * rows.row(static_cast<Index>(r)).transpose();
    }
    Vec<S> out(static_cast<Index>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) out(static_cast<Index>(k)) = v(keep[k]);
    return out;
  };
  const Index q = static_cast<Index>(keep.size());
  std::vector<Mat<S>> mult(q, Mat<S>::Zero(q, q));
  std::vector<std::string> labels;
  for (Index i = 0; i < q; ++i) {
    labels.push_back(a.labels()[keep[i]]);
    for (Index j = 0; j < q; ++j)
      mult[i].col(j) = reduce(a.mul(a.basis(keep[i]), a.basis(keep[j])));
  }
  return FinDimAlgebra<S>(labels, mult, reduce(a.unit()), false);
}

template <class S>
Locality locality(const FinDimAlgebra<S>& a) {
  Locality out;
  Mat<S> r = radical(a);
  out.quotient_dim = a.dim() - r.cols();
  if (out.quotient_dim == 1) {
    out.local = out.split = true;
    return out;
  }
  const uint64_t p = FieldTraits<S>::characteristic();
  if (out.quotient_dim == 0 || p == 0) return out;
  // A semisimple commutative quotient over F_p is a field iff the Frobenius
  // fixed algebra is one-dimensional.
  FinDimAlgebra<S> b = quotient(a, r);
  if (!b.is_commutative()) return out;
  Mat<S> frob(b.dim(), b.dim());
  for (Index i = 0; i < b.dim(); ++i) frob.col(i) = b.pow(b.basis(i), p);
  frob -= identity<S>(b.dim());
  out.local = kernel<S>(frob).cols() == 1;
  return out;
}

template <class S>
bool is_local(const FinDimAlgebra<S>& a) {
  return locality(a).quotient_dim == 1;
}

template <class S>
std::vector<S> minimal_polynomial(const FinDimAlgebra<S>& a, const Vec<S>& x) {
  const Index d = a.dim();
  std::vector<Vec<S>> powers{a.unit()};
  for (Index k = 1; k <= d + 1; ++k) {
    powers.push_back(a.mul(powers.back(), x));
    Mat<S> m(d, k + 1);
    for (Index j = 0; j <= k; ++j) m.col(j) = powers[static_cast<size_t>(j)];
    Mat<S> ker = kernel<S>(m);
    if (ker.cols() == 0) continue;
    Vec<S> c = ker.col(0);
    S lead = FieldTraits<S>::inv(c(k));
    std::vector<S> out(static_cast<size_t>(k + 1));
    for (Index j = 0; j <= k; ++j) out[static_cast<size_t>(j)] = c(j) * lead;
    return out;
  }
  throw std::logic_error("minimal polynomial degree exceeds dim(A)");
}

template <class S>
Vec<S> idempotent_from_element(const FinDimAlgebra<S>& a, const Vec<S>& x) {
  std::vector<S> mu = minimal_polynomial(a, x);
  size_t k = 0;
  while (k < mu.size() && FieldTraits<S>::is_zero(mu[k])) ++k;
  Poly<S> g(mu.begin() + static_cast<std::ptrdiff_t>(k), mu.end());
  if (g.size() == 1) return Vec<S>::Zero(a.dim());  // a nilpotent
  Poly<S> xk(std::max<size_t>(k, 1) + 1, S(0));
  xk.back() = S(1);
  Poly<S> u, v;
  ext_gcd(xk, g, u, v);
  Poly<S> p = pmul(u, xk);  // 0 mod x^k, 1 mod g
  Poly<S> q, r;
  pdivmod(p, pmul(xk, g), q, r);
  return eval_poly(a, r, x);
}

template <class S>
LiftResult<S> lift_idempotent(const FinDimAlgebra<S>& a, const Filtration<S>& filt,
                              const Vec<S>& e0, int target_n) {
  LiftResult<S> out;
  out.e = e0;
  auto defect = [&](const Vec<S>& e) { return Vec<S>(a.mul(e, e) - e); };
  Vec<S> d = defect(e0);
  int ord = filt.order(d);
  if (!is_zero<S>(d) && ord < 1) throw std::invalid_argument("not approximately idempotent");
  out.defect_orders.push_back(is_zero<S>(d) ? filt.top : ord);
  while (!is_zero<S>(d) && ord < target_n) {
    if (out.iterations > 64) throw std::logic_error("idempotent lifting did not converge");
    Vec<S> e2 = a.mul(out.e, out.e);
    out.e = S(3) * e2 - S(2) * a.mul(e2, out.e);
    ++out.iterations;
    d = defect(out.e);
    ord = is_zero<S>(d) ? filt.top : filt.order(d);
    out.defect_orders.push_back(ord);
  }
  return out;
}

template <class S>
Filtration<S> valuation_filtration(int n) {
  Filtration<S> f;
  f.top = n;
  f.order = [n](const Vec<S>& x) {
    for (int i = 0; i < n; ++i)
      if (!FieldTraits<S>::is_zero(x(i))) return i;
    return n;
  };
  return f;
}

#define NODAL_INSTANTIATE(S)                                                                  \
  template class FinDimAlgebra<S>;                                                           \
  template FinDimAlgebra<S> algebra_from_matrix_basis<S>(const std::vector<Mat<S>>&);       \
  template FinDimAlgebra<S> truncated_polynomial_algebra<S>(int);                            \
  template FinDimAlgebra<S> diagonal_algebra<S>(int);                                        \
  template FinDimAlgebra<S> upper_triangular_algebra<S>(int);                                \
  template Mat<S> radical<S>(const FinDimAlgebra<S>&);                                       \
  template FinDimAlgebra<S> quotient<S>(const FinDimAlgebra<S>&, const Mat<S>&);             \
  template Locality locality<S>(const FinDimAlgebra<S>&);                                    \
  template bool is_local<S>(const FinDimAlgebra<S>&);                                        \
  template std::vector<S> minimal_polynomial<S>(const FinDimAlgebra<S>&, const Vec<S>&);     \
  template Vec<S> idempotent_from_element<S>(const FinDimAlgebra<S>&, const Vec<S>&);        \
  template LiftResult<S> lift_idempotent<S>(const FinDimAlgebra<S>&, const Filtration<S>&,   \
                                            const Vec<S>&, int);                             \
  template Filtration<S> valuation_filtration<S>(int);

NODAL_INSTANTIATE(Fp)
NODAL_INSTANTIATE(Rational)

}  // namespace nodal
