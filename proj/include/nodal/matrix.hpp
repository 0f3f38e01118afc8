#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nodal/field.hpp"

namespace nodal {

using Index = Eigen::Index;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatF = Mat<Fp>;
using VecF = Vec<Fp>;

template <class S>
bool is_zero(const Mat<S>& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!FieldTraits<S>::is_zero(m(i, j))) return false;
  return true;
}

template <class S>
bool is_zero(const Vec<S>& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!FieldTraits<S>::is_zero(v(i))) return false;
  return true;
}

template <class S>
Mat<S> identity(Index n) {
  Mat<S> m = Mat<S>::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = S(1);
  return m;
}

template <class S>
struct RrefResult {
  Mat<S> R;
  Mat<S> T;
  Index rank = 0;
  std::vector<Index> pivots;  // pivot column of each nonzero row of R
};

namespace detail {

// Gauss-Jordan on m in place; when t is non-null the same row operations are
// applied to it. Returns pivot columns.
template <class S>
std::vector<Index> gauss_jordan(Mat<S>& m, Mat<S>* t) {
  std::vector<Index> piv;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index sel = -1;
    for (Index r = row; r < m.rows(); ++r)
      if (!FieldTraits<S>::is_zero(m(r, col))) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row) {
      m.row(sel).swap(m.row(row));
      if (t) t->row(sel).swap(t->row(row));
    }
    S inv = FieldTraits<S>::inv(m(row, col));
    for (Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    if (t)
      for (Index j = 0; j < t->cols(); ++j) (*t)(row, j) *= inv;
    for (Index r = 0; r < m.rows(); ++r) {
      if (r == row || FieldTraits<S>::is_zero(m(r, col))) continue;
      S f = m(r, col);
      for (Index j = col; j < m.cols(); ++j) {
        if (FieldTraits<S>::is_zero(m(row, j))) continue;
        m(r, j) -= f * m(row, j);
      }
      if (t)
        for (Index j = 0; j < t->cols(); ++j) {
          if (FieldTraits<S>::is_zero((*t)(row, j))) continue;
          (*t)(r, j) -= f * (*t)(row, j);
        }
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

}  // namespace detail

// T*M = R with R reduced row echelon and T invertible.
template <class S>
RrefResult<S> rref(const Mat<S>& m) {
  RrefResult<S> out;
  out.R = m;
  out.T = identity<S>(m.rows());
  out.pivots = detail::gauss_jordan(out.R, &out.T);
  out.rank = static_cast<Index>(out.pivots.size());
  return out;
}

template <class S>
Index rank(const Mat<S>& m) {
  Mat<S> w = m;
  return static_cast<Index>(detail::gauss_jordan<S>(w, nullptr).size());
}

// Null space basis, one vector per column.
template <class S>
Mat<S> kernel(const Mat<S>& a) {
  Mat<S> r = a;
  auto piv = detail::gauss_jordan<S>(r, nullptr);
  std::vector<bool> is_piv(a.cols(), false);
  for (Index p : piv) is_piv[p] = true;
  Index nfree = a.cols() - static_cast<Index>(piv.size());
  Mat<S> k = Mat<S>::Zero(a.cols(), nfree);
  Index c = 0;
  for (Index f = 0; f < a.cols(); ++f) {
    if (is_piv[f]) continue;
    k(f, c) = S(1);
    for (size_t i = 0; i < piv.size(); ++i) k(piv[i], c) = -r(static_cast<Index>(i), f);
    ++c;
  }
  return k;
}

template <class S>
struct Solution {
  bool consistent = false;
  Vec<S> particular;
  Mat<S> kernel;  // columns span the null space of A
};

template <class S>
Solution<S> solve(const Mat<S>& a, const Vec<S>& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve: row count mismatch");
  Mat<S> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  auto piv = detail::gauss_jordan<S>(aug, nullptr);
  Solution<S> out;
  out.kernel = kernel(a);
  if (!piv.empty() && piv.back() == a.cols()) return out;
  out.consistent = true;
  out.particular = Vec<S>::Zero(a.cols());
  for (size_t i = 0; i < piv.size(); ++i)
    out.particular(piv[i]) = aug(static_cast<Index>(i), a.cols());
  return out;
}

template <class S>
std::optional<Mat<S>> inverse(const Mat<S>& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  auto r = rref(a);
  if (r.rank != a.rows()) return std::nullopt;
  return r.T;
}

template <class S>
bool is_invertible(const Mat<S>& a) {
  return a.rows() == a.cols() && rank(a) == a.rows();
}

// Basis of the column span, as columns.
template <class S>
Mat<S> column_space(const Mat<S>& a) {
  Mat<S> t = a.transpose();
  auto piv = detail::gauss_jordan<S>(t, nullptr);
  return t.topRows(static_cast<Index>(piv.size())).transpose();
}

template <class S>
std::string to_string(const Mat<S>& m) {
  std::ostringstream os;
  for (Index i = 0; i < m.rows(); ++i) {
    os << "[";
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << FieldTraits<S>::str(m(i, j));
    os << "]";
    if (i + 1 < m.rows()) os << "\n";
  }
  return os.str();
}

}  // namespace nodal
