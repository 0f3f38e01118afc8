#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nodal/matrix.hpp"

namespace nodal {

// Associative unital algebra given by structure constants:
// e_i * e_j = sum_k mult[i](k, j) e_k, i.e. mult[i] is left multiplication by e_i.
template <class S>
class FinDimAlgebra {
 public:
  FinDimAlgebra() = default;
  // Throws std::invalid_argument when associativity or the unit fails, unless
  // validate is false (for algebras known to be closed subalgebras).
  FinDimAlgebra(std::vector<std::string> labels, std::vector<Mat<S>> mult, Vec<S> unit,
                bool validate = true);

  Index dim() const { return static_cast<Index>(mult_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Vec<S>& unit() const { return unit_; }
  const Mat<S>& left_basis(Index i) const { return mult_[static_cast<size_t>(i)]; }

  Vec<S> mul(const Vec<S>& a, const Vec<S>& b) const;
  Mat<S> left_matrix(const Vec<S>& a) const;
  Vec<S> pow(const Vec<S>& a, unsigned long long k) const;
  bool is_nilpotent(const Vec<S>& a) const;
  bool is_invertible(const Vec<S>& a) const;
  bool is_commutative() const;
  Vec<S> basis(Index i) const;

  bool associative() const;
  bool unital() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Mat<S>> mult_;
  Vec<S> unit_;
};

// Closed matrix subalgebra spanned by the given matrices (which must contain
// the identity in their span and be closed under products).
template <class S>
FinDimAlgebra<S> algebra_from_matrix_basis(const std::vector<Mat<S>>& basis);

template <class S>
FinDimAlgebra<S> truncated_polynomial_algebra(int n);  // k[t]/(t^n)
template <class S>
FinDimAlgebra<S> diagonal_algebra(int n);  // k^n
template <class S>
FinDimAlgebra<S> upper_triangular_algebra(int n);

// Radical as a column basis. Trace-form kernel when char is 0 or exceeds
// dim; exhaustive search when the algebra has at most 2^16 elements.
// Throws std::domain_error("unsupported characteristic") otherwise.
template <class S>
Mat<S> radical(const FinDimAlgebra<S>& a);

// A / J for a two-sided ideal J given by a column basis.
template <class S>
FinDimAlgebra<S> quotient(const FinDimAlgebra<S>& a, const Mat<S>& ideal);

struct Locality {
  Index quotient_dim = 0;
  bool local = false;  // A/rad is a division algebra
  bool split = false;  // A/rad is the ground field
};

template <class S>
Locality locality(const FinDimAlgebra<S>& a);

// dim(A / rad A) == 1.
template <class S>
bool is_local(const FinDimAlgebra<S>& a);

// Monic minimal polynomial of a, coefficients in increasing degree.
template <class S>
std::vector<S> minimal_polynomial(const FinDimAlgebra<S>& a, const Vec<S>& x);

// Fitting idempotent e = p(a), p(0) = 0, projecting onto the part where a acts
// invertibly: e = 0 iff a nilpotent, e = 1 iff a invertible.
template <class S>
Vec<S> idempotent_from_element(const FinDimAlgebra<S>& a, const Vec<S>& x);

template <class S>
struct Filtration {
  // Largest s with x in I^s; `top` for x = 0.
  std::function<int(const Vec<S>&)> order;
  int top = 0;
};

template <class S>
struct LiftResult {
  Vec<S> e;
  int iterations = 0;
  std::vector<int> defect_orders;  // order of e^2 - e before each step and after the last
};

// Iterates x -> 3x^2 - 2x^3 until e^2 - e lies in I^target_n (or vanishes).
template <class S>
LiftResult<S> lift_idempotent(const FinDimAlgebra<S>& a, const Filtration<S>& filt,
                              const Vec<S>& e0, int target_n);

template <class S>
Filtration<S> valuation_filtration(int n);  // t-adic order in k[t]/(t^n)

}  // namespace nodal
