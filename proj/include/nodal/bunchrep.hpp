#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodal/algebra.hpp"
#include "nodal/bunch.hpp"

namespace nodal {

// An element of X*: part 0 for ordinary elements, 1 and 2 for x' and x''
// of a self-related x.
struct Stripe {
  int elem = 0;
  int part = 0;
  auto operator<=>(const Stripe&) const = default;
};

std::string stripe_str(const Bunch& b, Stripe s);

struct DeskScaleLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class BunchRep {
 public:
  BunchRep() = default;
  explicit BunchRep(std::shared_ptr<const Bunch> b);

  const Bunch& bunch() const { return *bunch_; }
  std::shared_ptr<const Bunch> bunch_ptr() const { return bunch_; }

  // Stripes of an element: {x} or {x', x''}.
  std::vector<Stripe> stripes_of(int elem) const;
  // Representative of the ≈-class (smallest element id, same part).
  Stripe class_of(Stripe s) const;

  int dim(Stripe s) const;
  // Sets n for the whole ≈-class. Resets the matrices of affected blocks.
  void set_dim(Stripe s, int n);

  // Stripes with nonzero dimension, rows in chain order.
  std::vector<Stripe> row_stripes(int block) const;
  std::vector<Stripe> col_stripes(int block) const;
  int rows(int block) const;
  int cols(int block) const;
  int row_offset(int block, Stripe s) const;
  int col_offset(int block, Stripe s) const;

  MatF matrix(int block) const;
  void set_matrix(int block, MatF m);
  void set_entry(int block, int r, int c, Fp v);

  std::vector<int> blocks() const;  // blocks with a nonzero row or column stripe
  std::vector<Stripe> classes() const;  // class representatives with nonzero dimension
  int total_dim() const;            // sum of class dimensions
  bool is_zero() const { return total_dim() == 0; }

  // Every occupied block is square and invertible.
  bool nondegenerate(std::string* why = nullptr) const;

  const std::map<Stripe, int>& dims() const { return dims_; }

 private:
  std::shared_ptr<const Bunch> bunch_;
  std::map<Stripe, int> dims_;
  std::map<int, MatF> mats_;
};

BunchRep direct_sum(const BunchRep& a, const BunchRep& b);
bool reps_equal(const BunchRep& a, const BunchRep& b);

// Admissible transformation: per class an invertible matrix, plus for x < y
// in a chain a block adding multiples of the x-stripe to the y-stripe
// (rows for E, columns for F). Applied as M -> S M C.
struct AdmissibleTransform {
  std::map<Stripe, MatF> diag;                          // keyed by class representative
  std::map<std::pair<Stripe, Stripe>, MatF> add;        // (x, y), x < y; n_y x n_x rows, n_x x n_y cols
};

BunchRep apply(const AdmissibleTransform& t, const BunchRep& r);
AdmissibleTransform random_transform(const BunchRep& r, uint32_t seed);

// Morphism R1 -> R2: per block S_b (rows2 x rows1) and T_b (cols2 x cols1) with
// S_b M1_b = M2_b T_b.
struct RepMorphism {
  std::map<int, MatF> S, T;
};

std::vector<RepMorphism> hom_basis(const BunchRep& a, const BunchRep& b);
FinDimAlgebra<Fp> endomorphisms(const BunchRep& r);
bool is_indecomposable(const BunchRep& r);

struct RepIso {
  bool isomorphic = false;
  RepMorphism witness;
};
RepIso are_isomorphic(const BunchRep& a, const BunchRep& b, uint32_t seed = 1);

// Throws DeskScaleLimit above total dimension 64.
std::vector<BunchRep> decompose(const BunchRep& r, uint32_t seed = 1);

// Canonical matrices. J is the upper bidiagonal unipotent Jordan block.
MatF jordan_block(int d, Fp lambda);
MatF companion(const Poly& f);
MatF unipotent_J(int m);
// Identity or J_m^{-1} with columns regrouped by parity: `+` puts odd
// positions (1-based) first.
MatF regrouped_columns(const MatF& m, int delta);
MatF regrouped_rows(const MatF& m, int delta);
// Number of odd / even positions among 1..m for the first block of a `delta` regrouping.
int first_group_size(int m, int delta);

// Orientation of a self-related column pair at word positions (p, p+1):
// true when the left neighbour is the source u of the dotted arrow.
// nullopt when the outward scan runs off a string end before deciding.
std::optional<bool> orient_pair(const Bunch& b, const Word& w, int p);

// Representation attached to a datum. Throws std::invalid_argument on an invalid datum.
BunchRep rep_from_datum(std::shared_ptr<const Bunch> b, const Datum& d);
// Word position of each self-related pair -> orient_pair value used by
// rep_from_datum (undecided pairs resolved by the indecomposability search).
std::map<int, bool> pair_orientations(std::shared_ptr<const Bunch> b, const Datum& d);

std::string format_rep(const BunchRep& r);
BunchRep parse_rep(const std::string& text, std::shared_ptr<const Bunch> b);

}  // namespace nodal
