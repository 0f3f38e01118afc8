#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nodal/matrix.hpp"

namespace nodal {

struct Arrow {
  int src = 0;
  int dst = 0;
  std::string label;
};

class Quiver {
 public:
  int add_vertex(const std::string& label);
  int add_arrow(const std::string& src, const std::string& dst, const std::string& label);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::string& vertex(int v) const { return vertices_.at(static_cast<size_t>(v)); }
  const Arrow& arrow(int a) const { return arrows_.at(static_cast<size_t>(a)); }
  std::optional<int> find_vertex(const std::string& label) const;
  std::optional<int> find_arrow(const std::string& label) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

// Arrow indices in travel order: p = (a1, a2, ...) means a1 then a2.
using Path = std::vector<int>;

struct Relation {
  std::vector<std::pair<Fp, Path>> terms;  // sum of terms = 0
};

struct Presentation {
  std::string name;
  Quiver quiver;
  std::vector<Relation> relations;
  int truncation = 12;
  // Printed relations whose paths do not compose; kept for reporting only.
  std::vector<std::string> vacuous;
};

// Text form: `src -> dst : label` per arrow, `p1 + c*p2 = 0` per relation
// (paths as dot-separated labels, or juxtaposed one-letter labels),
// `vertex v`, and `truncate N`. '#' starts a comment.
Presentation parse_presentation(const std::string& text);
std::string format_presentation(const Presentation& p);

// Element of e_src A e_dst: a combination of normal-form paths from src to dst.
struct AlgElem {
  int src = 0;
  int dst = 0;
  std::vector<std::pair<int, Fp>> terms;  // (basis index, coefficient), sorted, nonzero

  bool is_zero() const { return terms.empty(); }
  AlgElem& operator+=(const AlgElem& o);
  AlgElem& operator-=(const AlgElem& o);
  AlgElem& operator*=(Fp c);
  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  friend AlgElem operator*(Fp c, AlgElem a) { return a *= c; }
  AlgElem operator-() const { return Fp(-1) * *this; }
  friend bool operator==(const AlgElem& a, const AlgElem& b) {
    return a.src == b.src && a.dst == b.dst && a.terms == b.terms;
  }
};

// Path algebra kQ/(relations) truncated at paths of length >= N. Relations
// must be homogeneous; normal forms come from reduced echelon forms of the
// ideal in each length, so any homogeneous presentation is confluent.
class PathAlgebra {
 public:
  explicit PathAlgebra(Presentation pres);

  const Presentation& presentation() const { return pres_; }
  const Quiver& quiver() const { return pres_.quiver; }
  int truncation() const { return pres_.truncation; }
  int num_vertices() const { return quiver().num_vertices(); }

  int dim() const { return static_cast<int>(basis_.size()); }
  const Path& basis_path(int b) const { return basis_[static_cast<size_t>(b)].path; }
  int basis_src(int b) const { return basis_[static_cast<size_t>(b)].src; }
  int basis_dst(int b) const { return basis_[static_cast<size_t>(b)].dst; }
  int basis_length(int b) const { return static_cast<int>(basis_path(b).size()); }
  const std::vector<int>& basis_between(int src, int dst) const;

  AlgElem zero(int src, int dst) const { return AlgElem{src, dst, {}}; }
  AlgElem idempotent(int v) const;
  AlgElem scalar(int v, Fp c) const { return c * idempotent(v); }
  // Normal form of a path (zero if it vanishes). Throws on non-composable input.
  AlgElem path(const Path& p, int src_if_empty = -1) const;
  AlgElem arrow(int a) const { return path(Path{a}); }
  AlgElem basis_elem(int b) const;

  // Concatenation: a then b. Throws std::invalid_argument on tag mismatch.
  AlgElem mul(const AlgElem& a, const AlgElem& b) const;

  // Every path in the normal form has length >= k.
  bool in_radical_power(const AlgElem& a, int k) const;
  int valuation(const AlgElem& a) const;  // min path length; truncation() for zero
  Fp scalar_part(const AlgElem& a) const;  // coefficient of the idempotent
  std::vector<int> paths_of_length(int src, int dst, int len) const;

  Path parse_path(const std::string& text) const;
  std::string path_str(const Path& p) const;
  std::string str(const AlgElem& a) const;
  AlgElem parse_elem(const std::string& text, int src, int dst) const;

 private:
  struct BasisPath {
    int src, dst;
    Path path;
  };
  struct Layer {
    std::vector<Path> words;  // monomial-free composable paths of this length
    std::map<Path, int> index;
    MatF ideal;               // reduced echelon basis of the ideal, columns = words
    std::vector<int> pivot_row;  // per word: row of the ideal whose pivot it is, or -1
    std::vector<int> basis_id;   // per word: basis index if a normal-form path, else -1
  };

  bool has_monomial_suffix(const Path& w) const;
  AlgElem reduce_word(int len, int word) const;

  Presentation pres_;
  std::vector<Path> monomials_;
  std::vector<Layer> layers_;
  std::vector<BasisPath> basis_;
  std::vector<std::vector<std::vector<int>>> between_;
  mutable std::unordered_map<uint64_t, AlgElem> mul_cache_;
};

// Map between direct sums of indecomposable projectives. Entry (r, c) is an
// element from vertex src[c] to vertex dst[r]; x in the c-th source summand
// goes to sum_r x * entry(r, c) (right multiplication).
class ProjMorphism {
 public:
  ProjMorphism() = default;
  ProjMorphism(std::vector<int> src, std::vector<int> dst);  // zero map
  ProjMorphism(const PathAlgebra& alg, std::vector<int> src, std::vector<int> dst);

  const std::vector<int>& src() const { return src_; }
  const std::vector<int>& dst() const { return dst_; }
  int rows() const { return static_cast<int>(dst_.size()); }
  int cols() const { return static_cast<int>(src_.size()); }
  const AlgElem& at(int r, int c) const { return e_[idx(r, c)]; }
  AlgElem& at(int r, int c) { return e_[idx(r, c)]; }
  // Checked assignment of an entry; tag must match (src[c], dst[r]).
  void set(int r, int c, AlgElem v);
  bool is_zero() const;

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * src_.size() + static_cast<size_t>(c); }
  std::vector<int> src_, dst_;
  std::vector<AlgElem> e_;
};

ProjMorphism identity_morphism(const PathAlgebra& alg, const std::vector<int>& objs);
// f after g (g first). Requires g.dst() == f.src().
ProjMorphism compose(const PathAlgebra& alg, const ProjMorphism& f, const ProjMorphism& g);
ProjMorphism add(const ProjMorphism& f, const ProjMorphism& g);
bool morphisms_equal(const ProjMorphism& f, const ProjMorphism& g);
// Unique path of length l from vertex i to vertex j, as a 1x1 morphism P_i -> P_j.
ProjMorphism phi_of_length(const PathAlgebra& alg, int i, int j, int l);

}  // namespace nodal
