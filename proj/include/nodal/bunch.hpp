#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nodal/builtins.hpp"

namespace nodal {

// Combinatorial shape of the matrix problem attached to a nodal algebra whose
// Ã is a disjoint union of oriented cycles (arrows nu -> nu+1 inside each).
// Vertices are (component n, position nu), both 1-based.
struct BunchConfig {
  std::string name;
  std::vector<int> cycle_length;                     // per component
  std::vector<std::vector<int>> live;                // per component: vertices not killed by I
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> second;  // g(n,v) ~ g(m,u)
  std::vector<std::pair<int, int>> third;            // g(n,v) ~ g(n,v)

  bool is_live(int n, int v) const;
  // Cyclic index arithmetic on component n.
  int wrap(int n, int v) const;
};

BunchConfig dihedral_config();
BunchConfig gelfand_config();
// Reads the components off Ã; each Ã-vertex must have one arrow in and one out.
BunchConfig config_from_nodal(const NodalAlgebra& a);

// Maps bunch vertices to Ã vertex indices and F-columns to A vertices.
struct VertexMap {
  std::map<std::pair<int, int>, int> tilde;        // (n,v) -> Ã vertex
  std::vector<std::pair<int, int>> of_tilde;       // Ã vertex -> (n,v)
  // For a column of element g(n,v) with part 0 (plain), 1 (') or 2 (''): the A vertex.
  std::map<std::tuple<int, int, int>, int> column_vertex;
  std::map<int, int> killed_vertex;                // killed Ã vertex -> first-type A vertex
};
VertexMap vertex_map(const NodalAlgebra& a, const BunchConfig& cfg);

struct Window {
  int kmin = 0;
  int kmax = 0;
  int L = 1;  // longest ladder
};

enum class Sym : int { Beta = 0, Rho = 1, Alpha = 2, G = 3 };

struct Element {
  Sym sym = Sym::Rho;
  int n = 1;
  int v = 1;
  int l = 0;  // ladder length, 0 for rho and g
  int f = 0;  // homological degree

  auto operator<=>(const Element&) const = default;
  bool is_E() const { return sym != Sym::G; }
};

std::string element_str(const Element& e);
// Accepts a(n,v,l,f), b(n,v,l,f), rho(n,v,f), g(v,f), g(n,v,f) and the
// single-vertex forms a(l,f), b(l,f), rho(f), g(f).
Element parse_element(const std::string& text);

// Finite window of the bunch of chains / semi-chains.
class Bunch {
 public:
  struct Block {
    int n, v, f;
    std::vector<int> E;  // increasing in the bunch order (rows of x may be added to rows of y when x < y)
    std::vector<int> F;
  };

  Bunch(BunchConfig cfg, Window w);

  const BunchConfig& config() const { return cfg_; }
  const Window& window() const { return win_; }
  int size() const { return static_cast<int>(elems_.size()); }
  const Element& element(int id) const { return elems_.at(static_cast<size_t>(id)); }
  std::optional<int> find(const Element& e) const;
  int id(const Element& e) const;  // throws when absent

  // ~-partner, the element itself for self-related elements, -1 if none.
  int partner(int id) const { return partner_.at(static_cast<size_t>(id)); }
  bool self_related(int id) const { return partner(id) == id; }
  // The ~-partner exists in the full bunch but lies outside the window.
  bool boundary(int id) const { return boundary_.at(static_cast<size_t>(id)) != 0; }
  // Alone in its ≈-class (no partner at all, or self-related).
  bool unique(int id) const { return partner(id) < 0 || self_related(id); }

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int b) const { return blocks_.at(static_cast<size_t>(b)); }
  int block_of(int id) const { return block_of_.at(static_cast<size_t>(id)); }
  std::optional<int> find_block(int n, int v, int f) const;

  // x < y in the same chain of the same block.
  bool less(int x, int y) const;
  // x - y: same block, one in E and one in F.
  bool dash(int x, int y) const;
  bool tilde(int x, int y) const { return partner(x) == y && y >= 0; }
  // The displayed weight order on an E-chain: beta(j) >= ... >= rho >= ... >= alpha(i).
  // It is the reverse of less().
  bool weight_greater(int x, int y) const { return less(x, y); }

  // Ladder data for E elements: (source vertex, target vertex) of the path.
  std::pair<int, int> ladder_ends(const Element& e) const;

 private:
  void add_block(int n, int v, int f);
  int add(const Element& e);

  BunchConfig cfg_;
  Window win_;
  std::vector<Element> elems_;
  std::map<Element, int> index_;
  std::vector<int> partner_, boundary_, block_of_, pos_;
  std::vector<Block> blocks_;
  std::map<std::tuple<int, int, int>, int> block_index_;
};

Bunch dihedral_bunch(Window w);
Bunch gelfand_bunch(Window w);
Bunch nodal_bunch(const BunchConfig& cfg, Window w);

enum class Rel : int { Tilde, Dash };

// x_1 r_1 x_2 ... r_{m-1} x_m. Cycles close with an implicit x_m - x_1.
// An open end stands for an infinite continuation cut at the window; the
// stored relation is the one joining the end to the dropped neighbour.
struct Word {
  std::vector<Element> x;
  std::vector<Rel> r;
  bool cyclic = false;
  std::optional<Rel> open_left, open_right;

  int length() const { return static_cast<int>(x.size()); }
  bool infinite() const { return open_left.has_value() || open_right.has_value(); }
  bool operator==(const Word&) const = default;
};

std::string word_str(const Word& w);
Word parse_word(const std::string& text);

struct WordReport {
  bool valid = true;
  bool full = true;
  bool truncated = false;  // has an open end
  std::vector<std::string> problems;
};

WordReport validate_word(const Bunch& b, const Word& w);

Word reverse(const Word& w);
bool is_symmetric(const Word& w);
bool is_quasisymmetric(const Word& w);
// 0 = usual, 1 = special, 2 = bispecial.
int special_ends(const Bunch& b, const Word& w);
bool special_left(const Bunch& b, const Word& w);
bool special_right(const Bunch& b, const Word& w);

Word shift_cycle(const Word& w, int k);
bool is_nonperiodic(const Word& w);
bool is_symmetric_cycle(const Word& w);
// Literal count: even i in [0,k] with x_{i-1}, x_i on the same side, indices cyclic.
int nu(int k, const Word& w);
// Parity of the number of same-side pairs crossed when moving the closing
// link from position m to position k, i.e. over even i in [2,k].
int twist_parity(int k, const Word& w);

// Polynomials over F_p, coefficients in increasing degree.
using Poly = std::vector<Fp>;
Poly poly_trim(Poly a);
Poly poly_mul(const Poly& a, const Poly& b);
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_gcd(Poly a, Poly b);
bool poly_irreducible(const Poly& f);
// f = g^e with g monic irreducible; nullopt otherwise.
std::optional<std::pair<Poly, int>> primary_root(const Poly& f);
Poly poly_reciprocal(const Poly& f);  // f(0)^{-1} t^d f(1/t)
Fp poly_eval(const Poly& f, Fp x);
std::string poly_str(const Poly& f);
Poly parse_poly(const std::string& text);
Poly split_poly(int d, Fp lambda);  // (t - lambda)^d

struct StringDatum {
  enum class Kind { Usual, Special, Bispecial } kind = Kind::Usual;
  Word w;
  int delta = +1;  // special
  int m = 1;       // bispecial
  int d1 = +1, d2 = +1;
  bool operator==(const StringDatum&) const = default;
};

struct BandDatum {
  Word w;
  Poly f;
  bool split_form = false;  // printed as (d, lambda)
  int d = 1;
  Fp lambda = Fp(1);
  int dim() const { return static_cast<int>(f.size()) - 1; }
  bool operator==(const BandDatum&) const = default;
};

BandDatum make_band(Word w, int d, Fp lambda);
BandDatum make_band(Word w, Poly f);

using Datum = std::variant<StringDatum, BandDatum>;

std::string datum_str(const Datum& d);
Datum parse_datum(const std::string& text);

// Empty when the datum satisfies its definition; otherwise the reasons.
std::vector<std::string> validate_datum(const Bunch& b, const Datum& d);
bool data_equivalent(const Bunch& b, const Datum& d1, const Datum& d2);
// Total dimension of the representation (sum over letters).
int datum_dimension(const Datum& d);

}  // namespace nodal
