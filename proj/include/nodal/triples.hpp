#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nodal/bunchrep.hpp"
#include "nodal/complexes.hpp"

namespace nodal {

// (P̃, M, i): a minimal complex over Ã reduced to ladder form, the A/I part as
// per-degree lists of A-vertices (zero differential), and the comparison
// matrices. H[k] has one row per summand of tilde.module(k) (rows at killed
// Ã-vertices stay zero) and one column per entry of m[k].
struct Triple {
  std::shared_ptr<const NodalAlgebra> nodal;
  ProjComplex tilde;
  std::map<int, std::vector<int>> m;
  std::map<int, MatF> H;

  // H_k(i|s): rows at Ã-vertices of comps[s], columns of A-vertex s.
  MatF comparison(int k, int s) const;
};

struct Ladder {
  int k;       // degree of the source
  int src;     // summand index in degree k
  int dst;     // summand index in degree k - 1
  int length;
};

// Ladders of a complex in reduced form: every column of every differential
// holds at most one entry, a single path. Throws otherwise.
std::vector<Ladder> ladders(const ProjComplex& reduced);

// Reduction of base_change_tilde(P) to ladder form, keeping track of the
// scalar part of the change of basis. Throws std::invalid_argument for a
// non-minimal input and std::runtime_error when the reduction runs into the
// truncation.
Triple functor_F(std::shared_ptr<const NodalAlgebra> a, const ProjComplex& p);

// Per non-killed Ã-vertex, the comparison rows at that vertex against the
// columns of A-vertices covering it are square and invertible.
bool check_nondegenerate(const Triple& t, std::string* why = nullptr);

// Lifts a map between Ã-expansions (summand order as in expand_objects) of
// the A-objects src and dst. Throws std::runtime_error if a block is not in A.
ProjMorphism lift_expanded(const NodalAlgebra& a, const ProjMorphism& f, const std::vector<int>& src,
                           const std::vector<int>& dst);

// Pull-back reconstruction. Throws std::invalid_argument for a degenerate triple.
ProjComplex functor_G(const Triple& t);

BunchRep triple_to_bunchrep(const Triple& t, std::shared_ptr<const Bunch> b);
Triple triple_from_bunchrep(const BunchRep& r, std::shared_ptr<const NodalAlgebra> a);

std::string format_triple(const Triple& t);
Triple parse_triple(const std::string& text, std::shared_ptr<const NodalAlgebra> a);

}  // namespace nodal
