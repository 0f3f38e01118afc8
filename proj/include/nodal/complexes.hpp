#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nodal/builtins.hpp"

namespace nodal {

// Right-bounded complex of projectives over a path algebra. The differential
// d_k : C_k -> C_{k-1} lowers degree. Outside [lo, hi] the modules are zero.
class ProjComplex {
 public:
  ProjComplex() = default;
  ProjComplex(std::shared_ptr<const PathAlgebra> alg, int lo, int hi);

  const PathAlgebra& algebra() const { return *alg_; }
  std::shared_ptr<const PathAlgebra> algebra_ptr() const { return alg_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool empty() const;

  const std::vector<int>& module(int k) const;
  // Replaces C_k and resets the adjacent differentials to zero.
  void set_module(int k, std::vector<int> objs);
  ProjMorphism differential(int k) const;  // C_k -> C_{k-1}
  void set_differential(int k, ProjMorphism d);
  int total_rank() const;

 private:
  std::shared_ptr<const PathAlgebra> alg_;
  int lo_ = 0, hi_ = -1;
  std::vector<std::vector<int>> mods_;
  std::vector<ProjMorphism> diffs_;  // diffs_[k - lo - 1] = d_k for lo < k <= hi
};

struct CheckReport {
  bool is_complex = true;
  bool is_minimal = true;
  std::vector<std::string> problems;
};

CheckReport check(const ProjComplex& c);
ProjComplex shift(const ProjComplex& c, int f);  // degree k moves to k + f
ProjComplex direct_sum(const ProjComplex& a, const ProjComplex& b);
// Drops zero modules at both ends of the window.
ProjComplex trimmed(const ProjComplex& c);

struct HomologyResult {
  int dim = 0;
  bool stable = true;  // same answer two steps lower in the truncation
};

// Homology of the realization with each P_i cut at the algebra's truncation.
// Kernels are measured at full depth and read off below the longest
// differential path, which removes the artefacts of the cut top layer.
HomologyResult homology_dims(const ProjComplex& c, int k);

// Ã ⊗_A C, summands expanded along the embedding.
ProjComplex base_change_tilde(const NodalAlgebra& n, const ProjComplex& c);

struct IsoResult {
  bool isomorphic = false;
  std::vector<ProjMorphism> witness;  // f_k : C1_k -> C2_k for k in [lo, hi]
  int lo = 0;
};

// Linear space of chain maps C1 -> C2, as a basis of per-degree morphism lists.
std::vector<std::vector<ProjMorphism>> chain_map_basis(const ProjComplex& a, const ProjComplex& b, int lo,
                                                       int hi);
IsoResult chain_isomorphic(const ProjComplex& a, const ProjComplex& b, uint32_t seed = 1);

std::string format_complex(const ProjComplex& c, const std::string& algebra_name);
// Header line `complex <algebra>`; returns the algebra name.
std::string complex_algebra_name(const std::string& text);
ProjComplex parse_complex(const std::string& text, std::shared_ptr<const PathAlgebra> alg);

}  // namespace nodal
