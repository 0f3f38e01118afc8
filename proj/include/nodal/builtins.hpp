#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nodal/quiver.hpp"

namespace nodal {

// A nodal algebra A together with the hereditary algebra Ã it embeds into.
// Ã ⊗_A P_i decomposes as the sum of P̃_c for c in comps[i]; an element of
// e_i A e_j becomes a comps[j] x comps[i] block of Ã elements.
struct NodalAlgebra {
  std::string name;
  std::shared_ptr<const PathAlgebra> A;
  std::shared_ptr<const PathAlgebra> tilde;  // null when no embedding is shipped
  std::vector<std::vector<int>> comps;
  std::vector<ProjMorphism> arrow_image;  // per A-arrow
  // Vertices whose simple module is of the first type (I contains e_v).
  std::vector<bool> first_type;

  bool has_tilde() const { return tilde != nullptr; }
  // Ã vertex hit only by first-type A vertices (the summand I kills).
  bool tilde_killed(int c) const;

  ProjMorphism embed(const AlgElem& a) const;
  // Block-expanded morphism over Ã; summand order follows comps.
  ProjMorphism embed_morphism(const ProjMorphism& f) const;
  std::vector<int> expand_objects(const std::vector<int>& objs) const;
  // Inverse of embed on e_src A e_dst; nullopt if the block is not in the image.
  std::optional<AlgElem> lift(const ProjMorphism& block, int src, int dst) const;

  // For each length l: dim of rad^l/rad^{l+1} in End_A(A) and in End_Ã(Ã ⊗ A).
  // Equal sequences witness rad A = rad Ã on the truncation.
  std::pair<std::vector<int>, std::vector<int>> radical_profiles() const;

 private:
  struct LiftTable {
    MatF images;  // columns: coordinates of embed(basis elements of e_src A e_dst)
    std::vector<int> basis;
  };
  const LiftTable& lift_table(int src, int dst) const;
  mutable std::map<std::pair<int, int>, LiftTable> lift_cache_;
  mutable std::map<int, ProjMorphism> embed_cache_;
};

PathAlgebra cycle_algebra(int d, int truncation = 12);

// Known names: dihedral, dihedral_tilde, gelfand, gelfand_tilde, cycle,
// harish_chandra_even, harish_chandra_odd, twin_node_gentle, twin_node_chain.
// The *_tilde and cycle names give the hereditary algebra alone.
NodalAlgebra builtin(const std::string& name, int param = 1, int truncation = 12);
std::vector<std::string> builtin_names();

}  // namespace nodal
