#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nodal/gluing.hpp"

namespace nodal {

struct CatalogBounds {
  int max_letters = 6;
  int max_mult = 1;                // bispecial m and band d
  std::vector<Fp> lambdas{Fp(1)};  // band parameters to list
  int max_loop = 0;                // exceptional loop lengths, 0 = window L
  bool complexes_only = true;      // drop data whose representation is degenerate
};

struct CatalogEntry {
  enum class Kind { String, Band, Exceptional } kind = Kind::String;
  std::optional<Datum> datum;
  int length = 0, degree = 0;  // exceptional: loop length, lower degree
};

// All alternating words of at most max_letters letters in which element id
// occurs at most caps[id] times (no cap when caps is empty). Cyclic words
// start with '~'. Validity is not checked.
std::vector<Word> alternating_words(const Bunch& b, int max_letters, bool cyclic,
                                    const std::vector<int>& caps = {});

// Strings, bands and exceptional complexes of the window, one per
// equivalence class, in enumeration order.
std::vector<CatalogEntry> catalog(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b,
                                  const CatalogBounds& bounds);

std::string entry_str(const CatalogEntry& e);

// Datum whose representation is isomorphic to r, found by search over words
// through the support of r. Bands are searched with split parameters
// (t - lambda)^d only. Throws DeskScaleLimit above 64 dimensions.
std::optional<Datum> identify_datum(const BunchRep& r, uint32_t seed = 1);

}  // namespace nodal
