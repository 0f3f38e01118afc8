#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nodal/bunchrep.hpp"
#include "nodal/complexes.hpp"

namespace nodal {

// One Ã-summand block P^mult: an E letter of the word, or the far end of a
// ladder whose partner vertex is killed (a Q-type node).
struct GluingNode {
  int letter = -1;  // word position, -1 for a killed end
  int degree = 0;
  int vertex = 0;   // Ã vertex
  int mult = 1;
  bool killed = false;
  int special = 0;  // delta of a special end, 0 otherwise
  bool special_last = false;
  int column_elem = -1;  // F element of a special end or of an unpaired plain column
};

// phi_length * coef from node src (degree k) to node dst (degree k-1);
// coef is dst.mult x src.mult. After move_arrows, src and dst index summands.
struct SolidArrow {
  int src = 0, dst = 0;
  int length = 1;
  int src_vertex = 0, dst_vertex = 0;  // Ã vertices of the path ends
  MatF coef;
  bool moved = false;
};

// Identify: the two nodes are the two Ã-parts of one A-summand.
// Pair: the nodes become two A-summands over the same Ã vertex; a directed
// Pair link u -> v lets the summand at v pick up the arrows of u.
struct DottedLink {
  enum class Kind { Identify, Pair } kind = Kind::Identify;
  int a = 0, b = 0;
  std::optional<bool> a_to_b;  // direction (Pair links only)
  bool equal_weight = false;   // immediate neighbours coincide
  int word_pos = -1;           // position of the first F letter of the link
  int column_elem = -1;        // bunch id of that F letter
  MatF label;                  // twist on the closing link, identity otherwise
  int label_node = -1;         // node the label sits on
};

// A-summand P_vertex^mult. theta lists the Ã blocks (node, mult(node) x mult)
// it is glued from.
struct GluingSummand {
  int home = 0;     // node it is drawn at
  int vertex = -1;  // A vertex, -1 until assign_subscripts for Pair links
  int mult = 1;
  bool merged = false;  // all theta nodes are parts of it (Identify link)
  std::vector<std::pair<int, MatF>> theta;
};

struct GluingDiagram {
  std::shared_ptr<const NodalAlgebra> nodal;
  std::shared_ptr<const Bunch> bunch;
  Datum datum;
  std::vector<GluingNode> nodes;
  std::vector<SolidArrow> arrows;
  std::vector<DottedLink> links;
  std::vector<GluingSummand> summands;
  bool truncated = false;  // an open end was cut at the window
  bool moved = false;
  bool subscripted = false;

  bool oriented() const;
};

// Nodes, ladder arrows and dotted links of a datum. Pair links whose
// neighbours differ are directed here; equal-weight ones are left open.
// Throws std::invalid_argument for an invalid datum or an unsupported shape.
GluingDiagram diagram_from_datum(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b,
                                 const Datum& d);

// Directs the remaining Pair links by the outward symmetric scan; a fully
// symmetric band word directs its axis links left to right.
GluingDiagram orient_equal_weight_links(GluingDiagram d);

// Moves every solid arrow along the dotted links at its ends (copy along an
// outgoing link, negated copy against an incoming one, scaled by labels).
// Arrows afterwards join summands. Requires an oriented diagram.
GluingDiagram move_arrows(GluingDiagram d);

// A vertices of the summands: across a Pair link the tail of the dotted arrow
// gets the first column vertex (subscript 1), the head the second. Other
// colourings change the band parameter, so this one is fixed. Throws std::logic_error if some link ends up
// joining equal subscripts.
GluingDiagram assign_subscripts(GluingDiagram d);

enum class SpecialKind { Ir_plus, Ir_minus, Jr_plus, Jr_minus, Ic_plus, Ic_minus, Jc_plus, Jc_minus };
MatF special_matrix(SpecialKind kind, int m);
SpecialKind parse_special_kind(const std::string& name);

// Requires a moved and subscripted diagram.
ProjComplex complex_from_diagram(const GluingDiagram& d);

// All four steps.
GluingDiagram glue(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b, const Datum& d);
ProjComplex glue_complex(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b, const Datum& d);

// P -> P over the first-type vertex covering a killed Ã vertex, from the
// Ã loop of length l, placed in degrees f+1 -> f.
ProjComplex exceptional_complex(std::shared_ptr<const NodalAlgebra> a, int l, int f);

std::string format_diagram(const GluingDiagram& d);

}  // namespace nodal
