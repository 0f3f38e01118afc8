#include "nodal/gluing.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nodal/triples.hpp"

namespace nodal {

namespace {

struct WordData {
  const Word* w = nullptr;
  int s = 1;
  MatF twist;
  const StringDatum* sd = nullptr;
};

WordData word_data(const Datum& d) {
  WordData out;
  if (const auto* band = std::get_if<BandDatum>(&d)) {
    out.w = &band->w;
    out.s = band->dim();
    out.twist = band->split_form ? jordan_block(band->d, band->lambda) : companion(band->f);
  } else {
    out.sd = &std::get<StringDatum>(d);
    out.w = &out.sd->w;
    out.s = out.sd->kind == StringDatum::Kind::Bispecial ? out.sd->m : 1;
    out.twist = identity<Fp>(out.s);
  }
  return out;
}

int column_vertex(const VertexMap& vm, const Element& g, int part) {
  auto it = vm.column_vertex.find({g.n, g.v, part});
  if (it == vm.column_vertex.end())
    throw std::invalid_argument("gluing: no A vertex for the column of " + element_str(g));
  return it->second;
}

bool nonzero(const MatF& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return true;
  return false;
}

std::string mat_str(const MatF& m) {
  if (m.rows() == m.cols() && m == identity<Fp>(static_cast<int>(m.rows()))) return "I";
  std::ostringstream os;
  os << "[";
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) os << "; ";
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j).centered();
  }
  os << "]";
  return os.str();
}

// Summands of an oriented diagram; A vertices of Pair summands stay -1.
std::vector<GluingSummand> build_summands(const GluingDiagram& d) {
  const Bunch& b = *d.bunch;
  VertexMap vm = vertex_map(*d.nodal, b.config());
  std::vector<GluingSummand> out;
  std::vector<bool> covered(d.nodes.size(), false);
  auto entry = [&](const DottedLink& l, int node) {
    int s = d.nodes[static_cast<size_t>(node)].mult;
    return node == l.label_node ? l.label : identity<Fp>(s);
  };
  for (const auto& l : d.links) {
    int s = d.nodes[static_cast<size_t>(l.a)].mult;
    covered[static_cast<size_t>(l.a)] = covered[static_cast<size_t>(l.b)] = true;
    if (l.kind == DottedLink::Kind::Identify) {
      GluingSummand g;
      g.home = l.a;
      g.mult = s;
      g.merged = true;
      g.vertex = column_vertex(vm, b.element(l.column_elem), 0);
      // The label node carries the inverse so that its incoming arrows pick up the label.
      for (int n : {l.a, l.b}) g.theta.push_back({n, n == l.label_node ? *inverse(l.label) : identity<Fp>(s)});
      out.push_back(g);
      continue;
    }
    if (!l.a_to_b) throw std::invalid_argument("gluing: undirected pair link");
    int u = *l.a_to_b ? l.a : l.b, v = *l.a_to_b ? l.b : l.a;
    GluingSummand gu, gv;
    gu.home = u;
    gu.mult = s;
    gu.theta = {{u, entry(l, u)}};
    gv.home = v;
    gv.mult = s;
    gv.theta = {{u, entry(l, u)}, {v, entry(l, v)}};
    out.push_back(gu);
    out.push_back(gv);
  }
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    const GluingNode& n = d.nodes[i];
    int s = n.mult;
    if (n.killed) {
      out.push_back({static_cast<int>(i), vm.killed_vertex.at(n.vertex), s, false, {{static_cast<int>(i), identity<Fp>(s)}}});
      covered[i] = true;
    } else if (n.special != 0) {
      const Element& g = b.element(n.column_elem);
      MatF base = n.special_last ? *inverse(unipotent_J(s)) : identity<Fp>(s);
      MatF th = regrouped_columns(base, n.special);
      int a = first_group_size(s, n.special);
      if (a > 0) out.push_back({static_cast<int>(i), column_vertex(vm, g, 1), a, false, {{static_cast<int>(i), th.leftCols(a)}}});
      if (s - a > 0)
        out.push_back({static_cast<int>(i), column_vertex(vm, g, 2), s - a, false, {{static_cast<int>(i), th.rightCols(s - a)}}});
      covered[i] = true;
    } else if (n.column_elem >= 0) {
      out.push_back({static_cast<int>(i), column_vertex(vm, b.element(n.column_elem), 0), s, false,
                     {{static_cast<int>(i), identity<Fp>(s)}}});
      covered[i] = true;
    }
    if (!covered[i])
      throw std::invalid_argument("gluing: node at degree " + std::to_string(n.degree) +
                                  " is not glued to any column");
  }
  return out;
}

}  // namespace

bool GluingDiagram::oriented() const {
  return std::all_of(links.begin(), links.end(),
                     [](const DottedLink& l) { return l.kind == DottedLink::Kind::Identify || l.a_to_b.has_value(); });
}

GluingDiagram diagram_from_datum(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> bp,
                                 const Datum& datum) {
  if (!a->has_tilde()) throw std::invalid_argument("gluing: algebra has no hereditary overring");
  auto problems = validate_datum(*bp, datum);
  if (!problems.empty()) {
    std::string msg = "invalid datum:";
    for (auto& p : problems) msg += " " + p + ";";
    throw std::invalid_argument(msg);
  }
  const Bunch& b = *bp;
  VertexMap vm = vertex_map(*a, b.config());
  WordData wd = word_data(datum);
  const Word& w = *wd.w;
  int m = w.length();
  int s = wd.s;
  GluingDiagram d;
  d.nodal = a;
  d.bunch = bp;
  d.datum = datum;
  auto tv = [&](int n, int v) { return vm.tilde.at({n, v}); };
  auto rel = [&](int i) -> std::optional<Rel> {  // between i and i+1
    if (i >= 0 && i + 1 < m) return w.r[static_cast<size_t>(i)];
    return std::nullopt;
  };
  std::vector<int> node_of(static_cast<size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    const Element& e = w.x[static_cast<size_t>(i)];
    if (!e.is_E()) continue;
    auto [sv, tvx] = b.ladder_ends(e);
    GluingNode n;
    n.letter = i;
    n.mult = s;
    n.degree = e.f;
    n.vertex = tv(e.n, e.sym == Sym::Beta ? sv : (e.sym == Sym::Alpha ? tvx : e.v));
    node_of[static_cast<size_t>(i)] = static_cast<int>(d.nodes.size());
    d.nodes.push_back(n);
  }
  // Ladders.
  for (int i = 0; i < m; ++i) {
    const Element& e = w.x[static_cast<size_t>(i)];
    if (!e.is_E() || e.sym == Sym::Rho) continue;
    if (rel(i - 1) == Rel::Tilde) continue;  // handled from the left letter
    int here = node_of[static_cast<size_t>(i)];
    int there;
    if (rel(i) == Rel::Tilde) {
      there = node_of[static_cast<size_t>(i + 1)];
      if (there < 0) throw std::invalid_argument("gluing: ~ between E and F is not supported");
    } else {
      int id = b.id(e);
      if (b.partner(id) >= 0) throw std::invalid_argument("gluing: ladder partner missing from the word");
      if (b.boundary(id)) {
        d.truncated = true;
        continue;
      }
      auto [sv, tvx] = b.ladder_ends(e);
      GluingNode k;
      k.killed = true;
      k.mult = s;
      k.degree = e.sym == Sym::Alpha ? e.f + 1 : e.f - 1;
      k.vertex = tv(e.n, e.sym == Sym::Alpha ? sv : tvx);
      if (!a->tilde_killed(k.vertex)) throw std::invalid_argument("gluing: unpaired ladder end at a live vertex");
      there = static_cast<int>(d.nodes.size());
      d.nodes.push_back(k);
    }
    const GluingNode& x = d.nodes[static_cast<size_t>(here)];
    const GluingNode& y = d.nodes[static_cast<size_t>(there)];
    SolidArrow ar;
    bool here_src = x.degree > y.degree;
    ar.src = here_src ? here : there;
    ar.dst = here_src ? there : here;
    ar.length = e.l;
    ar.src_vertex = d.nodes[static_cast<size_t>(ar.src)].vertex;
    ar.dst_vertex = d.nodes[static_cast<size_t>(ar.dst)].vertex;
    ar.coef = identity<Fp>(s);
    d.arrows.push_back(ar);
  }
  // Columns.
  for (int i = 0; i < m; ++i) {
    const Element& g = w.x[static_cast<size_t>(i)];
    if (g.is_E()) continue;
    if (rel(i - 1) == Rel::Tilde) continue;
    int id = b.id(g);
    if (rel(i) == Rel::Tilde) {
      int j = i + 1;
      int left = i - 1, right = j + 1;
      if (w.cyclic) {
        left = (left + m) % m;
        right %= m;
      }
      if (left < 0 || right >= m) throw std::invalid_argument("gluing: column pair at an open end");
      DottedLink l;
      l.a = node_of[static_cast<size_t>(left)];
      l.b = node_of[static_cast<size_t>(right)];
      if (l.a < 0 || l.b < 0) throw std::invalid_argument("gluing: column pair without E neighbours");
      l.word_pos = i;
      l.column_elem = id;
      l.label = identity<Fp>(s);
      bool closing_left = w.cyclic && i == 0, closing_right = w.cyclic && j == m - 1;
      int closing_node = closing_left ? l.a : (closing_right ? l.b : -1);
      l.kind = b.id(w.x[static_cast<size_t>(j)]) == id ? DottedLink::Kind::Pair : DottedLink::Kind::Identify;
      if (closing_node >= 0) {
        l.label = wd.twist;
        l.label_node = l.kind == DottedLink::Kind::Identify ? (closing_node == l.a ? l.b : l.a) : closing_node;
      }
      if (l.kind == DottedLink::Kind::Pair) {
        l.equal_weight = w.x[static_cast<size_t>(left)] == w.x[static_cast<size_t>(right)];
        if (!l.equal_weight) {
          auto o = orient_pair(b, w, i);
          if (!o) throw std::logic_error("gluing: distinct neighbours left a pair undecided");
          l.a_to_b = *o;
        }
      }
      d.links.push_back(l);
      continue;
    }
    // Unpaired column at a string end.
    int e = i == 0 ? 1 : i - 1;
    if (m < 2 || (i != 0 && i != m - 1)) throw std::invalid_argument("gluing: unpaired column inside the word");
    GluingNode& n = d.nodes[static_cast<size_t>(node_of[static_cast<size_t>(e)])];
    n.column_elem = id;
    if (b.self_related(id)) {
      if (!wd.sd) throw std::invalid_argument("gluing: special end in a band");
      n.special_last = i == m - 1;
      if (wd.sd->kind == StringDatum::Kind::Bispecial)
        n.special = n.special_last ? wd.sd->d2 : wd.sd->d1;
      else
        n.special = wd.sd->delta;
    } else if (b.partner(id) >= 0 || b.boundary(id)) {
      throw std::invalid_argument("gluing: column end with a partner");
    }
  }
  return d;
}

GluingDiagram orient_equal_weight_links(GluingDiagram d) {
  bool open = std::any_of(d.links.begin(), d.links.end(),
                          [](const DottedLink& l) { return l.kind == DottedLink::Kind::Pair && !l.a_to_b; });
  if (!open) return d;
  // Same choice as the matrix problem: scan outward, left to right on a
  // symmetric band, and for undecidable string pairs the first indecomposable pick.
  std::map<int, bool> orient = pair_orientations(d.bunch, d.datum);
  for (auto& l : d.links)
    if (l.kind == DottedLink::Kind::Pair && !l.a_to_b) l.a_to_b = orient.at(l.word_pos);
  return d;
}

GluingDiagram move_arrows(GluingDiagram d) {
  if (d.moved) return d;
  if (!d.oriented()) throw std::invalid_argument("move_arrows: diagram has undirected pair links");
  d.summands = build_summands(d);
  // Per (degree, Ã vertex): square gluing matrix, rows = node copies, columns = summand copies.
  struct Slot {
    std::vector<int> nodes, sums;
    std::map<int, int> node_off, sum_off;
    MatF inv;
  };
  std::map<std::pair<int, int>, Slot> slots;
  for (size_t si = 0; si < d.summands.size(); ++si)
    for (auto& [n, blk] : d.summands[si].theta) {
      const GluingNode& nd = d.nodes[static_cast<size_t>(n)];
      Slot& sl = slots[{nd.degree, nd.vertex}];
      if (!sl.node_off.count(n)) {
        sl.node_off[n] = 0;
        sl.nodes.push_back(n);
      }
      if (!sl.sum_off.count(static_cast<int>(si))) {
        sl.sum_off[static_cast<int>(si)] = 0;
        sl.sums.push_back(static_cast<int>(si));
      }
    }
  for (auto& [key, sl] : slots) {
    int rows = 0, cols = 0;
    for (int n : sl.nodes) sl.node_off[n] = rows, rows += d.nodes[static_cast<size_t>(n)].mult;
    for (int si : sl.sums) sl.sum_off[si] = cols, cols += d.summands[static_cast<size_t>(si)].mult;
    if (rows != cols)
      throw std::invalid_argument("move_arrows: gluing at degree " + std::to_string(key.first) + " is not square");
    MatF th = MatF::Zero(rows, cols);
    for (int si : sl.sums)
      for (auto& [n, blk] : d.summands[static_cast<size_t>(si)].theta)
        if (sl.node_off.count(n) && d.nodes[static_cast<size_t>(n)].vertex == key.second)
          th.block(sl.node_off[n], sl.sum_off[si], blk.rows(), blk.cols()) = blk;
    auto inv = inverse(th);
    if (!inv) throw std::invalid_argument("move_arrows: singular gluing at degree " + std::to_string(key.first));
    sl.inv = *inv;
  }
  std::vector<SolidArrow> out;
  auto add = [&](SolidArrow a) {
    for (auto& o : out)
      if (o.src == a.src && o.dst == a.dst && o.length == a.length && o.src_vertex == a.src_vertex &&
          o.dst_vertex == a.dst_vertex) {
        o.coef += a.coef;
        o.moved = o.moved || a.moved;
        return;
      }
    out.push_back(a);
  };
  for (const SolidArrow& ar : d.arrows) {
    const GluingNode& Z = d.nodes[static_cast<size_t>(ar.dst)];
    const Slot& tsl = slots.at({Z.degree, Z.vertex});
    for (size_t si = 0; si < d.summands.size(); ++si) {
      const GluingSummand& S = d.summands[si];
      for (auto& [n, blk] : S.theta) {
        if (n != ar.src) continue;
        for (int ti : tsl.sums) {
          const GluingSummand& T = d.summands[static_cast<size_t>(ti)];
          MatF tinv = tsl.inv.block(tsl.sum_off.at(ti), tsl.node_off.at(ar.dst), T.mult, Z.mult);
          MatF c = tinv * ar.coef * blk;
          if (!nonzero(c)) continue;
          SolidArrow na = ar;
          na.src = static_cast<int>(si);
          na.dst = ti;
          na.coef = c;
          na.moved = !(S.merged || S.home == ar.src) || !(T.merged || T.home == ar.dst);
          add(na);
        }
      }
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const SolidArrow& a) { return !nonzero(a.coef); }), out.end());
  d.arrows = out;
  d.moved = true;
  return d;
}

GluingDiagram assign_subscripts(GluingDiagram d) {
  if (!d.moved) throw std::invalid_argument("assign_subscripts: arrows not moved yet");
  VertexMap vm = vertex_map(*d.nodal, d.bunch->config());
  for (const auto& l : d.links) {
    if (l.kind != DottedLink::Kind::Pair) continue;
    const Element& g = d.bunch->element(l.column_elem);
    int first = *l.a_to_b ? l.a : l.b;  // tail of the dotted arrow
    int sa = -1, sb = -1;
    for (size_t i = 0; i < d.summands.size(); ++i) {
      auto& S = d.summands[i];
      if (S.home != l.a && S.home != l.b) continue;
      S.vertex = column_vertex(vm, g, S.home == first ? 1 : 2);
      (S.home == l.a ? sa : sb) = static_cast<int>(i);
    }
    if (sa < 0 || sb < 0 || d.summands[static_cast<size_t>(sa)].vertex == d.summands[static_cast<size_t>(sb)].vertex)
      throw std::logic_error("assign_subscripts: no valid colouring of a pair link");
  }
  for (const auto& S : d.summands)
    if (S.vertex < 0) throw std::logic_error("assign_subscripts: summand left without a vertex");
  d.subscripted = true;
  return d;
}

MatF special_matrix(SpecialKind kind, int m) {
  if (m < 1) throw std::invalid_argument("special_matrix: m must be positive");
  MatF I = identity<Fp>(m), J = unipotent_J(m);
  switch (kind) {
    case SpecialKind::Ir_plus: return regrouped_rows(I, +1);
    case SpecialKind::Ir_minus: return regrouped_rows(I, -1);
    case SpecialKind::Jr_plus: return regrouped_rows(J, +1);
    case SpecialKind::Jr_minus: return regrouped_rows(J, -1);
    case SpecialKind::Ic_plus: return regrouped_columns(I, +1);
    case SpecialKind::Ic_minus: return regrouped_columns(I, -1);
    case SpecialKind::Jc_plus: return regrouped_columns(J, +1);
    case SpecialKind::Jc_minus: return regrouped_columns(J, -1);
  }
  throw std::logic_error("special_matrix: bad kind");
}

SpecialKind parse_special_kind(const std::string& name) {
  static const std::map<std::string, SpecialKind> names{
      {"I_r+", SpecialKind::Ir_plus}, {"I_r-", SpecialKind::Ir_minus}, {"J_r+", SpecialKind::Jr_plus},
      {"J_r-", SpecialKind::Jr_minus}, {"I_c+", SpecialKind::Ic_plus}, {"I_c-", SpecialKind::Ic_minus},
      {"J_c+", SpecialKind::Jc_plus}, {"J_c-", SpecialKind::Jc_minus}};
  auto it = names.find(name);
  if (it == names.end()) throw std::invalid_argument("unknown special matrix kind " + name);
  return it->second;
}

ProjComplex complex_from_diagram(const GluingDiagram& d) {
  if (!d.moved || !d.subscripted) throw std::invalid_argument("complex_from_diagram: unprocessed diagram");
  const NodalAlgebra& a = *d.nodal;
  const PathAlgebra& alg = *a.tilde;
  if (d.nodes.empty()) throw std::invalid_argument("complex_from_diagram: empty diagram");
  int lo = d.nodes[0].degree, hi = lo;
  for (auto& n : d.nodes) lo = std::min(lo, n.degree), hi = std::max(hi, n.degree);
  std::map<int, std::vector<int>> objs;    // degree -> A vertices
  std::vector<int> first_obj(d.summands.size());
  auto degree_of = [&](const GluingSummand& S) { return d.nodes[static_cast<size_t>(S.home)].degree; };
  for (size_t i = 0; i < d.summands.size(); ++i) {
    const auto& S = d.summands[i];
    auto& o = objs[degree_of(S)];
    first_obj[i] = static_cast<int>(o.size());
    for (int c = 0; c < S.mult; ++c) o.push_back(S.vertex);
  }
  // Offset of (object index, Ã vertex) inside the expansion.
  auto expanded_offset = [&](const std::vector<int>& ob, int idx, int nu) {
    int off = 0;
    for (int i = 0; i < idx; ++i) off += static_cast<int>(a.comps[static_cast<size_t>(ob[static_cast<size_t>(i)])].size());
    const auto& cs = a.comps[static_cast<size_t>(ob[static_cast<size_t>(idx)])];
    auto it = std::find(cs.begin(), cs.end(), nu);
    if (it == cs.end()) throw std::logic_error("complex_from_diagram: arrow end outside its summand");
    return off + static_cast<int>(it - cs.begin());
  };
  ProjComplex c(a.A, lo, hi);
  for (int k = lo; k <= hi; ++k) c.set_module(k, objs[k]);
  for (int k = lo + 1; k <= hi; ++k) {
    const auto& src = objs[k];
    const auto& dst = objs[k - 1];
    ProjMorphism f(alg, a.expand_objects(src), a.expand_objects(dst));
    for (const auto& ar : d.arrows) {
      const auto& S = d.summands[static_cast<size_t>(ar.src)];
      const auto& T = d.summands[static_cast<size_t>(ar.dst)];
      if (degree_of(S) != k) continue;
      if (degree_of(T) != k - 1) throw std::logic_error("complex_from_diagram: arrow skips a degree");
      AlgElem phi = phi_of_length(alg, ar.src_vertex, ar.dst_vertex, ar.length).at(0, 0);
      for (int r = 0; r < T.mult; ++r)
        for (int cc = 0; cc < S.mult; ++cc) {
          Fp x = ar.coef(r, cc);
          if (x.is_zero()) continue;
          int row = expanded_offset(dst, first_obj[static_cast<size_t>(ar.dst)] + r, ar.dst_vertex);
          int col = expanded_offset(src, first_obj[static_cast<size_t>(ar.src)] + cc, ar.src_vertex);
          f.set(row, col, f.at(row, col) + x * phi);
        }
    }
    c.set_differential(k, lift_expanded(a, f, src, dst));
  }
  return c;
}

GluingDiagram glue(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b, const Datum& d) {
  return assign_subscripts(move_arrows(orient_equal_weight_links(diagram_from_datum(a, b, d))));
}

ProjComplex glue_complex(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b, const Datum& d) {
  return complex_from_diagram(glue(a, b, d));
}

ProjComplex exceptional_complex(std::shared_ptr<const NodalAlgebra> a, int l, int f) {
  if (!a->has_tilde()) throw std::invalid_argument("exceptional_complex: algebra has no hereditary overring");
  for (size_t i = 0; i < a->comps.size(); ++i) {
    if (!a->first_type[i] || a->comps[i].size() != 1) continue;
    int q = a->comps[i][0];
    if (!a->tilde_killed(q)) continue;
    ProjMorphism phi = phi_of_length(*a->tilde, q, q, l);
    auto e = a->lift(phi, static_cast<int>(i), static_cast<int>(i));
    if (!e) throw std::invalid_argument("exceptional_complex: loop does not lift");
    ProjComplex c(a->A, f, f + 1);
    c.set_module(f, {static_cast<int>(i)});
    c.set_module(f + 1, {static_cast<int>(i)});
    ProjMorphism dk(*a->A, {static_cast<int>(i)}, {static_cast<int>(i)});
    dk.set(0, 0, *e);
    c.set_differential(f + 1, dk);
    return c;
  }
  throw std::invalid_argument("exceptional_complex: no killed vertex");
}

std::string format_diagram(const GluingDiagram& d) {
  std::ostringstream os;
  const auto& tq = d.nodal->tilde->quiver();
  const auto& aq = d.nodal->A->quiver();
  os << "diagram " << d.nodal->name << (d.truncated ? " truncated" : "") << "\n";
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    const auto& n = d.nodes[i];
    os << "node " << i << " degree " << n.degree << " vertex " << tq.vertex(n.vertex) << " mult " << n.mult;
    if (n.killed) os << " killed";
    if (n.special) os << " special " << (n.special > 0 ? '+' : '-') << (n.special_last ? " last" : " first");
    os << "\n";
  }
  for (const auto& l : d.links) {
    os << "link " << l.a << (l.kind == DottedLink::Kind::Pair ? (l.a_to_b ? (*l.a_to_b ? " -> " : " <- ") : " ? ") : " = ")
       << l.b;
    if (l.label_node >= 0) os << " label " << mat_str(l.label) << " at " << l.label_node;
    os << "\n";
  }
  for (size_t i = 0; i < d.summands.size(); ++i) {
    const auto& S = d.summands[i];
    os << "summand " << i << " home " << S.home << " vertex " << (S.vertex >= 0 ? aq.vertex(S.vertex) : "?")
       << " mult " << S.mult << "\n";
  }
  for (const auto& ar : d.arrows)
    os << "arrow " << ar.src << " -> " << ar.dst << " length " << ar.length << " coef " << mat_str(ar.coef)
       << (ar.moved ? " moved" : "") << "\n";
  os << "end\n";
  return os.str();
}

}  // namespace nodal
