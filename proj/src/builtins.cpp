#include "nodal/builtins.hpp"

#include <algorithm>
#include <stdexcept>

namespace nodal {

namespace {

Path path_of(const Quiver& q, std::initializer_list<std::string> labels) {
  Path p;
  for (const auto& l : labels) {
    auto a = q.find_arrow(l);
    if (!a) throw std::logic_error("builtin: unknown arrow " + l);
    p.push_back(*a);
  }
  return p;
}

Relation zero_rel(const Quiver& q, std::initializer_list<std::string> labels) {
  return Relation{{{Fp(1), path_of(q, labels)}}};
}

Relation commute_rel(const Quiver& q, std::initializer_list<std::string> lhs,
                     std::initializer_list<std::string> rhs) {
  return Relation{{{Fp(1), path_of(q, lhs)}, {Fp(-1), path_of(q, rhs)}}};
}

ProjMorphism scaled(const ProjMorphism& f, Fp c) {
  ProjMorphism out = f;
  for (int r = 0; r < f.rows(); ++r)
    for (int s = 0; s < f.cols(); ++s) out.at(r, s) *= c;
  return out;
}

NodalAlgebra bare(std::string name, Presentation p) {
  NodalAlgebra n;
  n.name = std::move(name);
  n.A = std::make_shared<const PathAlgebra>(std::move(p));
  n.first_type.assign(static_cast<size_t>(n.A->num_vertices()), false);
  return n;
}

Presentation dihedral_pres(int trunc) {
  Presentation p;
  p.name = "dihedral";
  p.truncation = trunc;
  p.quiver.add_vertex("1");
  p.quiver.add_arrow("1", "1", "x");
  p.quiver.add_arrow("1", "1", "y");
  p.relations.push_back(zero_rel(p.quiver, {"x", "x"}));
  p.relations.push_back(zero_rel(p.quiver, {"y", "y"}));
  return p;
}

// Two-vertex cycle used as Ã for both dihedral and Gelfand.
Presentation two_cycle(const std::string& name, const std::string& v1, const std::string& v2,
                       const std::string& a12, const std::string& a21, int trunc) {
  Presentation p;
  p.name = name;
  p.truncation = trunc;
  p.quiver.add_vertex(v1);
  p.quiver.add_vertex(v2);
  p.quiver.add_arrow(v1, v2, a12);
  p.quiver.add_arrow(v2, v1, a21);
  return p;
}

Presentation dihedral_tilde_pres(int trunc) { return two_cycle("dihedral_tilde", "1", "2", "y", "x", trunc); }
Presentation gelfand_tilde_pres(int trunc) { return two_cycle("gelfand_tilde", "P", "Q", "a", "c", trunc); }

Presentation gelfand_pres(int trunc) {
  Presentation p;
  p.name = "gelfand";
  p.truncation = trunc;
  for (auto v : {"1", "2", "3"}) p.quiver.add_vertex(v);
  p.quiver.add_arrow("1", "3", "ap");
  p.quiver.add_arrow("3", "1", "am");
  p.quiver.add_arrow("2", "3", "bp");
  p.quiver.add_arrow("3", "2", "bm");
  p.relations.push_back(commute_rel(p.quiver, {"am", "ap"}, {"bm", "bp"}));
  return p;
}

Presentation cycle_pres(int d, int trunc) {
  if (d < 1) throw std::invalid_argument("cycle: size must be >= 1");
  Presentation p;
  p.name = "cycle(" + std::to_string(d) + ")";
  p.truncation = trunc;
  if (d == 1) {
    p.quiver.add_vertex("0");
    p.quiver.add_arrow("0", "0", "t");
    return p;
  }
  for (int i = 0; i < d; ++i) p.quiver.add_vertex(std::to_string(i));
  for (int i = 0; i < d; ++i)
    p.quiver.add_arrow(std::to_string(i), std::to_string((i + 1) % d), "t" + std::to_string(i));
  return p;
}

Presentation hc_even_pres(int l, int trunc) {
  if (l < 1) throw std::invalid_argument("harish_chandra_even: l must be >= 1");
  Presentation p;
  p.name = "harish_chandra_even(" + std::to_string(l) + ")";
  p.truncation = trunc;
  const std::string centre = std::to_string(l + 1);
  p.quiver.add_vertex("0p");
  p.quiver.add_vertex("0m");
  p.quiver.add_vertex(centre);
  auto v = [&](int i) { return i == 0 ? centre : std::to_string(i); };
  for (int i = 1; i <= l - 1; ++i) p.quiver.add_vertex(v(i));
  p.quiver.add_arrow(centre, "0p", "ap");
  p.quiver.add_arrow(centre, "0m", "am");
  p.quiver.add_arrow("0p", centre, "bp");
  p.quiver.add_arrow("0m", centre, "bm");
  for (int i = 1; i <= l - 1; ++i) {
    p.quiver.add_arrow(v(i - 1), v(i), "c" + std::to_string(i));
    p.quiver.add_arrow(v(i), v(i - 1), "d" + std::to_string(i));
  }
  const Quiver& q = p.quiver;
  p.relations.push_back(commute_rel(q, {"ap", "bp"}, {"am", "bm"}));
  if (l >= 2) {
    for (auto s : {"ap", "am"}) p.relations.push_back(zero_rel(q, {"d1", s}));
    for (auto s : {"bp", "bm"}) p.relations.push_back(zero_rel(q, {s, "c1"}));
  }
  for (int i = 1; i <= l - 2; ++i) {
    std::string ci = "c" + std::to_string(i), cj = "c" + std::to_string(i + 1);
    std::string di = "d" + std::to_string(i), dj = "d" + std::to_string(i + 1);
    p.relations.push_back(zero_rel(q, {ci, cj}));
    p.relations.push_back(zero_rel(q, {dj, di}));
  }
  return p;
}

Presentation hc_odd_pres(int l, int trunc) {
  if (l < 1) throw std::invalid_argument("harish_chandra_odd: l must be >= 1");
  Presentation p;
  p.name = "harish_chandra_odd(" + std::to_string(l) + ")";
  p.truncation = trunc;
  for (int i = 0; i <= l; ++i) p.quiver.add_vertex(std::to_string(i));
  p.quiver.add_arrow("0", "0", "a");
  for (int i = 1; i <= l; ++i) {
    p.quiver.add_arrow(std::to_string(i - 1), std::to_string(i), "c" + std::to_string(i));
    p.quiver.add_arrow(std::to_string(i), std::to_string(i - 1), "d" + std::to_string(i));
  }
  const Quiver& q = p.quiver;
  p.relations.push_back(zero_rel(q, {"d1", "a"}));
  p.relations.push_back(zero_rel(q, {"a", "c1"}));
  // The list also has d1 after a and c1 before a; those paths do not compose.
  p.vacuous = {"a then d1", "c1 then a"};
  for (int i = 1; i <= l - 1; ++i) {
    std::string ci = "c" + std::to_string(i), cj = "c" + std::to_string(i + 1);
    std::string di = "d" + std::to_string(i), dj = "d" + std::to_string(i + 1);
    p.relations.push_back(zero_rel(q, {ci, cj}));
    p.relations.push_back(zero_rel(q, {dj, di}));
  }
  return p;
}

// Chain 1..m with a pair of nodes hanging off each end.
Presentation twin_node_quiver(const std::string& name, int m, int trunc) {
  Presentation p;
  p.name = name + "(" + std::to_string(m) + ")";
  p.truncation = trunc;
  const std::string hi = std::to_string(m + 1);
  p.quiver.add_vertex("0p");
  p.quiver.add_vertex("0m");
  for (int i = 1; i <= m; ++i) p.quiver.add_vertex(std::to_string(i));
  p.quiver.add_vertex(hi + "p");
  p.quiver.add_vertex(hi + "m");
  const std::string one = "1", last = std::to_string(m);
  for (auto s : {"p", "m"}) {
    p.quiver.add_arrow(one, std::string("0") + s, std::string("a1") + s);
    p.quiver.add_arrow(std::string("0") + s, one, std::string("b1") + s);
    p.quiver.add_arrow(last, hi + s, std::string("a2") + s);
    p.quiver.add_arrow(hi + s, last, std::string("b2") + s);
  }
  for (int i = 1; i <= m - 1; ++i) {
    p.quiver.add_arrow(std::to_string(i), std::to_string(i + 1), "c" + std::to_string(i));
    p.quiver.add_arrow(std::to_string(i + 1), std::to_string(i), "d" + std::to_string(i));
  }
  return p;
}

Presentation twin_node_gentle_pres(int m, int trunc) {
  if (m < 1) throw std::invalid_argument("twin_node_gentle: m must be >= 1");
  Presentation p = twin_node_quiver("twin_node_gentle", m, trunc);
  const Quiver& q = p.quiver;
  for (auto k : {"1", "2"}) {
    std::string a = std::string("a") + k, b = std::string("b") + k;
    p.relations.push_back(commute_rel(q, {a + "p", b + "p"}, {a + "m", b + "m"}));
    for (auto s1 : {"p", "m"})
      for (auto s2 : {"p", "m"}) p.relations.push_back(zero_rel(q, {b + s2, a + s1}));
  }
  for (int i = 1; i <= m - 1; ++i) {
    std::string c = "c" + std::to_string(i), d = "d" + std::to_string(i);
    p.relations.push_back(zero_rel(q, {d, c}));
    p.relations.push_back(zero_rel(q, {c, d}));
  }
  return p;
}

Presentation twin_node_chain_pres(int m, int trunc) {
  if (m < 2) throw std::invalid_argument("twin_node_chain: m must be >= 2");
  Presentation p = twin_node_quiver("twin_node_chain", m, trunc);
  const Quiver& q = p.quiver;
  for (auto k : {"1", "2"}) {
    std::string a = std::string("a") + k, b = std::string("b") + k;
    p.relations.push_back(commute_rel(q, {a + "p", b + "p"}, {a + "m", b + "m"}));
  }
  const std::string cl = "c" + std::to_string(m - 1), dl = "d" + std::to_string(m - 1);
  for (auto s : {"p", "m"}) {
    p.relations.push_back(zero_rel(q, {"d1", std::string("a1") + s}));
    p.relations.push_back(zero_rel(q, {std::string("b1") + s, "c1"}));
    p.relations.push_back(zero_rel(q, {cl, std::string("a2") + s}));
    p.relations.push_back(zero_rel(q, {std::string("b2") + s, dl}));
  }
  for (int i = 1; i <= m - 2; ++i) {
    std::string ci = "c" + std::to_string(i), cj = "c" + std::to_string(i + 1);
    std::string di = "d" + std::to_string(i), dj = "d" + std::to_string(i + 1);
    p.relations.push_back(zero_rel(q, {ci, cj}));
    p.relations.push_back(zero_rel(q, {dj, di}));
  }
  return p;
}

ProjMorphism single_block(std::vector<int> src, std::vector<int> dst, int r,
                          int c, const AlgElem& e) {
  ProjMorphism m(std::move(src), std::move(dst));
  m.set(r, c, e);
  return m;
}

}  // namespace

bool NodalAlgebra::tilde_killed(int c) const {
  bool hit = false;
  for (size_t i = 0; i < comps.size(); ++i)
    for (int x : comps[i])
      if (x == c) {
        hit = true;
        if (!first_type[i]) return false;
      }
  return hit;
}

ProjMorphism NodalAlgebra::embed(const AlgElem& a) const {
  if (!tilde) throw std::invalid_argument(name + ": no hereditary embedding available");
  const auto& src = comps.at(static_cast<size_t>(a.src));
  const auto& dst = comps.at(static_cast<size_t>(a.dst));
  ProjMorphism out(src, dst);
  for (const auto& [b, c] : a.terms) {
    auto it = embed_cache_.find(b);
    if (it == embed_cache_.end()) {
      ProjMorphism img;
      if (A->basis_length(b) == 0) {
        img = identity_morphism(*tilde, comps[static_cast<size_t>(A->basis_src(b))]);
      } else {
        const Path& p = A->basis_path(b);
        img = arrow_image.at(static_cast<size_t>(p[0]));
        for (size_t k = 1; k < p.size(); ++k) img = compose(*tilde, arrow_image.at(static_cast<size_t>(p[k])), img);
      }
      it = embed_cache_.emplace(b, std::move(img)).first;
    }
    out = add(out, scaled(it->second, c));
  }
  return out;
}

std::vector<int> NodalAlgebra::expand_objects(const std::vector<int>& objs) const {
  std::vector<int> out;
  for (int v : objs) {
    const auto& cs = comps.at(static_cast<size_t>(v));
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

ProjMorphism NodalAlgebra::embed_morphism(const ProjMorphism& f) const {
  ProjMorphism out(expand_objects(f.src()), expand_objects(f.dst()));
  int r0 = 0;
  for (int r = 0; r < f.rows(); ++r) {
    int c0 = 0;
    for (int c = 0; c < f.cols(); ++c) {
      ProjMorphism blk = embed(f.at(r, c));
      for (int i = 0; i < blk.rows(); ++i)
        for (int j = 0; j < blk.cols(); ++j) out.at(r0 + i, c0 + j) = blk.at(i, j);
      c0 += static_cast<int>(comps[static_cast<size_t>(f.src()[static_cast<size_t>(c)])].size());
    }
    r0 += static_cast<int>(comps[static_cast<size_t>(f.dst()[static_cast<size_t>(r)])].size());
  }
  return out;
}

namespace {

// Coordinates of a block over the concatenated bases of its entries.
VecF flatten(const PathAlgebra& t, const ProjMorphism& m) {
  Index n = 0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      n += static_cast<Index>(t.basis_between(m.src()[static_cast<size_t>(c)], m.dst()[static_cast<size_t>(r)]).size());
  VecF v = VecF::Zero(n);
  Index off = 0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const auto& bs = t.basis_between(m.src()[static_cast<size_t>(c)], m.dst()[static_cast<size_t>(r)]);
      for (const auto& [b, coef] : m.at(r, c).terms) {
        auto pos = std::find(bs.begin(), bs.end(), b) - bs.begin();
        v(off + pos) = coef;
      }
      off += static_cast<Index>(bs.size());
    }
  return v;
}

}  // namespace

const NodalAlgebra::LiftTable& NodalAlgebra::lift_table(int src, int dst) const {
  auto key = std::make_pair(src, dst);
  auto it = lift_cache_.find(key);
  if (it != lift_cache_.end()) return it->second;
  LiftTable t;
  t.basis = A->basis_between(src, dst);
  std::vector<VecF> cols;
  for (int b : t.basis) cols.push_back(flatten(*tilde, embed(A->basis_elem(b))));
  Index rows = cols.empty() ? flatten(*tilde, ProjMorphism(comps[static_cast<size_t>(src)], comps[static_cast<size_t>(dst)])).size()
                            : cols[0].size();
  t.images = MatF::Zero(rows, static_cast<Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) t.images.col(static_cast<Index>(j)) = cols[j];
  return lift_cache_.emplace(key, std::move(t)).first->second;
}

std::optional<AlgElem> NodalAlgebra::lift(const ProjMorphism& block, int src, int dst) const {
  if (!tilde) throw std::invalid_argument(name + ": no hereditary embedding available");
  if (block.src() != comps.at(static_cast<size_t>(src)) || block.dst() != comps.at(static_cast<size_t>(dst)))
    throw std::invalid_argument("lift: block shape does not match the vertices");
  const LiftTable& t = lift_table(src, dst);
  auto sol = solve<Fp>(t.images, flatten(*tilde, block));
  if (!sol.consistent) return std::nullopt;
  AlgElem out = A->zero(src, dst);
  for (size_t j = 0; j < t.basis.size(); ++j)
    if (!sol.particular(static_cast<Index>(j)).is_zero())
      out += sol.particular(static_cast<Index>(j)) * A->basis_elem(t.basis[j]);
  return out;
}

std::pair<std::vector<int>, std::vector<int>> NodalAlgebra::radical_profiles() const {
  if (!tilde) throw std::invalid_argument(name + ": no hereditary embedding available");
  const int n = A->truncation();
  std::vector<int> a(static_cast<size_t>(n), 0), t(static_cast<size_t>(n), 0);
  for (int b = 0; b < A->dim(); ++b)
    if (A->basis_length(b) > 0) ++a[static_cast<size_t>(A->basis_length(b))];
  for (int i = 0; i < A->num_vertices(); ++i)
    for (int j = 0; j < A->num_vertices(); ++j)
      for (int c : comps[static_cast<size_t>(i)])
        for (int d : comps[static_cast<size_t>(j)])
          for (int b : tilde->basis_between(c, d))
            if (tilde->basis_length(b) > 0) ++t[static_cast<size_t>(tilde->basis_length(b))];
  return {a, t};
}

PathAlgebra cycle_algebra(int d, int truncation) { return PathAlgebra(cycle_pres(d, truncation)); }

std::vector<std::string> builtin_names() {
  return {"dihedral",           "dihedral_tilde",    "gelfand",          "gelfand_tilde",  "cycle",
          "harish_chandra_even", "harish_chandra_odd", "twin_node_gentle", "twin_node_chain"};
}

NodalAlgebra builtin(const std::string& name, int param, int truncation) {
  if (name == "dihedral") {
    NodalAlgebra n = bare(name, dihedral_pres(truncation));
    auto t = std::make_shared<const PathAlgebra>(dihedral_tilde_pres(truncation));
    n.tilde = t;
    n.comps = {{0, 1}};
    const int xt = *t->quiver().find_arrow("x"), yt = *t->quiver().find_arrow("y");
    // x ↦ (0 t; 0 0) lives on 2 -> 1, y ↦ (0 0; 1 0) on 1 -> 2.
    n.arrow_image.push_back(single_block({0, 1}, {0, 1}, 0, 1, t->arrow(xt)));
    n.arrow_image.push_back(single_block({0, 1}, {0, 1}, 1, 0, t->arrow(yt)));
    return n;
  }
  if (name == "gelfand") {
    NodalAlgebra n = bare(name, gelfand_pres(truncation));
    auto t = std::make_shared<const PathAlgebra>(gelfand_tilde_pres(truncation));
    n.tilde = t;
    n.comps = {{0}, {0}, {1}};
    n.first_type = {false, false, true};
    const AlgElem a = t->arrow(*t->quiver().find_arrow("a")), c = t->arrow(*t->quiver().find_arrow("c"));
    n.arrow_image.push_back(single_block({0}, {1}, 0, 0, a));  // ap: 1 -> 3
    n.arrow_image.push_back(single_block({1}, {0}, 0, 0, c));  // am: 3 -> 1
    n.arrow_image.push_back(single_block({0}, {1}, 0, 0, a));  // bp: 2 -> 3
    n.arrow_image.push_back(single_block({1}, {0}, 0, 0, c));  // bm: 3 -> 2
    return n;
  }
  if (name == "dihedral_tilde") return bare(name, dihedral_tilde_pres(truncation));
  if (name == "gelfand_tilde") return bare(name, gelfand_tilde_pres(truncation));
  if (name == "cycle") return bare(name, cycle_pres(param, truncation));
  if (name == "harish_chandra_even") {
    NodalAlgebra n = bare(name, hc_even_pres(param, truncation));
    n.first_type[static_cast<size_t>(*n.A->quiver().find_vertex(std::to_string(param + 1)))] = true;
    return n;
  }
  if (name == "harish_chandra_odd") {
    NodalAlgebra n = bare(name, hc_odd_pres(param, truncation));
    n.first_type[static_cast<size_t>(*n.A->quiver().find_vertex(std::to_string(param)))] = true;
    return n;
  }
  if (name == "twin_node_gentle") return bare(name, twin_node_gentle_pres(param, truncation));
  if (name == "twin_node_chain") return bare(name, twin_node_chain_pres(param, truncation));
  throw std::invalid_argument("unknown algebra '" + name + "'");
}

}  // namespace nodal
