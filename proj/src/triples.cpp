#include "nodal/triples.hpp"

#include <sstream>

namespace nodal {

namespace {

VecF coords(const PathAlgebra& alg, const AlgElem& a) {
  VecF v = VecF::Zero(alg.dim());
  for (auto& [b, c] : a.terms) v(b) = c;
  return v;
}

AlgElem from_coords(const PathAlgebra& alg, const VecF& x, const std::vector<int>& basis, int src, int dst) {
  AlgElem out = alg.zero(src, dst);
  for (size_t j = 0; j < basis.size(); ++j)
    if (!x(static_cast<Index>(j)).is_zero()) out += x(static_cast<Index>(j)) * alg.basis_elem(basis[j]);
  return out;
}

// u in e_from Ã e_to with p*u = q (right) or u*p = q (left).
AlgElem divide(const PathAlgebra& alg, const AlgElem& p, const AlgElem& q, int from, int to, bool right) {
  const auto& basis = alg.basis_between(from, to);
  MatF m = MatF::Zero(alg.dim(), static_cast<Index>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    AlgElem b = alg.basis_elem(basis[j]);
    m.col(static_cast<Index>(j)) = coords(alg, right ? alg.mul(p, b) : alg.mul(b, p));
  }
  auto sol = solve<Fp>(m, coords(alg, q));
  if (!sol.consistent) throw std::runtime_error("ladder reduction: division fails below the truncation");
  return from_coords(alg, sol.particular, basis, from, to);
}

// Working copy of a complex over Ã with per-degree scalar base change.
struct Reducer {
  const PathAlgebra& alg;
  int lo, hi;
  std::map<int, std::vector<int>> obj;
  std::map<int, ProjMorphism> d;   // d[k]: degree k -> k-1
  std::map<int, MatF> Q;           // scalar part of the change of basis in degree k

  bool has(int k) const { return d.count(k) > 0; }

  // row t2 -= row t * u in d_k (basis change in degree k-1).
  void row_op(int k, int t, int t2, const AlgElem& u) {
    ProjMorphism& m = d.at(k);
    for (int c = 0; c < m.cols(); ++c) {
      if (m.at(t, c).is_zero()) continue;
      m.at(t2, c) -= alg.mul(m.at(t, c), u);
    }
    if (has(k - 1)) {
      ProjMorphism& n = d.at(k - 1);
      for (int r = 0; r < n.rows(); ++r) {
        if (n.at(r, t2).is_zero()) continue;
        n.at(r, t) += alg.mul(u, n.at(r, t2));
      }
    }
    Fp s = alg.scalar_part(u);
    if (!s.is_zero()) Q.at(k - 1).row(t2) -= s * Q.at(k - 1).row(t);
  }

  // col s2 -= h * col s in d_k (basis change in degree k).
  void col_op(int k, int s, int s2, const AlgElem& h) {
    ProjMorphism& m = d.at(k);
    for (int r = 0; r < m.rows(); ++r) {
      if (m.at(r, s).is_zero()) continue;
      m.at(r, s2) -= alg.mul(h, m.at(r, s));
    }
    if (has(k + 1)) {
      ProjMorphism& n = d.at(k + 1);
      for (int c = 0; c < n.cols(); ++c) {
        if (n.at(s2, c).is_zero()) continue;
        n.at(s, c) += alg.mul(n.at(s2, c), h);
      }
    }
    Fp sc = alg.scalar_part(h);
    if (!sc.is_zero()) Q.at(k).row(s) += sc * Q.at(k).row(s2);
  }

  // col s <- v * col s, v a unit at the vertex of s with inverse vi.
  void col_scale(int k, int s, const AlgElem& v, const AlgElem& vi) {
    ProjMorphism& m = d.at(k);
    for (int r = 0; r < m.rows(); ++r)
      if (!m.at(r, s).is_zero()) m.at(r, s) = alg.mul(v, m.at(r, s));
    if (has(k + 1)) {
      ProjMorphism& n = d.at(k + 1);
      for (int c = 0; c < n.cols(); ++c)
        if (!n.at(s, c).is_zero()) n.at(s, c) = alg.mul(n.at(s, c), vi);
    }
    Q.at(k).row(s) *= alg.scalar_part(vi);
  }

  void reduce() {
    std::map<int, std::vector<bool>> src_matched;  // per degree k: summand is the source of a d_k pivot
    for (int k = lo + 1; k <= hi; ++k) {
      ProjMorphism& m = d.at(k);
      int R = m.rows(), C = m.cols();
      std::vector<bool> excluded(static_cast<size_t>(R), false);
      if (src_matched.count(k - 1)) excluded = src_matched[k - 1];
      std::vector<bool> rdone(static_cast<size_t>(R), false), cdone(static_cast<size_t>(C), false);
      for (;;) {
        int bt = -1, bs = -1, bl = alg.truncation() + 1;
        for (int t = 0; t < R; ++t) {
          if (excluded[static_cast<size_t>(t)] || rdone[static_cast<size_t>(t)]) continue;
          for (int s = 0; s < C; ++s) {
            if (cdone[static_cast<size_t>(s)] || m.at(t, s).is_zero()) continue;
            int l = alg.valuation(m.at(t, s));
            if (l < bl) bl = l, bt = t, bs = s;
          }
        }
        if (bt < 0) break;
        if (bl == 0) throw std::invalid_argument("ladder reduction: complex is not minimal");
        int vs = obj.at(k)[static_cast<size_t>(bs)], vt = obj.at(k - 1)[static_cast<size_t>(bt)];
        AlgElem phi = phi_of_length(alg, vs, vt, bl).at(0, 0);
        AlgElem v = divide(alg, m.at(bt, bs), phi, vs, vs, false);
        AlgElem vi = divide(alg, v, alg.idempotent(vs), vs, vs, true);
        col_scale(k, bs, v, vi);
        for (int t2 = 0; t2 < R; ++t2) {
          if (t2 == bt || excluded[static_cast<size_t>(t2)] || m.at(t2, bs).is_zero()) continue;
          int v2 = obj.at(k - 1)[static_cast<size_t>(t2)];
          row_op(k, bt, t2, divide(alg, phi, m.at(t2, bs), vt, v2, true));
        }
        for (int s2 = 0; s2 < C; ++s2) {
          if (s2 == bs || m.at(bt, s2).is_zero()) continue;
          int v2 = obj.at(k)[static_cast<size_t>(s2)];
          col_op(k, bs, s2, divide(alg, phi, m.at(bt, s2), v2, vs, false));
        }
        rdone[static_cast<size_t>(bt)] = cdone[static_cast<size_t>(bs)] = true;
      }
      // Rows hit by d_{k-1} pivots compose to zero with them; what is left
      // there lives beyond the truncation.
      for (int t = 0; t < R; ++t)
        if (excluded[static_cast<size_t>(t)])
          for (int s = 0; s < C; ++s) m.at(t, s) = alg.zero(m.at(t, s).src, m.at(t, s).dst);
      src_matched[k] = cdone;
    }
  }
};

ProjMorphism scalar_morphism(const PathAlgebra& alg, const MatF& s, const std::vector<int>& src,
                             const std::vector<int>& dst) {
  ProjMorphism out(alg, src, dst);
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) {
      if (s(r, c).is_zero()) continue;
      if (src[static_cast<size_t>(c)] != dst[static_cast<size_t>(r)])
        throw std::invalid_argument("scalar map between different vertices");
      out.set(r, c, s(r, c) * alg.idempotent(src[static_cast<size_t>(c)]));
    }
  return out;
}

// Incidence of A-copies (columns) in their expansion (rows).
MatF incidence(const NodalAlgebra& a, const std::vector<int>& mods, const std::vector<int>& copies_of) {
  int rows = static_cast<int>(a.expand_objects(mods).size());
  MatF inc = MatF::Zero(rows, static_cast<Index>(copies_of.size()));
  std::vector<int> start;
  int off = 0;
  for (int v : mods) {
    start.push_back(off);
    off += static_cast<int>(a.comps[static_cast<size_t>(v)].size());
  }
  for (size_t j = 0; j < copies_of.size(); ++j) {
    int i = copies_of[j];
    int v = mods[static_cast<size_t>(i)];
    for (size_t c = 0; c < a.comps[static_cast<size_t>(v)].size(); ++c)
      inc(start[static_cast<size_t>(i)] + static_cast<int>(c), static_cast<Index>(j)) = Fp(1);
  }
  return inc;
}

}  // namespace

MatF Triple::comparison(int k, int s) const {
  const auto& comps = nodal->comps.at(static_cast<size_t>(s));
  const auto& mods = tilde.module(k);
  const auto& cols = m.at(k);
  const MatF& h = H.at(k);
  std::vector<Index> rs, cs;
  for (size_t r = 0; r < mods.size(); ++r)
    if (std::find(comps.begin(), comps.end(), mods[r]) != comps.end()) rs.push_back(static_cast<Index>(r));
  for (size_t c = 0; c < cols.size(); ++c)
    if (cols[c] == s) cs.push_back(static_cast<Index>(c));
  MatF out(static_cast<Index>(rs.size()), static_cast<Index>(cs.size()));
  for (size_t i = 0; i < rs.size(); ++i)
    for (size_t j = 0; j < cs.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = h(rs[i], cs[j]);
  return out;
}

std::vector<Ladder> ladders(const ProjComplex& c) {
  const PathAlgebra& alg = c.algebra();
  std::vector<Ladder> out;
  for (int k = c.lo() + 1; k <= c.hi(); ++k) {
    ProjMorphism d = c.differential(k);
    std::vector<int> row_used(static_cast<size_t>(d.rows()), 0);
    for (int s = 0; s < d.cols(); ++s) {
      int found = -1;
      for (int t = 0; t < d.rows(); ++t) {
        if (d.at(t, s).is_zero()) continue;
        if (found >= 0 || row_used[static_cast<size_t>(t)]) throw std::invalid_argument("complex is not in ladder form");
        found = t;
      }
      if (found < 0) continue;
      const AlgElem& e = d.at(found, s);
      int l = alg.valuation(e);
      AlgElem phi = phi_of_length(alg, e.src, e.dst, l).at(0, 0);
      if (!(phi == e)) throw std::invalid_argument("ladder entry is not a single path");
      row_used[static_cast<size_t>(found)] = 1;
      out.push_back({k, s, found, l});
    }
  }
  return out;
}

Triple functor_F(std::shared_ptr<const NodalAlgebra> a, const ProjComplex& p) {
  if (&p.algebra() != a->A.get()) throw std::invalid_argument("functor_F: complex is over another algebra");
  auto rep = check(p);
  if (!rep.is_complex) throw std::invalid_argument("functor_F: input is not a complex");
  if (!rep.is_minimal) throw std::invalid_argument("functor_F: input is not minimal");
  ProjComplex pt = base_change_tilde(*a, p);
  const PathAlgebra& alg = *a->tilde;
  Reducer red{alg, p.lo(), p.hi(), {}, {}, {}};
  for (int k = p.lo(); k <= p.hi(); ++k) {
    red.obj[k] = pt.module(k);
    red.Q[k] = identity<Fp>(static_cast<Index>(pt.module(k).size()));
  }
  for (int k = p.lo() + 1; k <= p.hi(); ++k) red.d[k] = pt.differential(k);
  red.reduce();

  Triple t;
  t.nodal = a;
  t.tilde = ProjComplex(a->tilde, p.lo(), p.hi());
  for (int k = p.lo(); k <= p.hi(); ++k) t.tilde.set_module(k, red.obj[k]);
  for (int k = p.lo() + 1; k <= p.hi(); ++k) t.tilde.set_differential(k, red.d[k]);
  for (int k = p.lo(); k <= p.hi(); ++k) {
    std::vector<int> copies;
    std::vector<int>& mk = t.m[k];
    const auto& mods = p.module(k);
    for (size_t i = 0; i < mods.size(); ++i)
      if (!a->first_type[static_cast<size_t>(mods[i])]) {
        copies.push_back(static_cast<int>(i));
        mk.push_back(mods[i]);
      }
    MatF h = red.Q[k] * incidence(*a, mods, copies);
    const auto& tm = red.obj[k];
    for (size_t r = 0; r < tm.size(); ++r)
      if (a->tilde_killed(tm[r])) h.row(static_cast<Index>(r)).setZero();
    t.H[k] = h;
  }
  return t;
}

bool check_nondegenerate(const Triple& t, std::string* why) {
  const NodalAlgebra& a = *t.nodal;
  for (int k = t.tilde.lo(); k <= t.tilde.hi(); ++k) {
    const auto& mods = t.tilde.module(k);
    const auto& cols = t.m.at(k);
    const MatF& h = t.H.at(k);
    for (int nu = 0; nu < a.tilde->num_vertices(); ++nu) {
      if (a.tilde_killed(nu)) continue;
      std::vector<Index> rs, cs;
      for (size_t r = 0; r < mods.size(); ++r)
        if (mods[r] == nu) rs.push_back(static_cast<Index>(r));
      for (size_t c = 0; c < cols.size(); ++c) {
        const auto& comps = a.comps[static_cast<size_t>(cols[c])];
        if (std::find(comps.begin(), comps.end(), nu) != comps.end()) cs.push_back(static_cast<Index>(c));
      }
      MatF blk(static_cast<Index>(rs.size()), static_cast<Index>(cs.size()));
      for (size_t i = 0; i < rs.size(); ++i)
        for (size_t j = 0; j < cs.size(); ++j) blk(static_cast<Index>(i), static_cast<Index>(j)) = h(rs[i], cs[j]);
      std::ostringstream os;
      os << "degree " << k << ", vertex " << a.tilde->quiver().vertex(nu);
      if (rs.size() != cs.size()) {
        if (why) *why = os.str() + ": comparison matrix is not square";
        return false;
      }
      if (!is_invertible(blk)) {
        if (why) *why = os.str() + ": comparison matrix is singular";
        return false;
      }
    }
  }
  return true;
}

ProjMorphism lift_expanded(const NodalAlgebra& a, const ProjMorphism& f, const std::vector<int>& src,
                           const std::vector<int>& dst) {
  const PathAlgebra& alg = *a.tilde;
  ProjMorphism lifted(*a.A, src, dst);
  int r0 = 0;
  for (size_t r = 0; r < dst.size(); ++r) {
    const auto& rc = a.comps[static_cast<size_t>(dst[r])];
    int c0 = 0;
    for (size_t c = 0; c < src.size(); ++c) {
      const auto& cc = a.comps[static_cast<size_t>(src[c])];
      ProjMorphism blk(alg, cc, rc);
      for (size_t i = 0; i < rc.size(); ++i)
        for (size_t j = 0; j < cc.size(); ++j)
          blk.set(static_cast<int>(i), static_cast<int>(j), f.at(r0 + static_cast<int>(i), c0 + static_cast<int>(j)));
      auto e = a.lift(blk, src[c], dst[r]);
      if (!e) throw std::runtime_error("differential block does not lift to A");
      lifted.set(static_cast<int>(r), static_cast<int>(c), *e);
      c0 += static_cast<int>(cc.size());
    }
    r0 += static_cast<int>(rc.size());
  }
  return lifted;
}

ProjComplex functor_G(const Triple& t) {
  std::string why;
  if (!check_nondegenerate(t, &why)) throw std::invalid_argument("functor_G: degenerate triple: " + why);
  const NodalAlgebra& a = *t.nodal;
  const PathAlgebra& alg = *a.tilde;
  int lo = t.tilde.lo(), hi = t.tilde.hi();
  auto vm_killed = [&](int nu) {
    for (size_t i = 0; i < a.comps.size(); ++i)
      if (a.first_type[i] && std::find(a.comps[i].begin(), a.comps[i].end(), nu) != a.comps[i].end())
        return static_cast<int>(i);
    throw std::invalid_argument("functor_G: killed vertex without a first-type cover");
  };
  std::map<int, std::vector<int>> mods;
  std::map<int, MatF> theta, theta_inv;
  for (int k = lo; k <= hi; ++k) {
    const auto& tm = t.tilde.module(k);
    std::vector<int> objs = t.m.at(k);
    std::vector<int> killed_rows;
    for (size_t r = 0; r < tm.size(); ++r)
      if (a.tilde_killed(tm[r])) {
        objs.push_back(vm_killed(tm[r]));
        killed_rows.push_back(static_cast<int>(r));
      }
    std::vector<int> ex = a.expand_objects(objs);
    if (ex.size() != tm.size()) throw std::invalid_argument("functor_G: ranks do not match");
    MatF th = MatF::Zero(static_cast<Index>(tm.size()), static_cast<Index>(ex.size()));
    int col = 0;
    size_t ncopies = t.m.at(k).size();
    for (size_t j = 0; j < objs.size(); ++j) {
      for (int nu : a.comps[static_cast<size_t>(objs[j])]) {
        if (j < ncopies) {
          for (size_t r = 0; r < tm.size(); ++r)
            if (tm[r] == nu) th(static_cast<Index>(r), col) = t.H.at(k)(static_cast<Index>(r), static_cast<Index>(j));
        } else {
          th(killed_rows[j - ncopies], col) = Fp(1);
        }
        ++col;
      }
    }
    auto inv = inverse(th);
    if (!inv) throw std::invalid_argument("functor_G: comparison does not give an isomorphism");
    mods[k] = objs;
    theta[k] = th;
    theta_inv[k] = *inv;
  }
  ProjComplex out(a.A, lo, hi);
  for (int k = lo; k <= hi; ++k) out.set_module(k, mods[k]);
  for (int k = lo + 1; k <= hi; ++k) {
    std::vector<int> exs = a.expand_objects(mods[k]), ext = a.expand_objects(mods[k - 1]);
    ProjMorphism th = scalar_morphism(alg, theta[k], exs, t.tilde.module(k));
    ProjMorphism ti = scalar_morphism(alg, theta_inv[k - 1], t.tilde.module(k - 1), ext);
    ProjMorphism dk = compose(alg, ti, compose(alg, t.tilde.differential(k), th));
    ProjMorphism lifted = lift_expanded(a, dk, mods[k], mods[k - 1]);
    out.set_differential(k, lifted);
  }
  return out;
}

// ---------------------------------------------------------------- bunch bridge

namespace {

// A-vertex -> columns (n, v, part) it contributes.
std::map<int, std::vector<std::tuple<int, int, int>>> columns_of(const VertexMap& vm) {
  std::map<int, std::vector<std::tuple<int, int, int>>> out;
  for (auto& [key, av] : vm.column_vertex) out[av].push_back(key);
  return out;
}

}  // namespace

BunchRep triple_to_bunchrep(const Triple& t, std::shared_ptr<const Bunch> bp) {
  const Bunch& b = *bp;
  const NodalAlgebra& a = *t.nodal;
  VertexMap vm = vertex_map(a, b.config());
  int lo = t.tilde.lo(), hi = t.tilde.hi();
  auto lad = ladders(t.tilde);
  // Element of each (degree, summand) row.
  std::map<std::pair<int, int>, Element> elem;
  auto nv = [&](int tv) { return vm.of_tilde.at(static_cast<size_t>(tv)); };
  for (const Ladder& l : lad) {
    int vs = t.tilde.module(l.k)[static_cast<size_t>(l.src)], vt = t.tilde.module(l.k - 1)[static_cast<size_t>(l.dst)];
    auto [ns, ps] = nv(vs);
    auto [nt, pt] = nv(vt);
    elem[{l.k, l.src}] = Element{Sym::Beta, ns, ps, l.length, l.k};
    elem[{l.k - 1, l.dst}] = Element{Sym::Alpha, nt, pt, l.length, l.k - 1};
  }
  for (int k = lo; k <= hi; ++k)
    for (size_t r = 0; r < t.tilde.module(k).size(); ++r)
      if (!elem.count({k, static_cast<int>(r)})) {
        auto [n, v] = nv(t.tilde.module(k)[r]);
        elem[{k, static_cast<int>(r)}] = Element{Sym::Rho, n, v, 0, k};
      }
  auto id_of = [&](const Element& e) {
    auto id = b.find(e);
    if (!id) throw std::invalid_argument("triple_to_bunchrep: " + element_str(e) + " is outside the window");
    return *id;
  };
  BunchRep r(bp);
  // Row position inside each class: ladders share one index at both ends.
  std::map<Stripe, int> count;
  std::map<std::pair<int, int>, int> pos;
  auto place = [&](int k, int row) {
    const Element& e = elem.at({k, row});
    auto [n, v] = std::pair{e.n, e.v};
    if (!b.config().is_live(n, v)) return;
    Stripe c = r.class_of({id_of(e), 0});
    pos[{k, row}] = count[c]++;
  };
  for (const Ladder& l : lad) {
    bool s_live = !a.tilde_killed(t.tilde.module(l.k)[static_cast<size_t>(l.src)]);
    bool t_live = !a.tilde_killed(t.tilde.module(l.k - 1)[static_cast<size_t>(l.dst)]);
    if (s_live && t_live) {
      place(l.k, l.src);
      pos[{l.k - 1, l.dst}] = pos.at({l.k, l.src});
    } else if (s_live) {
      place(l.k, l.src);
    } else if (t_live) {
      place(l.k - 1, l.dst);
    }
  }
  for (int k = lo; k <= hi; ++k)
    for (size_t row = 0; row < t.tilde.module(k).size(); ++row)
      if (elem.at({k, static_cast<int>(row)}).sym == Sym::Rho && !a.tilde_killed(t.tilde.module(k)[row]))
        place(k, static_cast<int>(row));
  // Columns.
  auto cols = columns_of(vm);
  std::map<std::pair<int, int>, std::vector<std::pair<Stripe, int>>> colpos;  // (k, copy) -> (stripe, index)
  std::map<Stripe, int> ccount;
  for (int k = lo; k <= hi; ++k) {
    const auto& mk = t.m.at(k);
    for (size_t j = 0; j < mk.size(); ++j) {
      int idx = -1;
      for (auto [n, v, part] : cols[mk[j]]) {
        Element g{Sym::G, n, v, 0, k};
        Stripe s{id_of(g), part};
        Stripe c = r.class_of(s);
        if (idx < 0) idx = ccount[c]++;
        colpos[{k, static_cast<int>(j)}].push_back({s, idx});
      }
    }
  }
  for (auto& [c, n] : count) r.set_dim(c, n);
  for (auto& [c, n] : ccount) r.set_dim(c, n);
  std::map<int, MatF> mats;
  for (int k : r.blocks()) mats[k] = MatF::Zero(r.rows(k), r.cols(k));
  for (auto& [key, p] : pos) {
    auto [k, row] = key;
    int eid = id_of(elem.at(key));
    int blk = b.block_of(eid);
    int ro = r.row_offset(blk, {eid, 0}) + p;
    for (auto& [cj, list] : colpos) {
      if (cj.first != k) continue;
      for (auto& [s, idx] : list) {
        if (b.block_of(s.elem) != blk) continue;
        mats[blk](ro, r.col_offset(blk, s) + idx) = t.H.at(k)(row, cj.second);
      }
    }
  }
  for (auto& [k, m] : mats) r.set_matrix(k, m);
  return r;
}

Triple triple_from_bunchrep(const BunchRep& r, std::shared_ptr<const NodalAlgebra> a) {
  const Bunch& b = r.bunch();
  VertexMap vm = vertex_map(*a, b.config());
  auto tv = [&](int n, int v) { return vm.tilde.at({n, v}); };
  // Summands per degree: (Ã vertex, stripe, index) with stripe.elem < 0 for killed ends.
  struct Row {
    int vertex;
    int elem;
    int idx;
  };
  std::map<int, std::vector<Row>> rows;
  struct Pending {
    int k, src_row, dst_row, l;
  };
  std::vector<Pending> lads;
  int lo = 0, hi = 0;
  bool first = true;
  auto note = [&](int k) {
    if (first) lo = hi = k, first = false;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  };
  auto add_row = [&](int k, Row row) {
    note(k);
    rows[k].push_back(row);
    return static_cast<int>(rows[k].size()) - 1;
  };
  for (Stripe c : r.classes()) {
    const Element& e = b.element(c.elem);
    if (!e.is_E()) continue;
    for (int i = 0; i < r.dim(c); ++i) {
      int p = b.partner(c.elem);
      if (e.sym == Sym::Rho) {
        add_row(e.f, {tv(e.n, e.v), c.elem, i});
        continue;
      }
      // Ladder from the beta end (degree f) to the alpha end (degree f - 1).
      int beta = e.sym == Sym::Beta ? c.elem : p;
      int alpha = e.sym == Sym::Alpha ? c.elem : p;
      auto [s_v, t_v] = b.ladder_ends(e);
      int n = e.n;
      int kb = e.sym == Sym::Beta ? e.f : e.f + 1;
      int sr = add_row(kb, {tv(n, s_v), beta, i});
      int tr = add_row(kb - 1, {tv(n, t_v), alpha, i});
      lads.push_back({kb, sr, tr, e.l});
    }
  }
  for (Stripe c : r.classes()) note(b.element(c.elem).f);
  Triple t;
  t.nodal = a;
  t.tilde = ProjComplex(a->tilde, lo, hi);
  for (int k = lo; k <= hi; ++k) {
    std::vector<int> objs;
    for (auto& row : rows[k]) objs.push_back(row.vertex);
    t.tilde.set_module(k, objs);
  }
  for (int k = lo + 1; k <= hi; ++k) {
    ProjMorphism d(*a->tilde, t.tilde.module(k), t.tilde.module(k - 1));
    for (auto& l : lads)
      if (l.k == k) {
        int vs = rows[k][static_cast<size_t>(l.src_row)].vertex, vt = rows[k - 1][static_cast<size_t>(l.dst_row)].vertex;
        d.set(l.dst_row, l.src_row, phi_of_length(*a->tilde, vs, vt, l.l).at(0, 0));
      }
    t.tilde.set_differential(k, d);
  }
  // Columns: one copy per class index, A vertex from the column map.
  std::map<int, std::vector<std::pair<Stripe, int>>> colkey;  // degree -> (class, index) per copy
  for (Stripe c : r.classes()) {
    const Element& e = b.element(c.elem);
    if (e.is_E()) continue;
    auto it = vm.column_vertex.find({e.n, e.v, c.part});
    if (it == vm.column_vertex.end()) throw std::invalid_argument("triple_from_bunchrep: column without A vertex");
    for (int i = 0; i < r.dim(c); ++i) {
      t.m[e.f].push_back(it->second);
      colkey[e.f].push_back({c, i});
    }
  }
  for (int k = lo; k <= hi; ++k) {
    t.m[k];
    MatF h = MatF::Zero(static_cast<Index>(rows[k].size()), static_cast<Index>(t.m[k].size()));
    for (size_t ri = 0; ri < rows[k].size(); ++ri) {
      const Row& row = rows[k][ri];
      if (row.elem < 0 || a->tilde_killed(row.vertex)) continue;
      int blk = b.block_of(row.elem);
      MatF mb = r.matrix(blk);
      int ro = r.row_offset(blk, {row.elem, 0}) + row.idx;
      for (size_t j = 0; j < colkey[k].size(); ++j) {
        auto [c, idx] = colkey[k][j];
        for (Stripe s : r.col_stripes(blk))
          if (r.class_of(s) == c) h(static_cast<Index>(ri), static_cast<Index>(j)) = mb(ro, r.col_offset(blk, s) + idx);
      }
    }
    t.H[k] = h;
  }
  return t;
}

// ---------------------------------------------------------------- text

std::string format_triple(const Triple& t) {
  std::ostringstream os;
  os << "triple " << t.nodal->name << "\n";
  os << format_complex(t.tilde, t.nodal->name + "_tilde");
  os << "end complex\n";
  const auto& q = t.nodal->A->quiver();
  for (auto& [k, mk] : t.m) {
    os << "m " << k << " :";
    for (int v : mk) os << " " << q.vertex(v);
    os << "\n";
  }
  for (auto& [k, h] : t.H) {
    os << "H " << k << " " << h.rows() << " " << h.cols() << "\n";
    for (Index i = 0; i < h.rows(); ++i) {
      for (Index j = 0; j < h.cols(); ++j) os << (j ? " " : "") << h(i, j).centered();
      os << "\n";
    }
  }
  os << "end\n";
  return os.str();
}

Triple parse_triple(const std::string& text, std::shared_ptr<const NodalAlgebra> a) {
  std::istringstream is(text);
  std::string line, ctext;
  if (!std::getline(is, line) || line.rfind("triple", 0) != 0) throw std::invalid_argument("expected 'triple'");
  while (std::getline(is, line) && line != "end complex") ctext += line + "\n";
  Triple t;
  t.nodal = a;
  t.tilde = parse_complex(ctext, a->tilde);
  std::string tok;
  while (is >> tok) {
    if (tok == "end") return t;
    int k;
    if (tok == "m") {
      is >> k;
      std::getline(is, line);
      std::istringstream ls(line.substr(line.find(':') + 1));
      std::string v;
      auto& mk = t.m[k];
      while (ls >> v) {
        auto id = a->A->quiver().find_vertex(v);
        if (!id) throw std::invalid_argument("unknown vertex " + v);
        mk.push_back(*id);
      }
    } else if (tok == "H") {
      Index rr, cc;
      is >> k >> rr >> cc;
      MatF h(rr, cc);
      for (Index i = 0; i < rr; ++i)
        for (Index j = 0; j < cc; ++j) {
          long long x;
          if (!(is >> x)) throw std::invalid_argument("bad comparison entry");
          h(i, j) = Fp(x);
        }
      t.H[k] = h;
    } else {
      throw std::invalid_argument("unexpected token " + tok);
    }
  }
  throw std::invalid_argument("missing 'end'");
}

}  // namespace nodal
