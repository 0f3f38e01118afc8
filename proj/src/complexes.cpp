#include "nodal/complexes.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nodal {

ProjComplex::ProjComplex(std::shared_ptr<const PathAlgebra> alg, int lo, int hi)
    : alg_(std::move(alg)), lo_(lo), hi_(hi) {
  if (hi < lo - 1) throw std::invalid_argument("ProjComplex: bad window");
  mods_.assign(static_cast<size_t>(hi - lo + 1), {});
  for (int k = lo + 1; k <= hi; ++k) diffs_.emplace_back(std::vector<int>{}, std::vector<int>{});
}

bool ProjComplex::empty() const {
  for (const auto& m : mods_)
    if (!m.empty()) return false;
  return true;
}

const std::vector<int>& ProjComplex::module(int k) const {
  static const std::vector<int> none;
  if (k < lo_ || k > hi_) return none;
  return mods_[static_cast<size_t>(k - lo_)];
}

void ProjComplex::set_module(int k, std::vector<int> objs) {
  if (k < lo_ || k > hi_) throw std::out_of_range("set_module: degree outside window");
  for (int v : objs)
    if (v < 0 || v >= alg_->num_vertices()) throw std::out_of_range("set_module: bad vertex");
  mods_[static_cast<size_t>(k - lo_)] = std::move(objs);
  if (k > lo_) diffs_[static_cast<size_t>(k - lo_ - 1)] = ProjMorphism(module(k), module(k - 1));
  if (k < hi_) diffs_[static_cast<size_t>(k - lo_)] = ProjMorphism(module(k + 1), module(k));
}

ProjMorphism ProjComplex::differential(int k) const {
  if (k <= lo_ || k > hi_) return ProjMorphism(module(k), module(k - 1));
  return diffs_[static_cast<size_t>(k - lo_ - 1)];
}

void ProjComplex::set_differential(int k, ProjMorphism d) {
  if (k <= lo_ || k > hi_) {
    if (!d.is_zero() || d.rows() || d.cols()) throw std::out_of_range("set_differential: outside window");
    return;
  }
  if (d.src() != module(k) || d.dst() != module(k - 1))
    throw std::invalid_argument("set_differential: shape mismatch at degree " + std::to_string(k));
  diffs_[static_cast<size_t>(k - lo_ - 1)] = std::move(d);
}

int ProjComplex::total_rank() const {
  int n = 0;
  for (const auto& m : mods_) n += static_cast<int>(m.size());
  return n;
}

CheckReport check(const ProjComplex& c) {
  CheckReport rep;
  const PathAlgebra& a = c.algebra();
  for (int k = c.lo() + 1; k <= c.hi(); ++k) {
    ProjMorphism d = c.differential(k);
    for (int r = 0; r < d.rows(); ++r)
      for (int s = 0; s < d.cols(); ++s)
        if (!a.in_radical_power(d.at(r, s), 1)) {
          rep.is_minimal = false;
          rep.problems.push_back("entry outside the radical: d" + std::to_string(k) + "[" + std::to_string(r) +
                                 "," + std::to_string(s) + "]");
        }
    if (k - 1 > c.lo()) {
      ProjMorphism dd = compose(a, c.differential(k - 1), d);
      for (int r = 0; r < dd.rows(); ++r)
        for (int s = 0; s < dd.cols(); ++s)
          if (!dd.at(r, s).is_zero()) {
            rep.is_complex = false;
            rep.problems.push_back("d" + std::to_string(k - 1) + " d" + std::to_string(k) + " nonzero at [" +
                                   std::to_string(r) + "," + std::to_string(s) + "]");
          }
    }
  }
  return rep;
}

ProjComplex shift(const ProjComplex& c, int f) {
  ProjComplex out(c.algebra_ptr(), c.lo() + f, c.hi() + f);
  for (int k = c.lo(); k <= c.hi(); ++k) out.set_module(k + f, c.module(k));
  for (int k = c.lo() + 1; k <= c.hi(); ++k) out.set_differential(k + f, c.differential(k));
  return out;
}

namespace {

ProjMorphism block_diag(const ProjMorphism& a, const ProjMorphism& b) {
  std::vector<int> src = a.src(), dst = a.dst();
  src.insert(src.end(), b.src().begin(), b.src().end());
  dst.insert(dst.end(), b.dst().begin(), b.dst().end());
  ProjMorphism out(src, dst);
  for (int r = 0; r < a.rows(); ++r)
    for (int s = 0; s < a.cols(); ++s) out.at(r, s) = a.at(r, s);
  for (int r = 0; r < b.rows(); ++r)
    for (int s = 0; s < b.cols(); ++s) out.at(a.rows() + r, a.cols() + s) = b.at(r, s);
  return out;
}

}  // namespace

ProjComplex direct_sum(const ProjComplex& a, const ProjComplex& b) {
  if (&a.algebra() != &b.algebra()) throw std::invalid_argument("direct_sum: algebra mismatch");
  if (a.empty()) return b;
  if (b.empty()) return a;
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  ProjComplex out(a.algebra_ptr(), lo, hi);
  for (int k = lo; k <= hi; ++k) {
    std::vector<int> m = a.module(k);
    m.insert(m.end(), b.module(k).begin(), b.module(k).end());
    out.set_module(k, m);
  }
  for (int k = lo + 1; k <= hi; ++k) out.set_differential(k, block_diag(a.differential(k), b.differential(k)));
  return out;
}

ProjComplex trimmed(const ProjComplex& c) {
  int lo = c.lo(), hi = c.hi();
  while (lo <= hi && c.module(lo).empty()) ++lo;
  while (hi >= lo && c.module(hi).empty()) --hi;
  if (lo > hi) return ProjComplex(c.algebra_ptr(), 0, -1);
  ProjComplex out(c.algebra_ptr(), lo, hi);
  for (int k = lo; k <= hi; ++k) out.set_module(k, c.module(k));
  for (int k = lo + 1; k <= hi; ++k) out.set_differential(k, c.differential(k));
  return out;
}

namespace {

// Coordinates of ⊕ P_v cut at depth `level`: (summand, basis element ending at v).
struct Realization {
  std::vector<std::pair<int, int>> coords;
  std::map<std::pair<int, int>, Index> pos;
};

Realization realize(const PathAlgebra& a, const std::vector<int>& objs, int level) {
  Realization r;
  for (int s = 0; s < static_cast<int>(objs.size()); ++s)
    for (int v = 0; v < a.num_vertices(); ++v)
      for (int b : a.basis_between(v, objs[static_cast<size_t>(s)]))
        if (a.basis_length(b) < level) {
          r.pos[{s, b}] = static_cast<Index>(r.coords.size());
          r.coords.push_back({s, b});
        }
  return r;
}

MatF realize_map(const PathAlgebra& a, const ProjMorphism& d, const Realization& src, const Realization& dst) {
  MatF m = MatF::Zero(static_cast<Index>(dst.coords.size()), static_cast<Index>(src.coords.size()));
  for (size_t j = 0; j < src.coords.size(); ++j) {
    auto [s, b] = src.coords[j];
    AlgElem z = a.basis_elem(b);
    for (int r = 0; r < d.rows(); ++r) {
      const AlgElem& e = d.at(r, s);
      if (e.is_zero()) continue;
      for (const auto& [bc, coef] : a.mul(z, e).terms) {
        auto it = dst.pos.find({r, bc});
        if (it != dst.pos.end()) m(it->second, static_cast<Index>(j)) += coef;
      }
    }
  }
  return m;
}

int longest_path(const PathAlgebra& a, const ProjMorphism& d) {
  int l = 0;
  for (int r = 0; r < d.rows(); ++r)
    for (int s = 0; s < d.cols(); ++s)
      for (const auto& [b, c] : d.at(r, s).terms) l = std::max(l, a.basis_length(b));
  return l;
}

std::optional<int> homology_at(const ProjComplex& c, int k, int level) {
  const PathAlgebra& a = c.algebra();
  ProjMorphism dk = c.differential(k), dk1 = c.differential(k + 1);
  const int cut = level - longest_path(a, dk);
  if (cut < 1) return std::nullopt;
  Realization here = realize(a, c.module(k), level);
  Realization below = realize(a, c.module(k - 1), level);
  MatF ker = kernel<Fp>(realize_map(a, dk, here, below));
  std::vector<Index> low_rows;
  for (size_t i = 0; i < here.coords.size(); ++i)
    if (a.basis_length(here.coords[i].second) < cut) low_rows.push_back(static_cast<Index>(i));
  MatF proj(static_cast<Index>(low_rows.size()), ker.cols());
  for (size_t i = 0; i < low_rows.size(); ++i) proj.row(static_cast<Index>(i)) = ker.row(low_rows[i]);
  Realization here_cut = realize(a, c.module(k), cut);
  Realization above_cut = realize(a, c.module(k + 1), cut);
  MatF im = realize_map(a, dk1, above_cut, here_cut);
  return static_cast<int>(rank<Fp>(proj) - rank<Fp>(im));
}

}  // namespace

HomologyResult homology_dims(const ProjComplex& c, int k) {
  HomologyResult res;
  if (c.module(k).empty()) return res;
  const int n = c.algebra().truncation();
  auto full = homology_at(c, k, n);
  if (!full) throw std::invalid_argument("homology_dims: truncation too small for the differentials");
  res.dim = *full;
  auto lower = homology_at(c, k, n - 2);
  res.stable = lower && *lower == *full;
  return res;
}

ProjComplex base_change_tilde(const NodalAlgebra& n, const ProjComplex& c) {
  if (!n.has_tilde()) throw std::invalid_argument(n.name + ": unsupported algebra for base change");
  if (&c.algebra() != n.A.get()) throw std::invalid_argument("base_change_tilde: complex is over another algebra");
  ProjComplex out(n.tilde, c.lo(), c.hi());
  for (int k = c.lo(); k <= c.hi(); ++k) out.set_module(k, n.expand_objects(c.module(k)));
  for (int k = c.lo() + 1; k <= c.hi(); ++k) out.set_differential(k, n.embed_morphism(c.differential(k)));
  return out;
}

namespace {

struct Unknown {
  int k, r, c, b;
};

}  // namespace

std::vector<std::vector<ProjMorphism>> chain_map_basis(const ProjComplex& x, const ProjComplex& y, int lo, int hi) {
  const PathAlgebra& a = x.algebra();
  if (&a != &y.algebra()) throw std::invalid_argument("chain maps: algebra mismatch");
  std::vector<Unknown> unk;
  std::map<std::tuple<int, int, int>, std::vector<int>> unk_of;  // (k, r, c) -> unknown ids
  for (int k = lo; k <= hi; ++k)
    for (int r = 0; r < static_cast<int>(y.module(k).size()); ++r)
      for (int c = 0; c < static_cast<int>(x.module(k).size()); ++c)
        for (int b : a.basis_between(x.module(k)[static_cast<size_t>(c)], y.module(k)[static_cast<size_t>(r)])) {
          unk_of[{k, r, c}].push_back(static_cast<int>(unk.size()));
          unk.push_back({k, r, c, b});
        }
  // Equation rows: entry (r, c) of y.d_k f_k - f_{k-1} x.d_k, one row per basis element.
  std::map<std::tuple<int, int, int, int>, Index> row_of;
  auto row = [&](int k, int r, int c, int b) {
    auto key = std::make_tuple(k, r, c, b);
    auto it = row_of.find(key);
    if (it != row_of.end()) return it->second;
    Index id = static_cast<Index>(row_of.size());
    row_of.emplace(key, id);
    return id;
  };
  std::vector<std::tuple<Index, Index, Fp>> trip;
  for (int k = lo + 1; k <= hi; ++k) {
    ProjMorphism dy = y.differential(k), dx = x.differential(k);
    // y.d_k after f_k: sum_m f_k[m][c] * dy[r][m].
    for (int m = 0; m < dy.cols(); ++m)
      for (int c = 0; c < static_cast<int>(x.module(k).size()); ++c) {
        auto it = unk_of.find({k, m, c});
        if (it == unk_of.end()) continue;
        for (int u : it->second)
          for (int r = 0; r < dy.rows(); ++r) {
            if (dy.at(r, m).is_zero()) continue;
            for (const auto& [bb, coef] : a.mul(a.basis_elem(unk[static_cast<size_t>(u)].b), dy.at(r, m)).terms)
              trip.emplace_back(row(k, r, c, bb), u, coef);
          }
      }
    // f_{k-1} after x.d_k: sum_m dx[m][c] * f_{k-1}[r][m].
    for (int r = 0; r < static_cast<int>(y.module(k - 1).size()); ++r)
      for (int m = 0; m < dx.rows(); ++m) {
        auto it = unk_of.find({k - 1, r, m});
        if (it == unk_of.end()) continue;
        for (int u : it->second)
          for (int c = 0; c < dx.cols(); ++c) {
            if (dx.at(m, c).is_zero()) continue;
            for (const auto& [bb, coef] : a.mul(dx.at(m, c), a.basis_elem(unk[static_cast<size_t>(u)].b)).terms)
              trip.emplace_back(row(k, r, c, bb), u, -coef);
          }
      }
  }
  MatF sys = MatF::Zero(static_cast<Index>(row_of.size()), static_cast<Index>(unk.size()));
  for (const auto& [r, c, v] : trip) sys(r, c) += v;
  MatF ker = unk.empty() ? MatF(0, 0) : kernel<Fp>(sys);
  std::vector<std::vector<ProjMorphism>> out;
  for (Index j = 0; j < ker.cols(); ++j) {
    std::vector<ProjMorphism> f;
    for (int k = lo; k <= hi; ++k) f.emplace_back(x.module(k), y.module(k));
    for (size_t u = 0; u < unk.size(); ++u) {
      Fp v = ker(static_cast<Index>(u), j);
      if (v.is_zero()) continue;
      const Unknown& q = unk[u];
      f[static_cast<size_t>(q.k - lo)].at(q.r, q.c) += v * a.basis_elem(q.b);
    }
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

// Scalar part of a degreewise map; invertible exactly when the map is.
MatF scalar_matrix(const PathAlgebra& a, const ProjMorphism& f) {
  MatF s(f.rows(), f.cols());
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) s(r, c) = a.scalar_part(f.at(r, c));
  return s;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

IsoResult chain_isomorphic(const ProjComplex& x, const ProjComplex& y, uint32_t seed) {
  IsoResult res;
  if (&x.algebra() != &y.algebra()) return res;
  int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
  for (int k = lo; k <= hi; ++k)
    if (sorted(x.module(k)) != sorted(y.module(k))) return res;
  res.lo = lo;
  auto basis = chain_map_basis(x, y, lo, hi);
  const PathAlgebra& a = x.algebra();
  // Each basis map reduces to its scalar parts; work in that projection.
  std::vector<std::vector<MatF>> scal;
  for (const auto& f : basis) {
    std::vector<MatF> s;
    for (const auto& fk : f) s.push_back(scalar_matrix(a, fk));
    scal.push_back(std::move(s));
  }
  auto combine = [&](const std::vector<Fp>& coef) {
    std::vector<MatF> s;
    for (int k = lo; k <= hi; ++k)
      s.push_back(MatF::Zero(static_cast<Index>(y.module(k).size()), static_cast<Index>(x.module(k).size())));
    for (size_t j = 0; j < basis.size(); ++j)
      if (!coef[j].is_zero())
        for (size_t k = 0; k < s.size(); ++k) s[k] += coef[j] * scal[j][k];
    return s;
  };
  auto invertible = [&](const std::vector<MatF>& s) {
    for (const auto& m : s)
      if (m.rows() && !is_invertible<Fp>(m)) return false;
    return true;
  };
  auto witness = [&](const std::vector<Fp>& coef) {
    std::vector<ProjMorphism> w;
    for (int k = lo; k <= hi; ++k) w.emplace_back(x.module(k), y.module(k));
    for (size_t j = 0; j < basis.size(); ++j)
      if (!coef[j].is_zero())
        for (size_t k = 0; k < w.size(); ++k)
          for (int r = 0; r < w[k].rows(); ++r)
            for (int c = 0; c < w[k].cols(); ++c) w[k].at(r, c) += coef[j] * basis[j][k].at(r, c);
    return w;
  };
  if (x.total_rank() == 0) {
    res.isomorphic = true;
    for (int k = lo; k <= hi; ++k) res.witness.emplace_back(std::vector<int>{}, std::vector<int>{});
    return res;
  }
  if (basis.empty()) return res;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<uint32_t> dist(0, Fp::characteristic() - 1);
  for (int trial = 0; trial < 32; ++trial) {
    std::vector<Fp> coef(basis.size());
    for (auto& c : coef) c = Fp(dist(rng));
    if (invertible(combine(coef))) {
      res.isomorphic = true;
      res.witness = witness(coef);
      return res;
    }
  }
  // Exhaustive search over the scalar projection when it is small.
  Index total = 0;
  for (const auto& m : scal[0]) total += m.size();
  MatF proj(total, static_cast<Index>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    Index off = 0;
    for (const auto& m : scal[j])
      for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) proj(off++, static_cast<Index>(j)) = m(r, c);
  }
  auto rr = rref<Fp>(proj);
  const uint64_t p = Fp::characteristic();
  uint64_t combos = 1;
  for (Index i = 0; i < rr.rank && combos <= (1u << 20); ++i) combos *= p;
  if (rr.rank > 4 || combos > (1u << 20)) return res;
  for (uint64_t n = 1; n < combos; ++n) {
    std::vector<Fp> coef(basis.size(), Fp(0));
    uint64_t t = n;
    for (Index i = 0; i < rr.rank; ++i) {
      coef[static_cast<size_t>(rr.pivots[static_cast<size_t>(i)])] = Fp(static_cast<long long>(t % p));
      t /= p;
    }
    if (invertible(combine(coef))) {
      res.isomorphic = true;
      res.witness = witness(coef);
      return res;
    }
  }
  return res;
}

std::string format_complex(const ProjComplex& c, const std::string& algebra_name) {
  const PathAlgebra& a = c.algebra();
  std::ostringstream os;
  os << "complex " << algebra_name << "\n";
  os << "truncate " << a.truncation() << "\n";
  for (int k = c.hi(); k >= c.lo(); --k) {
    os << "degree " << k << " :";
    for (int v : c.module(k)) os << " " << a.quiver().vertex(v);
    os << "\n";
  }
  for (int k = c.hi(); k > c.lo(); --k) {
    ProjMorphism d = c.differential(k);
    for (int r = 0; r < d.rows(); ++r)
      for (int s = 0; s < d.cols(); ++s)
        if (!d.at(r, s).is_zero())
          os << "d " << k << " [" << r << "," << s << "] : " << a.str(d.at(r, s)) << "\n";
  }
  return os.str();
}

std::string complex_algebra_name(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string w, name;
    if (!(ls >> w) || w[0] == '#') continue;
    if (w != "complex" || !(ls >> name)) throw std::invalid_argument("complex text must start with 'complex <algebra>'");
    return name;
  }
  throw std::invalid_argument("empty complex text");
}

ProjComplex parse_complex(const std::string& text, std::shared_ptr<const PathAlgebra> alg) {
  std::map<int, std::vector<int>> mods;
  struct Entry {
    int k, r, c;
    std::string elem;
  };
  std::vector<Entry> entries;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string w;
    if (!(ls >> w)) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("complex line " + std::to_string(lineno) + ": " + why);
    };
    if (w == "complex" || w == "truncate") continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) fail("missing ':'");
    if (w == "degree") {
      int k;
      if (!(ls >> k)) fail("bad degree");
      std::istringstream vs(line.substr(colon + 1));
      std::vector<int> objs;
      std::string v;
      while (vs >> v) {
        auto id = alg->quiver().find_vertex(v);
        if (!id) fail("unknown vertex '" + v + "'");
        objs.push_back(*id);
      }
      mods[k] = objs;
    } else if (w == "d") {
      int k, r, c;
      char b1, comma, b2;
      if (!(ls >> k >> b1 >> r >> comma >> c >> b2) || b1 != '[' || comma != ',' || b2 != ']')
        fail("expected 'd k [r,c] : element'");
      entries.push_back({k, r, c, line.substr(colon + 1)});
    } else {
      fail("unrecognised line");
    }
  }
  if (mods.empty()) return ProjComplex(alg, 0, -1);
  ProjComplex out(alg, mods.begin()->first, mods.rbegin()->first);
  for (auto& [k, m] : mods) out.set_module(k, m);
  std::map<int, ProjMorphism> ds;
  for (const auto& e : entries) {
    if (e.k <= out.lo() || e.k > out.hi()) throw std::invalid_argument("differential outside the degree window");
    auto it = ds.find(e.k);
    if (it == ds.end()) it = ds.emplace(e.k, out.differential(e.k)).first;
    ProjMorphism& d = it->second;
    if (e.r < 0 || e.r >= d.rows() || e.c < 0 || e.c >= d.cols())
      throw std::invalid_argument("differential entry index out of range");
    d.set(e.r, e.c, alg->parse_elem(e.elem, d.src()[static_cast<size_t>(e.c)], d.dst()[static_cast<size_t>(e.r)]));
  }
  for (auto& [k, d] : ds) out.set_differential(k, d);
  return out;
}

}  // namespace nodal
