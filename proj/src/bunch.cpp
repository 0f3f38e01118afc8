#include "nodal/bunch.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nodal {

// ---------------------------------------------------------------- config

bool BunchConfig::is_live(int n, int v) const {
  if (n < 1 || n > static_cast<int>(live.size())) return false;
  const auto& l = live[static_cast<size_t>(n - 1)];
  return std::find(l.begin(), l.end(), v) != l.end();
}

int BunchConfig::wrap(int n, int v) const {
  int d = cycle_length.at(static_cast<size_t>(n - 1));
  return ((v - 1) % d + d) % d + 1;
}

BunchConfig dihedral_config() {
  BunchConfig c;
  c.name = "dihedral";
  c.cycle_length = {2};
  c.live = {{1, 2}};
  c.second = {{{1, 1}, {1, 2}}};
  return c;
}

BunchConfig gelfand_config() {
  BunchConfig c;
  c.name = "gelfand";
  c.cycle_length = {2};
  c.live = {{1}};
  c.third = {{1, 1}};
  return c;
}

namespace {

struct Cycles {
  std::vector<std::pair<int, int>> of_tilde;  // Ã vertex -> (n, v)
  std::vector<int> length;
};

Cycles tilde_cycles(const PathAlgebra& t) {
  const Quiver& q = t.quiver();
  int nv = q.num_vertices();
  std::vector<int> out(static_cast<size_t>(nv), -1), indeg(static_cast<size_t>(nv), 0);
  for (int a = 0; a < q.num_arrows(); ++a) {
    auto s = static_cast<size_t>(q.arrow(a).src);
    if (out[s] >= 0) throw std::invalid_argument("bunch: Ã vertex with two outgoing arrows");
    out[s] = q.arrow(a).dst;
    ++indeg[static_cast<size_t>(q.arrow(a).dst)];
  }
  for (int v = 0; v < nv; ++v)
    if (out[static_cast<size_t>(v)] < 0 || indeg[static_cast<size_t>(v)] != 1)
      throw std::invalid_argument("bunch: Ã is not a union of oriented cycles");
  Cycles c;
  c.of_tilde.assign(static_cast<size_t>(nv), {0, 0});
  for (int v = 0; v < nv; ++v) {
    if (c.of_tilde[static_cast<size_t>(v)].first != 0) continue;
    int n = static_cast<int>(c.length.size()) + 1;
    int pos = 1, u = v;
    do {
      c.of_tilde[static_cast<size_t>(u)] = {n, pos++};
      u = out[static_cast<size_t>(u)];
    } while (u != v);
    c.length.push_back(pos - 1);
  }
  return c;
}

}  // namespace

BunchConfig config_from_nodal(const NodalAlgebra& a) {
  if (!a.has_tilde()) throw std::invalid_argument("bunch: algebra " + a.name + " has no Ã");
  Cycles cyc = tilde_cycles(*a.tilde);
  BunchConfig c;
  c.name = a.name;
  c.cycle_length = cyc.length;
  c.live.assign(cyc.length.size(), {});
  int nt = a.tilde->num_vertices();
  for (int t = 0; t < nt; ++t) {
    if (a.tilde_killed(t)) continue;
    auto [n, v] = cyc.of_tilde[static_cast<size_t>(t)];
    c.live[static_cast<size_t>(n - 1)].push_back(v);
  }
  for (auto& l : c.live) std::sort(l.begin(), l.end());
  std::set<int> seen_third;
  for (size_t i = 0; i < a.comps.size(); ++i) {
    if (a.first_type[i]) continue;
    const auto& cs = a.comps[i];
    if (cs.size() == 2) {
      c.second.push_back({cyc.of_tilde[static_cast<size_t>(cs[0])], cyc.of_tilde[static_cast<size_t>(cs[1])]});
    } else if (cs.size() == 1) {
      if (seen_third.insert(cs[0]).second) c.third.push_back(cyc.of_tilde[static_cast<size_t>(cs[0])]);
    } else {
      throw std::invalid_argument("bunch: unsupported simple of A");
    }
  }
  return c;
}

VertexMap vertex_map(const NodalAlgebra& a, const BunchConfig&) {
  Cycles cyc = tilde_cycles(*a.tilde);
  VertexMap m;
  m.of_tilde = cyc.of_tilde;
  for (size_t t = 0; t < cyc.of_tilde.size(); ++t) m.tilde[cyc.of_tilde[t]] = static_cast<int>(t);
  std::map<int, int> third_count;
  for (size_t i = 0; i < a.comps.size(); ++i) {
    int av = static_cast<int>(i);
    const auto& cs = a.comps[i];
    if (a.first_type[i]) {
      for (int t : cs) m.killed_vertex[t] = av;
      continue;
    }
    if (cs.size() == 2) {
      for (int t : cs) {
        auto [n, v] = cyc.of_tilde[static_cast<size_t>(t)];
        m.column_vertex[{n, v, 0}] = av;
      }
    } else {
      auto [n, v] = cyc.of_tilde[static_cast<size_t>(cs[0])];
      int part = ++third_count[cs[0]];
      m.column_vertex[{n, v, part}] = av;
    }
  }
  return m;
}

// ---------------------------------------------------------------- elements

std::string element_str(const Element& e) {
  std::ostringstream os;
  switch (e.sym) {
    case Sym::Alpha: os << "a(" << e.n << ',' << e.v << ',' << e.l << ',' << e.f << ')'; break;
    case Sym::Beta: os << "b(" << e.n << ',' << e.v << ',' << e.l << ',' << e.f << ')'; break;
    case Sym::Rho: os << "rho(" << e.n << ',' << e.v << ',' << e.f << ')'; break;
    case Sym::G:
      if (e.n == 1)
        os << "g(" << e.v << ',' << e.f << ')';
      else
        os << "g(" << e.n << ',' << e.v << ',' << e.f << ')';
      break;
  }
  return os.str();
}

namespace {

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

int to_int(const std::string& s) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

}  // namespace

Element parse_element(const std::string& text) {
  std::string s = strip(text);
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw std::invalid_argument("bad element '" + text + "'");
  std::string head = s.substr(0, open);
  std::vector<int> args;
  std::string body = s.substr(open + 1, s.size() - open - 2);
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) args.push_back(to_int(tok));
  Element e;
  auto bad = [&] { return std::invalid_argument("bad element '" + text + "'"); };
  if (head == "a" || head == "b") {
    e.sym = head == "a" ? Sym::Alpha : Sym::Beta;
    if (args.size() == 4) {
      e.n = args[0], e.v = args[1], e.l = args[2], e.f = args[3];
    } else if (args.size() == 3) {
      e.v = args[0], e.l = args[1], e.f = args[2];
    } else if (args.size() == 2) {
      e.l = args[0], e.f = args[1];
    } else {
      throw bad();
    }
    if (e.l < 1) throw bad();
  } else if (head == "rho") {
    e.sym = Sym::Rho;
    if (args.size() == 3) {
      e.n = args[0], e.v = args[1], e.f = args[2];
    } else if (args.size() == 2) {
      e.v = args[0], e.f = args[1];
    } else if (args.size() == 1) {
      e.f = args[0];
    } else {
      throw bad();
    }
  } else if (head == "g") {
    e.sym = Sym::G;
    if (args.size() == 3) {
      e.n = args[0], e.v = args[1], e.f = args[2];
    } else if (args.size() == 2) {
      e.v = args[0], e.f = args[1];
    } else if (args.size() == 1) {
      e.f = args[0];
    } else {
      throw bad();
    }
  } else {
    throw bad();
  }
  if (e.n < 1 || e.v < 1) throw bad();
  return e;
}

// ---------------------------------------------------------------- bunch

Bunch::Bunch(BunchConfig cfg, Window w) : cfg_(std::move(cfg)), win_(w) {
  if (win_.kmin > win_.kmax || win_.L < 0) throw std::invalid_argument("bunch: bad window");
  for (int n = 1; n <= static_cast<int>(cfg_.live.size()); ++n)
    for (int v : cfg_.live[static_cast<size_t>(n - 1)])
      for (int f = win_.kmin; f <= win_.kmax; ++f) add_block(n, v, f);
  partner_.assign(elems_.size(), -1);
  boundary_.assign(elems_.size(), 0);
  for (int i = 0; i < size(); ++i) {
    const Element& e = elems_[static_cast<size_t>(i)];
    Element p = e;
    bool has = false;
    switch (e.sym) {
      case Sym::Alpha: {
        int s = ladder_ends(e).first;
        if (cfg_.is_live(e.n, s)) {
          p = Element{Sym::Beta, e.n, s, e.l, e.f + 1};
          has = true;
        }
        break;
      }
      case Sym::Beta: {
        int t = ladder_ends(e).second;
        if (cfg_.is_live(e.n, t)) {
          p = Element{Sym::Alpha, e.n, t, e.l, e.f - 1};
          has = true;
        }
        break;
      }
      case Sym::Rho: break;
      case Sym::G: {
        for (auto [a, b] : cfg_.second) {
          if (a == std::pair{e.n, e.v}) p = Element{Sym::G, b.first, b.second, 0, e.f}, has = true;
          if (b == std::pair{e.n, e.v}) p = Element{Sym::G, a.first, a.second, 0, e.f}, has = true;
        }
        for (auto a : cfg_.third)
          if (a == std::pair{e.n, e.v}) p = e, has = true;
        break;
      }
    }
    if (!has) continue;
    auto it = index_.find(p);
    if (it != index_.end())
      partner_[static_cast<size_t>(i)] = it->second;
    else
      boundary_[static_cast<size_t>(i)] = 1;
  }
}

int Bunch::add(const Element& e) {
  int id = static_cast<int>(elems_.size());
  elems_.push_back(e);
  index_[e] = id;
  block_of_.push_back(static_cast<int>(blocks_.size()));
  return id;
}

void Bunch::add_block(int n, int v, int f) {
  Block b{n, v, f, {}, {}};
  block_index_[{n, v, f}] = static_cast<int>(blocks_.size());
  // Bunch order on E: beta(1) < ... < beta(L) < rho < alpha(L) < ... < alpha(1).
  for (int l = 1; l <= win_.L; ++l) b.E.push_back(add(Element{Sym::Beta, n, v, l, f}));
  b.E.push_back(add(Element{Sym::Rho, n, v, 0, f}));
  for (int l = win_.L; l >= 1; --l) b.E.push_back(add(Element{Sym::Alpha, n, v, l, f}));
  bool has_g = false;
  for (auto [a, c] : cfg_.second) has_g = has_g || a == std::pair{n, v} || c == std::pair{n, v};
  for (auto a : cfg_.third) has_g = has_g || a == std::pair{n, v};
  if (has_g) b.F.push_back(add(Element{Sym::G, n, v, 0, f}));
  pos_.resize(elems_.size());
  for (size_t i = 0; i < b.E.size(); ++i) pos_[static_cast<size_t>(b.E[i])] = static_cast<int>(i);
  for (size_t i = 0; i < b.F.size(); ++i) pos_[static_cast<size_t>(b.F[i])] = static_cast<int>(i);
  blocks_.push_back(std::move(b));
}

std::optional<int> Bunch::find(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Bunch::id(const Element& e) const {
  auto r = find(e);
  if (!r) throw std::invalid_argument("element " + element_str(e) + " not in the bunch window");
  return *r;
}

std::optional<int> Bunch::find_block(int n, int v, int f) const {
  auto it = block_index_.find({n, v, f});
  if (it == block_index_.end()) return std::nullopt;
  return it->second;
}

bool Bunch::less(int x, int y) const {
  if (block_of(x) != block_of(y) || element(x).is_E() != element(y).is_E()) return false;
  return pos_[static_cast<size_t>(x)] < pos_[static_cast<size_t>(y)];
}

bool Bunch::dash(int x, int y) const {
  return x >= 0 && y >= 0 && block_of(x) == block_of(y) && element(x).is_E() != element(y).is_E();
}

std::pair<int, int> Bunch::ladder_ends(const Element& e) const {
  // Arrows of Ã go nu -> nu+1, so a path of length l ends l steps ahead.
  if (e.sym == Sym::Alpha) return {cfg_.wrap(e.n, e.v - e.l), e.v};
  if (e.sym == Sym::Beta) return {e.v, cfg_.wrap(e.n, e.v + e.l)};
  return {e.v, e.v};
}

Bunch dihedral_bunch(Window w) { return Bunch(dihedral_config(), w); }
Bunch gelfand_bunch(Window w) { return Bunch(gelfand_config(), w); }
Bunch nodal_bunch(const BunchConfig& cfg, Window w) { return Bunch(cfg, w); }

// ---------------------------------------------------------------- words

namespace {

const char* rel_str(Rel r) { return r == Rel::Tilde ? " ~ " : " - "; }

}  // namespace

std::string word_str(const Word& w) {
  std::string s;
  if (w.open_left) s += std::string("...") + rel_str(*w.open_left);
  for (int i = 0; i < w.length(); ++i) {
    if (i > 0) s += rel_str(w.r[static_cast<size_t>(i - 1)]);
    s += element_str(w.x[static_cast<size_t>(i)]);
  }
  if (w.open_right) s += std::string(rel_str(*w.open_right)) + "...";
  return s;
}

Word parse_word(const std::string& text) {
  std::string s = strip(text);
  // Split on ~ and - outside parentheses.
  std::vector<std::string> toks;
  std::vector<Rel> rels;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '~' || c == '-')) {
      toks.push_back(cur);
      rels.push_back(c == '~' ? Rel::Tilde : Rel::Dash);
      cur.clear();
    } else {
      cur += c;
    }
  }
  toks.push_back(cur);
  Word w;
  size_t first = 0, last = toks.size();
  if (!toks.empty() && toks.front() == "...") {
    if (rels.empty()) throw std::invalid_argument("bad word: lone '...'");
    w.open_left = rels.front();
    first = 1;
  }
  if (last > first && toks.back() == "...") {
    if (last < 2) throw std::invalid_argument("bad word");
    w.open_right = rels[last - 2];
    --last;
  }
  if (first >= last) throw std::invalid_argument("empty word");
  for (size_t i = first; i < last; ++i) {
    if (toks[i].empty()) throw std::invalid_argument("bad word: empty letter in '" + text + "'");
    w.x.push_back(parse_element(toks[i]));
    if (i + 1 < last) w.r.push_back(rels[i]);
  }
  return w;
}

WordReport validate_word(const Bunch& b, const Word& w) {
  WordReport rep;
  auto fail = [&](const std::string& msg) {
    rep.valid = false;
    rep.problems.push_back(msg);
  };
  int m = w.length();
  if (m == 0) {
    fail("empty word");
    return rep;
  }
  if (static_cast<int>(w.r.size()) != m - 1) {
    fail("relation count mismatch");
    return rep;
  }
  std::vector<int> ids(static_cast<size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    auto id = b.find(w.x[static_cast<size_t>(i)]);
    if (!id)
      fail("letter " + std::to_string(i + 1) + " " + element_str(w.x[static_cast<size_t>(i)]) +
           " is outside the window");
    else
      ids[static_cast<size_t>(i)] = *id;
  }
  for (int k = 0; k + 1 < m; ++k) {
    int x = ids[static_cast<size_t>(k)], y = ids[static_cast<size_t>(k + 1)];
    Rel r = w.r[static_cast<size_t>(k)];
    if (k + 1 < m - 1 && r == w.r[static_cast<size_t>(k + 1)])
      fail("relations " + std::to_string(k + 1) + " and " + std::to_string(k + 2) + " coincide");
    if (x < 0 || y < 0) continue;
    bool ok = r == Rel::Tilde ? b.tilde(x, y) : b.dash(x, y);
    if (!ok)
      fail("position " + std::to_string(k + 1) + ": " + element_str(w.x[static_cast<size_t>(k)]) + rel_str(r) +
           element_str(w.x[static_cast<size_t>(k + 1)]) + " does not hold");
  }
  if (w.open_left && m > 1 && *w.open_left == w.r.front()) fail("open left end repeats relation 1");
  if (w.open_right && m > 1 && *w.open_right == w.r.back())
    fail("open right end repeats relation " + std::to_string(m - 1));
  rep.truncated = w.infinite();
  if (w.cyclic) {
    if (w.infinite()) fail("a cycle cannot have open ends");
    if (m < 2 || m % 2 != 0) fail("cycle of odd length");
    if (m >= 2 && (w.r.front() != Rel::Tilde || w.r.back() != Rel::Tilde)) fail("cycle must start and end with ~");
    if (m >= 2 && ids.front() >= 0 && ids.back() >= 0 && !b.dash(ids.back(), ids.front()))
      fail("cycle closing link x_m - x_1 does not hold");
    return rep;
  }
  if (!rep.valid) {
    rep.full = false;
    return rep;
  }
  auto end_full = [&](int id, std::optional<Rel> r) { return b.unique(id) || (r && *r == Rel::Tilde); };
  std::optional<Rel> r1 = m > 1 ? std::optional<Rel>(w.r.front()) : std::nullopt;
  std::optional<Rel> rm = m > 1 ? std::optional<Rel>(w.r.back()) : std::nullopt;
  if (!w.open_left && !end_full(ids.front(), r1)) {
    rep.full = false;
    rep.problems.push_back("not full at the left end");
  }
  if (!w.open_right && !end_full(ids.back(), rm)) {
    rep.full = false;
    rep.problems.push_back("not full at the right end");
  }
  return rep;
}

Word reverse(const Word& w) {
  Word out;
  out.cyclic = w.cyclic;
  out.x.assign(w.x.rbegin(), w.x.rend());
  out.r.assign(w.r.rbegin(), w.r.rend());
  out.open_left = w.open_right;
  out.open_right = w.open_left;
  return out;
}

bool is_symmetric(const Word& w) { return w == reverse(w); }

bool is_quasisymmetric(const Word& w) {
  int m = w.length();
  if (w.cyclic) return false;
  Word flat = w;
  flat.cyclic = false;
  for (int p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    Word v;
    v.x.assign(w.x.begin(), w.x.begin() + p);
    v.r.assign(w.r.begin(), w.r.begin() + (p - 1));
    Word vs = reverse(v);
    bool ok = true;
    for (int q = 0; q < m / p && ok; ++q) {
      const Word& piece = q % 2 == 0 ? v : vs;
      for (int i = 0; i < p && ok; ++i) ok = w.x[static_cast<size_t>(q * p + i)] == piece.x[static_cast<size_t>(i)];
      for (int i = 0; i + 1 < p && ok; ++i)
        ok = w.r[static_cast<size_t>(q * p + i)] == piece.r[static_cast<size_t>(i)];
      if (ok && q > 0) ok = w.r[static_cast<size_t>(q * p - 1)] == Rel::Tilde;
    }
    if (ok) return true;
  }
  return false;
}

bool special_left(const Bunch& b, const Word& w) {
  if (w.cyclic || w.open_left || w.length() < 2) return false;
  auto id = b.find(w.x.front());
  return id && b.self_related(*id) && w.r.front() == Rel::Dash;
}

bool special_right(const Bunch& b, const Word& w) {
  if (w.cyclic || w.open_right || w.length() < 2) return false;
  auto id = b.find(w.x.back());
  return id && b.self_related(*id) && w.r.back() == Rel::Dash;
}

int special_ends(const Bunch& b, const Word& w) {
  return (special_left(b, w) ? 1 : 0) + (special_right(b, w) ? 1 : 0);
}

namespace {

// Cycle as the sequence x_1 r_1 ... x_m r_m with r_m = -.
std::vector<Rel> cycle_rels(const Word& w) {
  std::vector<Rel> r = w.r;
  r.push_back(Rel::Dash);
  return r;
}

Word rotate(const Word& w, int k) {
  int m = w.length();
  std::vector<Rel> r = cycle_rels(w);
  Word out;
  out.cyclic = true;
  for (int i = 0; i < m; ++i) {
    out.x.push_back(w.x[static_cast<size_t>((k + i) % m)]);
    if (i + 1 < m) out.r.push_back(r[static_cast<size_t>((k + i) % m)]);
  }
  return out;
}

bool same_side(const Element& a, const Element& b) { return a.is_E() == b.is_E(); }

}  // namespace

Word shift_cycle(const Word& w, int k) {
  if (!w.cyclic) throw std::invalid_argument("shift_cycle: not a cycle");
  int m = w.length();
  if (k % 2 != 0 || k < 0 || k >= m) throw std::invalid_argument("shift_cycle: k must be even in [0, m)");
  return rotate(w, k);
}

bool is_nonperiodic(const Word& w) {
  int m = w.length();
  for (int p = 1; p < m; ++p)
    if (m % p == 0 && rotate(w, p) == w) return false;
  return true;
}

bool is_symmetric_cycle(const Word& w) {
  Word ws = reverse(w);
  for (int k = 0; k < w.length(); k += 2)
    if (rotate(w, k) == ws) return true;
  return false;
}

int nu(int k, const Word& w) {
  if (!w.cyclic) throw std::invalid_argument("nu: not a cycle");
  int m = w.length();
  // k = m is allowed here: it counts over a full turn.
  if (k % 2 != 0 || k < 0 || k > m) throw std::invalid_argument("nu: k must be even in [0, m]");
  auto at = [&](int i) -> const Element& { return w.x[static_cast<size_t>(((i - 1) % m + m) % m)]; };
  int count = 0;
  for (int i = 0; i <= k; i += 2)
    if (same_side(at(i - 1), at(i))) ++count;
  return count;
}

int twist_parity(int k, const Word& w) {
  if (!w.cyclic) throw std::invalid_argument("twist_parity: not a cycle");
  int m = w.length();
  if (k % 2 != 0 || k < 0 || k >= m) throw std::invalid_argument("twist_parity: k must be even in [0, m)");
  int count = 0;
  for (int i = 2; i <= k; i += 2)
    if (same_side(w.x[static_cast<size_t>(i - 2)], w.x[static_cast<size_t>(i - 1)])) ++count;
  return count % 2;
}

// ---------------------------------------------------------------- polynomials

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, Fp(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return poly_trim(c);
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  Poly bb = poly_trim(b);
  if (bb.empty()) throw std::domain_error("polynomial division by zero");
  Poly r = poly_trim(a);
  if (r.size() < bb.size()) return {{}, r};
  Poly q(r.size() - bb.size() + 1, Fp(0));
  Fp lead = bb.back().inv();
  while (r.size() >= bb.size()) {
    size_t shift = r.size() - bb.size();
    Fp c = r.back() * lead;
    q[shift] = c;
    for (size_t i = 0; i < bb.size(); ++i) r[shift + i] -= c * bb[i];
    r = poly_trim(r);
  }
  return {poly_trim(q), r};
}

Poly poly_gcd(Poly a, Poly b) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_divmod(a, b).second;
    a = b;
    b = r;
  }
  if (!a.empty()) {
    Fp c = a.back().inv();
    for (auto& x : a) x *= c;
  }
  return a;
}

namespace {

Poly poly_powmod(Poly base, uint64_t e, const Poly& mod) {
  Poly result{Fp(1)};
  base = poly_divmod(base, mod).second;
  while (e > 0) {
    if (e & 1) result = poly_divmod(poly_mul(result, base), mod).second;
    base = poly_divmod(poly_mul(base, base), mod).second;
    e >>= 1;
  }
  return result;
}

Poly derivative(const Poly& f) {
  Poly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(Fp(static_cast<long long>(i)) * f[i]);
  return poly_trim(d);
}

}  // namespace

bool poly_irreducible(const Poly& f0) {
  Poly f = poly_trim(f0);
  int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  uint64_t p = Fp::characteristic();
  Poly t{Fp(0), Fp(1)};
  Poly x = t;
  for (int i = 1; i <= n / 2; ++i) {
    x = poly_powmod(x, p, f);
    Poly diff = x;
    diff.resize(std::max<size_t>(diff.size(), 2), Fp(0));
    diff[1] -= Fp(1);
    if (poly_gcd(f, diff).size() != 1) return false;
  }
  return true;
}

std::optional<std::pair<Poly, int>> primary_root(const Poly& f0) {
  Poly f = poly_trim(f0);
  if (f.size() < 2 || f.back() != Fp(1)) return std::nullopt;
  Poly df = derivative(f);
  if (df.empty()) return std::nullopt;
  Poly g = poly_divmod(f, poly_gcd(f, df)).first;
  Fp c = g.back().inv();
  for (auto& x : g) x *= c;
  if (!poly_irreducible(g)) return std::nullopt;
  int e = static_cast<int>((f.size() - 1) / (g.size() - 1));
  Poly pw{Fp(1)};
  for (int i = 0; i < e; ++i) pw = poly_mul(pw, g);
  if (pw != f) return std::nullopt;
  return std::pair{g, e};
}

Poly poly_reciprocal(const Poly& f0) {
  Poly f = poly_trim(f0);
  if (f.empty() || f.front().is_zero()) throw std::domain_error("reciprocal of a polynomial with f(0) = 0");
  Poly r(f.rbegin(), f.rend());
  Fp c = f.front().inv();
  for (auto& x : r) x *= c;
  return r;
}

Fp poly_eval(const Poly& f, Fp x) {
  Fp acc(0);
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly split_poly(int d, Fp lambda) {
  Poly f{Fp(1)};
  for (int i = 0; i < d; ++i) f = poly_mul(f, Poly{-lambda, Fp(1)});
  return f;
}

std::string poly_str(const Poly& f0) {
  Poly f = poly_trim(f0);
  if (f.empty()) return "0";
  std::string s;
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    long long c = f[static_cast<size_t>(i)].centered();
    if (c == 0) continue;
    bool neg = c < 0;
    long long a = neg ? -c : c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? "-" : "+";
    if (i == 0) {
      s += std::to_string(a);
      continue;
    }
    if (a != 1) s += std::to_string(a) + "*";
    s += "t";
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s;
}

Poly parse_poly(const std::string& text) {
  std::string s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  Poly f;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw std::invalid_argument("bad polynomial '" + text + "'");
    long long coef = 1;
    int deg = 0;
    auto tpos = term.find('t');
    if (tpos == std::string::npos) {
      coef = to_int(term);
    } else {
      std::string c = term.substr(0, tpos);
      if (!c.empty()) {
        if (c.back() == '*') c.pop_back();
        coef = to_int(c);
      }
      std::string rest = term.substr(tpos + 1);
      if (rest.empty())
        deg = 1;
      else if (rest[0] == '^')
        deg = to_int(rest.substr(1));
      else
        throw std::invalid_argument("bad polynomial '" + text + "'");
    }
    if (f.size() <= static_cast<size_t>(deg)) f.resize(static_cast<size_t>(deg) + 1, Fp(0));
    f[static_cast<size_t>(deg)] += Fp(sign * coef);
    i = j;
  }
  return poly_trim(f);
}

// ---------------------------------------------------------------- data

BandDatum make_band(Word w, int d, Fp lambda) {
  BandDatum b;
  w.cyclic = true;
  b.w = std::move(w);
  b.d = d;
  b.lambda = lambda;
  b.split_form = true;
  b.f = split_poly(d, lambda);
  return b;
}

BandDatum make_band(Word w, Poly f) {
  BandDatum b;
  w.cyclic = true;
  b.w = std::move(w);
  b.f = poly_trim(std::move(f));
  b.split_form = false;
  b.d = b.dim();
  return b;
}

namespace {

std::string sign_str(int d) { return d > 0 ? "+" : "-"; }

int parse_sign(const std::string& s) {
  if (s == "+") return +1;
  if (s == "-") return -1;
  throw std::invalid_argument("bad sign '" + s + "'");
}

}  // namespace

std::string datum_str(const Datum& d) {
  if (const auto* s = std::get_if<StringDatum>(&d)) {
    switch (s->kind) {
      case StringDatum::Kind::Usual: return "string{" + word_str(s->w) + "}";
      case StringDatum::Kind::Special: return "special{" + word_str(s->w) + "; delta=" + sign_str(s->delta) + "}";
      case StringDatum::Kind::Bispecial:
        return "bispecial{" + word_str(s->w) + "; m=" + std::to_string(s->m) + "; d1=" + sign_str(s->d1) +
               "; d2=" + sign_str(s->d2) + "}";
    }
  }
  const auto& b = std::get<BandDatum>(d);
  if (b.split_form)
    return "band{" + word_str(b.w) + "; d=" + std::to_string(b.d) + "; lambda=" + std::to_string(b.lambda.centered()) +
           "}";
  return "band{" + word_str(b.w) + "; f=" + poly_str(b.f) + "}";
}

Datum parse_datum(const std::string& text) {
  auto open = text.find('{');
  auto close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("bad datum: expected kind{...}");
  std::string kind = strip(text.substr(0, open));
  if (!strip(text.substr(close + 1)).empty()) throw std::invalid_argument("bad datum: trailing text");
  std::string body = text.substr(open + 1, close - open - 1);
  std::vector<std::string> parts;
  std::stringstream ss(body);
  std::string part;
  while (std::getline(ss, part, ';')) parts.push_back(part);
  if (parts.empty() || strip(parts[0]).empty()) throw std::invalid_argument("bad datum: empty word");
  Word w = parse_word(parts[0]);
  std::map<std::string, std::string> kv;
  for (size_t i = 1; i < parts.size(); ++i) {
    std::string p = strip(parts[i]);
    auto eq = p.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad datum field '" + p + "'");
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("datum " + kind + " needs " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  Datum out;
  if (kind == "string") {
    out = StringDatum{StringDatum::Kind::Usual, w, +1, 1, +1, +1};
  } else if (kind == "special") {
    out = StringDatum{StringDatum::Kind::Special, w, parse_sign(need("delta")), 1, +1, +1};
  } else if (kind == "bispecial") {
    int m = to_int(need("m"));
    int d1 = parse_sign(need("d1"));
    int d2 = parse_sign(need("d2"));
    if (m < 1) throw std::invalid_argument("bispecial: m must be positive");
    out = StringDatum{StringDatum::Kind::Bispecial, w, +1, m, d1, d2};
  } else if (kind == "band") {
    if (kv.count("f")) {
      out = make_band(w, parse_poly(need("f")));
    } else {
      int d = to_int(need("d"));
      if (d < 1) throw std::invalid_argument("band: d must be positive");
      out = make_band(w, d, Fp(to_int(need("lambda"))));
    }
  } else {
    throw std::invalid_argument("unknown datum kind '" + kind + "'");
  }
  if (!kv.empty()) throw std::invalid_argument("datum: unexpected field " + kv.begin()->first);
  return out;
}

std::vector<std::string> validate_datum(const Bunch& b, const Datum& d) {
  std::vector<std::string> out;
  if (const auto* s = std::get_if<StringDatum>(&d)) {
    if (s->w.cyclic) out.push_back("string datum on a cycle");
    WordReport rep = validate_word(b, s->w);
    for (auto& p : rep.problems) out.push_back(p);
    if (!rep.valid) return out;
    int sp = special_ends(b, s->w);
    switch (s->kind) {
      case StringDatum::Kind::Usual:
        if (sp != 0) out.push_back("usual string has a special end");
        if (!s->w.infinite() && is_symmetric(s->w)) out.push_back("usual string word is symmetric");
        break;
      case StringDatum::Kind::Special:
        if (sp != 1) out.push_back("special string needs exactly one special end");
        if (s->delta != 1 && s->delta != -1) out.push_back("delta must be + or -");
        break;
      case StringDatum::Kind::Bispecial:
        if (sp != 2) out.push_back("bispecial string needs two special ends");
        if (is_symmetric(s->w)) out.push_back("bispecial word is symmetric");
        if (is_quasisymmetric(s->w)) out.push_back("bispecial word is quasisymmetric");
        if (s->m < 1) out.push_back("m must be positive");
        break;
    }
    return out;
  }
  const auto& band = std::get<BandDatum>(d);
  Word w = band.w;
  w.cyclic = true;
  WordReport rep = validate_word(b, w);
  for (auto& p : rep.problems) out.push_back(p);
  if (!rep.valid) return out;
  if (!is_nonperiodic(w)) out.push_back("band word is periodic");
  if (!primary_root(band.f)) out.push_back("f is not primary");
  if (!band.f.empty() && band.f.front().is_zero()) out.push_back("f(0) = 0");
  if (is_symmetric_cycle(w) && poly_eval(band.f, Fp(1)).is_zero()) out.push_back("symmetric band with f(1) = 0");
  return out;
}

int datum_dimension(const Datum& d) {
  if (const auto* s = std::get_if<StringDatum>(&d))
    return s->w.length() * (s->kind == StringDatum::Kind::Bispecial ? s->m : 1);
  const auto& b = std::get<BandDatum>(d);
  return b.w.length() * b.dim();
}

bool data_equivalent(const Bunch&, const Datum& d1, const Datum& d2) {
  if (d1.index() != d2.index()) return false;
  if (const auto* s1 = std::get_if<StringDatum>(&d1)) {
    const auto& s2 = std::get<StringDatum>(d2);
    if (s1->kind != s2.kind) return false;
    // Only the fields of the datum's kind count.
    bool same = s1->w == s2.w, flipped = reverse(s1->w) == s2.w;
    switch (s1->kind) {
      case StringDatum::Kind::Usual: return same || flipped;
      case StringDatum::Kind::Special: return (same || flipped) && s1->delta == s2.delta;
      case StringDatum::Kind::Bispecial:
        return s1->m == s2.m && ((same && s1->d1 == s2.d1 && s1->d2 == s2.d2) ||
                                 (flipped && s1->d1 == s2.d2 && s1->d2 == s2.d1));
    }
    return false;
  }
  const auto& b1 = std::get<BandDatum>(d1);
  const auto& b2 = std::get<BandDatum>(d2);
  using State = std::pair<Word, Poly>;
  auto norm = [](Word w) {
    w.cyclic = true;
    return w;
  };
  State target{norm(b2.w), poly_trim(b2.f)};
  std::set<std::string> seen;
  std::deque<State> todo{{norm(b1.w), poly_trim(b1.f)}};
  auto key = [](const State& s) { return word_str(s.first) + "|" + poly_str(s.second); };
  seen.insert(key(todo.front()));
  while (!todo.empty()) {
    State s = todo.front();
    todo.pop_front();
    if (s == target) return true;
    std::vector<State> next;
    for (int k = 2; k < s.first.length(); k += 2) {
      Poly f = twist_parity(k, s.first) ? poly_reciprocal(s.second) : s.second;
      next.push_back({shift_cycle(s.first, k), f});
    }
    next.push_back({reverse(s.first), s.second});
    for (auto& n : next)
      if (seen.insert(key(n)).second) todo.push_back(n);
  }
  return false;
}

}  // namespace nodal
