#include "nodal/quiver.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace nodal {

namespace {

bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '\'') return false;
  return true;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

// Splits "3*xy - x.y + 2yx" into signed pieces.
std::vector<std::pair<long long, std::string>> split_terms(const std::string& raw) {
  std::string s = strip_spaces(raw);
  std::vector<std::pair<long long, std::string>> out;
  size_t i = 0;
  while (i < s.size()) {
    long long sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string body = s.substr(i, j - i);
    if (body.empty()) throw std::invalid_argument("empty term in '" + raw + "'");
    long long coef = 1;
    size_t star = body.find('*');
    if (star != std::string::npos) {
      coef = std::stoll(body.substr(0, star));
      body = body.substr(star + 1);
    } else {
      size_t k = 0;
      while (k < body.size() && std::isdigit(static_cast<unsigned char>(body[k]))) ++k;
      if (k == body.size()) {
        coef = std::stoll(body);
        body = "1";
      } else if (k > 0) {
        coef = std::stoll(body.substr(0, k));
        body = body.substr(k);
      }
    }
    out.emplace_back(sign * coef, body);
    i = j;
  }
  return out;
}

Path parse_path_in(const Quiver& q, const std::string& text) {
  Path p;
  if (text.find('.') != std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
      auto a = q.find_arrow(tok);
      if (!a) throw std::invalid_argument("unknown arrow '" + tok + "'");
      p.push_back(*a);
    }
    return p;
  }
  if (auto a = q.find_arrow(text)) return Path{*a};
  for (char ch : text) {
    auto a = q.find_arrow(std::string(1, ch));
    if (!a) throw std::invalid_argument("cannot split path '" + text + "' into arrows");
    p.push_back(*a);
  }
  return p;
}

bool single_letter_labels(const Quiver& q) {
  for (int a = 0; a < q.num_arrows(); ++a)
    if (q.arrow(a).label.size() != 1) return false;
  return true;
}

std::string path_text(const Quiver& q, const Path& p) {
  std::string out;
  bool compact = single_letter_labels(q);
  for (size_t i = 0; i < p.size(); ++i) {
    if (i && !compact) out += '.';
    out += q.arrow(p[i]).label;
  }
  return out;
}

bool composable(const Quiver& q, const Path& p) {
  for (size_t i = 1; i < p.size(); ++i)
    if (q.arrow(p[i - 1]).dst != q.arrow(p[i]).src) return false;
  return true;
}

void merge_term(std::vector<std::pair<int, Fp>>& terms, int b, Fp c) {
  auto it = std::lower_bound(terms.begin(), terms.end(), b,
                             [](const auto& t, int key) { return t.first < key; });
  if (it != terms.end() && it->first == b) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  } else if (!c.is_zero()) {
    terms.insert(it, {b, c});
  }
}

}  // namespace

int Quiver::add_vertex(const std::string& label) {
  if (!valid_label(label)) throw std::invalid_argument("bad vertex label '" + label + "'");
  if (auto v = find_vertex(label)) return *v;
  vertices_.push_back(label);
  return num_vertices() - 1;
}

int Quiver::add_arrow(const std::string& src, const std::string& dst, const std::string& label) {
  if (!valid_label(label)) throw std::invalid_argument("bad arrow label '" + label + "'");
  if (find_arrow(label)) throw std::invalid_argument("duplicate arrow label '" + label + "'");
  auto s = find_vertex(src), d = find_vertex(dst);
  if (!s || !d) throw std::invalid_argument("arrow '" + label + "' has an undeclared endpoint");
  arrows_.push_back({*s, *d, label});
  return num_arrows() - 1;
}

std::optional<int> Quiver::find_vertex(const std::string& label) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertices_[static_cast<size_t>(v)] == label) return v;
  return std::nullopt;
}

std::optional<int> Quiver::find_arrow(const std::string& label) const {
  for (int a = 0; a < num_arrows(); ++a)
    if (arrows_[static_cast<size_t>(a)].label == label) return a;
  return std::nullopt;
}

Presentation parse_presentation(const std::string& text) {
  Presentation p;
  std::vector<std::string> relation_lines;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
    };
    if (line.rfind("truncate", 0) == 0) {
      p.truncation = std::stoi(trim(line.substr(8)));
      if (p.truncation < 1) fail("truncation must be >= 1");
    } else if (line.rfind("name", 0) == 0) {
      p.name = trim(line.substr(4));
    } else if (line.rfind("vertex", 0) == 0) {
      p.quiver.add_vertex(trim(line.substr(6)));
    } else if (auto arr = line.find("->"); arr != std::string::npos) {
      auto colon = line.find(':');
      if (colon == std::string::npos || colon < arr) fail("expected 'src -> dst : label'");
      std::string s = trim(line.substr(0, arr)), d = trim(line.substr(arr + 2, colon - arr - 2));
      p.quiver.add_vertex(s);
      p.quiver.add_vertex(d);
      p.quiver.add_arrow(s, d, trim(line.substr(colon + 1)));
    } else if (line.find('=') != std::string::npos) {
      relation_lines.push_back(line);
    } else {
      fail("unrecognised line '" + line + "'");
    }
  }
  for (const auto& rl : relation_lines) {
    auto eq = rl.find('=');
    Relation r;
    auto add_side = [&](const std::string& side, long long sign) {
      if (strip_spaces(side) == "0") return;
      for (auto& [c, body] : split_terms(side))
        r.terms.emplace_back(Fp(sign * c), parse_path_in(p.quiver, body));
    };
    add_side(rl.substr(0, eq), 1);
    add_side(rl.substr(eq + 1), -1);
    p.relations.push_back(r);
  }
  return p;
}

std::string format_presentation(const Presentation& p) {
  std::ostringstream os;
  if (!p.name.empty()) os << "name " << p.name << "\n";
  for (int v = 0; v < p.quiver.num_vertices(); ++v) os << "vertex " << p.quiver.vertex(v) << "\n";
  for (int a = 0; a < p.quiver.num_arrows(); ++a) {
    const auto& ar = p.quiver.arrow(a);
    os << p.quiver.vertex(ar.src) << " -> " << p.quiver.vertex(ar.dst) << " : " << ar.label << "\n";
  }
  for (const auto& r : p.relations) {
    bool first = true;
    for (const auto& [c, path] : r.terms) {
      long long v = c.centered();
      if (!first) os << (v < 0 ? " - " : " + ");
      else if (v < 0) os << "-";
      long long a = v < 0 ? -v : v;
      if (a != 1) os << a << "*";
      os << path_text(p.quiver, path);
      first = false;
    }
    os << " = 0\n";
  }
  os << "truncate " << p.truncation << "\n";
  return os.str();
}

AlgElem& AlgElem::operator+=(const AlgElem& o) {
  if (o.src != src || o.dst != dst) throw std::invalid_argument("AlgElem: tag mismatch in sum");
  for (const auto& [b, c] : o.terms) merge_term(terms, b, c);
  return *this;
}

AlgElem& AlgElem::operator-=(const AlgElem& o) {
  if (o.src != src || o.dst != dst) throw std::invalid_argument("AlgElem: tag mismatch in sum");
  for (const auto& [b, c] : o.terms) merge_term(terms, b, -c);
  return *this;
}

AlgElem& AlgElem::operator*=(Fp c) {
  if (c.is_zero()) {
    terms.clear();
    return *this;
  }
  for (auto& t : terms) t.second *= c;
  return *this;
}

PathAlgebra::PathAlgebra(Presentation pres) : pres_(std::move(pres)) {
  const Quiver& q = pres_.quiver;
  const int n = pres_.truncation;
  if (n < 1) throw std::invalid_argument("truncation must be >= 1");

  std::vector<Relation> general;
  for (const auto& r : pres_.relations) {
    if (r.terms.empty()) continue;
    size_t len = r.terms[0].second.size();
    int s = -1, d = -1;
    for (const auto& [c, p] : r.terms) {
      if (p.empty()) throw std::invalid_argument("relations must lie in the radical");
      if (p.size() != len) throw std::invalid_argument("relations must be homogeneous");
      if (!composable(q, p)) throw std::invalid_argument("relation path does not compose");
      int ps = q.arrow(p.front()).src, pd = q.arrow(p.back()).dst;
      if (s >= 0 && (ps != s || pd != d))
        throw std::invalid_argument("relation paths have different endpoints");
      s = ps;
      d = pd;
    }
    if (r.terms.size() == 1)
      monomials_.push_back(r.terms[0].second);
    else
      general.push_back(r);
  }

  for (int v = 0; v < q.num_vertices(); ++v) basis_.push_back({v, v, {}});
  layers_.resize(static_cast<size_t>(n));
  for (int len = 1; len < n; ++len) {
    Layer& L = layers_[static_cast<size_t>(len)];
    std::vector<Path> cand;
    if (len == 1) {
      for (int a = 0; a < q.num_arrows(); ++a) cand.push_back({a});
    } else {
      for (const Path& w : layers_[static_cast<size_t>(len - 1)].words)
        for (int a = 0; a < q.num_arrows(); ++a)
          if (q.arrow(a).src == q.arrow(w.back()).dst) {
            Path x = w;
            x.push_back(a);
            cand.push_back(x);
          }
    }
    for (auto& w : cand)
      if (!has_monomial_suffix(w)) L.index.emplace(w, 0);
    for (auto& [w, i] : L.index) {
      i = static_cast<int>(L.words.size());
      L.words.push_back(w);
    }
    const Index nw = static_cast<Index>(L.words.size());
    // Columns in descending word order so the largest word in a relation is
    // the one rewritten.
    auto col_of = [&](int word) { return nw - 1 - word; };
    std::vector<VecF> gens;
    auto push_word_vec = [&](const std::vector<std::pair<Fp, Path>>& comb) {
      VecF v = VecF::Zero(nw);
      bool any = false;
      for (const auto& [c, p] : comb) {
        auto it = L.index.find(p);
        if (it == L.index.end()) continue;
        v(col_of(it->second)) += c;
        any = true;
      }
      if (any && !is_zero<Fp>(v)) gens.push_back(v);
    };
    for (const auto& r : general)
      if (static_cast<int>(r.terms[0].second.size()) == len) push_word_vec(r.terms);
    if (len > 1) {
      const Layer& P = layers_[static_cast<size_t>(len - 1)];
      for (Index row = 0; row < P.ideal.rows(); ++row) {
        std::vector<std::pair<Fp, Path>> base;
        for (int w = 0; w < static_cast<int>(P.words.size()); ++w) {
          Fp c = P.ideal(row, static_cast<Index>(P.words.size()) - 1 - w);
          if (!c.is_zero()) base.emplace_back(c, P.words[static_cast<size_t>(w)]);
        }
        int bs = q.arrow(base[0].second.front()).src, bd = q.arrow(base[0].second.back()).dst;
        for (int a = 0; a < q.num_arrows(); ++a) {
          if (q.arrow(a).dst == bs) {
            std::vector<std::pair<Fp, Path>> left;
            for (const auto& [c, p] : base) {
              Path x{a};
              x.insert(x.end(), p.begin(), p.end());
              left.emplace_back(c, x);
            }
            push_word_vec(left);
          }
          if (q.arrow(a).src == bd) {
            std::vector<std::pair<Fp, Path>> right;
            for (const auto& [c, p] : base) {
              Path x = p;
              x.push_back(a);
              right.emplace_back(c, x);
            }
            push_word_vec(right);
          }
        }
      }
    }
    MatF g(static_cast<Index>(gens.size()), nw);
    for (size_t i = 0; i < gens.size(); ++i) g.row(static_cast<Index>(i)) = gens[i].transpose();
    auto piv = detail::gauss_jordan<Fp>(g, nullptr);
    L.ideal = g.topRows(static_cast<Index>(piv.size()));
    L.pivot_row.assign(static_cast<size_t>(nw), -1);
    for (size_t r = 0; r < piv.size(); ++r)
      L.pivot_row[static_cast<size_t>(nw - 1 - piv[r])] = static_cast<int>(r);
    L.basis_id.assign(static_cast<size_t>(nw), -1);
    for (int w = 0; w < static_cast<int>(nw); ++w)
      if (L.pivot_row[static_cast<size_t>(w)] < 0) {
        const Path& p = L.words[static_cast<size_t>(w)];
        L.basis_id[static_cast<size_t>(w)] = static_cast<int>(basis_.size());
        basis_.push_back({q.arrow(p.front()).src, q.arrow(p.back()).dst, p});
      }
  }
  between_.assign(static_cast<size_t>(q.num_vertices()),
                  std::vector<std::vector<int>>(static_cast<size_t>(q.num_vertices())));
  for (int b = 0; b < dim(); ++b)
    between_[static_cast<size_t>(basis_src(b))][static_cast<size_t>(basis_dst(b))].push_back(b);
}

bool PathAlgebra::has_monomial_suffix(const Path& w) const {
  for (const Path& m : monomials_)
    if (m.size() <= w.size() && std::equal(m.rbegin(), m.rend(), w.rbegin())) return true;
  return false;
}

const std::vector<int>& PathAlgebra::basis_between(int src, int dst) const {
  return between_.at(static_cast<size_t>(src)).at(static_cast<size_t>(dst));
}

AlgElem PathAlgebra::idempotent(int v) const {
  if (v < 0 || v >= num_vertices()) throw std::out_of_range("vertex out of range");
  return AlgElem{v, v, {{v, Fp(1)}}};
}

AlgElem PathAlgebra::basis_elem(int b) const {
  return AlgElem{basis_src(b), basis_dst(b), {{b, Fp(1)}}};
}

AlgElem PathAlgebra::reduce_word(int len, int word) const {
  const Layer& L = layers_[static_cast<size_t>(len)];
  const Path& p = L.words[static_cast<size_t>(word)];
  AlgElem out{quiver().arrow(p.front()).src, quiver().arrow(p.back()).dst, {}};
  int row = L.pivot_row[static_cast<size_t>(word)];
  if (row < 0) {
    out.terms.push_back({L.basis_id[static_cast<size_t>(word)], Fp(1)});
    return out;
  }
  const Index nw = static_cast<Index>(L.words.size());
  for (int w = 0; w < static_cast<int>(nw); ++w) {
    if (w == word) continue;
    Fp c = L.ideal(row, nw - 1 - w);
    if (!c.is_zero()) merge_term(out.terms, L.basis_id[static_cast<size_t>(w)], -c);
  }
  return out;
}

AlgElem PathAlgebra::path(const Path& p, int src_if_empty) const {
  if (p.empty()) return idempotent(src_if_empty);
  const Quiver& q = quiver();
  for (int a : p)
    if (a < 0 || a >= q.num_arrows()) throw std::out_of_range("arrow out of range");
  if (!composable(q, p)) throw std::invalid_argument("path does not compose");
  int s = q.arrow(p.front()).src, d = q.arrow(p.back()).dst;
  int len = static_cast<int>(p.size());
  if (len >= truncation()) return zero(s, d);
  const Layer& L = layers_[static_cast<size_t>(len)];
  auto it = L.index.find(p);
  if (it == L.index.end()) return zero(s, d);
  return reduce_word(len, it->second);
}

AlgElem PathAlgebra::mul(const AlgElem& a, const AlgElem& b) const {
  if (a.dst != b.src) throw std::invalid_argument("mul: tag mismatch");
  AlgElem out{a.src, b.dst, {}};
  for (const auto& [ba, ca] : a.terms)
    for (const auto& [bb, cb] : b.terms) {
      uint64_t key = static_cast<uint64_t>(ba) * static_cast<uint64_t>(dim()) + static_cast<uint64_t>(bb);
      auto it = mul_cache_.find(key);
      if (it == mul_cache_.end()) {
        AlgElem prod;
        if (basis_length(ba) == 0) {
          prod = basis_elem(bb);
        } else if (basis_length(bb) == 0) {
          prod = basis_elem(ba);
        } else {
          Path w = basis_path(ba);
          const Path& w2 = basis_path(bb);
          w.insert(w.end(), w2.begin(), w2.end());
          prod = path(w);
        }
        it = mul_cache_.emplace(key, std::move(prod)).first;
      }
      for (const auto& [bc, cc] : it->second.terms) merge_term(out.terms, bc, ca * cb * cc);
    }
  return out;
}

bool PathAlgebra::in_radical_power(const AlgElem& a, int k) const {
  for (const auto& [b, c] : a.terms)
    if (basis_length(b) < k) return false;
  return true;
}

int PathAlgebra::valuation(const AlgElem& a) const {
  int v = truncation();
  for (const auto& [b, c] : a.terms) v = std::min(v, basis_length(b));
  return v;
}

Fp PathAlgebra::scalar_part(const AlgElem& a) const {
  for (const auto& [b, c] : a.terms)
    if (basis_length(b) == 0) return c;
  return Fp(0);
}

std::vector<int> PathAlgebra::paths_of_length(int src, int dst, int len) const {
  std::vector<int> out;
  for (int b : basis_between(src, dst))
    if (basis_length(b) == len) out.push_back(b);
  return out;
}

Path PathAlgebra::parse_path(const std::string& text) const { return parse_path_in(quiver(), text); }

std::string PathAlgebra::path_str(const Path& p) const { return path_text(quiver(), p); }

std::string PathAlgebra::str(const AlgElem& a) const {
  if (a.terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [b, c] : a.terms) {
    long long v = c.centered();
    if (!first) out += v < 0 ? " - " : " + ";
    else if (v < 0) out += "-";
    long long av = v < 0 ? -v : v;
    std::string body = basis_length(b) == 0 ? "e_" + quiver().vertex(basis_src(b)) : path_str(basis_path(b));
    if (av != 1) out += std::to_string(av) + "*";
    out += body;
    first = false;
  }
  return out;
}

AlgElem PathAlgebra::parse_elem(const std::string& text, int src, int dst) const {
  AlgElem out = zero(src, dst);
  if (strip_spaces(text) == "0") return out;
  for (auto& [c, body] : split_terms(text)) {
    AlgElem t;
    if (body == "1" || body.rfind("e_", 0) == 0) {
      if (src != dst) throw std::invalid_argument("idempotent term between distinct vertices");
      t = idempotent(src);
    } else {
      t = path(parse_path(body));
    }
    if (t.src != src || t.dst != dst)
      throw std::invalid_argument("term '" + body + "' has the wrong endpoints");
    out += Fp(c) * t;
  }
  return out;
}

ProjMorphism::ProjMorphism(std::vector<int> src, std::vector<int> dst)
    : src_(std::move(src)), dst_(std::move(dst)) {
  e_.reserve(src_.size() * dst_.size());
  for (int r = 0; r < rows(); ++r)
    for (int c = 0; c < cols(); ++c) e_.push_back(AlgElem{src_[static_cast<size_t>(c)], dst_[static_cast<size_t>(r)], {}});
}

ProjMorphism::ProjMorphism(const PathAlgebra&, std::vector<int> src, std::vector<int> dst)
    : ProjMorphism(std::move(src), std::move(dst)) {}

void ProjMorphism::set(int r, int c, AlgElem v) {
  if (v.src != src_.at(static_cast<size_t>(c)) || v.dst != dst_.at(static_cast<size_t>(r)))
    throw std::invalid_argument("ProjMorphism: entry tag does not match summands");
  e_[idx(r, c)] = std::move(v);
}

bool ProjMorphism::is_zero() const {
  for (const auto& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

ProjMorphism identity_morphism(const PathAlgebra& alg, const std::vector<int>& objs) {
  ProjMorphism m(objs, objs);
  for (int i = 0; i < m.rows(); ++i) m.set(i, i, alg.idempotent(objs[static_cast<size_t>(i)]));
  return m;
}

ProjMorphism compose(const PathAlgebra& alg, const ProjMorphism& f, const ProjMorphism& g) {
  if (g.dst() != f.src()) throw std::invalid_argument("compose: shape mismatch");
  ProjMorphism out(g.src(), f.dst());
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) {
      AlgElem acc = out.at(r, c);
      for (int m = 0; m < f.cols(); ++m) {
        const AlgElem& gm = g.at(m, c);
        const AlgElem& fm = f.at(r, m);
        if (gm.is_zero() || fm.is_zero()) continue;
        acc += alg.mul(gm, fm);
      }
      out.at(r, c) = std::move(acc);
    }
  return out;
}

ProjMorphism add(const ProjMorphism& f, const ProjMorphism& g) {
  if (f.src() != g.src() || f.dst() != g.dst()) throw std::invalid_argument("add: shape mismatch");
  ProjMorphism out = f;
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) out.at(r, c) += g.at(r, c);
  return out;
}

bool morphisms_equal(const ProjMorphism& f, const ProjMorphism& g) {
  if (f.src() != g.src() || f.dst() != g.dst()) return false;
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c)
      if (!(f.at(r, c) == g.at(r, c))) return false;
  return true;
}

ProjMorphism phi_of_length(const PathAlgebra& alg, int i, int j, int l) {
  ProjMorphism m({i}, {j});
  if (l == 0) {
    if (i != j) throw std::invalid_argument("no path of length 0 between distinct vertices");
    m.set(0, 0, alg.idempotent(i));
    return m;
  }
  auto paths = alg.paths_of_length(i, j, l);
  if (paths.size() != 1)
    throw std::invalid_argument("no unique path of length " + std::to_string(l) + " from " +
                                alg.quiver().vertex(i) + " to " + alg.quiver().vertex(j));
  m.set(0, 0, alg.basis_elem(paths[0]));
  return m;
}

}  // namespace nodal
