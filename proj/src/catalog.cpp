#include "nodal/catalog.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace nodal {

namespace {

std::vector<int> dash_neighbours(const Bunch& b, int x) {
  const auto& blk = b.block(b.block_of(x));
  bool in_E = std::find(blk.E.begin(), blk.E.end(), x) != blk.E.end();
  return in_E ? blk.F : blk.E;
}

// A self-related letter is its own ~-neighbour inside a word.
int tilde_neighbour(const Bunch& b, int x) { return b.partner(x); }

bool is_valid(const Bunch& b, const Datum& d) {
  try {
    return validate_datum(b, d).empty();
  } catch (const std::exception&) {
    return false;
  }
}

// Appends d unless an equivalent datum is already present.
bool add_unique(const Bunch& b, std::vector<Datum>& seen, const Datum& d) {
  for (const auto& e : seen)
    if (data_equivalent(b, e, d)) return false;
  seen.push_back(d);
  return true;
}

std::vector<StringDatum> string_data(const Bunch& b, const Word& w, int max_mult) {
  std::vector<StringDatum> out;
  int sp;
  try {
    sp = special_ends(b, w);
  } catch (const std::exception&) {
    return out;
  }
  StringDatum d;
  d.w = w;
  if (sp == 0) {
    out.push_back(d);
  } else if (sp == 1) {
    d.kind = StringDatum::Kind::Special;
    for (int delta : {1, -1}) {
      d.delta = delta;
      out.push_back(d);
    }
  } else {
    d.kind = StringDatum::Kind::Bispecial;
    for (int m = 1; m <= max_mult; ++m)
      for (int d1 : {1, -1})
        for (int d2 : {1, -1}) {
          d.m = m;
          d.d1 = d1;
          d.d2 = d2;
          out.push_back(d);
        }
  }
  return out;
}

std::map<Stripe, int> support(const BunchRep& r) {
  std::map<Stripe, int> out;
  for (auto [s, n] : r.dims())
    if (n > 0) out[s] = n;
  return out;
}

}  // namespace

std::vector<Word> alternating_words(const Bunch& b, int max_letters, bool cyclic, const std::vector<int>& caps) {
  std::vector<int> used(static_cast<size_t>(b.size()), 0);
  auto ok = [&](int id) { return caps.empty() || used[static_cast<size_t>(id)] < caps[static_cast<size_t>(id)]; };
  std::vector<Word> out;
  std::vector<int> ids;
  std::vector<Rel> rels;
  std::function<void(Rel, bool)> grow = [&](Rel next, bool emit) {
    int n = static_cast<int>(ids.size());
    bool closes = cyclic && n >= 2 && n % 2 == 0 && b.dash(ids.back(), ids.front());
    if (emit && (!cyclic || closes)) {
      Word w;
      for (int id : ids) w.x.push_back(b.element(id));
      w.r = rels;
      w.cyclic = cyclic;
      out.push_back(std::move(w));
    }
    if (n >= max_letters) return;
    std::vector<int> nbrs;
    if (next == Rel::Dash) {
      nbrs = dash_neighbours(b, ids.back());
    } else if (int p = tilde_neighbour(b, ids.back()); p >= 0) {
      nbrs = {p};
    }
    Rel after = next == Rel::Dash ? Rel::Tilde : Rel::Dash;
    for (int y : nbrs) {
      if (!ok(y)) continue;
      ids.push_back(y);
      rels.push_back(next);
      ++used[static_cast<size_t>(y)];
      grow(after, true);
      --used[static_cast<size_t>(y)];
      ids.pop_back();
      rels.pop_back();
    }
  };
  for (int x = 0; x < b.size(); ++x) {
    if (!ok(x)) continue;
    ids = {x};
    rels.clear();
    ++used[static_cast<size_t>(x)];
    if (cyclic) {
      grow(Rel::Tilde, false);
    } else {
      grow(Rel::Dash, true);
      grow(Rel::Tilde, false);  // the single letter is already recorded
    }
    --used[static_cast<size_t>(x)];
  }
  return out;
}

std::vector<CatalogEntry> catalog(std::shared_ptr<const NodalAlgebra> a, std::shared_ptr<const Bunch> b,
                                  const CatalogBounds& bounds) {
  std::vector<CatalogEntry> out;
  const Bunch& B = *b;
  std::vector<Datum> seen;
  auto keep = [&](const Datum& d) {
    if (!is_valid(B, d)) return false;
    if (bounds.complexes_only && !rep_from_datum(b, d).nondegenerate()) return false;
    return add_unique(B, seen, d);
  };
  for (const Word& w : alternating_words(B, bounds.max_letters, false))
    for (auto& d : string_data(B, w, bounds.max_mult))
      if (keep(d)) out.push_back({CatalogEntry::Kind::String, Datum(d), 0, 0});
  for (const Word& w : alternating_words(B, bounds.max_letters, true))
    for (int m = 1; m <= bounds.max_mult; ++m)
      for (Fp lambda : bounds.lambdas) {
        if (lambda.is_zero()) continue;
        Datum d = make_band(w, m, lambda);
        if (keep(d)) out.push_back({CatalogEntry::Kind::Band, d, 0, 0});
      }
  if (a->has_tilde()) {
    const Window& win = B.window();
    int max_loop = bounds.max_loop > 0 ? bounds.max_loop : win.L;
    for (int l = 1; l <= max_loop; ++l)
      for (int f = win.kmin; f < win.kmax; ++f) {
        try {
          exceptional_complex(a, l, f);
        } catch (const std::invalid_argument&) {
          continue;
        }
        out.push_back({CatalogEntry::Kind::Exceptional, std::nullopt, l, f});
      }
  }
  return out;
}

std::string entry_str(const CatalogEntry& e) {
  if (e.datum) return datum_str(*e.datum);
  std::ostringstream os;
  os << "exceptional{l=" << e.length << "; f=" << e.degree << "}";
  return os.str();
}

std::optional<Datum> identify_datum(const BunchRep& r, uint32_t seed) {
  int total = r.total_dim();
  if (total > 64) throw DeskScaleLimit("representation dimension exceeds 64");
  if (total == 0) return std::nullopt;
  auto b = r.bunch_ptr();
  const Bunch& B = *b;
  // Every occurrence of a letter adds at least one to the dimension there.
  std::vector<int> caps(static_cast<size_t>(B.size()), 0);
  for (int id = 0; id < B.size(); ++id)
    for (Stripe s : r.stripes_of(id)) caps[static_cast<size_t>(id)] += r.dim(s);
  auto target = support(r);
  int max_letters = std::min(2 * total, 16);
  auto matches = [&](const Datum& d) {
    BunchRep c = rep_from_datum(b, d);
    return support(c) == target && are_isomorphic(c, r, seed).isomorphic;
  };
  for (const Word& w : alternating_words(B, max_letters, false, caps))
    for (auto& d : string_data(B, w, total))
      if (is_valid(B, d) && matches(d)) return d;
  for (const Word& w : alternating_words(B, max_letters, true, caps)) {
    Datum one = make_band(w, 1, Fp(1));
    if (!is_valid(B, one)) continue;
    int unit = rep_from_datum(b, one).total_dim();
    if (unit == 0 || total % unit != 0) continue;
    int m = total / unit;
    if (support(rep_from_datum(b, make_band(w, m, Fp(1)))) != target) continue;
    for (uint32_t x = 1; x < Fp::characteristic(); ++x) {
      Datum d = make_band(w, m, Fp(static_cast<int>(x)));
      if (is_valid(B, d) && matches(d)) return d;
    }
  }
  return std::nullopt;
}

}  // namespace nodal
