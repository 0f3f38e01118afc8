#pragma once

// Oracle for the catalog: every letter sequence whose neighbours are related
// in some way, with every relation labelling and every datum kind, filtered
// only by validate_datum and non-degeneracy. Alternation is never assumed.

#include <functional>
#include <memory>
#include <vector>

#include "nodal/bunchrep.hpp"

namespace nodal::brute {

inline std::vector<Datum> all_data(const std::shared_ptr<const Bunch>& b, int max_letters, int max_mult,
                                   const std::vector<Fp>& lambdas) {
  const Bunch& B = *b;
  std::vector<Datum> out;
  auto accept = [&](const Datum& d) {
    try {
      if (!validate_datum(B, d).empty()) return;
      if (!rep_from_datum(b, d).nondegenerate()) return;
    } catch (const std::exception&) {
      return;
    }
    out.push_back(d);
  };
  auto emit = [&](const Word& w) {
    StringDatum s;
    s.w = w;
    s.kind = StringDatum::Kind::Usual;
    accept(s);
    s.kind = StringDatum::Kind::Special;
    for (int delta : {1, -1}) {
      s.delta = delta;
      accept(s);
    }
    s.kind = StringDatum::Kind::Bispecial;
    for (int m = 1; m <= max_mult; ++m)
      for (int d1 : {1, -1})
        for (int d2 : {1, -1}) {
          s.m = m;
          s.d1 = d1;
          s.d2 = d2;
          accept(s);
        }
    if (w.length() % 2 == 0) {
      Word c = w;
      c.cyclic = true;
      for (int d = 1; d <= max_mult; ++d)
        for (Fp lambda : lambdas) accept(make_band(c, d, lambda));
    }
  };
  Word w;
  std::function<void()> grow = [&]() {
    emit(w);
    if (w.length() >= max_letters) return;
    int last = B.id(w.x.back());
    for (int y = 0; y < B.size(); ++y)
      for (Rel r : {Rel::Tilde, Rel::Dash}) {
        bool related = r == Rel::Tilde ? B.partner(last) == y : B.dash(last, y);
        if (!related) continue;
        w.x.push_back(B.element(y));
        w.r.push_back(r);
        grow();
        w.x.pop_back();
        w.r.pop_back();
      }
  };
  for (int x = 0; x < B.size(); ++x) {
    w = Word{};
    w.x.push_back(B.element(x));
    grow();
  }
  return out;
}

}  // namespace nodal::brute
