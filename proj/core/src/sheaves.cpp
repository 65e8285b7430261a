#include "finsite/sheaves.hpp"

#include <algorithm>
#include <functional>

namespace finsite {

const std::vector<std::string>& FinPresheaf::carrier(
    const std::string& obj) const {
  auto it = carriers.find(obj);
  if (it == carriers.end())
    throw Error("presheaf has no carrier at '" + obj + "'");
  return it->second;
}

const std::string& FinPresheaf::restrict_along(const std::string& arrow,
                                               const std::string& sec) const {
  auto it = restrictions.find(arrow);
  if (it == restrictions.end())
    throw Error("presheaf has no restriction along '" + arrow + "'");
  auto jt = it->second.find(sec);
  if (jt == it->second.end())
    throw Error("restriction along '" + arrow + "' undefined on '" + sec + "'");
  return jt->second;
}

ValidationReport validate_presheaf(const FinPresheaf& P) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  if (!P.site) {
    fail("typing", "presheaf lacks a site");
    return rep;
  }
  const FinCategory& C = *P.site;
  for (const auto& o : C.objects)
    if (!P.carriers.count(o)) fail("presheaf-total", "no carrier at '" + o + "'");
  for (const auto& a : C.arrows) {
    auto it = P.restrictions.find(a.id);
    if (it == P.restrictions.end()) {
      fail("presheaf-total", "no restriction along '" + a.id + "'");
      continue;
    }
    auto src = P.carriers.find(a.cod);  // contravariant
    auto dst = P.carriers.find(a.dom);
    if (src == P.carriers.end() || dst == P.carriers.end()) continue;
    std::set<std::string> from(src->second.begin(), src->second.end());
    std::set<std::string> to(dst->second.begin(), dst->second.end());
    if (it->second.size() != from.size())
      fail("typing", "restriction along '" + a.id + "' is not total");
    for (const auto& [x, y] : it->second) {
      if (!from.count(x))
        fail("typing", "restriction along '" + a.id + "' defined on stray '" +
                           x + "'");
      if (!to.count(y))
        fail("typing", "restriction along '" + a.id + "' lands outside");
    }
  }
  if (!rep.ok()) return rep;

  for (const auto& [o, ida] : C.identities)
    for (const auto& x : P.carrier(o))
      if (P.restrict_along(ida, x) != x)
        fail("functor-identity", "restriction along id_" + o + " moves '" + x + "'");
  // contravariance: P(g∘f) = P(f)∘P(g)
  for (const auto& [pair, gf] : C.composition)
    for (const auto& x : P.carrier(C.arrow(pair.first).cod))
      if (P.restrict_along(gf, x) !=
          P.restrict_along(pair.second, P.restrict_along(pair.first, x)))
        fail("functor-composition",
             "restriction along " + gf + " differs from composite on '" + x + "'");
  return rep;
}

ValidationReport validate_presheaf_map(const PresheafMap& alpha) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  if (!alpha.from || !alpha.to || !alpha.from->site || !alpha.to->site ||
      alpha.from->site.get() != alpha.to->site.get()) {
    fail("typing", "presheaf map endpoints do not share a site");
    return rep;
  }
  const FinCategory& C = *alpha.from->site;
  for (const auto& o : C.objects) {
    auto it = alpha.components.find(o);
    if (it == alpha.components.end()) {
      fail("map-total", "no component at '" + o + "'");
      continue;
    }
    for (const auto& x : alpha.from->carrier(o))
      if (!it->second.count(x))
        fail("map-total", "component at '" + o + "' undefined on '" + x + "'");
  }
  if (!rep.ok()) return rep;
  for (const auto& a : C.arrows)
    for (const auto& x : alpha.from->carrier(a.cod))
      if (alpha.components.at(a.dom).at(alpha.from->restrict_along(a.id, x)) !=
          alpha.to->restrict_along(a.id, alpha.components.at(a.cod).at(x)))
        fail("naturality", "square for '" + a.id + "' fails at '" + x + "'");
  return rep;
}

FinPresheaf representable_presheaf(const CategoryPtr& site,
                                   const std::string& obj) {
  if (!site->has_object(obj))
    throw Error("representable_presheaf: unknown object '" + obj + "'");
  FinPresheaf P;
  P.site = site;
  for (const auto& c : site->objects) P.carriers[c] = site->hom(c, obj);
  for (const auto& a : site->arrows) {
    std::map<std::string, std::string> r;
    for (const auto& h : site->hom(a.cod, obj)) r[h] = site->compose(h, a.id);
    P.restrictions[a.id] = r;
  }
  return P;
}

namespace {

// Matching families over the sieve closure of a presieve: an element per
// arrow of the sieve with x_{f∘g} = x_f · g.
struct Matching {
  std::vector<std::string> arrows;  // sorted sieve arrows
  std::map<std::string, std::string> elems;
};

std::vector<Matching> all_matching_families(const FinPresheaf& P,
                                            const FinCategory& cat,
                                            const Sieve& sieve) {
  std::vector<std::string> arrows(sieve.arrows.begin(), sieve.arrows.end());
  std::vector<Matching> out;
  Matching cur;
  cur.arrows = arrows;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == arrows.size()) {
      out.push_back(cur);
      return;
    }
    const std::string& f = arrows[i];
    const Arrow& fa = cat.arrow(f);
    for (const auto& x : P.carrier(fa.dom)) {
      // compatibility with everything already assigned:
      // for g with f∘g in sieve, x_{f∘g} = x · g when assigned; and for
      // already-assigned h with h∘k = f∘g structure the closure form
      // x_{f∘g} = x_f · g covers all compatibility constraints.
      bool ok = true;
      for (const auto& g : cat.arrows_into(fa.dom)) {
        const std::string fg = cat.compose(f, g);
        auto it = cur.elems.find(fg);
        if (it != cur.elems.end() && it->second != P.restrict_along(g, x)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      // also check pair-compatibility in the other direction: assigned f'
      // whose composites coincide with composites of f
      for (const auto& [f2, x2] : cur.elems) {
        const Arrow& f2a = cat.arrow(f2);
        for (const auto& g2 : cat.arrows_into(f2a.dom)) {
          if (cat.compose(f2, g2) != f) continue;
          if (P.restrict_along(g2, x2) != x) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) continue;
      cur.elems[f] = x;
      rec(i + 1);
      cur.elems.erase(f);
    }
  };
  rec(0);
  return out;
}

}  // namespace

SheafReport sheaf_report(const FinPresheaf& P, const CoverageBasis& B) {
  SheafReport rep;
  ValidationReport pv = validate_presheaf(P);
  if (!pv.ok()) throw Error("sheaf check on invalid presheaf: " + pv.summary());
  const FinCategory& cat = *P.site;
  for (const auto& [obj, fams] : B.families) {
    for (const auto& pre : fams) {
      Sieve sieve = sieve_closure(cat, pre);
      for (const auto& m : all_matching_families(P, cat, sieve)) {
        std::size_t amalgamations = 0;
        for (const auto& s : P.carrier(obj)) {
          bool glues = true;
          for (const auto& [f, x] : m.elems)
            if (P.restrict_along(f, s) != x) {
              glues = false;
              break;
            }
          if (glues) ++amalgamations;
        }
        if (amalgamations != 1) {
          rep.sheaf = false;
          rep.detail = "matching family over {";
          for (const auto& a : pre.arrows) rep.detail += a + ",";
          rep.detail += "}@" + obj + " has " + std::to_string(amalgamations) +
                        " amalgamations";
          return rep;
        }
      }
    }
  }
  return rep;
}

bool is_sheaf(const FinPresheaf& P, const CoverageBasis& B) {
  return sheaf_report(P, B).sheaf;
}

bool is_locally_surjective(const PresheafMap& alpha, const CoverageBasis& B) {
  ValidationReport mv = validate_presheaf_map(alpha);
  if (!mv.ok())
    throw Error("is_locally_surjective on invalid map: " + mv.summary());
  const FinCategory& cat = *alpha.from->site;
  for (const auto& c : cat.objects) {
    for (const auto& s : alpha.to->carrier(c)) {
      bool locally_hit = false;
      for (const auto& fam : B.at(c)) {
        bool all = true;
        for (const auto& f : fam.arrows) {
          const Arrow& fa = cat.arrow(f);
          const std::string restricted = alpha.to->restrict_along(f, s);
          bool hit = false;
          for (const auto& x : alpha.from->carrier(fa.dom))
            if (alpha.components.at(fa.dom).at(x) == restricted) {
              hit = true;
              break;
            }
          if (!hit) {
            all = false;
            break;
          }
        }
        if (all) {
          locally_hit = true;
          break;
        }
      }
      if (!locally_hit) return false;
    }
  }
  return true;
}

CartesianReport is_cartesian_functor(const FinFunctor& F) {
  CartesianReport rep;
  ValidationReport fv = validate_functor(F);
  if (!fv.ok())
    throw Error("is_cartesian_functor on invalid functor: " + fv.summary());
  const FinCategory& S = *F.source;
  const FinCategory& T = *F.target;

  auto terminal = find_terminal(S);
  if (!terminal) {
    rep.applicable = false;
    rep.detail = "source has no terminal object";
    return rep;
  }
  // image of the terminal must be terminal in the target
  {
    const std::string t = F.obj(terminal->apex);
    for (const auto& o : T.objects)
      if (T.hom(o, t).size() != 1) {
        rep.preserves = false;
        rep.detail = "terminal object not preserved (at '" + o + "')";
        return rep;
      }
  }
  for (const auto& l : S.arrows)
    for (const auto& r : S.arrows) {
      if (l.cod != r.cod || l.id > r.id) continue;
      auto pb = find_pullback(S, l.id, r.id);
      if (!pb) continue;  // only pullbacks that exist are quantified over
      if (!is_pullback(T, F.arr(l.id), F.arr(r.id), F.obj(pb->vertex),
                       F.arr(pb->to_left), F.arr(pb->to_right))) {
        rep.preserves = false;
        rep.detail =
            "pullback of (" + l.id + ", " + r.id + ") not preserved";
        return rep;
      }
    }
  rep.preserves = true;
  return rep;
}

CartesianReport is_cartesian_functor(const SetValuedFunctor& G) {
  return is_cartesian_functor(G, all_pullback_squares(*G.source));
}

CartesianReport is_cartesian_functor(
    const SetValuedFunctor& G, const std::vector<PullbackSquare>& squares) {
  CartesianReport rep;
  ValidationReport gv = validate_set_functor(G);
  if (!gv.ok())
    throw Error("is_cartesian_functor on invalid set functor: " + gv.summary());
  const FinCategory& S = *G.source;

  auto terminal = find_terminal(S);
  if (!terminal) {
    rep.applicable = false;
    rep.detail = "source has no terminal object";
    return rep;
  }
  if (G.carrier(terminal->apex).size() != 1) {
    rep.preserves = false;
    rep.detail = "terminal object is not sent to a singleton";
    return rep;
  }
  for (const auto& sq : squares) {
    const Arrow& l = S.arrow(sq.left);
    const Arrow& r = S.arrow(sq.right);
    // G(vertex) -> {(x,y) : G(l)(x) = G(r)(y)} via the legs, a bijection
    std::set<std::pair<std::string, std::string>> fiber_product;
    for (const auto& x : G.carrier(l.dom))
      for (const auto& y : G.carrier(r.dom))
        if (G.apply(sq.left, x) == G.apply(sq.right, y))
          fiber_product.insert({x, y});
    std::set<std::pair<std::string, std::string>> image;
    for (const auto& v : G.carrier(sq.vertex)) {
      auto p = std::make_pair(G.apply(sq.to_left, v), G.apply(sq.to_right, v));
      if (!image.insert(p).second) {
        rep.preserves = false;
        rep.detail = "pullback of (" + sq.left + ", " + sq.right +
                     ") not preserved (legs not jointly injective)";
        return rep;
      }
    }
    if (image != fiber_product) {
      rep.preserves = false;
      rep.detail =
          "pullback of (" + sq.left + ", " + sq.right + ") not preserved";
      return rep;
    }
  }
  rep.preserves = true;
  return rep;
}

}  // namespace finsite
