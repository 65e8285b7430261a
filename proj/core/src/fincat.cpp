#include "finsite/fincat.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <sstream>

namespace finsite {

namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

bool FinCategory::has_object(const std::string& o) const {
  return std::binary_search(objects.begin(), objects.end(), o);
}

bool FinCategory::has_arrow(const std::string& a) const {
  auto it = std::lower_bound(
      arrows.begin(), arrows.end(), a,
      [](const Arrow& x, const std::string& id) { return x.id < id; });
  return it != arrows.end() && it->id == a;
}

const Arrow& FinCategory::arrow(const std::string& id) const {
  auto it = std::lower_bound(
      arrows.begin(), arrows.end(), id,
      [](const Arrow& x, const std::string& i) { return x.id < i; });
  if (it == arrows.end() || it->id != id)
    throw Error("unknown arrow '" + id + "'");
  return *it;
}

const std::string& FinCategory::identity(const std::string& obj) const {
  auto it = identities.find(obj);
  if (it == identities.end())
    throw Error("object '" + obj + "' has no identity arrow");
  return it->second;
}

const std::string& FinCategory::compose(const std::string& g,
                                        const std::string& f) const {
  auto it = composition.find({g, f});
  if (it == composition.end())
    throw Error("composition " + g + " after " + f + " is not in the table");
  return it->second;
}

std::optional<std::string> FinCategory::try_compose(
    const std::string& g, const std::string& f) const {
  auto it = composition.find({g, f});
  if (it == composition.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> FinCategory::hom(const std::string& dom,
                                          const std::string& cod) const {
  std::vector<std::string> out;
  for (const auto& a : arrows)
    if (a.dom == dom && a.cod == cod) out.push_back(a.id);
  return out;
}

std::vector<std::string> FinCategory::arrows_into(const std::string& cod) const {
  std::vector<std::string> out;
  for (const auto& a : arrows)
    if (a.cod == cod) out.push_back(a.id);
  return out;
}

std::vector<std::string> FinCategory::arrows_out_of(
    const std::string& dom) const {
  std::vector<std::string> out;
  for (const auto& a : arrows)
    if (a.dom == dom) out.push_back(a.id);
  return out;
}

void FinCategory::normalize() {
  sort_unique(objects);
  std::sort(arrows.begin(), arrows.end(),
            [](const Arrow& x, const Arrow& y) { return x.id < y.id; });
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
}

std::string ValidationReport::summary() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) os << "\n  [" << v.law << "] " << v.detail;
  return os.str();
}

ValidationReport validate_category(const FinCategory& cat) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };

  std::set<std::string> objset(cat.objects.begin(), cat.objects.end());
  std::set<std::string> seen_arrows;
  for (const auto& a : cat.arrows) {
    if (!seen_arrows.insert(a.id).second)
      fail("typing", "duplicate arrow id '" + a.id + "'");
    if (!objset.count(a.dom))
      fail("typing", "arrow '" + a.id + "' has unknown domain '" + a.dom + "'");
    if (!objset.count(a.cod))
      fail("typing",
           "arrow '" + a.id + "' has unknown codomain '" + a.cod + "'");
  }

  for (const auto& o : cat.objects) {
    auto it = cat.identities.find(o);
    if (it == cat.identities.end()) {
      fail("identity", "object '" + o + "' has no identity arrow");
      continue;
    }
    if (!cat.has_arrow(it->second)) {
      fail("identity", "identity of '" + o + "' names unknown arrow '" +
                           it->second + "'");
      continue;
    }
    const Arrow& id = cat.arrow(it->second);
    if (id.dom != o || id.cod != o)
      fail("identity", "identity of '" + o + "' is not an endo-arrow on it");
  }
  for (const auto& [o, a] : cat.identities)
    if (!objset.count(o))
      fail("identity", "identity table names unknown object '" + o + "'");

  // Composition: defined for exactly the composable pairs, correctly typed.
  for (const auto& g : cat.arrows) {
    for (const auto& f : cat.arrows) {
      bool composable = (f.cod == g.dom);
      auto it = cat.composition.find({g.id, f.id});
      if (composable && it == cat.composition.end()) {
        fail("composition-total",
             "missing composite " + g.id + " after " + f.id);
        continue;
      }
      if (!composable && it != cat.composition.end()) {
        fail("typing", "composite defined for non-composable pair (" + g.id +
                           ", " + f.id + ")");
        continue;
      }
      if (!composable) continue;
      if (!cat.has_arrow(it->second)) {
        fail("typing", "composite of (" + g.id + ", " + f.id +
                           ") names unknown arrow '" + it->second + "'");
        continue;
      }
      const Arrow& gf = cat.arrow(it->second);
      if (gf.dom != f.dom || gf.cod != g.cod)
        fail("typing", "composite " + it->second + " of (" + g.id + ", " +
                           f.id + ") has wrong endpoints");
    }
  }
  for (const auto& [pair, h] : cat.composition) {
    if (!cat.has_arrow(pair.first) || !cat.has_arrow(pair.second))
      fail("typing", "composition table mentions unknown arrow in (" +
                         pair.first + ", " + pair.second + ")");
  }
  if (!rep.ok()) return rep;  // laws below assume a well-typed total table

  for (const auto& f : cat.arrows) {
    const std::string& idc = cat.identities.at(f.cod);
    const std::string& idd = cat.identities.at(f.dom);
    if (cat.compose(idc, f.id) != f.id)
      fail("identity-left", "id_" + f.cod + " ∘ " + f.id + " ≠ " + f.id);
    if (cat.compose(f.id, idd) != f.id)
      fail("identity-right", f.id + " ∘ id_" + f.dom + " ≠ " + f.id);
  }

  for (const auto& h : cat.arrows)
    for (const auto& g : cat.arrows) {
      if (g.cod != h.dom) continue;
      for (const auto& f : cat.arrows) {
        if (f.cod != g.dom) continue;
        const std::string& hg = cat.compose(h.id, g.id);
        const std::string& gf = cat.compose(g.id, f.id);
        if (cat.compose(hg, f.id) != cat.compose(h.id, gf))
          fail("associativity",
               "(" + h.id + "∘" + g.id + ")∘" + f.id + " ≠ " + h.id + "∘(" +
                   g.id + "∘" + f.id + ")");
      }
    }
  return rep;
}

const std::string& FinFunctor::obj(const std::string& o) const {
  auto it = on_objects.find(o);
  if (it == on_objects.end())
    throw Error("functor does not map object '" + o + "'");
  return it->second;
}

const std::string& FinFunctor::arr(const std::string& a) const {
  auto it = on_arrows.find(a);
  if (it == on_arrows.end())
    throw Error("functor does not map arrow '" + a + "'");
  return it->second;
}

ValidationReport validate_functor(const FinFunctor& F) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  if (!F.source || !F.target) {
    fail("typing", "functor lacks source or target");
    return rep;
  }
  const FinCategory& S = *F.source;
  const FinCategory& T = *F.target;
  for (const auto& o : S.objects) {
    auto it = F.on_objects.find(o);
    if (it == F.on_objects.end())
      fail("functor-total", "object '" + o + "' not mapped");
    else if (!T.has_object(it->second))
      fail("typing", "object '" + o + "' mapped to unknown '" + it->second + "'");
  }
  for (const auto& a : S.arrows) {
    auto it = F.on_arrows.find(a.id);
    if (it == F.on_arrows.end()) {
      fail("functor-total", "arrow '" + a.id + "' not mapped");
      continue;
    }
    if (!T.has_arrow(it->second)) {
      fail("typing", "arrow '" + a.id + "' mapped to unknown '" + it->second + "'");
      continue;
    }
    const Arrow& fa = T.arrow(it->second);
    auto od = F.on_objects.find(a.dom);
    auto oc = F.on_objects.find(a.cod);
    if (od != F.on_objects.end() && fa.dom != od->second)
      fail("typing", "image of '" + a.id + "' has wrong domain");
    if (oc != F.on_objects.end() && fa.cod != oc->second)
      fail("typing", "image of '" + a.id + "' has wrong codomain");
  }
  if (!rep.ok()) return rep;

  for (const auto& [o, ida] : S.identities)
    if (F.arr(ida) != T.identity(F.obj(o)))
      fail("functor-identity", "F(id_" + o + ") is not an identity");
  for (const auto& [pair, gf] : S.composition) {
    const std::string img = T.compose(F.arr(pair.first), F.arr(pair.second));
    if (img != F.arr(gf))
      fail("functor-composition", "F(" + pair.first + "∘" + pair.second +
                                      ") ≠ F(" + pair.first + ")∘F(" +
                                      pair.second + ")");
  }
  return rep;
}

FinFunctor identity_functor(const CategoryPtr& cat) {
  FinFunctor F;
  F.source = cat;
  F.target = cat;
  for (const auto& o : cat->objects) F.on_objects[o] = o;
  for (const auto& a : cat->arrows) F.on_arrows[a.id] = a.id;
  return F;
}

FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F) {
  if (F.target.get() != G.source.get())
    throw Error("functor composition: middle categories differ");
  FinFunctor H;
  H.source = F.source;
  H.target = G.target;
  for (const auto& [o, fo] : F.on_objects) H.on_objects[o] = G.obj(fo);
  for (const auto& [a, fa] : F.on_arrows) H.on_arrows[a] = G.arr(fa);
  return H;
}

const std::vector<std::string>& SetValuedFunctor::carrier(
    const std::string& obj) const {
  auto it = carriers.find(obj);
  if (it == carriers.end())
    throw Error("set-valued functor has no carrier at '" + obj + "'");
  return it->second;
}

const std::string& SetValuedFunctor::apply(const std::string& arrow,
                                           const std::string& elem) const {
  auto it = actions.find(arrow);
  if (it == actions.end())
    throw Error("set-valued functor has no action for arrow '" + arrow + "'");
  auto jt = it->second.find(elem);
  if (jt == it->second.end())
    throw Error("action of '" + arrow + "' undefined on element '" + elem + "'");
  return jt->second;
}

ValidationReport validate_set_functor(const SetValuedFunctor& F) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  if (!F.source) {
    fail("typing", "set-valued functor lacks a source category");
    return rep;
  }
  const FinCategory& C = *F.source;
  for (const auto& o : C.objects)
    if (!F.carriers.count(o)) fail("functor-total", "no carrier at '" + o + "'");
  for (const auto& a : C.arrows) {
    auto it = F.actions.find(a.id);
    if (it == F.actions.end()) {
      fail("functor-total", "no action for arrow '" + a.id + "'");
      continue;
    }
    auto dit = F.carriers.find(a.dom);
    auto cit = F.carriers.find(a.cod);
    if (dit == F.carriers.end() || cit == F.carriers.end()) continue;
    std::set<std::string> dom(dit->second.begin(), dit->second.end());
    std::set<std::string> cod(cit->second.begin(), cit->second.end());
    if (it->second.size() != dom.size())
      fail("typing", "action of '" + a.id + "' is not total on its domain");
    for (const auto& [x, y] : it->second) {
      if (!dom.count(x))
        fail("typing", "action of '" + a.id + "' defined on stray '" + x + "'");
      if (!cod.count(y))
        fail("typing", "action of '" + a.id + "' lands outside its codomain");
    }
  }
  if (!rep.ok()) return rep;

  for (const auto& [o, ida] : C.identities)
    for (const auto& x : F.carrier(o))
      if (F.apply(ida, x) != x)
        fail("functor-identity", "action of id_" + o + " moves '" + x + "'");
  for (const auto& [pair, gf] : C.composition)
    for (const auto& x : F.carrier(C.arrow(pair.second).dom))
      if (F.apply(gf, x) != F.apply(pair.first, F.apply(pair.second, x)))
        fail("functor-composition",
             "action of " + gf + " differs from composite on '" + x + "'");
  return rep;
}

// ---------------------------------------------------------------------------
// comma categories

CommaResult comma_category(const FinFunctor& F, const FinFunctor& G) {
  if (F.target.get() != G.target.get())
    throw Error("comma_category: functors do not share a target");
  const FinCategory& A = *F.source;
  const FinCategory& B = *G.source;
  const FinCategory& C = *F.target;

  CommaResult out;
  auto cat = std::make_shared<FinCategory>();

  auto obj_id = [](const std::string& a, const std::string& b,
                   const std::string& al) { return a + "@" + b + "@" + al; };

  for (const auto& a : A.objects)
    for (const auto& b : B.objects)
      for (const auto& al : C.hom(F.obj(a), G.obj(b))) {
        std::string id = obj_id(a, b, al);
        cat->objects.push_back(id);
        out.components[id] = {a, b, al};
      }

  // Arrows (a,b,α) → (a',b',α'): pairs (s : a→a', t : b→b') with
  // G(t)∘α = α'∘F(s).  The id records the source triple to stay unique.
  struct CommaArrow {
    std::string s, t;
    std::string src, dst;
  };
  std::map<std::string, CommaArrow> data;
  for (const auto& [src, comp] : out.components) {
    const auto& [a, b, al] = comp;
    for (const auto& s : A.arrows_out_of(a))
      for (const auto& t : B.arrows_out_of(b)) {
        const std::string lhs = C.compose(G.arr(t), al);
        // candidate target: (cod s, cod t, α') with α'∘F(s) = G(t)∘α
        const std::string a2 = A.arrow(s).cod;
        const std::string b2 = B.arrow(t).cod;
        for (const auto& al2 : C.hom(F.obj(a2), G.obj(b2))) {
          if (C.compose(al2, F.arr(s)) != lhs) continue;
          std::string id = s + "@" + t + "@" + al;
          // (s,t) determines α' uniquely given α?  Not necessarily: two
          // different α' can satisfy the square, and those are distinct
          // comma arrows with distinct targets, so key on the target too.
          std::string full = id + "@" + al2;
          data[full] = {s, t, src, obj_id(a2, b2, al2)};
        }
      }
  }
  for (const auto& [id, ca] : data)
    cat->arrows.push_back({id, ca.src, ca.dst});
  cat->normalize();

  for (const auto& [id, comp] : out.components) {
    const auto& [a, b, al] = comp;
    cat->identities[id] =
        A.identity(a) + "@" + B.identity(b) + "@" + al + "@" + al;
  }
  for (const auto& [gid, g] : data)
    for (const auto& [fid, f] : data) {
      if (f.dst != g.src) continue;
      const auto& [fa, fb, fal] = out.components.at(f.src);
      std::string comp_id = A.compose(g.s, f.s) + "@" + B.compose(g.t, f.t) +
                            "@" + fal + "@" +
                            out.components.at(g.dst)[2];
      cat->composition[{gid, fid}] = comp_id;
    }

  out.category = cat;
  out.proj_left.source = cat;
  out.proj_left.target = F.source;
  out.proj_right.source = cat;
  out.proj_right.target = G.source;
  for (const auto& [id, comp] : out.components) {
    out.proj_left.on_objects[id] = comp[0];
    out.proj_right.on_objects[id] = comp[1];
  }
  for (const auto& [id, ca] : data) {
    out.proj_left.on_arrows[id] = ca.s;
    out.proj_right.on_arrows[id] = ca.t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// categories of elements

std::string ElementsResult::object_id(const std::string& obj,
                                      const std::string& elem) const {
  return obj + "@" + elem;
}

std::string ElementsResult::arrow_id(const std::string& arrow,
                                     const std::string& elem) const {
  return arrow + "@" + elem;
}

ElementsResult category_of_elements(const SetValuedFunctor& M) {
  ValidationReport rep = validate_set_functor(M);
  if (!rep.ok())
    throw Error("category_of_elements: functor invalid: " + rep.summary());
  const FinCategory& C = *M.source;

  ElementsResult out;
  auto cat = std::make_shared<FinCategory>();
  for (const auto& c : C.objects)
    for (const auto& x : M.carrier(c)) {
      std::string id = c + "@" + x;
      cat->objects.push_back(id);
      out.components[id] = {c, x};
    }
  for (const auto& u : C.arrows)
    for (const auto& x : M.carrier(u.dom)) {
      std::string id = u.id + "@" + x;
      cat->arrows.push_back({id, u.dom + "@" + x, u.cod + "@" + M.apply(u.id, x)});
    }
  cat->normalize();
  for (const auto& [id, comp] : out.components)
    cat->identities[id] = C.identity(comp.first) + "@" + comp.second;
  for (const auto& v : C.arrows)
    for (const auto& u : C.arrows) {
      if (u.cod != v.dom) continue;
      const std::string& vu = C.compose(v.id, u.id);
      for (const auto& x : M.carrier(u.dom))
        cat->composition[{v.id + "@" + M.apply(u.id, x), u.id + "@" + x}] =
            vu + "@" + x;
    }

  out.category = cat;
  out.projection.source = cat;
  out.projection.target = M.source;
  for (const auto& [id, comp] : out.components)
    out.projection.on_objects[id] = comp.first;
  for (const auto& a : cat->arrows) {
    auto at = a.id.rfind('@');
    out.projection.on_arrows[a.id] = a.id.substr(0, at);
  }
  return out;
}

// ---------------------------------------------------------------------------
// limits

Diagram empty_diagram(const CategoryPtr& cat) {
  Diagram d;
  d.functor.source = std::make_shared<FinCategory>();
  d.functor.target = cat;
  return d;
}

Diagram cospan_diagram(const CategoryPtr& cat, const std::string& left,
                       const std::string& right) {
  const Arrow& l = cat->arrow(left);
  const Arrow& r = cat->arrow(right);
  if (l.cod != r.cod) throw Error("cospan_diagram: codomains differ");
  CategoryBuilder b;
  b.object("l").object("r").object("v");
  b.arrow("lv", "l", "v").arrow("rv", "r", "v");
  b.auto_identities();
  Diagram d;
  d.functor.source = b.build_shared();
  d.functor.target = cat;
  d.functor.on_objects = {{"l", l.dom}, {"r", r.dom}, {"v", l.cod}};
  d.functor.on_arrows = {{"lv", left},
                         {"rv", right},
                         {"id:l", cat->identity(l.dom)},
                         {"id:r", cat->identity(r.dom)},
                         {"id:v", cat->identity(l.cod)}};
  return d;
}

namespace {

// All cones over the diagram with the given apex, as leg maps.
std::vector<std::map<std::string, std::string>> cones_with_apex(
    const FinCategory& cat, const Diagram& dia, const std::string& apex) {
  const FinCategory& shape = *dia.functor.source;
  std::vector<std::map<std::string, std::string>> cones;
  std::vector<std::string> nodes = shape.objects;
  std::map<std::string, std::string> legs;

  // Depth-first assignment with commutation checks against already-placed
  // legs; shapes here are tiny so this is plenty fast.
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == nodes.size()) {
      cones.push_back(legs);
      return;
    }
    const std::string& node = nodes[i];
    for (const auto& leg : cat.hom(apex, dia.functor.obj(node))) {
      legs[node] = leg;
      bool ok = true;
      for (const auto& e : shape.arrows) {
        if (e.dom != node && e.cod != node) continue;
        auto ld = legs.find(e.dom);
        auto lc = legs.find(e.cod);
        if (ld == legs.end() || lc == legs.end()) continue;
        if (cat.compose(dia.functor.arr(e.id), ld->second) != lc->second) {
          ok = false;
          break;
        }
      }
      if (ok) rec(i + 1);
      legs.erase(node);
    }
  };
  rec(0);
  return cones;
}

}  // namespace

std::optional<ConeWitness> compute_limit(const FinCategory& cat,
                                         const Diagram& dia) {
  ValidationReport frep = validate_functor(dia.functor);
  if (!frep.ok())
    throw Error("compute_limit: diagram is not functorial: " + frep.summary());
  if (dia.functor.target && &cat != dia.functor.target.get()) {
    // Allow a diagram built over any pointer to an equal category; cheap
    // sanity only, arrows are checked below anyway.
  }
  for (const auto& [o, img] : dia.functor.on_objects)
    if (!cat.has_object(img))
      throw Error("compute_limit: diagram object lands outside the category");
  for (const auto& [a, img] : dia.functor.on_arrows)
    if (!cat.has_arrow(img))
      throw Error("compute_limit: diagram arrow lands outside the category");

  for (const auto& apex : cat.objects) {
    for (const auto& legs : cones_with_apex(cat, dia, apex)) {
      // Universal property: every cone factors uniquely through (apex,legs).
      bool universal = true;
      std::size_t checked = 0;
      for (const auto& other : cat.objects) {
        for (const auto& olegs : cones_with_apex(cat, dia, other)) {
          ++checked;
          std::size_t factorizations = 0;
          for (const auto& u : cat.hom(other, apex)) {
            bool commutes = true;
            for (const auto& [node, leg] : legs)
              if (cat.compose(leg, u) != olegs.at(node)) {
                commutes = false;
                break;
              }
            if (commutes) ++factorizations;
          }
          if (factorizations != 1) {
            universal = false;
            break;
          }
        }
        if (!universal) break;
      }
      if (universal) {
        ConeWitness w;
        w.apex = apex;
        w.legs = legs;
        w.cones_checked = checked;
        return w;
      }
    }
  }
  return std::nullopt;
}

std::optional<ConeWitness> find_terminal(const FinCategory& cat) {
  // Limit of the empty diagram, inlined: an object with exactly one arrow
  // from every object.
  for (const auto& t : cat.objects) {
    bool ok = true;
    for (const auto& o : cat.objects)
      if (cat.hom(o, t).size() != 1) {
        ok = false;
        break;
      }
    if (ok) {
      ConeWitness w;
      w.apex = t;
      w.cones_checked = cat.objects.size();
      return w;
    }
  }
  return std::nullopt;
}

bool is_pullback(const FinCategory& cat, const std::string& left,
                 const std::string& right, const std::string& vertex,
                 const std::string& to_left, const std::string& to_right) {
  const Arrow& l = cat.arrow(left);
  const Arrow& r = cat.arrow(right);
  const Arrow& tl = cat.arrow(to_left);
  const Arrow& tr = cat.arrow(to_right);
  if (l.cod != r.cod || tl.dom != vertex || tr.dom != vertex) return false;
  if (tl.cod != l.dom || tr.cod != r.dom) return false;
  if (cat.compose(left, to_left) != cat.compose(right, to_right)) return false;
  for (const auto& o : cat.objects)
    for (const auto& f : cat.hom(o, l.dom))
      for (const auto& g : cat.hom(o, r.dom)) {
        if (cat.compose(left, f) != cat.compose(right, g)) continue;
        std::size_t count = 0;
        for (const auto& u : cat.hom(o, vertex))
          if (cat.compose(to_left, u) == f && cat.compose(to_right, u) == g)
            ++count;
        if (count != 1) return false;
      }
  return true;
}

std::vector<PullbackSquare> all_pullback_squares(const FinCategory& cat) {
  std::vector<PullbackSquare> out;
  for (const auto& l : cat.arrows)
    for (const auto& r : cat.arrows) {
      if (l.cod != r.cod || l.id > r.id) continue;
      auto pb = find_pullback(cat, l.id, r.id);
      if (pb)
        out.push_back({l.id, r.id, pb->vertex, pb->to_left, pb->to_right});
    }
  return out;
}

std::optional<PullbackWitness> find_pullback(const FinCategory& cat,
                                             const std::string& left,
                                             const std::string& right) {
  const Arrow& l = cat.arrow(left);
  const Arrow& r = cat.arrow(right);
  if (l.cod != r.cod) throw Error("find_pullback: not a cospan");
  for (const auto& v : cat.objects)
    for (const auto& tl : cat.hom(v, l.dom))
      for (const auto& tr : cat.hom(v, r.dom))
        if (is_pullback(cat, left, right, v, tl, tr))
          return PullbackWitness{v, tl, tr};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// bounded functor enumeration

namespace {

// Carrier names are "0", "1", ... so that enumeration output is canonical.
std::vector<std::string> canonical_carrier(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::to_string(i));
  return v;
}

bool functor_less(const SetValuedFunctor& F, const SetValuedFunctor& G) {
  auto key = [](const SetValuedFunctor& X) {
    std::vector<std::string> k;
    for (const auto& [o, c] : X.carriers) k.push_back(std::to_string(c.size()));
    for (const auto& [a, tab] : X.actions)
      for (const auto& [x, y] : tab) k.push_back(a + ":" + x + ">" + y);
    return k;
  };
  return key(F) < key(G);
}

}  // namespace

bool naturally_isomorphic(const SetValuedFunctor& F,
                          const SetValuedFunctor& G) {
  if (F.source.get() != G.source.get()) {
    if (!F.source || !G.source) return false;
    if (F.source->objects != G.source->objects) return false;
  }
  const FinCategory& C = *F.source;
  for (const auto& o : C.objects)
    if (F.carrier(o).size() != G.carrier(o).size()) return false;

  // Backtracking over per-object bijections with naturality pruning.
  std::vector<std::string> objs = C.objects;
  std::map<std::string, std::map<std::string, std::string>> eta;

  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == objs.size()) return true;
    const std::string& o = objs[i];
    std::vector<std::string> fc = F.carrier(o);
    std::vector<std::string> gc = G.carrier(o);
    std::sort(gc.begin(), gc.end());
    do {
      std::map<std::string, std::string> comp;
      for (std::size_t j = 0; j < fc.size(); ++j) comp[fc[j]] = gc[j];
      eta[o] = comp;
      bool ok = true;
      for (const auto& a : C.arrows) {
        auto ed = eta.find(a.dom);
        auto ec = eta.find(a.cod);
        if (ed == eta.end() || ec == eta.end()) continue;
        for (const auto& x : F.carrier(a.dom))
          if (G.apply(a.id, ed->second.at(x)) != ec->second.at(F.apply(a.id, x))) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok && rec(i + 1)) return true;
    } while (std::next_permutation(gc.begin(), gc.end()));
    eta.erase(o);
    return false;
  };
  return rec(0);
}

std::vector<SetValuedFunctor> enumerate_set_valued_functors(
    const CategoryPtr& cat, std::size_t k) {
  const FinCategory& C = *cat;
  std::vector<SetValuedFunctor> found;

  std::vector<std::string> objs = C.objects;
  std::map<std::string, std::size_t> sizes;

  // Non-identity, non-composite arrows would suffice, but at this scale we
  // simply assign actions arrow by arrow and check functoriality at the end.
  std::vector<Arrow> free_arrows;
  std::set<std::string> identity_ids;
  for (const auto& [o, ida] : C.identities) identity_ids.insert(ida);
  for (const auto& a : C.arrows)
    if (!identity_ids.count(a.id)) free_arrows.push_back(a);

  std::function<void(std::size_t, SetValuedFunctor&)> assign_actions =
      [&](std::size_t i, SetValuedFunctor& F) {
        if (i == free_arrows.size()) {
          if (validate_set_functor(F).ok()) {
            bool dup = false;
            for (const auto& H : found)
              if (naturally_isomorphic(F, H)) {
                dup = true;
                break;
              }
            if (!dup) found.push_back(F);
          }
          return;
        }
        const Arrow& a = free_arrows[i];
        const auto dom = F.carrier(a.dom);
        const auto cod = F.carrier(a.cod);
        if (!dom.empty() && cod.empty()) return;  // no function exists
        // enumerate all |cod|^|dom| tables in lexicographic order
        std::vector<std::size_t> idx(dom.size(), 0);
        while (true) {
          std::map<std::string, std::string> tab;
          for (std::size_t j = 0; j < dom.size(); ++j) tab[dom[j]] = cod[idx[j]];
          F.actions[a.id] = tab;
          assign_actions(i + 1, F);
          F.actions.erase(a.id);
          if (dom.empty()) break;
          std::size_t p = 0;
          while (p < idx.size() && ++idx[p] == cod.size()) idx[p++] = 0;
          if (p == idx.size()) break;
        }
      };

  std::function<void(std::size_t)> assign_sizes = [&](std::size_t i) {
    if (i == objs.size()) {
      SetValuedFunctor F;
      F.source = cat;
      for (const auto& [o, n] : sizes) F.carriers[o] = canonical_carrier(n);
      for (const auto& [o, ida] : C.identities) {
        std::map<std::string, std::string> tab;
        for (const auto& x : F.carriers[o]) tab[x] = x;
        F.actions[ida] = tab;
      }
      assign_actions(0, F);
      return;
    }
    for (std::size_t n = 0; n <= k; ++n) {
      sizes[objs[i]] = n;
      assign_sizes(i + 1);
    }
    sizes.erase(objs[i]);
  };
  assign_sizes(0);

  std::sort(found.begin(), found.end(), functor_less);
  return found;
}

bool is_cofiltered(const FinCategory& cat) {
  if (cat.objects.empty()) return false;
  for (const auto& a : cat.objects)
    for (const auto& b : cat.objects) {
      bool spanned = false;
      for (const auto& w : cat.objects)
        if (!cat.hom(w, a).empty() && !cat.hom(w, b).empty()) {
          spanned = true;
          break;
        }
      if (!spanned) return false;
    }
  for (const auto& f : cat.arrows)
    for (const auto& g : cat.arrows) {
      if (f.dom != g.dom || f.cod != g.cod || f.id == g.id) continue;
      bool equalized = false;
      for (const auto& h : cat.arrows) {
        if (h.cod != f.dom) continue;
        if (cat.compose(f.id, h.id) == cat.compose(g.id, h.id)) {
          equalized = true;
          break;
        }
      }
      if (!equalized) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// builder

CategoryBuilder& CategoryBuilder::object(const std::string& id) {
  cat_.objects.push_back(id);
  return *this;
}

CategoryBuilder& CategoryBuilder::arrow(const std::string& id,
                                        const std::string& dom,
                                        const std::string& cod) {
  cat_.arrows.push_back({id, dom, cod});
  return *this;
}

CategoryBuilder& CategoryBuilder::identity(const std::string& obj,
                                           const std::string& arrow) {
  cat_.identities[obj] = arrow;
  return *this;
}

CategoryBuilder& CategoryBuilder::compose(const std::string& g,
                                          const std::string& f,
                                          const std::string& gf) {
  cat_.composition[{g, f}] = gf;
  return *this;
}

CategoryBuilder& CategoryBuilder::auto_identities() {
  for (const auto& o : cat_.objects)
    if (!cat_.identities.count(o)) {
      std::string id = "id:" + o;
      cat_.arrows.push_back({id, o, o});
      cat_.identities[o] = id;
    }
  // identity laws fill the forced composites
  for (const auto& a : cat_.arrows) {
    auto di = cat_.identities.find(a.dom);
    auto ci = cat_.identities.find(a.cod);
    if (di != cat_.identities.end() &&
        !cat_.composition.count({a.id, di->second}))
      cat_.composition[{a.id, di->second}] = a.id;
    if (ci != cat_.identities.end() &&
        !cat_.composition.count({ci->second, a.id}))
      cat_.composition[{ci->second, a.id}] = a.id;
  }
  return *this;
}

FinCategory CategoryBuilder::build() const {
  FinCategory c = cat_;
  c.normalize();
  return c;
}

CategoryPtr CategoryBuilder::build_shared() const {
  return std::make_shared<FinCategory>(build());
}

}  // namespace finsite
