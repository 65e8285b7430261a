#include "finsite/overtopos.hpp"

#include <algorithm>
#include <functional>

namespace finsite {

// ---------------------------------------------------------------------------
// set-based antecedent basis

OverSite antecedent_basis(const FragmentSite& frag) {
  OverSite out;
  ElementsResult elems = category_of_elements(frag.interp);
  out.elements = elems.category;
  out.proj_to_fragment = elems.projection;
  out.components = elems.components;

  for (const auto& [eobj, comp] : elems.components) {
    const auto& [fid, enc] = comp;
    for (const auto& fam : frag.basis.at(fid)) {
      Presieve p;
      p.codomain = eobj;
      for (const auto& th : fam.arrows)
        for (const auto& [b, img] : frag.graphs.at(th))
          if (encode_tuple(img) == enc)
            p.arrows.insert(elems.arrow_id(th, encode_tuple(b)));
      if (p.arrows.empty())
        out.notes.push_back("empty antecedent family at " + eobj +
                            " (the empty sieve covers there)");
      out.raw_families.push_back(p);
      out.basis.add(p);
    }
  }
  std::sort(out.raw_families.begin(), out.raw_families.end());
  out.basis = multicomposition_closure(*out.elements, out.basis);
  return out;
}

// ---------------------------------------------------------------------------
// presheaf models and the general form

ValidationReport validate_presheaf_model(const PresheafModel& pm) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  if (!pm.frag_cat || !pm.site) {
    fail("typing", "presheaf model lacks a category");
    return rep;
  }
  for (const auto& o : pm.frag_cat->objects) {
    auto it = pm.interp.find(o);
    if (it == pm.interp.end()) {
      fail("model-total", "no presheaf at '" + o + "'");
      continue;
    }
    ValidationReport r = validate_presheaf(it->second);
    if (!r.ok()) fail("presheaf", "presheaf at '" + o + "': " + r.summary());
    if (!is_sheaf(it->second, pm.site_basis))
      fail("sheaf", "interpretation at '" + o + "' is not a sheaf");
  }
  if (!rep.ok()) return rep;

  for (const auto& a : pm.frag_cat->arrows) {
    auto it = pm.actions.find(a.id);
    if (it == pm.actions.end()) {
      fail("model-total", "no action for arrow '" + a.id + "'");
      continue;
    }
    PresheafMap alpha;
    alpha.from = &pm.interp.at(a.dom);
    alpha.to = &pm.interp.at(a.cod);
    alpha.components = it->second;
    ValidationReport r = validate_presheaf_map(alpha);
    if (!r.ok()) fail("naturality", "action of '" + a.id + "': " + r.summary());
  }
  if (!rep.ok()) return rep;

  // functoriality of the interpretation
  for (const auto& [o, ida] : pm.frag_cat->identities)
    for (const auto& c : pm.site->objects)
      for (const auto& x : pm.interp.at(o).carrier(c))
        if (pm.actions.at(ida).at(c).at(x) != x)
          fail("functor-identity", "action of id at '" + o + "' moves '" + x + "'");
  for (const auto& [pair, gf] : pm.frag_cat->composition) {
    const Arrow& f = pm.frag_cat->arrow(pair.second);
    for (const auto& c : pm.site->objects)
      for (const auto& x : pm.interp.at(f.dom).carrier(c))
        if (pm.actions.at(gf).at(c).at(x) !=
            pm.actions.at(pair.first).at(c).at(pm.actions.at(pair.second).at(c).at(x)))
          fail("functor-composition",
               "action of '" + gf + "' differs from the composite");
  }

  // fragment basis families must interpret to jointly locally surjective
  // families
  for (const auto& [obj, fams] : pm.frag_basis.families)
    for (const auto& fam : fams) {
      for (const auto& c : pm.site->objects) {
        for (const auto& s : pm.interp.at(obj).carrier(c)) {
          bool hit = false;
          for (const auto& famc : pm.site_basis.at(c)) {
            bool all = true;
            for (const auto& w : famc.arrows) {
              const Arrow& wa = pm.site->arrow(w);
              const std::string restricted =
                  pm.interp.at(obj).restrict_along(w, s);
              bool local = false;
              for (const auto& th : fam.arrows) {
                const Arrow& ta = pm.frag_cat->arrow(th);
                for (const auto& x : pm.interp.at(ta.dom).carrier(wa.dom))
                  if (pm.actions.at(th).at(wa.dom).at(x) == restricted) {
                    local = true;
                    break;
                  }
                if (local) break;
              }
              if (!local) {
                all = false;
                break;
              }
            }
            if (all) {
              hit = true;
              break;
            }
          }
          if (!hit) {
            fail("covering",
                 "family at '" + obj + "' is not locally surjective at '" + c +
                     "'");
            break;
          }
        }
      }
    }
  return rep;
}

PresheafModel presheaf_model_over_terminal(const FragmentSite& frag) {
  PresheafModel pm;
  pm.frag_cat = frag.compiled;
  pm.frag_basis = frag.basis;
  CategoryBuilder b;
  b.object("pt");
  b.auto_identities();
  pm.site = b.build_shared();
  pm.site_basis = trivial_basis(*pm.site);
  for (const auto& [fid, carrier] : frag.interp.carriers) {
    FinPresheaf P;
    P.site = pm.site;
    P.carriers["pt"] = carrier;
    std::map<std::string, std::string> idr;
    for (const auto& x : carrier) idr[x] = x;
    P.restrictions["id:pt"] = idr;
    pm.interp[fid] = P;
  }
  for (const auto& [aid, act] : frag.interp.actions)
    pm.actions[aid]["pt"] = act;
  return pm;
}

namespace {

// The fiber presheaf ⟦θ⟧⁻¹(a) for a basic generalized element a ∈ P_φ(c):
// sections at e are pairs (u : e → c, b ∈ P_dom(e)) with θ_e(b) = a·u.
struct FiberSection {
  std::string u;
  std::string b;
  auto operator<=>(const FiberSection&) const = default;
};

}  // namespace

OverSite antecedent_basis_general(const PresheafModel& pm) {
  {
    ValidationReport r = validate_presheaf_model(pm);
    if (!r.ok())
      throw Error("antecedent_basis_general: invalid model: " + r.summary());
  }
  const FinCategory& C = *pm.site;
  const FinCategory& F = *pm.frag_cat;

  OverSite out;
  out.general = true;
  auto cat = std::make_shared<FinCategory>();

  auto obj_id = [](const std::string& c, const std::string& phi,
                   const std::string& a) { return c + "@" + phi + "@" + a; };
  auto arr_id = [](const std::string& u, const std::string& th,
                   const std::string& a, const std::string& a2) {
    return u + "@" + th + "@" + a + "@" + a2;
  };

  for (const auto& c : C.objects)
    for (const auto& phi : F.objects)
      for (const auto& a : pm.interp.at(phi).carrier(c)) {
        std::string id = obj_id(c, phi, a);
        cat->objects.push_back(id);
        out.general_components[id] = {c, phi, a};
      }

  // arrows (u : c -> c', θ : φ -> φ') : (c,φ,a) -> (c',φ',a') when
  // θ_c(a) = a'·u
  for (const auto& u : C.arrows)
    for (const auto& th : F.arrows) {
      const Arrow& ta = F.arrow(th.id);
      for (const auto& a : pm.interp.at(ta.dom).carrier(u.dom))
        for (const auto& a2 : pm.interp.at(ta.cod).carrier(u.cod)) {
          if (pm.actions.at(th.id).at(u.dom).at(a) !=
              pm.interp.at(ta.cod).restrict_along(u.id, a2))
            continue;
          cat->arrows.push_back({arr_id(u.id, th.id, a, a2),
                                 obj_id(u.dom, ta.dom, a),
                                 obj_id(u.cod, ta.cod, a2)});
        }
    }
  cat->normalize();
  for (const auto& [id, comp] : out.general_components) {
    const auto& [c, phi, a] = comp;
    cat->identities[id] = arr_id(C.identity(c), F.identity(phi), a, a);
  }
  for (const auto& a2arr : cat->arrows)
    for (const auto& a1arr : cat->arrows) {
      if (a1arr.cod != a2arr.dom) continue;
      // decode (u, θ, a, a') from the ids
      auto decode = [](const std::string& id) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
          auto at = id.find('@', pos);
          parts.push_back(id.substr(pos, at - pos));
          pos = at + 1;
        }
        parts.push_back(id.substr(pos));
        return parts;
      };
      auto p1 = decode(a1arr.id);
      auto p2 = decode(a2arr.id);
      cat->composition[{a2arr.id, a1arr.id}] =
          arr_id(C.compose(p2[0], p1[0]), F.compose(p2[1], p1[1]), p1[2], p2[3]);
    }
  out.elements = cat;

  out.proj_to_fragment.source = cat;
  out.proj_to_fragment.target = pm.frag_cat;
  FinFunctor to_base;
  to_base.source = cat;
  to_base.target = pm.site;
  for (const auto& [id, comp] : out.general_components) {
    out.proj_to_fragment.on_objects[id] = comp[1];
    to_base.on_objects[id] = comp[0];
  }
  for (const auto& arr : cat->arrows) {
    std::size_t first = arr.id.find('@');
    std::size_t second = arr.id.find('@', first + 1);
    to_base.on_arrows[arr.id] = arr.id.substr(0, first);
    out.proj_to_fragment.on_arrows[arr.id] =
        arr.id.substr(first + 1, second - first - 1);
  }
  out.proj_to_base = to_base;

  // basis families: per object (c,φ,a) and fragment family {θ_i} at φ,
  // minimal (plus maximal) collections of squares jointly locally
  // surjective onto the fiber presheaves
  for (const auto& [eobj, comp] : out.general_components) {
    const auto& [c, phi, a] = comp;
    for (const auto& fam : pm.frag_basis.at(phi)) {
      // candidate arrows, grouped by the fragment cover arrow
      struct Cand {
        std::string arrow;  // comma arrow id
        std::string th;
        std::string e;  // domain site object
        FiberSection sec;
      };
      std::vector<std::vector<Cand>> groups;
      std::vector<std::string> ths(fam.arrows.begin(), fam.arrows.end());
      for (const auto& th : ths) {
        const Arrow& ta = F.arrow(th);
        std::vector<Cand> g;
        for (const auto& u : C.arrows) {
          if (u.cod != c) continue;
          for (const auto& b : pm.interp.at(ta.dom).carrier(u.dom)) {
            if (pm.actions.at(th).at(u.dom).at(b) !=
                pm.interp.at(ta.cod).restrict_along(u.id, a))
              continue;
            g.push_back({arr_id(u.id, th, b, a), th, u.dom,
                         FiberSection{u.id, b}});
          }
        }
        groups.push_back(g);
      }

      // the fiber presheaf of θ over a, and local surjectivity of a chosen
      // subset of sections onto it
      auto fiber_sections = [&](const std::string& th,
                                const std::string& e) {
        const Arrow& ta = F.arrow(th);
        std::vector<FiberSection> out_secs;
        for (const auto& u : C.hom(e, c))
          for (const auto& b : pm.interp.at(ta.dom).carrier(e))
            if (pm.actions.at(th).at(e).at(b) ==
                pm.interp.at(ta.cod).restrict_along(u, a))
              out_secs.push_back({u, b});
        return out_secs;
      };
      auto restrict_section = [&](const std::string& th, const FiberSection& s,
                                  const std::string& w) {
        const Arrow& wa = C.arrow(w);
        const Arrow& ta = F.arrow(th);
        return FiberSection{C.compose(s.u, w),
                            pm.interp.at(ta.dom).restrict_along(w, s.b)};
        (void)wa;
      };
      auto locally_surjective = [&](std::size_t gi,
                                    const std::vector<bool>& chosen) {
        const std::string& th = ths[gi];
        for (const auto& e : C.objects) {
          for (const auto& sec : fiber_sections(th, e)) {
            bool hit_locally = false;
            for (const auto& famc : pm.site_basis.at(e)) {
              bool all = true;
              for (const auto& w : famc.arrows) {
                const Arrow& wa = C.arrow(w);
                FiberSection restricted = restrict_section(th, sec, w);
                bool hit = false;
                for (std::size_t ci = 0; ci < groups[gi].size(); ++ci) {
                  if (!chosen[ci]) continue;
                  const Cand& cand = groups[gi][ci];
                  for (const auto& h : C.hom(wa.dom, cand.e)) {
                    if (restrict_section(th, cand.sec, h) == restricted) {
                      hit = true;
                      break;
                    }
                  }
                  if (hit) break;
                }
                if (!hit) {
                  all = false;
                  break;
                }
              }
              if (all) {
                hit_locally = true;
                break;
              }
            }
            if (!hit_locally) return false;
          }
        }
        return true;
      };

      // minimal qualifying subsets per cover arrow, then the product across
      // the family
      std::vector<std::vector<std::vector<bool>>> per_group;
      bool infeasible = false;
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::vector<std::vector<bool>> qualifying;
        const std::size_t n = groups[gi].size();
        if (n > 12)
          throw Error("antecedent_basis_general: too many candidate squares");
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          std::vector<bool> chosen(n, false);
          for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) chosen[i] = true;
          if (!locally_surjective(gi, chosen)) continue;
          bool minimal = true;
          for (const auto& q : qualifying) {
            bool subset = true;
            for (std::size_t i = 0; i < n; ++i)
              if (q[i] && !chosen[i]) subset = false;
            if (subset) {
              minimal = false;
              break;
            }
          }
          if (minimal) qualifying.push_back(chosen);
        }
        if (qualifying.empty()) {
          infeasible = true;
          break;
        }
        // keep the maximal family too, matching the definition's shape
        qualifying.push_back(std::vector<bool>(n, true));
        per_group.push_back(qualifying);
      }
      if (infeasible)
        throw Error(
            "antecedent_basis_general: a fragment family admits no locally "
            "surjective collection at " + eobj);

      std::vector<std::size_t> pick(per_group.size(), 0);
      while (true) {
        Presieve p;
        p.codomain = eobj;
        for (std::size_t gi = 0; gi < per_group.size(); ++gi) {
          const auto& chosen = per_group[gi][pick[gi]];
          for (std::size_t ci = 0; ci < groups[gi].size(); ++ci)
            if (chosen[ci]) p.arrows.insert(groups[gi][ci].arrow);
        }
        out.raw_families.push_back(p);
        out.basis.add(p);
        if (per_group.empty()) break;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == per_group[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
  }
  std::sort(out.raw_families.begin(), out.raw_families.end());
  out.raw_families.erase(
      std::unique(out.raw_families.begin(), out.raw_families.end()),
      out.raw_families.end());
  out.basis = multicomposition_closure(*out.elements, out.basis);
  return out;
}

IndexedCategory elements_stack(const PresheafModel& pm) {
  {
    ValidationReport r = validate_presheaf_model(pm);
    if (!r.ok()) throw Error("elements_stack: invalid model: " + r.summary());
  }
  const FinCategory& C = *pm.site;
  const FinCategory& F = *pm.frag_cat;
  IndexedCategory I;
  I.base = pm.site;

  // fiber at c: objects (φ, a ∈ P_φ(c)), arrows θ with θ_c(a) = a'
  std::map<std::string, CategoryPtr> fibers;
  for (const auto& c : C.objects) {
    auto fib = std::make_shared<FinCategory>();
    for (const auto& phi : F.objects)
      for (const auto& a : pm.interp.at(phi).carrier(c))
        fib->objects.push_back(phi + "@" + a);
    for (const auto& th : F.arrows)
      for (const auto& a : pm.interp.at(th.dom).carrier(c))
        fib->arrows.push_back({th.id + "@" + a, th.dom + "@" + a,
                               th.cod + "@" + pm.actions.at(th.id).at(c).at(a)});
    fib->normalize();
    for (const auto& phi : F.objects)
      for (const auto& a : pm.interp.at(phi).carrier(c))
        fib->identities[phi + "@" + a] = F.identity(phi) + "@" + a;
    for (const auto& g : F.arrows)
      for (const auto& f : F.arrows) {
        if (f.cod != g.dom) continue;
        for (const auto& a : pm.interp.at(f.dom).carrier(c))
          fib->composition[{g.id + "@" + pm.actions.at(f.id).at(c).at(a),
                            f.id + "@" + a}] = F.compose(g.id, f.id) + "@" + a;
      }
    fibers[c] = fib;
    I.fibers[c] = fib;
  }

  // transition along u : c -> c' restricts sections from c' to c
  for (const auto& u : C.arrows) {
    FinFunctor t;
    t.source = fibers.at(u.cod);
    t.target = fibers.at(u.dom);
    for (const auto& phi : F.objects)
      for (const auto& a : pm.interp.at(phi).carrier(u.cod))
        t.on_objects[phi + "@" + a] =
            phi + "@" + pm.interp.at(phi).restrict_along(u.id, a);
    for (const auto& th : F.arrows)
      for (const auto& a : pm.interp.at(th.dom).carrier(u.cod))
        t.on_arrows[th.id + "@" + a] =
            th.id + "@" + pm.interp.at(th.dom).restrict_along(u.id, a);
    I.transitions[u.id] = t;
  }
  return I;
}

// ---------------------------------------------------------------------------
// continuity and the correspondence

bool check_continuous(const SetValuedFunctor& G, const CoverageBasis& basis) {
  const FinCategory& E = *G.source;
  for (const auto& [obj, fams] : basis.families)
    for (const auto& fam : fams) {
      for (const auto& y : G.carrier(obj)) {
        bool hit = false;
        for (const auto& f : fam.arrows) {
          const Arrow& fa = E.arrow(f);
          for (const auto& x : G.carrier(fa.dom))
            if (G.apply(f, x) == y) {
              hit = true;
              break;
            }
          if (hit) break;
        }
        if (!hit) return false;
      }
    }
  return true;
}

PointCandidate hom_to_point(const FragmentSite& frag, const FinStructure& N,
                            const ModelHom& g, const OverSite& over,
                            const std::vector<PullbackSquare>* squares) {
  if (!check_model(N, frag.theory))
    throw Error("hom_to_point: N is not a model of the fragment theory");
  if (!check_hom(N, frag.model, g))
    throw Error("hom_to_point: g is not a homomorphism into M");

  PointCandidate pc;
  pc.functor.source = over.elements;

  // carriers: fibers of g
  for (const auto& [eobj, comp] : over.components) {
    const auto& [fid, enc] = comp;
    const Tuple a = decode_tuple(enc);
    const FormulaInContext& fic = frag.formula(fid).fic;
    std::vector<std::string> fiber;
    for (const auto& t : eval_formula(N, fic))
      if (g.apply_tuple(fic.context, t) == a) fiber.push_back(encode_tuple(t));
    std::sort(fiber.begin(), fiber.end());
    pc.functor.carriers[eobj] = fiber;
  }

  // actions: restrictions of the N-interpretations of the arrows
  std::map<std::string, std::map<Tuple, Tuple>> n_graphs;
  for (const auto& a : frag.arrows) {
    const FormulaInContext& df = frag.formula(a.dom).fic;
    const FormulaInContext& cf = frag.formula(a.cod).fic;
    if (!check_functional(N, a.theta, df, cf))
      throw Error("hom_to_point: flag failure: arrow '" + a.id +
                  "' is not functional in N");
    n_graphs[a.id] = functional_graph(N, a.theta, df, cf);
  }
  for (const auto& earr : over.elements->arrows) {
    auto at = earr.id.rfind('@');
    const std::string th = earr.id.substr(0, at);
    std::map<std::string, std::string> act;
    for (const auto& tenc : pc.functor.carriers.at(earr.dom)) {
      const Tuple u = n_graphs.at(th).at(decode_tuple(tenc));
      act[tenc] = encode_tuple(u);
    }
    pc.functor.actions[earr.id] = act;
  }

  {
    ValidationReport r = validate_set_functor(pc.functor);
    if (!r.ok())
      throw Error("hom_to_point: flag failure: fibers are not functorial: " +
                  r.summary());
  }
  CartesianReport cr = squares ? is_cartesian_functor(pc.functor, *squares)
                               : is_cartesian_functor(pc.functor);
  pc.cartesian = cr.applicable && cr.preserves;
  pc.continuous = check_continuous(pc.functor, over.basis);
  if (!pc.cartesian)
    throw Error("hom_to_point: flag failure: not cartesian: " + cr.detail);
  if (!pc.continuous)
    throw Error("hom_to_point: flag failure: not continuous");
  return pc;
}

HomFromPoint point_to_hom(const FragmentSite& frag, const PointCandidate& G,
                          const OverSite& over) {
  {
    CartesianReport cr = is_cartesian_functor(G.functor);
    if (!(cr.applicable && cr.preserves))
      throw Error("point_to_hom: the functor is not cartesian: " + cr.detail);
    if (!check_continuous(G.functor, over.basis))
      throw Error("point_to_hom: the functor is not continuous");
  }
  const FinStructure& M = frag.model;

  HomFromPoint out;
  out.model.name = "N";
  out.model.signature = M.signature;

  auto elem_obj = [&](const std::string& fid, const Tuple& t) {
    return fid + "@" + encode_tuple(t);
  };
  auto elem_arr = [&](const std::string& th, const Tuple& t) {
    return th + "@" + encode_tuple(t);
  };

  // carriers: disjoint unions of the fibers over the per-sort ⊤ formulas
  for (const auto& s : M.signature.sorts) {
    auto it = frag.sort_top.find(s);
    if (it == frag.sort_top.end())
      throw Error("point_to_hom: fragment lacks the top formula for sort '" +
                  s + "'");
    std::vector<std::string> carrier;
    for (const auto& a : M.carrier(s)) {
      for (const auto& x : G.functor.carrier(elem_obj(it->second, {a}))) {
        carrier.push_back(a + "|" + x);
        out.hom.maps[s][a + "|" + x] = a;
      }
    }
    std::sort(carrier.begin(), carrier.end());
    out.model.carriers[s] = carrier;
  }

  // a fragment arrow with the given graph, if any
  auto arrow_with_graph = [&](const std::string& dom, const std::string& cod,
                              const std::map<Tuple, Tuple>& graph)
      -> std::optional<std::string> {
    for (const auto& a : frag.arrows)
      if (a.dom == dom && a.cod == cod && frag.graphs.at(a.id) == graph)
        return a.id;
    return std::nullopt;
  };
  // the ⊤ product formula on the given sorts, if any
  auto product_formula =
      [&](const std::vector<std::string>& sorts) -> std::optional<std::string> {
    for (const auto& f : frag.formulas)
      if (f.fic.context == sorts && f.fic.body == Formula::top()) return f.id;
    return std::nullopt;
  };

  // function tables via the graph arrows of the fragment
  for (const auto& [fname, decl] : M.signature.functions) {
    auto pf = product_formula(decl.args);
    if (!pf)
      throw Error("point_to_hom: fragment lacks the product formula for '" +
                  fname + "'");
    auto tf = frag.sort_top.find(decl.result);
    if (tf == frag.sort_top.end())
      throw Error("point_to_hom: fragment lacks the top formula for sort '" +
                  decl.result + "'");
    // projections and the graph arrow
    std::vector<std::string> projections;
    for (std::size_t i = 0; i < decl.args.size(); ++i) {
      std::map<Tuple, Tuple> pg;
      for (const auto& t : frag.formula_elements(*pf)) pg[t] = {t[i]};
      auto pa = arrow_with_graph(*pf, frag.sort_top.at(decl.args[i]), pg);
      if (!pa)
        throw Error("point_to_hom: fragment lacks projection " +
                    std::to_string(i) + " for '" + fname + "'");
      projections.push_back(*pa);
    }
    std::map<Tuple, Tuple> fg;
    for (const auto& t : frag.formula_elements(*pf))
      fg[t] = {M.functions.at(fname).at(t)};
    auto ga = arrow_with_graph(*pf, tf->second, fg);
    if (!ga)
      throw Error("point_to_hom: fragment lacks the graph arrow for '" +
                  fname + "'");

    std::map<Tuple, std::string> table;
    std::function<void(std::size_t, Tuple&, Tuple&)> rec =
        [&](std::size_t i, Tuple& nt, Tuple& mt) {
          if (i == decl.args.size()) {
            // the unique product-fiber element with the chosen components
            std::string w;
            std::size_t count = 0;
            for (const auto& cand :
                 G.functor.carrier(elem_obj(*pf, mt))) {
              bool match = true;
              for (std::size_t j = 0; j < decl.args.size(); ++j) {
                const std::string xj = nt[j].substr(nt[j].find('|') + 1);
                if (G.functor.apply(elem_arr(projections[j], mt), cand) != xj) {
                  match = false;
                  break;
                }
              }
              if (match) {
                w = cand;
                ++count;
              }
            }
            if (count != 1)
              throw Error("point_to_hom: flag failure: product fiber of '" +
                          fname + "' is not a product");
            const std::string mres = M.functions.at(fname).at(mt);
            table[nt] = mres + "|" + G.functor.apply(elem_arr(*ga, mt), w);
            return;
          }
          for (const auto& n : out.model.carriers.at(decl.args[i])) {
            nt.push_back(n);
            mt.push_back(n.substr(0, n.find('|')));
            rec(i + 1, nt, mt);
            nt.pop_back();
            mt.pop_back();
          }
        };
    Tuple nt, mt;
    rec(0, nt, mt);
    out.model.functions[fname] = table;
  }

  // relation tables via the relation formulas of the fragment
  for (const auto& [rname, decl] : M.signature.relations) {
    std::vector<Term> vars;
    for (std::size_t i = 0; i < decl.size(); ++i)
      vars.push_back(Term::variable(static_cast<int>(i)));
    const Formula want = normalize(Formula::rel_atom(rname, vars));
    std::optional<std::string> rf;
    for (const auto& f : frag.formulas)
      if (f.fic.context == decl && f.fic.body == want) rf = f.id;
    if (!rf)
      throw Error("point_to_hom: fragment lacks the atom formula for '" +
                  rname + "'");
    std::vector<std::string> inclusions;
    for (std::size_t i = 0; i < decl.size(); ++i) {
      std::map<Tuple, Tuple> pg;
      for (const auto& t : frag.formula_elements(*rf)) pg[t] = {t[i]};
      auto pa = arrow_with_graph(*rf, frag.sort_top.at(decl[i]), pg);
      if (!pa)
        throw Error("point_to_hom: fragment lacks projection " +
                    std::to_string(i) + " for relation '" + rname + "'");
      inclusions.push_back(*pa);
    }
    std::set<Tuple> tuples;
    for (const auto& mt : frag.formula_elements(*rf))
      for (const auto& w : G.functor.carrier(elem_obj(*rf, mt))) {
        Tuple nt;
        for (std::size_t i = 0; i < decl.size(); ++i)
          nt.push_back(mt[i] + "|" +
                       G.functor.apply(elem_arr(inclusions[i], mt), w));
        tuples.insert(nt);
      }
    out.model.relations[rname] = tuples;
  }

  {
    ValidationReport r = validate_structure(out.model);
    if (!r.ok())
      throw Error("point_to_hom: assembled structure invalid: " + r.summary());
    if (!check_model(out.model, frag.theory))
      throw Error("point_to_hom: assembled structure fails the theory");
    if (!check_hom(out.model, frag.model, out.hom))
      throw Error("point_to_hom: assembled map is not a homomorphism");
  }
  return out;
}

// ---------------------------------------------------------------------------
// point enumeration

namespace {

// arrows usable by the structured enumeration: conjunctions of equations
// matching each output coordinate to exactly one input coordinate
std::optional<std::vector<int>> extract_shuffle(const Formula& theta,
                                                std::size_t n_dom,
                                                std::size_t n_cod) {
  std::vector<int> sigma(n_cod, -1);
  std::vector<Formula> parts;
  Formula n = theta;
  if (n.kind == Conn::And) {
    parts = n.subs;
  } else {
    parts = {n};
  }
  for (const auto& p : parts) {
    if (p.kind == Conn::Top) continue;
    if (p.kind != Conn::Eq) return std::nullopt;
    const Term& a = p.terms[0];
    const Term& b = p.terms[1];
    if (!a.is_var() || !b.is_var()) return std::nullopt;
    int out_var = -1, in_var = -1;
    for (int v : {a.var, b.var}) {
      if (static_cast<std::size_t>(v) >= n_dom)
        out_var = v - static_cast<int>(n_dom);
      else
        in_var = v;
    }
    if (out_var < 0 || in_var < 0 ||
        static_cast<std::size_t>(out_var) >= n_cod)
      return std::nullopt;
    if (sigma[out_var] != -1 && sigma[out_var] != in_var) return std::nullopt;
    sigma[out_var] = in_var;
  }
  for (int s : sigma)
    if (s < 0) return std::nullopt;
  return sigma;
}

}  // namespace

std::vector<PointCandidate> enumerate_points(const FragmentSite& frag,
                                             const OverSite& over,
                                             std::size_t k) {
  // supported shape: ⊤-context formulas, shuffle arrows
  for (const auto& f : frag.formulas) {
    if (!(f.fic.body == Formula::top()))
      throw Error("enumerate_points: formula '" + f.id +
                  "' is not a top formula; unsupported shape");
    for (const auto& s : f.fic.context)
      if (!frag.sort_top.count(s))
        throw Error("enumerate_points: no top formula for sort '" + s + "'");
  }
  std::map<std::string, std::vector<int>> shuffles;
  for (const auto& a : frag.arrows) {
    auto sh = extract_shuffle(a.theta, frag.formula(a.dom).fic.context.size(),
                              frag.formula(a.cod).fic.context.size());
    if (!sh)
      throw Error("enumerate_points: arrow '" + a.id +
                  "' is not a variable shuffle; unsupported shape");
    shuffles[a.id] = *sh;
  }

  const FinStructure& M = frag.model;
  // fiber slots: one per (sort, element of M at that sort)
  std::vector<std::pair<std::string, std::string>> slots;
  for (const auto& s : M.signature.sorts)
    for (const auto& a : M.carrier(s)) slots.push_back({s, a});

  const std::vector<PullbackSquare> squares =
      all_pullback_squares(*over.elements);
  std::vector<PointCandidate> found;
  std::map<std::pair<std::string, std::string>, std::size_t> size_of;

  std::function<void()> build = [&]() {
    SetValuedFunctor G;
    G.source = over.elements;
    // carriers: products of the slot fibers along each object's context
    for (const auto& [eobj, comp] : over.components) {
      const auto& [fid, enc] = comp;
      const FormulaInContext& fic = frag.formula(fid).fic;
      const Tuple a = decode_tuple(enc);
      std::vector<Tuple> tuples{{}};
      for (std::size_t i = 0; i < fic.context.size(); ++i) {
        std::vector<Tuple> next;
        const std::size_t n = size_of.at({fic.context[i], a[i]});
        for (const auto& t : tuples)
          for (std::size_t x = 0; x < n; ++x) {
            Tuple u = t;
            u.push_back(std::to_string(x));
            next.push_back(u);
          }
        tuples = std::move(next);
      }
      std::vector<std::string> carrier;
      for (const auto& t : tuples) carrier.push_back(encode_tuple(t));
      std::sort(carrier.begin(), carrier.end());
      G.carriers[eobj] = carrier;
    }
    // actions: coordinate shuffles
    for (const auto& earr : over.elements->arrows) {
      auto at = earr.id.rfind('@');
      const std::string th = earr.id.substr(0, at);
      const auto& sigma = shuffles.at(th);
      std::map<std::string, std::string> act;
      for (const auto& tenc : G.carriers.at(earr.dom)) {
        const Tuple t = decode_tuple(tenc);
        Tuple u;
        for (int s : sigma) u.push_back(t[s]);
        act[tenc] = encode_tuple(u);
      }
      G.actions[earr.id] = act;
    }
    if (!validate_set_functor(G).ok()) return;
    CartesianReport cr = is_cartesian_functor(G, squares);
    if (!(cr.applicable && cr.preserves)) return;
    if (!check_continuous(G, over.basis)) return;
    for (const auto& other : found)
      if (naturally_isomorphic(G, other.functor)) return;
    PointCandidate pc;
    pc.functor = std::move(G);
    pc.cartesian = true;
    pc.continuous = true;
    found.push_back(std::move(pc));
  };

  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == slots.size()) {
      build();
      return;
    }
    for (std::size_t n = 0; n <= k; ++n) {
      size_of[slots[i]] = n;
      assign(i + 1);
    }
    size_of.erase(slots[i]);
  };
  assign(0);
  return found;
}

// ---------------------------------------------------------------------------
// the independent hom enumeration

namespace {

// all function tables for f compatible with the fiber structure of g
void enumerate_function_tables(
    const FinStructure& M, const std::string& fname, const FuncDecl& decl,
    const std::map<std::string, std::vector<std::string>>& carriers,
    const ModelHom& g,
    const std::function<void(const std::map<Tuple, std::string>&)>& visit) {
  // argument tuples over N
  std::vector<Tuple> args{{}};
  for (const auto& s : decl.args) {
    std::vector<Tuple> next;
    for (const auto& t : args)
      for (const auto& e : carriers.at(s)) {
        Tuple u = t;
        u.push_back(e);
        next.push_back(u);
      }
    args = std::move(next);
  }
  // choices per tuple: the fiber over f_M(g(args))
  std::vector<std::vector<std::string>> choices;
  for (const auto& t : args) {
    Tuple mt;
    for (std::size_t i = 0; i < t.size(); ++i)
      mt.push_back(g.apply(decl.args[i], t[i]));
    const std::string target = M.functions.at(fname).at(mt);
    std::vector<std::string> fiber;
    for (const auto& e : carriers.at(decl.result))
      if (g.apply(decl.result, e) == target) fiber.push_back(e);
    if (fiber.empty()) return;  // no compatible table exists
    choices.push_back(fiber);
  }
  std::vector<std::size_t> pick(args.size(), 0);
  while (true) {
    std::map<Tuple, std::string> table;
    for (std::size_t i = 0; i < args.size(); ++i) table[args[i]] = choices[i][pick[i]];
    visit(table);
    if (args.empty()) break;
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
}

}  // namespace

bool homs_isomorphic_over(const FinStructure& M, const HomFromPoint& a,
                          const HomFromPoint& b) {
  const Signature& sig = M.signature;
  // per-sort, per-fiber bijections
  for (const auto& s : sig.sorts) {
    if (a.model.carrier(s).size() != b.model.carrier(s).size()) return false;
    for (const auto& m : M.carrier(s)) {
      std::size_t fa = 0, fb = 0;
      for (const auto& x : a.model.carrier(s))
        if (a.hom.apply(s, x) == m) ++fa;
      for (const auto& x : b.model.carrier(s))
        if (b.hom.apply(s, x) == m) ++fb;
      if (fa != fb) return false;
    }
  }
  // assemble candidate bijections fiber by fiber, checking structure
  // preservation at the end (fibers are tiny)
  std::vector<std::pair<std::string, std::string>> fibers;  // (sort, m-elem)
  for (const auto& s : sig.sorts)
    for (const auto& m : M.carrier(s)) fibers.push_back({s, m});

  ModelHom h;
  std::function<bool(std::size_t)> rec = [&](std::size_t fi) -> bool {
    if (fi == fibers.size()) {
      // h : a.model -> b.model must be a structure isomorphism
      if (!check_hom(a.model, b.model, h)) return false;
      // inverse
      ModelHom inv;
      for (const auto& [s, comp] : h.maps)
        for (const auto& [x, y] : comp) inv.maps[s][y] = x;
      if (!check_hom(b.model, a.model, inv)) return false;
      return true;
    }
    const auto& [s, m] = fibers[fi];
    std::vector<std::string> xa, xb;
    for (const auto& x : a.model.carrier(s))
      if (a.hom.apply(s, x) == m) xa.push_back(x);
    for (const auto& x : b.model.carrier(s))
      if (b.hom.apply(s, x) == m) xb.push_back(x);
    std::sort(xb.begin(), xb.end());
    do {
      for (std::size_t i = 0; i < xa.size(); ++i) h.maps[s][xa[i]] = xb[i];
      if (rec(fi + 1)) return true;
      for (std::size_t i = 0; i < xa.size(); ++i) h.maps[s].erase(xa[i]);
    } while (std::next_permutation(xb.begin(), xb.end()));
    return false;
  };
  return rec(0);
}

std::vector<HomFromPoint> enumerate_homs(const FragmentSite& frag,
                                         std::size_t k) {
  const FinStructure& M = frag.model;
  const Signature& sig = M.signature;

  std::vector<std::pair<std::string, std::string>> slots;
  for (const auto& s : sig.sorts)
    for (const auto& m : M.carrier(s)) slots.push_back({s, m});

  std::vector<HomFromPoint> found;
  std::map<std::pair<std::string, std::string>, std::size_t> size_of;

  std::function<void()> build_carriers = [&]() {
    HomFromPoint cand;
    cand.model.name = "N";
    cand.model.signature = sig;
    for (const auto& s : sig.sorts) {
      std::vector<std::string> carrier;
      for (const auto& m : M.carrier(s))
        for (std::size_t i = 0; i < size_of.at({s, m}); ++i) {
          carrier.push_back(m + "|" + std::to_string(i));
          cand.hom.maps[s][m + "|" + std::to_string(i)] = m;
        }
      std::sort(carrier.begin(), carrier.end());
      cand.model.carriers[s] = carrier;
    }

    // enumerate compatible function tables, then relation tables
    std::vector<std::string> fnames;
    for (const auto& [f, d] : sig.functions) fnames.push_back(f);
    std::function<void(std::size_t)> with_functions = [&](std::size_t fi) {
      if (fi == fnames.size()) {
        // relations: any subset of the g-preimage of the M-relation
        std::vector<std::string> rnames;
        for (const auto& [r, d] : sig.relations) rnames.push_back(r);
        std::function<void(std::size_t)> with_relations =
            [&](std::size_t ri) {
              if (ri == rnames.size()) {
                if (!check_model(cand.model, frag.theory)) return;
                if (!check_hom(cand.model, M, cand.hom)) return;
                for (const auto& other : found)
                  if (homs_isomorphic_over(M, cand, other)) return;
                found.push_back(cand);
                return;
              }
              const std::string& r = rnames[ri];
              const auto& decl = sig.relations.at(r);
              std::vector<Tuple> pool;
              {
                std::function<void(std::size_t, Tuple&)> gen =
                    [&](std::size_t i, Tuple& t) {
                      if (i == decl.size()) {
                        Tuple mt;
                        for (std::size_t j = 0; j < t.size(); ++j)
                          mt.push_back(cand.hom.apply(decl[j], t[j]));
                        auto it = M.relations.find(r);
                        if (it != M.relations.end() && it->second.count(mt))
                          pool.push_back(t);
                        return;
                      }
                      for (const auto& e : cand.model.carriers.at(decl[i])) {
                        t.push_back(e);
                        gen(i + 1, t);
                        t.pop_back();
                      }
                    };
                Tuple t;
                gen(0, t);
              }
              if (pool.size() > 16)
                throw Error("enumerate_homs: relation pool too large");
              for (std::size_t mask = 0;
                   mask < (std::size_t{1} << pool.size()); ++mask) {
                std::set<Tuple> tuples;
                for (std::size_t i = 0; i < pool.size(); ++i)
                  if (mask & (std::size_t{1} << i)) tuples.insert(pool[i]);
                cand.model.relations[r] = tuples;
                with_relations(ri + 1);
              }
              cand.model.relations.erase(r);
            };
        with_relations(0);
        return;
      }
      const std::string& f = fnames[fi];
      enumerate_function_tables(M, f, sig.functions.at(f), cand.model.carriers,
                                cand.hom,
                                [&](const std::map<Tuple, std::string>& table) {
                                  cand.model.functions[f] = table;
                                  with_functions(fi + 1);
                                  cand.model.functions.erase(f);
                                });
    };
    with_functions(0);
  };

  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == slots.size()) {
      build_carriers();
      return;
    }
    for (std::size_t n = 0; n <= k; ++n) {
      size_of[slots[i]] = n;
      assign(i + 1);
    }
    size_of.erase(slots[i]);
  };
  assign(0);
  return found;
}

// ---------------------------------------------------------------------------
// functoriality in the model

SiteMorphism hom_to_site_morphism(const FragmentSite& frag1,
                                  const FragmentSite& frag2,
                                  const ModelHom& f) {
  // same syntactic fragment
  {
    if (frag1.formulas.size() != frag2.formulas.size() ||
        frag1.arrows.size() != frag2.arrows.size())
      throw Error("hom_to_site_morphism: fragments differ");
    for (std::size_t i = 0; i < frag1.formulas.size(); ++i)
      if (frag1.formulas[i].id != frag2.formulas[i].id ||
          frag1.formulas[i].fic.key() != frag2.formulas[i].fic.key())
        throw Error("hom_to_site_morphism: fragments differ");
    for (std::size_t i = 0; i < frag1.arrows.size(); ++i)
      if (frag1.arrows[i].id != frag2.arrows[i].id ||
          frag1.arrows[i].theta.key() != frag2.arrows[i].theta.key())
        throw Error("hom_to_site_morphism: fragments differ");
  }
  if (!check_hom(frag1.model, frag2.model, f))
    throw Error("hom_to_site_morphism: f is not a homomorphism");

  OverSite over1 = antecedent_basis(frag1);
  OverSite over2 = antecedent_basis(frag2);

  SiteMorphism out;
  out.functor.source = over1.elements;
  out.functor.target = over2.elements;
  for (const auto& [eobj, comp] : over1.components) {
    const auto& [fid, enc] = comp;
    const FormulaInContext& fic = frag1.formula(fid).fic;
    const Tuple fa = f.apply_tuple(fic.context, decode_tuple(enc));
    out.functor.on_objects[eobj] = fid + "@" + encode_tuple(fa);
  }
  for (const auto& earr : over1.elements->arrows) {
    auto at = earr.id.rfind('@');
    const std::string th = earr.id.substr(0, at);
    const std::string enc = earr.id.substr(at + 1);
    const FormulaInContext& dfic =
        frag1.formula(frag1.arrow_data(th).dom).fic;
    const Tuple fb = f.apply_tuple(dfic.context, decode_tuple(enc));
    out.functor.on_arrows[earr.id] = th + "@" + encode_tuple(fb);
  }
  {
    ValidationReport r = validate_functor(out.functor);
    if (!r.ok())
      throw Error("hom_to_site_morphism: induced map is not a functor: " +
                  r.summary());
  }

  // comorphism surrogate: the preimage of every covering sieve covers
  out.comorphism = true;
  for (const auto& [eobj, comp] : over1.components) {
    const std::string img = out.functor.obj(eobj);
    for (const auto& fam : over2.basis.at(img)) {
      Sieve closed = sieve_closure(*over2.elements, fam);
      Sieve preimage{eobj, {}};
      for (const auto& h : over1.elements->arrows_into(eobj))
        if (closed.arrows.count(out.functor.arr(h))) preimage.arrows.insert(h);
      if (!covers(*over1.elements, over1.basis, preimage)) {
        out.comorphism = false;
        out.notes.push_back("comorphism fails at " + eobj);
      }
    }
  }

  // cover preservation, reported but not asserted
  out.cover_preserving = true;
  for (const auto& p : over1.raw_families) {
    Presieve image{out.functor.obj(p.codomain), {}};
    for (const auto& h : p.arrows) image.arrows.insert(out.functor.arr(h));
    if (!covers_presieve(*over2.elements, over2.basis, image)) {
      out.cover_preserving = false;
      out.notes.push_back("image of a family at " + p.codomain +
                          " is not covering");
    }
  }
  return out;
}

std::vector<std::string> image_factorization_report(const FragmentSite& frag,
                                                    const OverSite& over) {
  std::vector<std::string> out;
  for (const auto& a : frag.arrows) {
    const auto& graph = frag.graphs.at(a.id);
    // image of the graph inside the codomain
    std::set<Tuple> image;
    for (const auto& [t, u] : graph) image.insert(u);

    std::optional<std::string> image_formula;
    for (const auto& f : frag.formulas) {
      if (f.fic.context != frag.formula(a.cod).fic.context) continue;
      std::vector<Tuple> ev = frag.formula_elements(f.id);
      if (std::set<Tuple>(ev.begin(), ev.end()) == image) {
        image_formula = f.id;
        break;
      }
    }
    if (!image_formula) {
      out.push_back("skipped '" + a.id + "': no image formula in the fragment");
      continue;
    }
    // epi part: the corestriction; mono part: the inclusion
    std::optional<std::string> epi, mono;
    for (const auto& e : frag.arrows)
      if (e.dom == a.dom && e.cod == *image_formula &&
          frag.graphs.at(e.id) == graph)
        epi = e.id;
    std::map<Tuple, Tuple> incl;
    for (const auto& u : image) incl[u] = u;
    for (const auto& m : frag.arrows)
      if (m.dom == *image_formula && m.cod == a.cod &&
          frag.graphs.at(m.id) == incl)
        mono = m.id;
    if (!epi || !mono) {
      out.push_back("skipped '" + a.id +
                    "': image formula present but factor arrows missing");
      continue;
    }
    if (frag.compiled->compose(*mono, *epi) != a.id) {
      out.push_back("FAIL '" + a.id + "': factorization does not compose back");
      continue;
    }
    out.push_back("ok '" + a.id + "': factors through '" + *image_formula + "'");
  }
  (void)over;
  return out;
}

}  // namespace finsite
