#include "finsite/coverage.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "finsite/grothendieck.hpp"
#include "finsite/sheaves.hpp"

namespace finsite {

void CoverageBasis::add(Presieve p) {
  auto& v = families[p.codomain];
  if (std::find(v.begin(), v.end(), p) == v.end()) {
    v.push_back(std::move(p));
    std::sort(v.begin(), v.end());
  }
}

const std::vector<Presieve>& CoverageBasis::at(const std::string& obj) const {
  static const std::vector<Presieve> empty;
  auto it = families.find(obj);
  return it == families.end() ? empty : it->second;
}

bool CoverageBasis::contains(const Presieve& p) const {
  const auto& v = at(p.codomain);
  return std::find(v.begin(), v.end(), p) != v.end();
}

std::size_t CoverageBasis::family_count() const {
  std::size_t n = 0;
  for (const auto& [o, v] : families) n += v.size();
  return n;
}

std::string BasisReport::summary() const {
  if (violations.empty()) return "valid basis";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  for (const auto& v : violations) os << "\n  [" << v.law << "] " << v.detail;
  return os.str();
}

namespace {

void require_presieve(const FinCategory& cat, const Presieve& p) {
  if (!cat.has_object(p.codomain))
    throw Error("presieve codomain '" + p.codomain + "' is not an object");
  for (const auto& a : p.arrows) {
    const Arrow& f = cat.arrow(a);
    if (f.cod != p.codomain)
      throw Error("presieve arrow '" + a + "' does not land in '" +
                  p.codomain + "'");
  }
}

std::string presieve_str(const Presieve& p) {
  std::string s = "{";
  bool first = true;
  for (const auto& a : p.arrows) {
    if (!first) s += ",";
    s += a;
    first = false;
  }
  return s + "}@" + p.codomain;
}

}  // namespace

Sieve sieve_closure(const FinCategory& cat, const Presieve& p) {
  require_presieve(cat, p);
  Sieve s;
  s.codomain = p.codomain;
  std::vector<std::string> work(p.arrows.begin(), p.arrows.end());
  while (!work.empty()) {
    std::string f = work.back();
    work.pop_back();
    if (!s.arrows.insert(f).second) continue;
    const Arrow& fa = cat.arrow(f);
    for (const auto& g : cat.arrows_into(fa.dom)) {
      const std::string& fg = cat.compose(f, g);
      if (!s.arrows.count(fg)) work.push_back(fg);
    }
  }
  return s;
}

bool covers(const FinCategory& cat, const CoverageBasis& B, const Sieve& s) {
  for (const auto& p : B.at(s.codomain)) {
    bool contained = true;
    for (const auto& a : p.arrows)
      if (!s.arrows.count(a)) {
        contained = false;
        break;
      }
    if (contained) return true;
  }
  return false;
}

bool covers_presieve(const FinCategory& cat, const CoverageBasis& B,
                     const Presieve& p) {
  return covers(cat, B, sieve_closure(cat, p));
}

Presieve multicompose(const FinCategory& cat, const Presieve& outer,
                      const std::map<std::string, Presieve>& inners) {
  require_presieve(cat, outer);
  Presieve out;
  out.codomain = outer.codomain;
  for (const auto& f : outer.arrows) {
    auto it = inners.find(f);
    if (it == inners.end())
      throw Error("multicompose: no inner presieve for arrow '" + f + "'");
    const Arrow& fa = cat.arrow(f);
    if (it->second.codomain != fa.dom)
      throw Error("multicompose: inner presieve for '" + f +
                  "' sits on the wrong object (domain mismatch)");
    require_presieve(cat, it->second);
    for (const auto& g : it->second.arrows)
      out.arrows.insert(cat.compose(f, g));
  }
  return out;
}

// Condition (c) is checked (and closure computed) in the per-arrow
// refinement form: replace one arrow f of a family by f∘G for a family G on
// dom(f).  Given condition (a), this is equivalent to closure under the full
// multicomposition of condition (c).
BasisReport check_basis(const FinCategory& cat, const CoverageBasis& B) {
  BasisReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  for (const auto& [obj, fams] : B.families) {
    for (const auto& p : fams) {
      require_presieve(cat, p);
      if (p.codomain != obj)
        throw Error("basis stores presieve under the wrong object");
    }
  }

  // (a) the identity singleton lies in B at every object
  for (const auto& o : cat.objects) {
    Presieve idp{o, {cat.identity(o)}};
    if (!B.contains(idp))
      fail("basis-a", "identity family missing at '" + o + "'");
  }

  // (b) refinement along every arrow
  for (const auto& [obj, fams] : B.families) {
    for (const auto& R : fams) {
      for (const auto& g : cat.arrows_into(obj)) {
        const Arrow& ga = cat.arrow(g);
        bool refined = false;
        for (const auto& T : B.at(ga.dom)) {
          bool all = true;
          for (const auto& t : T.arrows) {
            const std::string gt = cat.compose(g, t);
            bool factors = false;
            for (const auto& r : R.arrows) {
              const Arrow& ra = cat.arrow(r);
              for (const auto& h :
                   cat.hom(cat.arrow(gt).dom, ra.dom)) {
                if (cat.compose(r, h) == gt) {
                  factors = true;
                  break;
                }
              }
              if (factors) break;
            }
            if (!factors) {
              all = false;
              break;
            }
          }
          if (all) {
            refined = true;
            break;
          }
        }
        if (!refined)
          fail("basis-b", "no family at '" + ga.dom + "' refines " +
                              presieve_str(R) + " along '" + g + "'");
      }
    }
  }

  // (c) closure under per-arrow refinement
  for (const auto& [obj, fams] : B.families) {
    for (const auto& F : fams) {
      for (const auto& f : F.arrows) {
        const Arrow& fa = cat.arrow(f);
        for (const auto& G : B.at(fa.dom)) {
          Presieve m;
          m.codomain = obj;
          for (const auto& x : F.arrows)
            if (x != f) m.arrows.insert(x);
          for (const auto& g : G.arrows) m.arrows.insert(cat.compose(f, g));
          if (!B.contains(m))
            fail("basis-c", "refining '" + f + "' in " + presieve_str(F) +
                                " by " + presieve_str(G) +
                                " leaves the basis: " + presieve_str(m));
        }
      }
    }
  }
  return rep;
}

CoverageBasis multicomposition_closure(const FinCategory& cat, CoverageBasis B,
                                       std::size_t max_families) {
  for (const auto& [obj, fams] : B.families)
    for (const auto& p : fams) require_presieve(cat, p);

  bool changed = true;
  while (changed) {
    changed = false;
    // snapshot, since we mutate B while iterating
    std::vector<Presieve> snapshot;
    for (const auto& [obj, fams] : B.families)
      for (const auto& p : fams) snapshot.push_back(p);
    for (const auto& F : snapshot) {
      for (const auto& f : F.arrows) {
        const Arrow& fa = cat.arrow(f);
        std::vector<Presieve> inner = B.at(fa.dom);
        for (const auto& G : inner) {
          Presieve m;
          m.codomain = F.codomain;
          for (const auto& x : F.arrows)
            if (x != f) m.arrows.insert(x);
          for (const auto& g : G.arrows) m.arrows.insert(cat.compose(f, g));
          if (!B.contains(m)) {
            B.add(m);
            changed = true;
            if (B.family_count() > max_families)
              throw Error("multicomposition closure exceeded " +
                          std::to_string(max_families) + " families");
          }
        }
      }
    }
  }
  return B;
}

bool same_topology(const FinCategory& cat, const CoverageBasis& A,
                   const CoverageBasis& B) {
  for (const auto& [obj, fams] : A.families)
    for (const auto& p : fams)
      if (!covers_presieve(cat, B, p)) return false;
  for (const auto& [obj, fams] : B.families)
    for (const auto& p : fams)
      if (!covers_presieve(cat, A, p)) return false;
  return true;
}

std::vector<Sieve> all_sieves(const FinCategory& cat, const std::string& obj) {
  std::vector<std::string> in = cat.arrows_into(obj);
  if (in.size() > 16)
    throw Error("all_sieves: too many arrows into '" + obj + "'");
  std::vector<Sieve> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << in.size()); ++mask) {
    std::set<std::string> s;
    for (std::size_t i = 0; i < in.size(); ++i)
      if (mask & (std::size_t{1} << i)) s.insert(in[i]);
    bool closed = true;
    for (const auto& f : s) {
      const Arrow& fa = cat.arrow(f);
      for (const auto& g : cat.arrows_into(fa.dom))
        if (!s.count(cat.compose(f, g))) {
          closed = false;
          break;
        }
      if (!closed) break;
    }
    if (closed) out.push_back({obj, s});
  }
  return out;
}

CoverageBasis trivial_basis(const FinCategory& cat) {
  CoverageBasis B;
  for (const auto& o : cat.objects) B.add({o, {cat.identity(o)}});
  return B;
}

// ---------------------------------------------------------------------------
// Giraud topology on a Grothendieck construction

CoverageBasis giraud_basis(const GrothendieckTotal& total,
                           const CoverageBasis& base_basis) {
  CoverageBasis out;
  for (const auto& [obj, comp] : total.components) {
    const auto& [c, a] = comp;
    for (const auto& fam : base_basis.at(c)) {
      Presieve p;
      p.codomain = obj;
      for (const auto& u : fam.arrows) p.arrows.insert(total.lift(u, a));
      out.add(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// lifted topology on (1_D ↓ fstar)

LiftedSite lifted_basis(const FinFunctor& fstar, const CoverageBasis& B_C,
                        const CoverageBasis& B_D) {
  const CategoryPtr C = fstar.source;
  const CategoryPtr D = fstar.target;
  if (!C || !D) throw Error("lifted_basis: functor lacks source or target");
  {
    ValidationReport r = validate_functor(fstar);
    if (!r.ok()) throw Error("lifted_basis: fstar invalid: " + r.summary());
    CartesianReport cr = is_cartesian_functor(fstar);
    if (!cr.applicable)
      throw Error("lifted_basis: cartesianness inapplicable: " + cr.detail);
    if (!cr.preserves)
      throw Error("lifted_basis: fstar is not cartesian: " + cr.detail);
  }

  LiftedSite out;
  CommaResult comma = comma_category(identity_functor(D), fstar);
  out.comma = comma.category;
  out.proj_to_target = comma.proj_left;
  out.proj_to_source = comma.proj_right;
  out.components = comma.components;

  auto comma_obj = [&](const std::string& d, const std::string& c,
                       const std::string& al) { return d + "@" + c + "@" + al; };
  auto comma_arr = [&](const std::string& s, const std::string& t,
                       const std::string& al_src, const std::string& al_dst) {
    return s + "@" + t + "@" + al_src + "@" + al_dst;
  };

  for (const auto& [obj, comp] : comma.components) {
    const auto& [F, c, a] = comp;
    for (const auto& fam : B_C.at(c)) {
      // cartesian lift of the family along r_f: pull each fstar(ξ_i) back
      // along a in D
      struct Leg {
        std::string xi;      // ξ_i : c_i -> c
        std::string vertex;  // pullback object in D
        std::string to_ci;   // vertex -> fstar(c_i)
        std::string to_F;    // vertex -> F
      };
      std::vector<Leg> legs;
      for (const auto& xi : fam.arrows) {
        const Arrow& xa = C->arrow(xi);
        auto pb = find_pullback(*D, fstar.arr(xi), a);
        if (!pb)
          throw Error("lifted_basis: pullback of fstar(" + xi + ") along '" +
                      a + "' is absent in the target category");
        legs.push_back({xi, pb->vertex, pb->to_left, pb->to_right});
        (void)xa;
      }
      // per-leg choice of a B_D presieve on the pullback vertex
      std::vector<std::vector<Presieve>> choices;
      for (const auto& leg : legs) {
        const auto& fams = B_D.at(leg.vertex);
        if (fams.empty())
          throw Error("lifted_basis: target basis has no family at '" +
                      leg.vertex + "'");
        choices.push_back(fams);
      }
      std::vector<std::size_t> pick(legs.size(), 0);
      while (true) {
        Presieve p;
        p.codomain = obj;
        for (std::size_t i = 0; i < legs.size(); ++i) {
          const Leg& leg = legs[i];
          const Presieve& Q = choices[i][pick[i]];
          const std::string ai = leg.to_ci;  // vertex -> fstar(c_i)
          for (const auto& bt : Q.arrows) {
            const Arrow& ba = D->arrow(bt);
            // composite arrow (π_i ∘ b̃, ξ_i) : (dom b̃, c_i, a_i∘b̃) -> (F,c,a)
            const std::string u = D->compose(leg.to_F, bt);
            const std::string al_src = D->compose(ai, bt);
            p.arrows.insert(comma_arr(u, leg.xi, al_src, a));
            (void)ba;
          }
        }
        out.basis.add(p);
        if (legs.empty()) break;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
      (void)comma_obj;
    }
  }

  out.basis = multicomposition_closure(*out.comma, out.basis);
  out.notes.push_back("families: " + std::to_string(out.basis.family_count()));
  return out;
}

// ---------------------------------------------------------------------------
// induced basis on a full subcategory

InducedBasis induce_on_subcategory(const FinCategory& cat,
                                   const CoverageBasis& B,
                                   const std::vector<std::string>& sub_objects) {
  std::set<std::string> sub(sub_objects.begin(), sub_objects.end());
  for (const auto& o : sub)
    if (!cat.has_object(o))
      throw Error("induce_on_subcategory: unknown object '" + o + "'");

  InducedBasis out;

  // density: every ambient object is covered by arrows from sub-objects
  out.dense = true;
  for (const auto& c : cat.objects) {
    Presieve from_sub{c, {}};
    for (const auto& f : cat.arrows_into(c))
      if (sub.count(cat.arrow(f).dom)) from_sub.arrows.insert(f);
    if (!covers_presieve(cat, B, from_sub)) {
      out.dense = false;
      out.notes.push_back("not dense at '" + c + "'");
    }
  }

  for (const auto& d : sub) {
    out.basis.add({d, {cat.identity(d)}});
    for (const auto& R : B.at(d)) {
      Sieve closed = sieve_closure(cat, R);
      Presieve restricted{d, {}};
      for (const auto& f : closed.arrows)
        if (sub.count(cat.arrow(f).dom)) restricted.arrows.insert(f);
      if (covers_presieve(cat, B, restricted)) {
        out.basis.add(restricted);
      } else {
        out.notes.push_back("restriction of " + presieve_str(R) +
                            " to the subcategory is not covering");
      }
    }
  }

  // closure within the subcategory: compose only along sub-arrows
  // (the families live on sub-objects, and sub is full, so the ambient
  // closure operation restricted to these presieves stays inside)
  out.basis = multicomposition_closure(cat, out.basis);
  return out;
}

}  // namespace finsite
