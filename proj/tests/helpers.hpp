#pragma once

// Shared builders, random generators and oracles for the test suites.

#include <functional>
#include <random>
#include <sstream>

#include "finsite/document.hpp"
#include "finsite/grothendieck.hpp"
#include "finsite/overtopos.hpp"

namespace finsite::testing {

inline CategoryPtr terminal_category() {
  CategoryBuilder b;
  b.object("pt");
  b.auto_identities();
  return b.build_shared();
}

// the walking arrow  a --f--> b
inline CategoryPtr arrow_category() {
  CategoryBuilder b;
  b.object("a").object("b").arrow("f", "a", "b");
  b.auto_identities();
  return b.build_shared();
}

// ---------------------------------------------------------------------------
// the theory of objects and its product fragment

inline Theory theory_of_objects() {
  Theory T;
  T.name = "objects";
  T.signature.sorts = {"s"};
  return T;
}

inline FinStructure objects_structure(std::size_t n) {
  FinStructure M;
  M.name = "M" + std::to_string(n);
  M.signature = theory_of_objects().signature;
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < n; ++i)
    carrier.push_back(std::string(1, static_cast<char>('a' + i)));
  M.carriers["s"] = carrier;
  return M;
}

/// unit = {[].⊤}, single = {x.⊤}, pair = {x,y.⊤} with the projections,
/// diagonal, swap and the arrows forced by composition closure.
inline FragmentSite objects_fragment(std::size_t n,
                                     bool with_swap_cover = false) {
  Theory T = theory_of_objects();
  FinStructure M = objects_structure(n);

  auto v = [](int i) { return Term::variable(i); };
  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
      {"pair", {{"s", "s"}, Formula::top()}},
  };
  std::vector<FragmentArrow> arrows = {
      {"bang", "single", "unit", Formula::top()},
      {"bang2", "pair", "unit", Formula::top()},
      {"p1", "pair", "single", Formula::eq(v(2), v(0))},
      {"delta", "single", "pair",
       Formula::conj({Formula::eq(v(1), v(0)), Formula::eq(v(2), v(0))})},
  };
  if (n >= 2) {
    // for a one-element model these graphs coincide with p1 and identities
    arrows.push_back({"p2", "pair", "single", Formula::eq(v(2), v(1))});
    arrows.push_back(
        {"swap", "pair", "pair",
         Formula::conj({Formula::eq(v(2), v(1)), Formula::eq(v(3), v(0))})});
    arrows.push_back(
        {"dd1", "pair", "pair",
         Formula::conj({Formula::eq(v(2), v(0)), Formula::eq(v(3), v(0))})});
    arrows.push_back(
        {"dd2", "pair", "pair",
         Formula::conj({Formula::eq(v(2), v(1)), Formula::eq(v(3), v(1))})});
  }
  std::vector<FragmentCover> covers;
  if (with_swap_cover && n >= 2) covers.push_back({"pair", {"swap"}});
  FragmentSite frag = compile_fragment(T, M, formulas, arrows, covers);
  frag.name = "objects" + std::to_string(n);
  return frag;
}

// ---------------------------------------------------------------------------
// finite-set skeletons (sites presenting Set at desk scale)

struct Skeleton {
  CategoryPtr category;
  std::vector<std::size_t> sizes;
  std::string object(std::size_t n) const { return "n" + std::to_string(n); }
  // function dom -> cod given by images
  std::string map_id(std::size_t dom, std::size_t cod,
                     const std::vector<std::size_t>& img) const {
    std::string s = "m" + std::to_string(dom) + "_" + std::to_string(cod) + "_";
    for (auto i : img) s += std::to_string(i);
    return s;
  }
};

inline Skeleton finset_skeleton(std::size_t max_size) {
  Skeleton sk;
  for (std::size_t n = 0; n <= max_size; ++n) sk.sizes.push_back(n);
  CategoryBuilder b;
  for (auto n : sk.sizes) b.object(sk.object(n));

  // all functions between the carriers {0..n-1}
  std::map<std::pair<std::size_t, std::size_t>,
           std::vector<std::vector<std::size_t>>>
      tables;
  for (auto d : sk.sizes)
    for (auto c : sk.sizes) {
      std::vector<std::vector<std::size_t>> maps;
      if (d == 0) {
        maps.push_back({});
      } else if (c == 0) {
        // none
      } else {
        std::vector<std::size_t> img(d, 0);
        while (true) {
          maps.push_back(img);
          std::size_t i = 0;
          while (i < d && ++img[i] == c) img[i++] = 0;
          if (i == d) break;
        }
      }
      tables[{d, c}] = maps;
      for (const auto& img : maps)
        b.arrow(sk.map_id(d, c, img), sk.object(d), sk.object(c));
    }
  for (auto n : sk.sizes) {
    std::vector<std::size_t> idimg;
    for (std::size_t i = 0; i < n; ++i) idimg.push_back(i);
    b.identity(sk.object(n), sk.map_id(n, n, idimg));
  }
  for (auto d : sk.sizes)
    for (auto m : sk.sizes)
      for (auto c : sk.sizes)
        for (const auto& f : tables[{d, m}])
          for (const auto& g : tables[{m, c}]) {
            std::vector<std::size_t> comp(d);
            for (std::size_t i = 0; i < d; ++i) comp[i] = g[f[i]];
            b.compose(sk.map_id(m, c, g), sk.map_id(d, m, f),
                      sk.map_id(d, c, comp));
          }
  sk.category = b.build_shared();
  return sk;
}

/// {id} and the family of all points 1 -> b; a basis generating the
/// canonical (jointly surjective) topology on the skeleton.
inline CoverageBasis point_basis(const Skeleton& sk) {
  CoverageBasis B = trivial_basis(*sk.category);
  for (auto n : sk.sizes) {
    Presieve p;
    p.codomain = sk.object(n);
    for (std::size_t i = 0; i < n; ++i) p.arrows.insert(sk.map_id(1, n, {i}));
    B.add(p);
  }
  return B;
}

/// The interpretation functor of a fragment as a finite-limit-preserving
/// functor into a finite-set skeleton (carriers indexed in sorted order).
inline FinFunctor interp_into_skeleton(const FragmentSite& frag,
                                       const Skeleton& sk) {
  FinFunctor F;
  F.source = frag.compiled;
  F.target = sk.category;
  std::map<std::string, std::map<std::string, std::size_t>> index;
  for (const auto& [fid, carrier] : frag.interp.carriers) {
    for (std::size_t i = 0; i < carrier.size(); ++i) index[fid][carrier[i]] = i;
    F.on_objects[fid] = sk.object(carrier.size());
  }
  for (const auto& [aid, act] : frag.interp.actions) {
    const Arrow& a = frag.compiled->arrow(aid);
    const auto& dom = frag.interp.carriers.at(a.dom);
    std::vector<std::size_t> img;
    for (const auto& x : dom) img.push_back(index[a.cod][act.at(x)]);
    F.on_arrows[aid] = sk.map_id(dom.size(), frag.interp.carriers.at(a.cod).size(), img);
  }
  return F;
}

// ---------------------------------------------------------------------------
// random fragments (four flavours, all compiling under the closure rules)

struct Rng {
  std::mt19937 gen;
  explicit Rng(std::uint32_t seed) : gen(seed) {}
  std::size_t pick(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
  }
  bool coin() { return pick(0, 1) == 1; }
};

/// Flavour 0: function-iteration fragments with the trivial basis.
inline FragmentSite random_iteration_fragment(Rng& rng) {
  Theory T;
  T.name = "iter";
  T.signature.sorts = {"s"};
  T.signature.functions["u"] = FuncDecl{{"s"}, "s"};

  const std::size_t n = rng.pick(1, 3);
  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(std::to_string(i));
  M.carriers["s"] = carrier;
  std::map<Tuple, std::string> table;
  for (const auto& e : carrier) table[{e}] = carrier[rng.pick(0, n - 1)];
  M.functions["u"] = table;

  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
  };
  std::vector<FragmentArrow> arrows = {
      {"bang", "single", "unit", Formula::top()},
  };
  // powers of u until the graphs repeat
  std::set<std::map<Tuple, Tuple>> seen;
  {
    std::map<Tuple, Tuple> idg, cur;
    for (const auto& e : carrier) idg[{e}] = {e};
    seen.insert(idg);
    cur = idg;
    Term t = Term::variable(0);
    for (std::size_t p = 1; p <= 6; ++p) {
      std::map<Tuple, Tuple> next;
      for (const auto& [x, y] : cur) next[x] = {M.functions["u"].at(y)};
      if (seen.count(next)) break;
      seen.insert(next);
      cur = next;
      t = Term::apply("u", {t});
      arrows.push_back({"u" + std::to_string(p), "single", "single",
                        Formula::eq(Term::variable(1), t)});
    }
  }
  return compile_fragment(T, M, formulas, arrows, {});
}

/// Flavour 1: a partition of the carrier into definable blocks, covered by
/// the block inclusions; includes the empty formula and sometimes the empty
/// cover on it.
inline FragmentSite random_partition_fragment(Rng& rng, std::size_t nmax = 3) {
  const std::size_t n = rng.pick(2, nmax);
  const std::size_t k = rng.pick(2, std::min<std::size_t>(3, n));

  Theory T;
  T.name = "blocks";
  T.signature.sorts = {"s"};
  for (std::size_t b = 0; b < k; ++b)
    T.signature.relations["B" + std::to_string(b)] = {"s"};

  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(std::to_string(i));
  M.carriers["s"] = carrier;
  // surjective assignment of elements to blocks
  std::vector<std::size_t> owner(n);
  for (std::size_t b = 0; b < k; ++b) owner[b] = b;  // each block nonempty
  for (std::size_t i = k; i < n; ++i) owner[i] = rng.pick(0, k - 1);
  for (std::size_t i = 0; i < n; ++i)
    M.relations["B" + std::to_string(owner[i])].insert({carrier[i]});

  auto v0 = Term::variable(0);
  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
      {"empty", {{"s"}, Formula::bot()}},
  };
  std::vector<FragmentArrow> arrows = {
      {"bang", "single", "unit", Formula::top()},
      {"zbang", "empty", "unit", Formula::top()},
      {"zs", "empty", "single", Formula::top()},
  };
  FragmentCover cover{"single", {}};
  for (std::size_t b = 0; b < k; ++b) {
    const std::string f = "blk" + std::to_string(b);
    formulas.push_back(
        {f, {{"s"}, Formula::rel_atom("B" + std::to_string(b), {v0})}});
    arrows.push_back({"in" + std::to_string(b), f, "single",
                      Formula::eq(Term::variable(1), v0)});
    arrows.push_back({"bang" + std::to_string(b), f, "unit",
                      Formula::rel_atom("B" + std::to_string(b), {v0})});
    arrows.push_back({"z" + std::to_string(b), "empty", f, Formula::top()});
    cover.arrows.push_back("in" + std::to_string(b));
  }
  std::vector<FragmentCover> covers{cover};
  if (rng.coin()) covers.push_back({"empty", {}});
  return compile_fragment(T, M, formulas, arrows, covers);
}

/// Flavour 2: two overlapping definable subsets covering the carrier, with
/// the intersection realizing the cover pullbacks.
inline FragmentSite random_overlap_fragment(Rng& rng, std::size_t nmax = 3) {
  const std::size_t n = rng.pick(2, nmax);
  Theory T;
  T.name = "overlap";
  T.signature.sorts = {"s"};
  T.signature.relations["R1"] = {"s"};
  T.signature.relations["R2"] = {"s"};

  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(std::to_string(i));
  M.carriers["s"] = carrier;
  // R1 ∪ R2 = carrier, both nonempty, overlapping or not
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng.pick(0, 2)) {
      case 0:
        M.relations["R1"].insert({carrier[i]});
        break;
      case 1:
        M.relations["R2"].insert({carrier[i]});
        break;
      default:
        M.relations["R1"].insert({carrier[i]});
        M.relations["R2"].insert({carrier[i]});
    }
  }
  if (M.relations["R1"].empty()) M.relations["R1"].insert({carrier[0]});
  if (M.relations["R2"].empty()) M.relations["R2"].insert({carrier[n - 1]});

  auto v0 = Term::variable(0);
  Formula r1 = Formula::rel_atom("R1", {v0});
  Formula r2 = Formula::rel_atom("R2", {v0});
  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
      {"f1", {{"s"}, r1}},
      {"f2", {{"s"}, r2}},
      {"f12", {{"s"}, Formula::conj({r1, r2})}},
  };
  auto incl = [&](const std::string& id, const std::string& dom,
                  const std::string& cod) {
    return FragmentArrow{id, dom, cod, Formula::eq(Term::variable(1), v0)};
  };
  std::vector<FragmentArrow> arrows = {
      incl("i1", "f1", "single"),
      incl("i2", "f2", "single"),
      incl("j1", "f12", "f1"),
      incl("j2", "f12", "f2"),
      incl("k12", "f12", "single"),
      {"bang", "single", "unit", Formula::top()},
      {"bang1", "f1", "unit", r1},
      {"bang2", "f2", "unit", r2},
      {"bang12", "f12", "unit", Formula::conj({r1, r2})},
  };
  std::vector<FragmentCover> covers{{"single", {"i1", "i2"}}};
  return compile_fragment(T, M, formulas, arrows, covers);
}

/// Flavour 3: a cyclic permutation group acting on the carrier; every
/// nonempty set of powers is a cover.
inline FragmentSite random_group_fragment(Rng& rng) {
  const std::size_t n = rng.pick(2, 3);
  Theory T;
  T.name = "cycle";
  T.signature.sorts = {"s"};
  T.signature.functions["u"] = FuncDecl{{"s"}, "s"};

  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(std::to_string(i));
  M.carriers["s"] = carrier;
  std::map<Tuple, std::string> table;  // the n-cycle
  for (std::size_t i = 0; i < n; ++i) table[{carrier[i]}] = carrier[(i + 1) % n];
  M.functions["u"] = table;

  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
  };
  std::vector<FragmentArrow> arrows = {
      {"bang", "single", "unit", Formula::top()},
  };
  Term t = Term::variable(0);
  std::vector<std::string> powers;  // non-identity powers
  for (std::size_t p = 1; p < n; ++p) {
    t = Term::apply("u", {t});
    arrows.push_back({"u" + std::to_string(p), "single", "single",
                      Formula::eq(Term::variable(1), t)});
    powers.push_back("u" + std::to_string(p));
  }
  powers.push_back("");  // stands for the identity (added by the compiler)
  // covers: all nonempty subsets of the group
  std::vector<FragmentCover> covers;
  for (std::size_t mask = 1; mask < (std::size_t{1} << powers.size()); ++mask) {
    FragmentCover c{"single", {}};
    for (std::size_t i = 0; i < powers.size(); ++i)
      if (mask & (std::size_t{1} << i))
        c.arrows.push_back(powers[i].empty() ? "id:single" : powers[i]);
    covers.push_back(c);
  }
  // "id:single" is synthesized by the compiler with exactly that name
  return compile_fragment(T, M, formulas, arrows, covers);
}

inline FragmentSite random_fragment(Rng& rng) {
  switch (rng.pick(0, 3)) {
    case 0:
      return random_iteration_fragment(rng);
    case 1:
      return random_partition_fragment(rng);
    case 2:
      return random_overlap_fragment(rng);
    default:
      return random_group_fragment(rng);
  }
}

// ---------------------------------------------------------------------------
// random strict indexed categories (finite lattices, meet-preserving
// transitions)

struct LatticeSpec {
  // a finite meet-semilattice with top, as a category
  CategoryPtr category;
  std::vector<std::string> elems;                       // sorted
  std::map<std::pair<std::string, std::string>, bool> leq;
  std::string arrow(const std::string& a, const std::string& b) const {
    return "le_" + a + "_" + b;
  }
};

/// Chains c0 <= c1 <= ... and the diamond 0 <= x,y <= 1.
inline LatticeSpec make_lattice(std::size_t which, std::size_t size) {
  LatticeSpec L;
  std::vector<std::pair<std::string, std::string>> pairs;
  if (which == 0) {
    for (std::size_t i = 0; i < size; ++i) L.elems.push_back("c" + std::to_string(i));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        L.leq[{L.elems[i], L.elems[j]}] = i <= j;
  } else {
    L.elems = {"bot", "mid1", "mid2", "top"};
    auto le = [&](const std::string& a, const std::string& b) {
      L.leq[{a, b}] = true;
    };
    for (const auto& e : L.elems) le(e, e);
    le("bot", "mid1");
    le("bot", "mid2");
    le("bot", "top");
    le("mid1", "top");
    le("mid2", "top");
    for (const auto& a : L.elems)
      for (const auto& b : L.elems)
        if (!L.leq.count({a, b})) L.leq[{a, b}] = false;
  }
  std::sort(L.elems.begin(), L.elems.end());
  CategoryBuilder b;
  for (const auto& e : L.elems) b.object(e);
  for (const auto& x : L.elems)
    for (const auto& y : L.elems)
      if (L.leq[{x, y}]) b.arrow(L.arrow(x, y), x, y);
  for (const auto& e : L.elems) b.identity(e, L.arrow(e, e));
  for (const auto& x : L.elems)
    for (const auto& y : L.elems)
      for (const auto& z : L.elems)
        if (L.leq[{x, y}] && L.leq[{y, z}])
          b.compose(L.arrow(y, z), L.arrow(x, y), L.arrow(x, z));
  L.category = b.build_shared();
  return L;
}

/// meet of two lattice elements (the categorical pullback over anything)
inline std::string lattice_meet(const LatticeSpec& L, const std::string& a,
                                const std::string& b) {
  std::string best;
  for (const auto& e : L.elems)
    if (L.leq.at({e, a}) && L.leq.at({e, b})) {
      if (best.empty() || L.leq.at({best, e})) best = e;
    }
  return best;
}

/// all meet- and top-preserving monotone endomaps of the lattice
inline std::vector<std::map<std::string, std::string>> meet_top_endos(
    const LatticeSpec& L) {
  std::string top;
  for (const auto& e : L.elems) {
    bool is_top = true;
    for (const auto& f : L.elems)
      if (!L.leq.at({f, e})) is_top = false;
    if (is_top) top = e;
  }
  std::vector<std::map<std::string, std::string>> out;
  std::map<std::string, std::string> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == L.elems.size()) {
      for (const auto& x : L.elems)
        for (const auto& y : L.elems) {
          const std::string m = lattice_meet(L, x, y);
          if (lattice_meet(L, cur.at(x), cur.at(y)) != cur.at(m)) return;
        }
      out.push_back(cur);
      return;
    }
    const std::string& e = L.elems[i];
    for (const auto& img : L.elems) {
      if (e == top && img != top) continue;
      // monotonicity against already-assigned elements
      bool mono = true;
      for (std::size_t j = 0; j < i; ++j) {
        const std::string& f = L.elems[j];
        if (L.leq.at({e, f}) && !L.leq.at({img, cur.at(f)})) mono = false;
        if (L.leq.at({f, e}) && !L.leq.at({cur.at(f), img})) mono = false;
      }
      if (!mono) continue;
      cur[e] = img;
      rec(i + 1);
      cur.erase(e);
    }
  };
  rec(0);
  return out;
}

/// A strict indexed category: base a lattice, all fibers one lattice, the
/// transition along u equal to e^(depth difference) for a meet-top endo e.
inline IndexedCategory random_lattice_indexed(Rng& rng) {
  LatticeSpec base = make_lattice(rng.pick(0, 1), rng.pick(2, 4));
  LatticeSpec fiber = make_lattice(0, rng.pick(2, 3));  // fibers <= 3 objects
  auto endos = meet_top_endos(fiber);
  const auto e = endos[rng.pick(0, endos.size() - 1)];

  // rank in the base: arrows of length d get transition e^d; since every
  // lattice hom-set has at most one arrow, strictness needs the exponents to
  // add along composition, which a rank function provides
  std::map<std::string, std::size_t> rank;
  for (const auto& x : base.elems) {
    std::size_t r = 0;
    for (const auto& y : base.elems)
      if (base.leq.at({y, x}) && y != x) ++r;
    rank[x] = r;
  }

  IndexedCategory I;
  I.base = base.category;
  for (const auto& x : base.elems) I.fibers[x] = fiber.category;

  auto apply_pow = [&](const std::string& elem, std::size_t p) {
    std::string cur = elem;
    for (std::size_t i = 0; i < p; ++i) cur = e.at(cur);
    return cur;
  };
  for (const auto& arr : base.category->arrows) {
    const Arrow& a = base.category->arrow(arr.id);
    const std::size_t p = rank.at(a.cod) - rank.at(a.dom);
    FinFunctor t;
    t.source = fiber.category;
    t.target = fiber.category;
    for (const auto& x : fiber.elems) t.on_objects[x] = apply_pow(x, p);
    for (const auto& farr : fiber.category->arrows) {
      const Arrow& fa = fiber.category->arrow(farr.id);
      t.on_arrows[farr.id] =
          fiber.arrow(apply_pow(fa.dom, p), apply_pow(fa.cod, p));
    }
    I.transitions[arr.id] = t;
  }
  return I;
}

/// Transports the basis of a terminal-site general over-site across the
/// canonical isomorphism onto the set-based elements category, so the two
/// constructions can be compared extensionally.
inline CoverageBasis transport_terminal_general(const OverSite& gen_over) {
  CoverageBasis out;
  for (const auto& [obj, fams] : gen_over.basis.families) {
    const auto& comp = gen_over.general_components.at(obj);
    for (const auto& fam : fams) {
      Presieve p;
      p.codomain = comp[1] + "@" + comp[2];
      for (const auto& arr : fam.arrows) {
        // general arrow ids are u@θ@a@a'
        std::size_t first = arr.find('@');
        std::size_t second = arr.find('@', first + 1);
        std::size_t third = arr.find('@', second + 1);
        p.arrows.insert(arr.substr(first + 1, second - first - 1) + "@" +
                        arr.substr(second + 1, third - second - 1));
      }
      out.add(p);
    }
  }
  return out;
}

/// A presheaf model of a compiled fragment over the walking-arrow site with
/// the {u}-cover: constant presheaves (always sheaves here).
inline PresheafModel arrow_site_model(const FragmentSite& frag) {
  PresheafModel pm;
  pm.frag_cat = frag.compiled;
  pm.frag_basis = frag.basis;
  CategoryBuilder b;
  b.object("c0").object("c1").arrow("u", "c0", "c1");
  b.auto_identities();
  pm.site = b.build_shared();
  pm.site_basis = trivial_basis(*pm.site);
  {
    Presieve p;
    p.codomain = "c1";
    p.arrows.insert("u");
    pm.site_basis.add(p);
  }
  for (const auto& [fid, carrier] : frag.interp.carriers) {
    FinPresheaf P;
    P.site = pm.site;
    P.carriers["c0"] = carrier;
    P.carriers["c1"] = carrier;
    for (const auto& a : pm.site->arrows) {
      std::map<std::string, std::string> r;
      for (const auto& x : carrier) r[x] = x;
      P.restrictions[a.id] = r;
    }
    pm.interp[fid] = P;
  }
  for (const auto& [aid, act] : frag.interp.actions) {
    pm.actions[aid]["c0"] = act;
    pm.actions[aid]["c1"] = act;
  }
  return pm;
}

}  // namespace finsite::testing
