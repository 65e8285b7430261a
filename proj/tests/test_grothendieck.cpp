#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finsite/grothendieck.hpp"
#include "helpers.hpp"

using namespace finsite;
using namespace finsite::testing;

namespace {

IndexedCategory terminal_fibers(const CategoryPtr& base) {
  auto pt = terminal_category();
  IndexedCategory I;
  I.base = base;
  for (const auto& o : base->objects) I.fibers[o] = pt;
  for (const auto& a : base->arrows) I.transitions[a.id] = identity_functor(pt);
  return I;
}

IndexedCategory single_fiber(const CategoryPtr& fiber) {
  auto pt = terminal_category();
  IndexedCategory I;
  I.base = pt;
  I.fibers["pt"] = fiber;
  I.transitions[pt->identity("pt")] = identity_functor(fiber);
  return I;
}

}  // namespace

TEST_CASE("all fibers terminal: total is the base") {
  auto base = arrow_category();
  GrothendieckTotal t = grothendieck_construction(terminal_fibers(base));
  CHECK(t.total->objects.size() == base->objects.size());
  CHECK(t.total->arrows.size() == base->arrows.size());
  CHECK(validate_category(*t.total).ok());
  CHECK(validate_functor(t.projection).ok());
}

TEST_CASE("terminal base: total is the fiber") {
  LatticeSpec L = make_lattice(1, 4);  // the diamond
  GrothendieckTotal t = grothendieck_construction(single_fiber(L.category));
  CHECK(t.total->objects.size() == L.category->objects.size());
  CHECK(t.total->arrows.size() == L.category->arrows.size());
}

TEST_CASE("object and arrow counts over the walking arrow") {
  // base a -> b, fiber over a terminal, fiber over b a 2-chain, transition
  // collapsing
  auto base = arrow_category();
  LatticeSpec chain = make_lattice(0, 2);
  auto pt = terminal_category();
  IndexedCategory I;
  I.base = base;
  I.fibers["a"] = pt;
  I.fibers["b"] = chain.category;
  FinFunctor collapse;
  collapse.source = chain.category;
  collapse.target = pt;
  for (const auto& e : chain.elems) collapse.on_objects[e] = "pt";
  for (const auto& arr : chain.category->arrows)
    collapse.on_arrows[arr.id] = pt->identity("pt");
  I.transitions["f"] = collapse;
  I.transitions[base->identity("a")] = identity_functor(pt);
  I.transitions[base->identity("b")] = identity_functor(chain.category);
  REQUIRE(validate_indexed(I).ok());

  GrothendieckTotal t = grothendieck_construction(I);
  // objects: 1 over a, 2 over b
  CHECK(t.total->objects.size() == 3);
  // arrows: 1 identity over a; fiber(b) has 3 arrows; lifts of f from each
  // object of fiber(b): each contributes hom(pt-fiber...) = 1 arrow
  CHECK(t.total->arrows.size() == 1 + 3 + 2);
  CHECK(validate_category(*t.total).ok());
  CHECK(validate_cartesian_lifts(t).ok());
}

TEST_CASE("random strict indexed categories are valid and have cartesian lifts") {
  for (std::uint32_t seed = 1; seed <= 6; ++seed) {
    Rng rng(seed);
    IndexedCategory I = random_lattice_indexed(rng);
    REQUIRE(validate_indexed(I).ok());
    GrothendieckTotal t = grothendieck_construction(I);
    CHECK(validate_category(*t.total).ok());
    CHECK(validate_functor(t.projection).ok());
    CHECK(validate_cartesian_lifts(t).ok());
  }
}

TEST_CASE("terminal-lift squares are pullbacks") {
  SUBCASE("terminal fibers") {
    GrothendieckTotal t =
        grothendieck_construction(terminal_fibers(arrow_category()));
    CHECK(check_terminal_lift_pullback(t));
  }
  SUBCASE("terminal base") {
    LatticeSpec L = make_lattice(0, 3);
    GrothendieckTotal t = grothendieck_construction(single_fiber(L.category));
    CHECK(check_terminal_lift_pullback(t));
  }
  SUBCASE("lattice instances") {
    for (std::uint32_t seed = 11; seed <= 14; ++seed) {
      Rng rng(seed);
      GrothendieckTotal t =
          grothendieck_construction(random_lattice_indexed(rng));
      CHECK(check_terminal_lift_pullback(t));
    }
  }
}

TEST_CASE("limits in the total category") {
  Rng rng(5);
  IndexedCategory I = random_lattice_indexed(rng);
  GrothendieckTotal t = grothendieck_construction(I);

  SUBCASE("empty diagram gives the terminal pair") {
    auto w = limit_in_total(t, empty_diagram(t.total));
    REQUIRE(w.has_value());
    auto direct = find_terminal(*t.total);
    REQUIRE(direct.has_value());
    CHECK(w->apex == direct->apex);
  }

  SUBCASE("cospans agree with the direct oracle") {
    std::size_t checked = 0;
    for (const auto& l : t.total->arrows) {
      for (const auto& r : t.total->arrows) {
        if (l.cod != r.cod || l.id > r.id) continue;
        if (checked >= 12) break;
        Diagram d = cospan_diagram(t.total, l.id, r.id);
        auto w = limit_in_total(t, d);
        REQUIRE(w.has_value());
        auto direct = compute_limit(*t.total, d);
        REQUIRE(direct.has_value());
        // both are limits, hence isomorphic; in a lattice-indexed total
        // category limits are unique on the nose
        CHECK(w->apex == direct->apex);
        ++checked;
      }
      if (checked >= 12) break;
    }
    CHECK(checked > 0);
  }

  SUBCASE("a diagram inside one fiber over identities") {
    // pick a fiber cospan and view it in the total category
    const std::string c = I.base->objects.front();
    const FinCategory& fib = I.fiber(c);
    for (const auto& l : fib.arrows) {
      for (const auto& r : fib.arrows) {
        if (l.cod != r.cod || l.id > r.id) continue;
        const std::string lc = I.base->identity(c) + "@" + l.id + "@" + l.cod;
        const std::string rc = I.base->identity(c) + "@" + r.id + "@" + r.cod;
        Diagram d = cospan_diagram(t.total, lc, rc);
        auto w = limit_in_total(t, d);
        REQUIRE(w.has_value());
        // the apex projects to the base object c
        CHECK(t.projection.obj(w->apex) == c);
        return;
      }
    }
  }
}

TEST_CASE("descent holds for identity covers and terminal fibers") {
  SUBCASE("identity cover") {
    Rng rng(8);
    GrothendieckTotal t =
        grothendieck_construction(random_lattice_indexed(rng));
    const std::string c = t.indexed.base->objects.front();
    DescentReport r =
        check_descent(t, {c, {t.indexed.base->identity(c)}});
    CHECK(r.ok());
    CHECK(r.data_checked > 0);
  }
  SUBCASE("terminal fibers descend along anything") {
    auto base = arrow_category();
    GrothendieckTotal t = grothendieck_construction(terminal_fibers(base));
    DescentReport r = check_descent(t, {"b", {"f", base->identity("b")}});
    CHECK(r.ok());
  }
}

TEST_CASE("a broken gluing is reported") {
  // base: the diamond lattice with bot <= mid1,mid2 <= top; cover of top by
  // {mid1 <= top, mid2 <= top}; fibers: chains with a transition that
  // destroys the amalgamating object
  LatticeSpec base = make_lattice(1, 4);
  LatticeSpec fib = make_lattice(0, 2);  // c0 <= c1

  IndexedCategory I;
  I.base = base.category;
  for (const auto& e : base.elems) I.fibers[e] = fib.category;
  // transition: identity everywhere except along arrows into top, which
  // collapse everything to c1... collapsing is meet-top preserving only if
  // it is e(x) = top; use e = const c1 (preserves meets and top on a chain)
  std::map<std::string, std::string> collapse{{"c0", "c1"}, {"c1", "c1"}};
  auto mk = [&](const std::map<std::string, std::string>& e) {
    FinFunctor t;
    t.source = fib.category;
    t.target = fib.category;
    for (const auto& x : fib.elems) t.on_objects[x] = e.at(x);
    for (const auto& arr : fib.category->arrows) {
      const Arrow& a = fib.category->arrow(arr.id);
      t.on_arrows[arr.id] = fib.arrow(e.at(a.dom), e.at(a.cod));
    }
    return t;
  };
  for (const auto& arr : base.category->arrows) {
    const Arrow& a = base.category->arrow(arr.id);
    if (a.cod == "top" && a.dom != "top")
      I.transitions[arr.id] = mk(collapse);
    else
      I.transitions[arr.id] = identity_functor(fib.category);
  }
  // strictness fails for composites bot -> mid -> top vs bot -> top unless
  // the direct arrow also collapses; it does by the rule above, and
  // composites of identity-then-collapse agree with collapse
  REQUIRE(validate_indexed(I).ok());
  GrothendieckTotal t = grothendieck_construction(I);
  DescentReport r = check_descent(t, {"top", {base.arrow("mid1", "top"),
                                              base.arrow("mid2", "top")}});
  // the datum picking c0 over both mids has no amalgamation: any object a
  // over top restricts to c1 on both sides
  CHECK_FALSE(r.ok());
}

TEST_CASE("element stacks satisfy descent on their covering families") {
  Rng rng(19);
  FragmentSite frag = random_partition_fragment(rng, 2);
  PresheafModel pm = arrow_site_model(frag);
  IndexedCategory I = elements_stack(pm);
  REQUIRE(validate_indexed(I).ok());
  GrothendieckTotal t = grothendieck_construction(I);
  for (const auto& [obj, fams] : pm.site_basis.families)
    for (const auto& fam : fams) {
      DescentReport r = check_descent(t, fam);
      CHECK(r.ok());
    }
}
