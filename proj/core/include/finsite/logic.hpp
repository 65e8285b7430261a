#pragma once

#include "finsite/coverage.hpp"
#include "finsite/fincat.hpp"

namespace finsite {

// ---------------------------------------------------------------------------
// signatures, terms, formulas

struct FuncDecl {
  std::vector<std::string> args;
  std::string result;
};

struct Signature {
  std::vector<std::string> sorts;
  std::map<std::string, FuncDecl> functions;  // constants are 0-ary
  std::map<std::string, std::vector<std::string>> relations;

  bool has_sort(const std::string& s) const;
};

/// Terms over a signature.  Variables are positions into the ambient
/// context (alpha-normal by construction).
struct Term {
  int var = -1;  // >= 0 for variables
  std::string func;
  std::vector<Term> args;

  static Term variable(int index);
  static Term apply(std::string f, std::vector<Term> a = {});
  bool is_var() const { return var >= 0; }
  std::string key() const;
  friend bool operator==(const Term& a, const Term& b) {
    return a.key() == b.key();
  }
};

enum class Conn { Top, Bot, Eq, Rel, And, Or, Exists };

/// Coherent formulas: =, ⊤, ⊥, ∧, finite ∨, ∃.  And/Or operands are kept
/// flattened and sorted, so structural equality is equality of keys.
struct Formula {
  Conn kind = Conn::Top;
  std::string rel;                       // Rel
  std::vector<Term> terms;               // Eq (2) / Rel (arity)
  std::vector<Formula> subs;             // And / Or / Exists (1)
  std::vector<std::string> bound_sorts;  // Exists

  static Formula top();
  static Formula bot();
  static Formula eq(Term a, Term b);
  static Formula rel_atom(std::string r, std::vector<Term> ts);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula exists(std::vector<std::string> sorts, Formula body);

  std::string key() const;
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.key() == b.key();
  }
};

/// Flattens nested ∧/∨ and sorts operands; the canonical form used for
/// structural formula identity.
Formula normalize(const Formula& f);

struct FormulaInContext {
  std::vector<std::string> context;  // sorts, positional
  Formula body;
  std::string key() const;
};

struct Sequent {
  std::vector<std::string> context;
  Formula premise;
  Formula conclusion;
};

struct Theory {
  std::string name;
  Signature signature;
  std::vector<Sequent> axioms;
};

/// Well-typedness of a formula in a context; throws Error when ill-typed,
/// returns the sort of a term.
std::string typecheck_term(const Signature& sig,
                           const std::vector<std::string>& context,
                           const Term& t);
void typecheck_formula(const Signature& sig,
                       const std::vector<std::string>& context,
                       const Formula& f);

// ---------------------------------------------------------------------------
// finite structures

using Tuple = std::vector<std::string>;

struct FinStructure {
  std::string name;
  Signature signature;
  std::map<std::string, std::vector<std::string>> carriers;  // sort -> elems
  std::map<std::string, std::map<Tuple, std::string>> functions;
  std::map<std::string, std::set<Tuple>> relations;

  const std::vector<std::string>& carrier(const std::string& sort) const;
};

ValidationReport validate_structure(const FinStructure& M);

/// Per-sort maps between carriers.
struct ModelHom {
  std::map<std::string, std::map<std::string, std::string>> maps;
  const std::string& apply(const std::string& sort,
                           const std::string& elem) const;
  Tuple apply_tuple(const std::vector<std::string>& sorts, const Tuple& t) const;
};

/// The interpretation of a formula-in-context: the satisfying subset of the
/// context-product carrier, as sorted tuples.
std::vector<Tuple> eval_formula(const FinStructure& M,
                                const FormulaInContext& phi);

/// eval(premise) ⊆ eval(conclusion).
bool check_sequent(const FinStructure& M, const Sequent& s);

/// All axioms hold.
bool check_model(const FinStructure& M, const Theory& T);

/// θ over the joined context dom.context ++ cod.context is the graph of a
/// total function eval(dom) → eval(cod).
bool check_functional(const FinStructure& M, const Formula& theta,
                      const FormulaInContext& dom, const FormulaInContext& cod);

/// Graph of a functional θ as a map of tuples.
std::map<Tuple, Tuple> functional_graph(const FinStructure& M,
                                        const Formula& theta,
                                        const FormulaInContext& dom,
                                        const FormulaInContext& cod);

/// Commutes with function tables and preserves relation tuples.
bool check_hom(const FinStructure& N, const FinStructure& M,
               const ModelHom& h);

/// Per-formula naturality report: for coherent formulas a homomorphism maps
/// eval_N into eval_M; any failure is listed rather than guessed around.
std::vector<std::string> hom_naturality_report(
    const FinStructure& N, const FinStructure& M, const ModelHom& h,
    const std::vector<FormulaInContext>& formulas);

// ---------------------------------------------------------------------------
// fragments

std::string encode_tuple(const Tuple& t);
Tuple decode_tuple(const std::string& s);

struct FragmentFormula {
  std::string id;
  FormulaInContext fic;
};

struct FragmentArrow {
  std::string id;
  std::string dom, cod;  // formula ids
  Formula theta;         // over dom.context ++ cod.context
};

struct FragmentCover {
  std::string at;                  // formula id
  std::vector<std::string> arrows; // arrow ids
};

/// A finite stand-in for the syntactic site together with its
/// interpretation: compiled category, coverage basis, and the set-valued
/// interpretation functor.
struct FragmentSite {
  std::string name;
  Theory theory;
  FinStructure model;
  std::vector<FragmentFormula> formulas;
  std::vector<FragmentArrow> arrows;  // includes synthesized identities
  CategoryPtr compiled;               // objects = formula ids
  CoverageBasis basis;                // declared covers + identity families
  SetValuedFunctor interp;            // carriers are encoded tuples
  std::vector<std::string> notes;

  // registries
  std::string terminal_formula;                   // id of {[].⊤}
  std::map<std::string, std::string> sort_top;    // sort -> formula id
  struct PullbackEntry {
    std::string vertex, to_left, to_right;
  };
  // (left arrow, right arrow) -> realized pullback in the compiled category
  std::map<std::pair<std::string, std::string>, PullbackEntry> pullbacks;
  // arrow id -> graph on tuples
  std::map<std::string, std::map<Tuple, Tuple>> graphs;

  const FragmentFormula& formula(const std::string& id) const;
  const FragmentArrow& arrow_data(const std::string& id) const;
  std::vector<Tuple> formula_elements(const std::string& id) const;
};

/// Compiles a fragment: verifies M ⊨ T, functionality of arrows, closure of
/// arrows under graph composition, joint surjectivity of declared covers,
/// basis conditions, and the pullback-formula closure for declared covers.
FragmentSite compile_fragment(const Theory& T, const FinStructure& M,
                              const std::vector<FragmentFormula>& formulas,
                              const std::vector<FragmentArrow>& arrows,
                              const std::vector<FragmentCover>& covers);

// ---------------------------------------------------------------------------
// the explicit axiomatization

/// The emitted language and axioms: one sort per object of the category of
/// elements, one function symbol per arrow, and the terminal, pullback and
/// cover axiom schemes instantiated over the fragment's data.
struct TmAxioms {
  Theory theory;  // over the emitted signature
  // element object id -> sort name, elements arrow id -> function name
  std::map<std::string, std::string> sort_of;
  std::map<std::string, std::string> func_of;
  std::vector<std::string> notes;
};

TmAxioms emit_tm_axioms(const FragmentSite& frag);

/// The structure over the emitted language induced by a homomorphism
/// g : N → M: carriers are the fibers of g over elements of M, functions the
/// restrictions of the arrow interpretations in N.
FinStructure sigma_structure_of_hom(const FragmentSite& frag,
                                    const TmAxioms& tm, const FinStructure& N,
                                    const ModelHom& g);

}  // namespace finsite
