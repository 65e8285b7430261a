#pragma once

#include "finsite/grothendieck.hpp"
#include "finsite/logic.hpp"
#include "finsite/sheaves.hpp"

namespace finsite {

/// The site for the over-topos at the fragment's model: the category of
/// elements (or, in the general form, the comma category of basic
/// generalized elements) with the antecedent coverage basis.
///
/// The emitted basis is the multicomposition saturation of the antecedent
/// families; the raw families are kept alongside.  Saturation does not
/// change the generated topology.
struct OverSite {
  CategoryPtr elements;
  CoverageBasis basis;                 // saturated
  std::vector<Presieve> raw_families;  // one per (element object, family)
  FinFunctor proj_to_fragment;
  std::optional<FinFunctor> proj_to_base;  // general form only
  // set-based form: element object -> (formula id, encoded tuple)
  std::map<std::string, std::pair<std::string, std::string>> components;
  // general form: comma object -> (site object, formula id, section)
  std::map<std::string, std::array<std::string, 3>> general_components;
  bool general = false;
  std::vector<std::string> notes;
};

/// The set-based antecedent basis: at (a, φ), one family per fragment basis
/// family {θ_i} at φ, containing every antecedent of a along every θ_i.
OverSite antecedent_basis(const FragmentSite& frag);

/// A fragment interpreted in presheaves on a finite site: the input for the
/// general (§-over-an-arbitrary-base) form of the construction.
struct PresheafModel {
  CategoryPtr frag_cat;
  CoverageBasis frag_basis;
  CategoryPtr site;
  CoverageBasis site_basis;
  std::map<std::string, FinPresheaf> interp;  // frag object -> presheaf
  // frag arrow -> site object -> section map
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>>
      actions;
};

ValidationReport validate_presheaf_model(const PresheafModel& pm);

/// Interprets a compiled fragment over the one-object one-arrow site; the
/// general antecedent construction on this input must agree with the
/// set-based one.
PresheafModel presheaf_model_over_terminal(const FragmentSite& frag);

/// The general antecedent basis on the comma category (i_C ↓ F_M): families
/// over a fragment family {θ_i} whose components are jointly locally
/// surjective onto the fiber presheaves ⟦θ_i⟧⁻¹(a).  Minimal qualifying
/// families are emitted (plus the maximal one), then saturated.
OverSite antecedent_basis_general(const PresheafModel& pm);

/// The indexed category c ↦ (c ↓ F_M) of basic generalized elements, as a
/// strict finite indexed category over the model's site.
IndexedCategory elements_stack(const PresheafModel& pm);

/// True iff the image of every basis family is jointly surjective.
bool check_continuous(const SetValuedFunctor& G, const CoverageBasis& basis);

struct PointCandidate {
  SetValuedFunctor functor;  // on the elements category
  bool cartesian = false;
  bool continuous = false;
};

/// The functor of fibers of a homomorphism g : N → M.  Both flags are
/// verified and must come out true; a failure signals a violated
/// precondition upstream and throws.  Callers checking many homs can pass
/// the precomputed pullback squares of the elements category.
PointCandidate hom_to_point(const FragmentSite& frag, const FinStructure& N,
                            const ModelHom& g, const OverSite& over,
                            const std::vector<PullbackSquare>* squares = nullptr);

struct HomFromPoint {
  FinStructure model;  // N
  ModelHom hom;        // g : N -> M
};

/// Reads a model and a homomorphism into M off a cartesian continuous
/// functor: carriers are disjoint unions of fibers over the per-sort ⊤
/// formulas; tables are induced by the functor's action.
HomFromPoint point_to_hom(const FragmentSite& frag, const PointCandidate& G,
                          const OverSite& over);

/// All cartesian continuous set-valued functors on the over-site whose
/// fibers at the per-sort ⊤ objects have size ≤ k, one representative per
/// isomorphism class, in canonical order.  Supports fragments whose
/// formulas are ⊤-contexts and whose arrows are variable shuffles.
std::vector<PointCandidate> enumerate_points(const FragmentSite& frag,
                                             const OverSite& over,
                                             std::size_t k);

/// Independent brute-force enumeration of homomorphisms into the fragment
/// model: all pairs (N, g : N → M) with N a model of the fragment theory and
/// every fiber of g of size ≤ k, one representative per isomorphism class
/// over M, in canonical order.  This enumerates structures and maps
/// directly; it shares nothing with the functor enumeration it is checked
/// against.
std::vector<HomFromPoint> enumerate_homs(const FragmentSite& frag,
                                         std::size_t k);

/// Isomorphism of homomorphisms over M: a structure isomorphism h with
/// g2 ∘ h = g1.
bool homs_isomorphic_over(const FinStructure& M, const HomFromPoint& a,
                          const HomFromPoint& b);

struct SiteMorphism {
  FinFunctor functor;  // between the two elements categories
  bool comorphism = false;        // the direction the paper asserts
  bool cover_preserving = false;  // reported, not asserted
  std::vector<std::string> notes;
};

/// The functor (a, φ) ↦ (f(a), φ) between element categories induced by a
/// homomorphism f : M1 → M2 of fragment models (same syntactic fragment).
SiteMorphism hom_to_site_morphism(const FragmentSite& frag1,
                                  const FragmentSite& frag2, const ModelHom& f);

/// For each fragment arrow, whether the image factorization through the
/// existential image formula is realized in the fragment ("ok"), or skipped
/// for lack of the formula.
std::vector<std::string> image_factorization_report(const FragmentSite& frag,
                                                    const OverSite& over);

}  // namespace finsite
