#pragma once

#include "finsite/coverage.hpp"
#include "finsite/fincat.hpp"

namespace finsite {

/// A finite presheaf on a finite category: carriers per object and a
/// restriction map per arrow, contravariantly (f : a → b restricts sections
/// at b to sections at a).
struct FinPresheaf {
  CategoryPtr site;
  std::map<std::string, std::vector<std::string>> carriers;
  // arrow f : a -> b  gives  restrict[f] : carrier(b) -> carrier(a)
  std::map<std::string, std::map<std::string, std::string>> restrictions;

  const std::vector<std::string>& carrier(const std::string& obj) const;
  const std::string& restrict_along(const std::string& arrow,
                                    const std::string& section) const;
};

ValidationReport validate_presheaf(const FinPresheaf& P);

/// A natural map of presheaves on a shared site.
struct PresheafMap {
  const FinPresheaf* from = nullptr;
  const FinPresheaf* to = nullptr;
  std::map<std::string, std::map<std::string, std::string>> components;
};

ValidationReport validate_presheaf_map(const PresheafMap& alpha);

/// The representable presheaf Hom(-, obj).
FinPresheaf representable_presheaf(const CategoryPtr& site,
                                   const std::string& obj);

/// Sheaf condition: every matching family for (the sieve closure of) every
/// basis presieve has exactly one amalgamation.
bool is_sheaf(const FinPresheaf& P, const CoverageBasis& B);

/// Detail variant naming the first failing (object, presieve) pair.
struct SheafReport {
  bool sheaf = true;
  std::string detail;
};
SheafReport sheaf_report(const FinPresheaf& P, const CoverageBasis& B);

/// Local surjectivity of a presheaf map: every section of the codomain is,
/// after restriction along some basis family, in the image.  The finite
/// surrogate for epimorphisms of sheaves.
bool is_locally_surjective(const PresheafMap& alpha, const CoverageBasis& B);

struct CartesianReport {
  bool applicable = true;  // source has a terminal object (pullbacks are
                           // quantified over those that exist)
  bool preserves = false;
  std::string detail;
};

/// Finite-limit preservation: F preserves a terminal object and every
/// pullback that exists in the source, each verified by the exhaustive
/// universal-property check in the target.
CartesianReport is_cartesian_functor(const FinFunctor& F);

/// Same check for a set-valued functor, with limits in Set computed
/// directly: the terminal must go to a singleton and every pullback square
/// to a fiber product.
CartesianReport is_cartesian_functor(const SetValuedFunctor& G);

/// Variant over a precomputed square list (see all_pullback_squares), for
/// callers that check many functors on one category.
CartesianReport is_cartesian_functor(const SetValuedFunctor& G,
                                     const std::vector<PullbackSquare>& squares);

}  // namespace finsite
