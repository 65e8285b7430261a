#pragma once

#include "finsite/coverage.hpp"
#include "finsite/fincat.hpp"

namespace finsite {

/// A strict finite indexed category: contravariant, on-the-nose functorial
/// assignment of finite categories to the objects of a base.
struct IndexedCategory {
  CategoryPtr base;
  std::map<std::string, CategoryPtr> fibers;      // base object -> fiber
  std::map<std::string, FinFunctor> transitions;  // u : c -> c'  gives
                                                  // fiber(c') -> fiber(c)

  const FinCategory& fiber(const std::string& obj) const;
  const FinFunctor& transition(const std::string& arrow) const;
};

/// Strictness and typing: transition(id) is the identity functor and
/// transition(g∘f) = transition(f) ∘ transition(g), as tables.
ValidationReport validate_indexed(const IndexedCategory& I);

struct GrothendieckTotal {
  IndexedCategory indexed;
  CategoryPtr total;
  FinFunctor projection;  // to the base
  // total object id -> (base object, fiber object)
  std::map<std::string, std::pair<std::string, std::string>> components;
  // (base arrow u, fiber object a over cod(u)) -> cartesian arrow id
  std::map<std::pair<std::string, std::string>, std::string> lifts;

  std::string object_id(const std::string& base_obj,
                        const std::string& fiber_obj) const;
  const std::string& lift(const std::string& base_arrow,
                          const std::string& fiber_obj) const;
};

/// Objects (c, a ∈ fiber(c)); arrows (u : c → c', m : a → transition(u)(a')).
/// The lift table records, for each (u, a'), the cartesian arrow (u, id).
GrothendieckTotal grothendieck_construction(const IndexedCategory& I);

/// Checks that every recorded cartesian lift satisfies the cartesian
/// universal property in the total category (exhaustive factorization).
ValidationReport validate_cartesian_lifts(const GrothendieckTotal& G);

/// For every base arrow u and fiber object a over its codomain, the square
/// of terminal sections against the cartesian lift must be a pullback in the
/// total category.  Requires every fiber to have a terminal object.
bool check_terminal_lift_pullback(const GrothendieckTotal& G);

/// Limit of a diagram in the total category, computed fiberwise: base limit
/// of the projected diagram, then the limit of the transported fiber diagram
/// over it.  Verified universal by the exhaustive cone check.
std::optional<ConeWitness> limit_in_total(const GrothendieckTotal& G,
                                          const Diagram& diagram);

/// One descent datum over a covering family: an object per covering arrow
/// and transition isomorphisms over the pairwise pullbacks satisfying the
/// split cocycle identities.
struct DescentDatum {
  std::vector<std::string> family;             // covering arrows, sorted
  std::map<std::string, std::string> objects;  // arrow -> fiber object
  // (i,j) keyed by arrow ids -> iso arrow in fiber(pullback of i,j)
  std::map<std::pair<std::string, std::string>, std::string> transitions;
};

struct DescentReport {
  std::size_t data_checked = 0;
  std::vector<std::string> failures;  // one line per datum without (unique)
                                      // amalgamation
  bool ok() const { return failures.empty(); }
};

/// Enumerates every descent datum over the family (fibers are finite) and
/// checks existence and essential uniqueness of an amalgamating object.
DescentReport check_descent(const GrothendieckTotal& G, const Presieve& family);

}  // namespace finsite
