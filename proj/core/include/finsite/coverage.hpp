#pragma once

#include "finsite/fincat.hpp"

namespace finsite {

/// A finite family of arrows with common codomain.  The codomain is stored
/// explicitly so that the empty presieve at an object is representable.
struct Presieve {
  std::string codomain;
  std::set<std::string> arrows;

  friend auto operator<=>(const Presieve&, const Presieve&) = default;
};

/// A precomposition-closed set of arrows with common codomain.
struct Sieve {
  std::string codomain;
  std::set<std::string> arrows;
};

/// Per-object collections of presieves, claimed to satisfy the basis
/// conditions (a) identity, (b) refinement along every arrow,
/// (c) closure under multicomposition.
struct CoverageBasis {
  std::map<std::string, std::vector<Presieve>> families;

  void add(Presieve p);
  const std::vector<Presieve>& at(const std::string& obj) const;
  bool contains(const Presieve& p) const;
  std::size_t family_count() const;
};

struct BasisReport {
  std::vector<Violation> violations;  // law is "basis-a" / "basis-b" / "basis-c"
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Smallest precomposition-closed superset of p.
Sieve sieve_closure(const FinCategory& cat, const Presieve& p);

/// Exhaustive check of the basis conditions.  Violations are data.
BasisReport check_basis(const FinCategory& cat, const CoverageBasis& B);

/// True iff s contains some presieve of B at its codomain.
bool covers(const FinCategory& cat, const CoverageBasis& B, const Sieve& s);

/// True iff the sieve generated by p is B-covering.
bool covers_presieve(const FinCategory& cat, const CoverageBasis& B,
                     const Presieve& p);

/// The multicomposite { f ∘ g : f ∈ outer, g ∈ inners(f) }.  Every arrow of
/// the outer presieve must have an inner presieve on its domain.
Presieve multicompose(const FinCategory& cat, const Presieve& outer,
                      const std::map<std::string, Presieve>& inners);

/// Closes the given families under multicomposition (all mixed per-arrow
/// inner choices), to a fixed point.  Throws when the closure exceeds
/// max_families, which only happens far beyond desk scale.
CoverageBasis multicomposition_closure(const FinCategory& cat,
                                       CoverageBasis B,
                                       std::size_t max_families = 100000);

/// Extensional comparison of the generated topologies: each basis presieve
/// of A must be B-covering and vice versa.
bool same_topology(const FinCategory& cat, const CoverageBasis& A,
                   const CoverageBasis& B);

/// All sieves on the given object (every precomposition-closed arrow set).
/// Exponential; meant for small cross-check instances only.
std::vector<Sieve> all_sieves(const FinCategory& cat, const std::string& obj);

// ---------------------------------------------------------------------------
// Grothendieck-construction topologies (see grothendieck.hpp for the totals)

struct GrothendieckTotal;  // defined in grothendieck.hpp

/// Basis on the total category whose families at (c,a) are the cartesian
/// lifts of the base families at c.
CoverageBasis giraud_basis(const GrothendieckTotal& total,
                           const CoverageBasis& base_basis);

/// Basis for the lifted topology on the comma category (1_D ↓ fstar):
/// multicomposites of cartesian lifts of B_C-families (via pullbacks in D)
/// with fiberwise B_D-covers, closed under multicomposition.
struct LiftedSite {
  CategoryPtr comma;           // the comma category (1_D ↓ fstar)
  FinFunctor proj_to_target;   // to D
  FinFunctor proj_to_source;   // to C
  CoverageBasis basis;
  // comma object id -> (object of D, object of C, arrow of D)
  std::map<std::string, std::array<std::string, 3>> components;
  std::vector<std::string> notes;
};

LiftedSite lifted_basis(const FinFunctor& fstar, const CoverageBasis& B_C,
                        const CoverageBasis& B_D);

/// Families on objects of the full subcategory whose sieve closure in the
/// ambient category is B-covering, together with a density report.
struct InducedBasis {
  CoverageBasis basis;
  bool dense = false;          // every ambient object B-covered from sub
  std::vector<std::string> notes;
};

InducedBasis induce_on_subcategory(const FinCategory& cat,
                                   const CoverageBasis& B,
                                   const std::vector<std::string>& sub_objects);

/// The basis with exactly the identity singleton family at each object.
CoverageBasis trivial_basis(const FinCategory& cat);

}  // namespace finsite
