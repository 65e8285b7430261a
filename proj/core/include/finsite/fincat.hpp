#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsite {

/// Error thrown on violated preconditions (bad references, type mismatches,
/// missing data).  Mathematical *failures* are never exceptions; they are
/// returned as report data.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Arrow {
  std::string id;
  std::string dom;
  std::string cod;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A finite category given by explicit object/arrow tables and a total
/// composition table.  Identifiers are opaque strings; all containers are
/// kept sorted so that iteration order is canonical.
struct FinCategory {
  std::vector<std::string> objects;                // sorted, unique
  std::vector<Arrow> arrows;                       // sorted by id, unique
  std::map<std::string, std::string> identities;   // object -> arrow id
  // (g, f) -> g∘f, defined exactly when cod(f) = dom(g)
  std::map<std::pair<std::string, std::string>, std::string> composition;

  bool has_object(const std::string& o) const;
  bool has_arrow(const std::string& a) const;
  const Arrow& arrow(const std::string& id) const;
  const std::string& identity(const std::string& obj) const;

  /// g∘f; throws if the pair is not in the table.
  const std::string& compose(const std::string& g, const std::string& f) const;
  std::optional<std::string> try_compose(const std::string& g,
                                         const std::string& f) const;

  /// All arrow ids with the given domain/codomain, in id order.
  std::vector<std::string> hom(const std::string& dom,
                               const std::string& cod) const;
  std::vector<std::string> arrows_into(const std::string& cod) const;
  std::vector<std::string> arrows_out_of(const std::string& dom) const;

  /// Canonicalizes (sorts) the object/arrow tables.  Call after building by
  /// hand; the document parser and all constructions do this for you.
  void normalize();
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

struct Violation {
  std::string law;     // e.g. "identity-left", "associativity", "typing"
  std::string detail;  // minimal witnessing instance
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks typing of the tables, totality of composition on composable pairs,
/// identity laws and associativity.  Violations are data, not errors.
ValidationReport validate_category(const FinCategory& cat);

struct FinFunctor {
  CategoryPtr source;
  CategoryPtr target;
  std::map<std::string, std::string> on_objects;
  std::map<std::string, std::string> on_arrows;

  const std::string& obj(const std::string& o) const;
  const std::string& arr(const std::string& a) const;
};

/// Functoriality check: total, well-typed, preserves identities and the
/// composition table.
ValidationReport validate_functor(const FinFunctor& F);

FinFunctor identity_functor(const CategoryPtr& cat);
FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F);

/// A functor to finite sets: one finite carrier per object, one function
/// table per arrow.
struct SetValuedFunctor {
  CategoryPtr source;
  std::map<std::string, std::vector<std::string>> carriers;  // sorted elems
  // arrow -> (element of carrier(dom) -> element of carrier(cod))
  std::map<std::string, std::map<std::string, std::string>> actions;

  const std::vector<std::string>& carrier(const std::string& obj) const;
  const std::string& apply(const std::string& arrow,
                           const std::string& elem) const;
};

ValidationReport validate_set_functor(const SetValuedFunctor& F);

/// A diagram is a functor from a finite shape category; the shape's own
/// commutativity is the caller's business, but the mapping is validated.
struct Diagram {
  FinFunctor functor;  // shape = functor.source, ambient = functor.target
};

struct ConeWitness {
  std::string apex;
  std::map<std::string, std::string> legs;  // shape object -> arrow in cat
  std::size_t cones_checked = 0;            // universal-property instances
  std::vector<std::string> notes;
};

struct CommaResult {
  CategoryPtr category;
  FinFunctor proj_left;   // to source of F
  FinFunctor proj_right;  // to source of G
  // comma object id -> (a, b, alpha)
  std::map<std::string, std::array<std::string, 3>> components;
};

/// The comma category (F ↓ G) for functors F, G with a common target.
/// Objects are triples (a, b, α : F a → G b); arrows are commuting pairs.
CommaResult comma_category(const FinFunctor& F, const FinFunctor& G);

struct ElementsResult {
  CategoryPtr category;
  FinFunctor projection;  // forgets the element
  // element object id -> (object of source, element)
  std::map<std::string, std::pair<std::string, std::string>> components;
  std::string object_id(const std::string& obj, const std::string& elem) const;
  std::string arrow_id(const std::string& arrow, const std::string& elem) const;
};

/// The category of elements ∫M of a set-valued functor.  Objects are pairs
/// (c, x ∈ M(c)); an arrow (c,x) → (c',x') is an arrow u : c → c' of the
/// source with M(u)(x) = x'.
ElementsResult category_of_elements(const SetValuedFunctor& M);

/// Limit of a finite diagram, verified by an exhaustive universal-property
/// check over every cone in the category.  Returns the first qualifying cone
/// in canonical order, or nullopt when no object qualifies.
std::optional<ConeWitness> compute_limit(const FinCategory& cat,
                                         const Diagram& diagram);

/// Convenience wrappers used all over: terminal object and pullbacks as
/// limits over the empty and cospan shapes.
std::optional<ConeWitness> find_terminal(const FinCategory& cat);
struct PullbackWitness {
  std::string vertex;
  std::string to_left;   // vertex -> dom(left)
  std::string to_right;  // vertex -> dom(right)
};
/// Pullback of the cospan dom(left) -> cod <- dom(right).
std::optional<PullbackWitness> find_pullback(const FinCategory& cat,
                                             const std::string& left,
                                             const std::string& right);
/// Checks that (vertex, to_left, to_right) is a pullback of the cospan
/// (left, right) by the exhaustive cone criterion.
bool is_pullback(const FinCategory& cat, const std::string& left,
                 const std::string& right, const std::string& vertex,
                 const std::string& to_left, const std::string& to_right);

Diagram empty_diagram(const CategoryPtr& cat);
Diagram cospan_diagram(const CategoryPtr& cat, const std::string& left,
                       const std::string& right);

struct PullbackSquare {
  std::string left, right;      // the cospan
  std::string vertex;
  std::string to_left, to_right;
};

/// One realized pullback per cospan that has one, in canonical order.
std::vector<PullbackSquare> all_pullback_squares(const FinCategory& cat);

/// All set-valued functors with carriers of size ≤ k, one representative per
/// natural-isomorphism class, in a deterministic canonical order.
std::vector<SetValuedFunctor> enumerate_set_valued_functors(
    const CategoryPtr& cat, std::size_t k);

/// Natural isomorphism search (exhaustive over bijection families).
bool naturally_isomorphic(const SetValuedFunctor& F, const SetValuedFunctor& G);

/// Cofilteredness of a finite category: nonempty, every pair of objects has
/// a common "upper bound" cone, every parallel pair is equalized by some
/// arrow.  Used as the flatness cross-check oracle.
bool is_cofiltered(const FinCategory& cat);

// -- small builders used by constructions, tests and the CLI ----------------

class CategoryBuilder {
 public:
  CategoryBuilder& object(const std::string& id);
  CategoryBuilder& arrow(const std::string& id, const std::string& dom,
                         const std::string& cod);
  CategoryBuilder& identity(const std::string& obj, const std::string& arrow);
  CategoryBuilder& compose(const std::string& g, const std::string& f,
                           const std::string& gf);
  /// Adds identity arrows named "id:<obj>" for objects lacking one and fills
  /// in the composition entries forced by the identity laws.
  CategoryBuilder& auto_identities();
  FinCategory build() const;
  CategoryPtr build_shared() const;

 private:
  FinCategory cat_;
};

}  // namespace finsite
