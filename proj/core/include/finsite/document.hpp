#pragma once

#include "finsite/grothendieck.hpp"
#include "finsite/logic.hpp"
#include "finsite/overtopos.hpp"
#include "finsite/sheaves.hpp"

namespace finsite {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  std::size_t line, col;
};

/// A parsed workspace: named sections with resolved cross-references.
/// Sections must be defined before they are referenced.
struct WorkspaceDocument {
  int format_version = 1;

  std::map<std::string, CategoryPtr> categories;
  std::map<std::string, FinFunctor> functors;
  std::map<std::string, Diagram> diagrams;
  std::map<std::string, SetValuedFunctor> setfunctors;
  std::map<std::string, FinPresheaf> presheaves;
  struct NamedMap {
    std::string from, to;
    std::map<std::string, std::map<std::string, std::string>> components;
  };
  std::map<std::string, NamedMap> presheaf_maps;
  std::map<std::string, CoverageBasis> bases;
  std::map<std::string, std::string> basis_on;  // basis name -> category name
  std::map<std::string, Theory> theories;
  std::map<std::string, FinStructure> structures;
  std::map<std::string, std::string> structure_of;  // structure -> theory
  std::map<std::string, ModelHom> homs;
  std::map<std::string, std::pair<std::string, std::string>> hom_endpoints;

  struct FragmentDecl {
    std::string theory;
    std::string structure;
    std::vector<FragmentFormula> formulas;
    std::vector<FragmentArrow> arrows;
    std::vector<FragmentCover> covers;
  };
  std::map<std::string, FragmentDecl> fragments;

  std::map<std::string, IndexedCategory> indexed;

  struct GeneralDecl {
    std::string category, basis, site, site_basis;
    std::map<std::string, std::string> interp;   // frag object -> presheaf
    std::map<std::string, std::string> actions;  // frag arrow -> psheafmap
  };
  std::map<std::string, GeneralDecl> generals;

  struct Task {
    std::string kind;
    std::map<std::string, std::string> params;
  };
  std::map<std::string, Task> tasks;

  FragmentSite compile(const std::string& fragment_name) const;
  PresheafModel presheaf_model(const std::string& general_name) const;
};

WorkspaceDocument parse_workspace(const std::string& text);
WorkspaceDocument parse_workspace_files(const std::vector<std::string>& paths);

/// Printers for the document syntax; deterministic.
std::string print_term(const Term& t, const std::vector<std::string>& names);
std::string print_formula(const Formula& f, std::vector<std::string> names,
                          const std::vector<std::string>& name_sorts);
std::string theory_to_document(const std::string& name, const Theory& T);
std::string structure_to_document(const std::string& name,
                                  const FinStructure& M,
                                  const std::string& theory_name);

}  // namespace finsite
