#include "finsite/document.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace finsite {

namespace {

struct Token {
  std::string text;
  std::size_t line, col;
};

std::vector<Token> tokenize_line(const std::string& s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), line, i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r' &&
           s[j] != ',' && s[j] != '(' && s[j] != ')' && s[j] != '#')
      ++j;
    out.push_back({s.substr(i, j - i), line, i + 1});
    i = j;
  }
  return out;
}

class TokenStream {
 public:
  TokenStream(std::vector<Token> toks, std::size_t line)
      : toks_(std::move(toks)), line_(line) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const {
    if (done()) throw ParseError(line_, 0, "unexpected end of line");
    return toks_[pos_];
  }
  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }
  std::string expect_id() {
    Token t = next();
    if (t.text == "(" || t.text == ")")
      throw ParseError(t.line, t.col, "expected an identifier");
    return t.text;
  }
  void expect(const std::string& lit) {
    Token t = next();
    if (t.text != lit)
      throw ParseError(t.line, t.col, "expected '" + lit + "', found '" +
                                          t.text + "'");
  }
  void expect_end() {
    if (!done()) {
      Token t = peek();
      throw ParseError(t.line, t.col, "trailing tokens: '" + t.text + "'");
    }
  }
  std::size_t line() const { return line_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

// context: ( x:s y:t ... )  — commas are whitespace
std::vector<std::pair<std::string, std::string>> parse_context(
    TokenStream& ts, const Signature& sig) {
  ts.expect("(");
  std::vector<std::pair<std::string, std::string>> out;
  while (ts.peek().text != ")") {
    Token t = ts.next();
    auto colon = t.text.find(':');
    if (colon == std::string::npos)
      throw ParseError(t.line, t.col, "expected name:sort, found '" + t.text + "'");
    std::string name = t.text.substr(0, colon);
    std::string sort = t.text.substr(colon + 1);
    if (!sig.has_sort(sort))
      throw ParseError(t.line, t.col, "unknown sort '" + sort + "'");
    out.push_back({name, sort});
  }
  ts.expect(")");
  return out;
}

struct Scope {
  // name -> (index, sort); later bindings shadow earlier ones
  std::vector<std::pair<std::string, std::string>> vars;
  std::optional<int> lookup(const std::string& name) const {
    for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i)
      if (vars[static_cast<std::size_t>(i)].first == name) return i;
    return std::nullopt;
  }
};

Term parse_term(TokenStream& ts, const Signature& sig, const Scope& scope) {
  Token t = ts.next();
  if (t.text == "(") {
    Token f = ts.next();
    if (!sig.functions.count(f.text))
      throw ParseError(f.line, f.col, "unknown function '" + f.text + "'");
    std::vector<Term> args;
    while (ts.peek().text != ")") args.push_back(parse_term(ts, sig, scope));
    ts.expect(")");
    if (args.size() != sig.functions.at(f.text).args.size())
      throw ParseError(f.line, f.col, "arity mismatch for '" + f.text + "'");
    return Term::apply(f.text, std::move(args));
  }
  if (auto idx = scope.lookup(t.text)) return Term::variable(*idx);
  auto fit = sig.functions.find(t.text);
  if (fit != sig.functions.end() && fit->second.args.empty())
    return Term::apply(t.text);
  throw ParseError(t.line, t.col, "unknown variable or constant '" + t.text + "'");
}

Formula parse_formula(TokenStream& ts, const Signature& sig, Scope& scope) {
  Token t = ts.peek();
  if (t.text == "top") {
    ts.next();
    return Formula::top();
  }
  if (t.text == "bot") {
    ts.next();
    return Formula::bot();
  }
  if (t.text != "(")
    throw ParseError(t.line, t.col, "expected a formula, found '" + t.text + "'");
  ts.next();
  Token head = ts.next();
  if (head.text == "eq") {
    Term a = parse_term(ts, sig, scope);
    Term b = parse_term(ts, sig, scope);
    ts.expect(")");
    return Formula::eq(std::move(a), std::move(b));
  }
  if (head.text == "rel") {
    Token r = ts.next();
    if (!sig.relations.count(r.text))
      throw ParseError(r.line, r.col, "unknown relation '" + r.text + "'");
    std::vector<Term> args;
    while (ts.peek().text != ")") args.push_back(parse_term(ts, sig, scope));
    ts.expect(")");
    if (args.size() != sig.relations.at(r.text).size())
      throw ParseError(r.line, r.col, "arity mismatch for '" + r.text + "'");
    return Formula::rel_atom(r.text, std::move(args));
  }
  if (head.text == "and" || head.text == "or") {
    std::vector<Formula> subs;
    while (ts.peek().text != ")") subs.push_back(parse_formula(ts, sig, scope));
    ts.expect(")");
    return head.text == "and" ? Formula::conj(std::move(subs))
                              : Formula::disj(std::move(subs));
  }
  if (head.text == "exists") {
    auto bindings = parse_context(ts, sig);
    std::vector<std::string> sorts;
    for (const auto& [n, s] : bindings) {
      scope.vars.push_back({n, s});
      sorts.push_back(s);
    }
    Formula body = parse_formula(ts, sig, scope);
    for (std::size_t i = 0; i < bindings.size(); ++i) scope.vars.pop_back();
    ts.expect(")");
    return Formula::exists(std::move(sorts), std::move(body));
  }
  throw ParseError(head.line, head.col,
                   "unknown formula head '" + head.text + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// workspace parsing

WorkspaceDocument parse_workspace(const std::string& text) {
  WorkspaceDocument doc;

  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) lines.push_back(l);
  }

  // section state
  std::string kind, name;
  CategoryBuilder catb;
  FinFunctor fct;
  Diagram dia;
  SetValuedFunctor setf;
  FinPresheaf psh;
  WorkspaceDocument::NamedMap pmap;
  CoverageBasis basis;
  std::string basis_cat;
  Theory theory;
  FinStructure structure;
  std::string structure_theory;
  ModelHom hom;
  std::pair<std::string, std::string> hom_ends;
  WorkspaceDocument::FragmentDecl fragd;
  IndexedCategory indexed;
  WorkspaceDocument::GeneralDecl gen;
  WorkspaceDocument::Task task;

  auto reset = [&]() {
    catb = CategoryBuilder{};
    fct = FinFunctor{};
    dia = Diagram{};
    setf = SetValuedFunctor{};
    psh = FinPresheaf{};
    pmap = WorkspaceDocument::NamedMap{};
    basis = CoverageBasis{};
    basis_cat.clear();
    theory = Theory{};
    structure = FinStructure{};
    structure_theory.clear();
    hom = ModelHom{};
    hom_ends = {};
    fragd = WorkspaceDocument::FragmentDecl{};
    indexed = IndexedCategory{};
    gen = WorkspaceDocument::GeneralDecl{};
    task = WorkspaceDocument::Task{};
  };

  auto need_category = [&](const std::string& n, std::size_t line) {
    auto it = doc.categories.find(n);
    if (it == doc.categories.end())
      throw ParseError(line, 0, "unresolved category '" + n + "'");
    return it->second;
  };
  auto need_theory = [&](const std::string& n,
                         std::size_t line) -> const Theory& {
    auto it = doc.theories.find(n);
    if (it == doc.theories.end())
      throw ParseError(line, 0, "unresolved theory '" + n + "'");
    return it->second;
  };
  auto need_structure = [&](const std::string& n,
                            std::size_t line) -> const FinStructure& {
    auto it = doc.structures.find(n);
    if (it == doc.structures.end())
      throw ParseError(line, 0, "unresolved structure '" + n + "'");
    return it->second;
  };

  auto finish = [&](std::size_t line) {
    if (kind.empty()) throw ParseError(line, 1, "'end' outside a section");
    if (kind == "category") {
      doc.categories[name] = catb.build_shared();
    } else if (kind == "functor") {
      doc.functors[name] = fct;
    } else if (kind == "diagram") {
      doc.diagrams[name] = dia;
    } else if (kind == "setfunctor") {
      doc.setfunctors[name] = setf;
    } else if (kind == "presheaf") {
      doc.presheaves[name] = psh;
    } else if (kind == "psheafmap") {
      doc.presheaf_maps[name] = pmap;
    } else if (kind == "basis") {
      doc.bases[name] = basis;
      doc.basis_on[name] = basis_cat;
    } else if (kind == "theory") {
      theory.name = name;
      doc.theories[name] = theory;
    } else if (kind == "structure") {
      structure.name = name;
      doc.structures[name] = structure;
      doc.structure_of[name] = structure_theory;
    } else if (kind == "hom") {
      doc.homs[name] = hom;
      doc.hom_endpoints[name] = hom_ends;
    } else if (kind == "fragment") {
      doc.fragments[name] = fragd;
    } else if (kind == "indexed") {
      doc.indexed[name] = indexed;
    } else if (kind == "general") {
      doc.generals[name] = gen;
    } else if (kind == "task") {
      doc.tasks[name] = task;
    }
    kind.clear();
    name.clear();
    reset();
  };

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    TokenStream ts(tokenize_line(lines[ln], ln + 1), ln + 1);
    if (ts.done()) continue;
    std::string word = ts.expect_id();

    if (kind.empty()) {
      if (word == "format-version") {
        doc.format_version = std::stoi(ts.expect_id());
        ts.expect_end();
        continue;
      }
      static const std::set<std::string> section_kinds = {
          "category", "functor",   "diagram",  "setfunctor", "presheaf",
          "psheafmap", "basis",    "theory",   "structure",  "hom",
          "fragment", "indexed",   "general",  "task"};
      if (!section_kinds.count(word))
        throw ParseError(ln + 1, 1, "unknown section kind '" + word + "'");
      kind = word;
      name = ts.expect_id();
      ts.expect_end();
      continue;
    }

    if (word == "end") {
      ts.expect_end();
      finish(ln + 1);
      continue;
    }

    if (kind == "category") {
      if (word == "object") {
        catb.object(ts.expect_id());
      } else if (word == "arrow") {
        std::string id = ts.expect_id();
        std::string d = ts.expect_id();
        std::string c = ts.expect_id();
        catb.arrow(id, d, c);
      } else if (word == "identity") {
        std::string o = ts.expect_id();
        catb.identity(o, ts.expect_id());
      } else if (word == "compose") {
        std::string g = ts.expect_id();
        std::string f = ts.expect_id();
        catb.compose(g, f, ts.expect_id());
      } else if (word == "auto-identities") {
        catb.auto_identities();
      } else {
        throw ParseError(ln + 1, 1, "unknown category directive '" + word + "'");
      }
    } else if (kind == "functor" || kind == "diagram") {
      FinFunctor& f = kind == "functor" ? fct : dia.functor;
      if (word == "source" || word == "shape") {
        f.source = need_category(ts.expect_id(), ln + 1);
      } else if (word == "target" || word == "in") {
        f.target = need_category(ts.expect_id(), ln + 1);
      } else if (word == "object") {
        std::string a = ts.expect_id();
        f.on_objects[a] = ts.expect_id();
      } else if (word == "arrow") {
        std::string a = ts.expect_id();
        f.on_arrows[a] = ts.expect_id();
      } else {
        throw ParseError(ln + 1, 1, "unknown functor directive '" + word + "'");
      }
    } else if (kind == "setfunctor") {
      if (word == "source") {
        setf.source = need_category(ts.expect_id(), ln + 1);
      } else if (word == "carrier") {
        std::string o = ts.expect_id();
        auto& c = setf.carriers[o];
        while (!ts.done()) c.push_back(ts.expect_id());
        std::sort(c.begin(), c.end());
      } else if (word == "action") {
        std::string a = ts.expect_id();
        std::string x = ts.expect_id();
        setf.actions[a][x] = ts.expect_id();
      } else {
        throw ParseError(ln + 1, 1, "unknown setfunctor directive '" + word + "'");
      }
    } else if (kind == "presheaf") {
      if (word == "site") {
        psh.site = need_category(ts.expect_id(), ln + 1);
      } else if (word == "carrier") {
        std::string o = ts.expect_id();
        auto& c = psh.carriers[o];
        while (!ts.done()) c.push_back(ts.expect_id());
        std::sort(c.begin(), c.end());
      } else if (word == "action") {
        std::string a = ts.expect_id();
        std::string x = ts.expect_id();
        psh.restrictions[a][x] = ts.expect_id();
      } else {
        throw ParseError(ln + 1, 1, "unknown presheaf directive '" + word + "'");
      }
    } else if (kind == "psheafmap") {
      if (word == "from") {
        pmap.from = ts.expect_id();
        ts.expect("to");
        pmap.to = ts.expect_id();
      } else if (word == "at") {
        std::string o = ts.expect_id();
        std::string x = ts.expect_id();
        pmap.components[o][x] = ts.expect_id();
      } else {
        throw ParseError(ln + 1, 1, "unknown psheafmap directive '" + word + "'");
      }
    } else if (kind == "basis") {
      if (word == "on") {
        basis_cat = ts.expect_id();
        need_category(basis_cat, ln + 1);
      } else if (word == "family") {
        Presieve p;
        p.codomain = ts.expect_id();
        while (!ts.done()) p.arrows.insert(ts.expect_id());
        basis.add(p);
      } else {
        throw ParseError(ln + 1, 1, "unknown basis directive '" + word + "'");
      }
    } else if (kind == "theory") {
      if (word == "sort") {
        theory.signature.sorts.push_back(ts.expect_id());
        std::sort(theory.signature.sorts.begin(), theory.signature.sorts.end());
      } else if (word == "func") {
        std::string f = ts.expect_id();
        std::vector<std::string> sorts;
        while (!ts.done()) sorts.push_back(ts.expect_id());
        if (sorts.empty())
          throw ParseError(ln + 1, 1, "func needs at least a result sort");
        FuncDecl d;
        d.result = sorts.back();
        sorts.pop_back();
        d.args = sorts;
        theory.signature.functions[f] = d;
      } else if (word == "const") {
        std::string c = ts.expect_id();
        theory.signature.functions[c] = FuncDecl{{}, ts.expect_id()};
      } else if (word == "rel") {
        std::string r = ts.expect_id();
        std::vector<std::string> sorts;
        while (!ts.done()) sorts.push_back(ts.expect_id());
        theory.signature.relations[r] = sorts;
      } else if (word == "axiom") {
        auto ctx = parse_context(ts, theory.signature);
        Scope scope;
        Sequent s;
        for (const auto& [n, so] : ctx) {
          scope.vars.push_back({n, so});
          s.context.push_back(so);
        }
        s.premise = normalize(parse_formula(ts, theory.signature, scope));
        s.conclusion = normalize(parse_formula(ts, theory.signature, scope));
        ts.expect_end();
        theory.axioms.push_back(s);
      } else {
        throw ParseError(ln + 1, 1, "unknown theory directive '" + word + "'");
      }
    } else if (kind == "structure") {
      if (word == "of") {
        structure_theory = ts.expect_id();
        structure.signature = need_theory(structure_theory, ln + 1).signature;
      } else if (word == "carrier") {
        std::string s = ts.expect_id();
        auto& c = structure.carriers[s];
        while (!ts.done()) {
          std::string e = ts.expect_id();
          if (e.find('!') != std::string::npos)
            throw ParseError(ln + 1, 1,
                             "carrier element '" + e + "' contains reserved '!'");
          c.push_back(e);
        }
        std::sort(c.begin(), c.end());
      } else if (word == "func" || word == "const") {
        std::string f = ts.expect_id();
        std::vector<std::string> elems;
        while (!ts.done()) elems.push_back(ts.expect_id());
        if (elems.empty())
          throw ParseError(ln + 1, 1, "func table entry needs a result");
        std::string res = elems.back();
        elems.pop_back();
        structure.functions[f][elems] = res;
      } else if (word == "rel") {
        std::string r = ts.expect_id();
        Tuple t;
        while (!ts.done()) t.push_back(ts.expect_id());
        structure.relations[r].insert(t);
      } else {
        throw ParseError(ln + 1, 1, "unknown structure directive '" + word + "'");
      }
    } else if (kind == "hom") {
      if (word == "from") {
        hom_ends.first = ts.expect_id();
        ts.expect("to");
        hom_ends.second = ts.expect_id();
        need_structure(hom_ends.first, ln + 1);
        need_structure(hom_ends.second, ln + 1);
      } else if (word == "at") {
        std::string s = ts.expect_id();
        std::string x = ts.expect_id();
        hom.maps[s][x] = ts.expect_id();
      } else {
        throw ParseError(ln + 1, 1, "unknown hom directive '" + word + "'");
      }
    } else if (kind == "fragment") {
      if (word == "theory") {
        fragd.theory = ts.expect_id();
        need_theory(fragd.theory, ln + 1);
      } else if (word == "structure") {
        fragd.structure = ts.expect_id();
        need_structure(fragd.structure, ln + 1);
      } else if (word == "formula") {
        if (fragd.theory.empty())
          throw ParseError(ln + 1, 1, "formula before theory");
        const Signature& sig = need_theory(fragd.theory, ln + 1).signature;
        FragmentFormula ff;
        ff.id = ts.expect_id();
        auto ctx = parse_context(ts, sig);
        Scope scope;
        for (const auto& [n, so] : ctx) {
          scope.vars.push_back({n, so});
          ff.fic.context.push_back(so);
        }
        ff.fic.body = normalize(parse_formula(ts, sig, scope));
        ts.expect_end();
        fragd.formulas.push_back(ff);
      } else if (word == "arrow") {
        if (fragd.theory.empty())
          throw ParseError(ln + 1, 1, "arrow before theory");
        const Signature& sig = need_theory(fragd.theory, ln + 1).signature;
        FragmentArrow fa;
        fa.id = ts.expect_id();
        fa.dom = ts.expect_id();
        fa.cod = ts.expect_id();
        auto ctx = parse_context(ts, sig);
        Scope scope;
        for (const auto& [n, so] : ctx) scope.vars.push_back({n, so});
        fa.theta = normalize(parse_formula(ts, sig, scope));
        ts.expect_end();
        // the declared context must match dom.ctx ++ cod.ctx; verified at
        // compile time against the formulas
        std::vector<std::string> declared;
        for (const auto& [n, so] : ctx) declared.push_back(so);
        auto domf = std::find_if(
            fragd.formulas.begin(), fragd.formulas.end(),
            [&](const FragmentFormula& f) { return f.id == fa.dom; });
        auto codf = std::find_if(
            fragd.formulas.begin(), fragd.formulas.end(),
            [&](const FragmentFormula& f) { return f.id == fa.cod; });
        if (domf == fragd.formulas.end() || codf == fragd.formulas.end())
          throw ParseError(ln + 1, 1, "arrow references unknown formula");
        std::vector<std::string> joined = domf->fic.context;
        joined.insert(joined.end(), codf->fic.context.begin(),
                      codf->fic.context.end());
        if (declared != joined)
          throw ParseError(ln + 1, 1,
                           "arrow context does not match dom ++ cod contexts");
        fragd.arrows.push_back(fa);
      } else if (word == "cover") {
        FragmentCover fc;
        fc.at = ts.expect_id();
        while (!ts.done()) fc.arrows.push_back(ts.expect_id());
        fragd.covers.push_back(fc);
      } else {
        throw ParseError(ln + 1, 1, "unknown fragment directive '" + word + "'");
      }
    } else if (kind == "indexed") {
      if (word == "base") {
        indexed.base = need_category(ts.expect_id(), ln + 1);
      } else if (word == "fiber") {
        std::string o = ts.expect_id();
        indexed.fibers[o] = need_category(ts.expect_id(), ln + 1);
      } else if (word == "transition") {
        std::string a = ts.expect_id();
        std::string fn = ts.expect_id();
        auto it = doc.functors.find(fn);
        if (it == doc.functors.end())
          throw ParseError(ln + 1, 1, "unresolved functor '" + fn + "'");
        indexed.transitions[a] = it->second;
      } else {
        throw ParseError(ln + 1, 1, "unknown indexed directive '" + word + "'");
      }
    } else if (kind == "general") {
      if (word == "category") {
        gen.category = ts.expect_id();
        need_category(gen.category, ln + 1);
      } else if (word == "basis") {
        gen.basis = ts.expect_id();
      } else if (word == "site") {
        gen.site = ts.expect_id();
        need_category(gen.site, ln + 1);
      } else if (word == "site-basis") {
        gen.site_basis = ts.expect_id();
      } else if (word == "interp") {
        std::string o = ts.expect_id();
        gen.interp[o] = ts.expect_id();
      } else if (word == "action") {
        std::string a = ts.expect_id();
        gen.actions[a] = ts.expect_id();
      } else {
        throw ParseError(ln + 1, 1, "unknown general directive '" + word + "'");
      }
    } else if (kind == "task") {
      if (word == "kind") {
        task.kind = ts.expect_id();
      } else {
        task.params[word] = ts.expect_id();
      }
    } else {
      throw ParseError(ln + 1, 1, "directive outside a known section");
    }
  }
  if (!kind.empty())
    throw ParseError(lines.size(), 1,
                     "unterminated section '" + kind + " " + name + "'");
  return doc;
}

WorkspaceDocument parse_workspace_files(const std::vector<std::string>& paths) {
  std::string all;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open input file '" + p + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    all += ss.str();
    all += "\n";
  }
  return parse_workspace(all);
}

FragmentSite WorkspaceDocument::compile(const std::string& fragment_name) const {
  auto it = fragments.find(fragment_name);
  if (it == fragments.end())
    throw Error("unresolved fragment '" + fragment_name + "'");
  const FragmentDecl& d = it->second;
  auto th = theories.find(d.theory);
  auto st = structures.find(d.structure);
  if (th == theories.end()) throw Error("unresolved theory '" + d.theory + "'");
  if (st == structures.end())
    throw Error("unresolved structure '" + d.structure + "'");
  FragmentSite frag =
      compile_fragment(th->second, st->second, d.formulas, d.arrows, d.covers);
  frag.name = fragment_name;
  return frag;
}

PresheafModel WorkspaceDocument::presheaf_model(
    const std::string& general_name) const {
  auto it = generals.find(general_name);
  if (it == generals.end())
    throw Error("unresolved general model '" + general_name + "'");
  const GeneralDecl& d = it->second;
  PresheafModel pm;
  pm.frag_cat = categories.at(d.category);
  pm.site = categories.at(d.site);
  auto bit = bases.find(d.basis);
  if (bit == bases.end()) throw Error("unresolved basis '" + d.basis + "'");
  pm.frag_basis = bit->second;
  auto sbit = bases.find(d.site_basis);
  if (sbit == bases.end())
    throw Error("unresolved basis '" + d.site_basis + "'");
  pm.site_basis = sbit->second;
  for (const auto& [o, pname] : d.interp) {
    auto pit = presheaves.find(pname);
    if (pit == presheaves.end())
      throw Error("unresolved presheaf '" + pname + "'");
    pm.interp[o] = pit->second;
  }
  for (const auto& [a, mname] : d.actions) {
    auto mit = presheaf_maps.find(mname);
    if (mit == presheaf_maps.end())
      throw Error("unresolved psheafmap '" + mname + "'");
    pm.actions[a] = mit->second.components;
  }
  return pm;
}

// ---------------------------------------------------------------------------
// printers

std::string print_term(const Term& t, const std::vector<std::string>& names) {
  if (t.is_var()) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= names.size())
      throw Error("print_term: variable out of scope");
    return names[t.var];
  }
  if (t.args.empty()) return t.func;
  std::string s = "(" + t.func;
  for (const auto& a : t.args) s += " " + print_term(a, names);
  return s + ")";
}

std::string print_formula(const Formula& f, std::vector<std::string> names,
                          const std::vector<std::string>& name_sorts) {
  switch (f.kind) {
    case Conn::Top:
      return "top";
    case Conn::Bot:
      return "bot";
    case Conn::Eq:
      return "(eq " + print_term(f.terms[0], names) + " " +
             print_term(f.terms[1], names) + ")";
    case Conn::Rel: {
      std::string s = "(rel " + f.rel;
      for (const auto& t : f.terms) s += " " + print_term(t, names);
      return s + ")";
    }
    case Conn::And:
    case Conn::Or: {
      std::string s = f.kind == Conn::And ? "(and" : "(or";
      for (const auto& g : f.subs) s += " " + print_formula(g, names, name_sorts);
      return s + ")";
    }
    case Conn::Exists: {
      std::string s = "(exists (";
      std::vector<std::string> ext = names;
      for (std::size_t i = 0; i < f.bound_sorts.size(); ++i) {
        std::string n = "v" + std::to_string(ext.size());
        if (i) s += " ";
        s += n + ":" + f.bound_sorts[i];
        ext.push_back(n);
      }
      s += ") " + print_formula(f.subs[0], ext, name_sorts) + ")";
      return s;
    }
  }
  return "top";
}

std::string theory_to_document(const std::string& name, const Theory& T) {
  std::ostringstream os;
  os << "theory " << name << "\n";
  for (const auto& s : T.signature.sorts) os << "  sort " << s << "\n";
  for (const auto& [f, d] : T.signature.functions) {
    os << "  func " << f;
    for (const auto& a : d.args) os << " " << a;
    os << " " << d.result << "\n";
  }
  for (const auto& [r, d] : T.signature.relations) {
    os << "  rel " << r;
    for (const auto& a : d) os << " " << a;
    os << "\n";
  }
  for (const auto& ax : T.axioms) {
    std::vector<std::string> names;
    os << "  axiom (";
    for (std::size_t i = 0; i < ax.context.size(); ++i) {
      std::string n = "v" + std::to_string(i);
      if (i) os << " ";
      os << n << ":" << ax.context[i];
      names.push_back(n);
    }
    os << ") " << print_formula(ax.premise, names, ax.context) << " "
       << print_formula(ax.conclusion, names, ax.context) << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string structure_to_document(const std::string& name,
                                  const FinStructure& M,
                                  const std::string& theory_name) {
  std::ostringstream os;
  os << "structure " << name << "\n";
  os << "  of " << theory_name << "\n";
  for (const auto& s : M.signature.sorts) {
    os << "  carrier " << s;
    for (const auto& e : M.carrier(s)) os << " " << e;
    os << "\n";
  }
  for (const auto& [f, table] : M.functions)
    for (const auto& [args, res] : table) {
      os << "  func " << f;
      for (const auto& a : args) os << " " << a;
      os << " " << res << "\n";
    }
  for (const auto& [r, tuples] : M.relations)
    for (const auto& t : tuples) {
      os << "  rel " << r;
      for (const auto& e : t) os << " " << e;
      os << "\n";
    }
  os << "end\n";
  return os.str();
}

}  // namespace finsite
