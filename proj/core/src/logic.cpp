#include "finsite/logic.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace finsite {

bool Signature::has_sort(const std::string& s) const {
  return std::find(sorts.begin(), sorts.end(), s) != sorts.end();
}

Term Term::variable(int index) {
  Term t;
  t.var = index;
  return t;
}

Term Term::apply(std::string f, std::vector<Term> a) {
  Term t;
  t.func = std::move(f);
  t.args = std::move(a);
  return t;
}

std::string Term::key() const {
  if (is_var()) return "v" + std::to_string(var);
  std::string s = "(" + func;
  for (const auto& a : args) s += " " + a.key();
  return s + ")";
}

Formula Formula::top() { return Formula{}; }

Formula Formula::bot() {
  Formula f;
  f.kind = Conn::Bot;
  return f;
}

Formula Formula::eq(Term a, Term b) {
  Formula f;
  f.kind = Conn::Eq;
  f.terms = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::rel_atom(std::string r, std::vector<Term> ts) {
  Formula f;
  f.kind = Conn::Rel;
  f.rel = std::move(r);
  f.terms = std::move(ts);
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Conn::And;
  f.subs = std::move(fs);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Conn::Or;
  f.subs = std::move(fs);
  return f;
}

Formula Formula::exists(std::vector<std::string> sorts, Formula body) {
  Formula f;
  f.kind = Conn::Exists;
  f.bound_sorts = std::move(sorts);
  f.subs = {std::move(body)};
  return f;
}

std::string Formula::key() const {
  switch (kind) {
    case Conn::Top:
      return "T";
    case Conn::Bot:
      return "F";
    case Conn::Eq:
      return "(= " + terms[0].key() + " " + terms[1].key() + ")";
    case Conn::Rel: {
      std::string s = "(rel " + rel;
      for (const auto& t : terms) s += " " + t.key();
      return s + ")";
    }
    case Conn::And:
    case Conn::Or: {
      std::string s = kind == Conn::And ? "(and" : "(or";
      for (const auto& f : subs) s += " " + f.key();
      return s + ")";
    }
    case Conn::Exists: {
      std::string s = "(exists (";
      for (const auto& b : bound_sorts) s += b + " ";
      return s + ") " + subs[0].key() + ")";
    }
  }
  return "?";
}

Formula normalize(const Formula& f) {
  switch (f.kind) {
    case Conn::Top:
    case Conn::Bot:
    case Conn::Eq:
    case Conn::Rel:
      return f;
    case Conn::And:
    case Conn::Or: {
      std::vector<Formula> flat;
      for (const auto& s : f.subs) {
        Formula n = normalize(s);
        if (n.kind == f.kind) {
          for (auto& x : n.subs) flat.push_back(std::move(x));
        } else {
          flat.push_back(std::move(n));
        }
      }
      std::sort(flat.begin(), flat.end(),
                [](const Formula& a, const Formula& b) { return a.key() < b.key(); });
      flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
      if (flat.empty()) return f.kind == Conn::And ? Formula::top() : Formula::bot();
      if (flat.size() == 1) return flat[0];
      Formula out;
      out.kind = f.kind;
      out.subs = std::move(flat);
      return out;
    }
    case Conn::Exists: {
      Formula out = f;
      out.subs = {normalize(f.subs[0])};
      return out;
    }
  }
  return f;
}

std::string FormulaInContext::key() const {
  std::string s = "[";
  for (const auto& c : context) s += c + " ";
  return s + "] " + body.key();
}

// ---------------------------------------------------------------------------
// typechecking

std::string typecheck_term(const Signature& sig,
                           const std::vector<std::string>& context,
                           const Term& t) {
  if (t.is_var()) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= context.size())
      throw Error("variable index " + std::to_string(t.var) +
                  " outside context of size " + std::to_string(context.size()));
    return context[t.var];
  }
  auto it = sig.functions.find(t.func);
  if (it == sig.functions.end())
    throw Error("unknown function symbol '" + t.func + "'");
  if (it->second.args.size() != t.args.size())
    throw Error("function '" + t.func + "' applied to " +
                std::to_string(t.args.size()) + " arguments, expects " +
                std::to_string(it->second.args.size()));
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    std::string got = typecheck_term(sig, context, t.args[i]);
    if (got != it->second.args[i])
      throw Error("argument " + std::to_string(i) + " of '" + t.func +
                  "' has sort '" + got + "', expects '" + it->second.args[i] +
                  "'");
  }
  return it->second.result;
}

void typecheck_formula(const Signature& sig,
                       const std::vector<std::string>& context,
                       const Formula& f) {
  switch (f.kind) {
    case Conn::Top:
    case Conn::Bot:
      return;
    case Conn::Eq: {
      std::string a = typecheck_term(sig, context, f.terms[0]);
      std::string b = typecheck_term(sig, context, f.terms[1]);
      if (a != b)
        throw Error("equality between sorts '" + a + "' and '" + b + "'");
      return;
    }
    case Conn::Rel: {
      auto it = sig.relations.find(f.rel);
      if (it == sig.relations.end())
        throw Error("unknown relation symbol '" + f.rel + "'");
      if (it->second.size() != f.terms.size())
        throw Error("relation '" + f.rel + "' has arity " +
                    std::to_string(it->second.size()));
      for (std::size_t i = 0; i < f.terms.size(); ++i)
        if (typecheck_term(sig, context, f.terms[i]) != it->second[i])
          throw Error("argument " + std::to_string(i) + " of relation '" +
                      f.rel + "' has the wrong sort");
      return;
    }
    case Conn::And:
    case Conn::Or:
      for (const auto& s : f.subs) typecheck_formula(sig, context, s);
      return;
    case Conn::Exists: {
      std::vector<std::string> ext = context;
      for (const auto& b : f.bound_sorts) {
        if (!sig.has_sort(b)) throw Error("unknown sort '" + b + "'");
        ext.push_back(b);
      }
      typecheck_formula(sig, ext, f.subs[0]);
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// structures and evaluation

const std::vector<std::string>& FinStructure::carrier(
    const std::string& sort) const {
  static const std::vector<std::string> empty;
  auto it = carriers.find(sort);
  return it == carriers.end() ? empty : it->second;
}

ValidationReport validate_structure(const FinStructure& M) {
  ValidationReport rep;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.violations.push_back({law, detail});
  };
  const Signature& sig = M.signature;
  for (const auto& [s, elems] : M.carriers)
    if (!sig.has_sort(s)) fail("typing", "carrier for unknown sort '" + s + "'");

  for (const auto& [f, decl] : sig.functions) {
    auto it = M.functions.find(f);
    // enumerate the argument product
    std::vector<Tuple> args{{}};
    for (const auto& s : decl.args) {
      std::vector<Tuple> next;
      for (const auto& t : args)
        for (const auto& e : M.carrier(s)) {
          Tuple u = t;
          u.push_back(e);
          next.push_back(u);
        }
      args = std::move(next);
    }
    for (const auto& t : args) {
      if (it == M.functions.end() || !it->second.count(t)) {
        fail("structure-total", "function '" + f + "' undefined on a tuple");
        continue;
      }
      const std::string& r = it->second.at(t);
      const auto& cr = M.carrier(decl.result);
      if (std::find(cr.begin(), cr.end(), r) == cr.end())
        fail("typing", "function '" + f + "' lands outside its result sort");
    }
    if (it != M.functions.end() && it->second.size() != args.size())
      fail("typing", "function '" + f + "' has stray entries");
  }
  for (const auto& [r, tuples] : M.relations) {
    auto it = sig.relations.find(r);
    if (it == sig.relations.end()) {
      fail("typing", "unknown relation '" + r + "'");
      continue;
    }
    for (const auto& t : tuples) {
      if (t.size() != it->second.size()) {
        fail("typing", "relation '" + r + "' tuple of wrong arity");
        continue;
      }
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& cr = M.carrier(it->second[i]);
        if (std::find(cr.begin(), cr.end(), t[i]) == cr.end())
          fail("typing", "relation '" + r + "' tuple outside carriers");
      }
    }
  }
  return rep;
}

const std::string& ModelHom::apply(const std::string& sort,
                                   const std::string& elem) const {
  auto it = maps.find(sort);
  if (it == maps.end()) throw Error("hom has no component at sort '" + sort + "'");
  auto jt = it->second.find(elem);
  if (jt == it->second.end())
    throw Error("hom component at '" + sort + "' undefined on '" + elem + "'");
  return jt->second;
}

Tuple ModelHom::apply_tuple(const std::vector<std::string>& sorts,
                            const Tuple& t) const {
  Tuple out;
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(apply(sorts[i], t[i]));
  return out;
}

namespace {

std::string eval_term(const FinStructure& M, const Tuple& env, const Term& t) {
  if (t.is_var()) return env[t.var];
  Tuple args;
  for (const auto& a : t.args) args.push_back(eval_term(M, env, a));
  auto it = M.functions.find(t.func);
  if (it == M.functions.end() || !it->second.count(args))
    throw Error("function '" + t.func + "' undefined on a tuple");
  return it->second.at(args);
}

bool sat(const FinStructure& M, const std::vector<std::string>& sorts,
         Tuple& env, const Formula& f) {
  switch (f.kind) {
    case Conn::Top:
      return true;
    case Conn::Bot:
      return false;
    case Conn::Eq:
      return eval_term(M, env, f.terms[0]) == eval_term(M, env, f.terms[1]);
    case Conn::Rel: {
      Tuple args;
      for (const auto& t : f.terms) args.push_back(eval_term(M, env, t));
      auto it = M.relations.find(f.rel);
      return it != M.relations.end() && it->second.count(args) > 0;
    }
    case Conn::And:
      for (const auto& s : f.subs)
        if (!sat(M, sorts, env, s)) return false;
      return true;
    case Conn::Or:
      for (const auto& s : f.subs)
        if (sat(M, sorts, env, s)) return true;
      return false;
    case Conn::Exists: {
      const std::size_t base = env.size();
      std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == f.bound_sorts.size()) return sat(M, sorts, env, f.subs[0]);
        for (const auto& e : M.carrier(f.bound_sorts[i])) {
          env.push_back(e);
          bool ok = rec(i + 1);
          env.pop_back();
          if (ok) return true;
        }
        return false;
      };
      (void)base;
      return rec(0);
    }
  }
  return false;
}

void product_tuples(const FinStructure& M, const std::vector<std::string>& sorts,
                    const std::function<void(Tuple&)>& visit) {
  Tuple env;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == sorts.size()) {
      visit(env);
      return;
    }
    for (const auto& e : M.carrier(sorts[i])) {
      env.push_back(e);
      rec(i + 1);
      env.pop_back();
    }
  };
  rec(0);
}

}  // namespace

std::vector<Tuple> eval_formula(const FinStructure& M,
                                const FormulaInContext& phi) {
  typecheck_formula(M.signature, phi.context, phi.body);
  std::vector<Tuple> out;
  product_tuples(M, phi.context, [&](Tuple& env) {
    if (sat(M, phi.context, env, phi.body)) out.push_back(env);
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool check_sequent(const FinStructure& M, const Sequent& s) {
  typecheck_formula(M.signature, s.context, s.premise);
  typecheck_formula(M.signature, s.context, s.conclusion);
  bool ok = true;
  product_tuples(M, s.context, [&](Tuple& env) {
    if (!ok) return;
    if (sat(M, s.context, env, s.premise) && !sat(M, s.context, env, s.conclusion))
      ok = false;
  });
  return ok;
}

bool check_model(const FinStructure& M, const Theory& T) {
  for (const auto& ax : T.axioms)
    if (!check_sequent(M, ax)) return false;
  return true;
}

bool check_functional(const FinStructure& M, const Formula& theta,
                      const FormulaInContext& dom,
                      const FormulaInContext& cod) {
  std::vector<std::string> joined = dom.context;
  joined.insert(joined.end(), cod.context.begin(), cod.context.end());
  typecheck_formula(M.signature, joined, theta);

  std::vector<Tuple> graph =
      eval_formula(M, FormulaInContext{joined, theta});
  std::vector<Tuple> domset = eval_formula(M, dom);
  std::vector<Tuple> codset = eval_formula(M, cod);
  std::set<Tuple> doms(domset.begin(), domset.end());
  std::set<Tuple> cods(codset.begin(), codset.end());

  std::map<Tuple, std::set<Tuple>> images;
  for (const auto& pair : graph) {
    Tuple t(pair.begin(), pair.begin() + dom.context.size());
    Tuple u(pair.begin() + dom.context.size(), pair.end());
    if (!doms.count(t) || !cods.count(u)) return false;
    images[t].insert(u);
  }
  for (const auto& t : domset) {
    auto it = images.find(t);
    if (it == images.end() || it->second.size() != 1) return false;
  }
  return true;
}

std::map<Tuple, Tuple> functional_graph(const FinStructure& M,
                                        const Formula& theta,
                                        const FormulaInContext& dom,
                                        const FormulaInContext& cod) {
  if (!check_functional(M, theta, dom, cod))
    throw Error("formula is not functional from " + dom.key() + " to " +
                cod.key());
  std::vector<std::string> joined = dom.context;
  joined.insert(joined.end(), cod.context.begin(), cod.context.end());
  std::map<Tuple, Tuple> out;
  for (const auto& pair : eval_formula(M, FormulaInContext{joined, theta})) {
    Tuple t(pair.begin(), pair.begin() + dom.context.size());
    Tuple u(pair.begin() + dom.context.size(), pair.end());
    out[t] = u;
  }
  return out;
}

namespace {

void require_same_signature(const Signature& a, const Signature& b) {
  if (a.sorts != b.sorts) throw Error("signature mismatch: sorts differ");
  if (a.relations != b.relations)
    throw Error("signature mismatch: relations differ");
  auto fa = a.functions, fb = b.functions;
  if (fa.size() != fb.size()) throw Error("signature mismatch: functions differ");
  for (const auto& [n, d] : fa) {
    auto it = fb.find(n);
    if (it == fb.end() || it->second.args != d.args ||
        it->second.result != d.result)
      throw Error("signature mismatch: functions differ");
  }
}

}  // namespace

bool check_hom(const FinStructure& N, const FinStructure& M,
               const ModelHom& h) {
  require_same_signature(N.signature, M.signature);
  const Signature& sig = N.signature;
  // totality and typing
  for (const auto& s : sig.sorts)
    for (const auto& x : N.carrier(s)) {
      const std::string& y = h.apply(s, x);
      const auto& cm = M.carrier(s);
      if (std::find(cm.begin(), cm.end(), y) == cm.end()) return false;
    }
  for (const auto& [f, decl] : sig.functions) {
    bool ok = true;
    product_tuples(N, decl.args, [&](Tuple& t) {
      if (!ok) return;
      auto it = N.functions.find(f);
      if (it == N.functions.end() || !it->second.count(t)) {
        ok = false;
        return;
      }
      const std::string lhs = h.apply(decl.result, it->second.at(t));
      Tuple mt = h.apply_tuple(decl.args, t);
      auto jt = M.functions.find(f);
      if (jt == M.functions.end() || !jt->second.count(mt)) {
        ok = false;
        return;
      }
      if (lhs != jt->second.at(mt)) ok = false;
    });
    if (!ok) return false;
  }
  for (const auto& [r, tuples] : N.relations) {
    const auto& decl = sig.relations.at(r);
    for (const auto& t : tuples) {
      Tuple mt = h.apply_tuple(decl, t);
      auto it = M.relations.find(r);
      if (it == M.relations.end() || !it->second.count(mt)) return false;
    }
  }
  return true;
}

std::vector<std::string> hom_naturality_report(
    const FinStructure& N, const FinStructure& M, const ModelHom& h,
    const std::vector<FormulaInContext>& formulas) {
  std::vector<std::string> out;
  for (const auto& fic : formulas) {
    bool ok = true;
    for (const auto& t : eval_formula(N, fic)) {
      Tuple mt = h.apply_tuple(fic.context, t);
      Tuple env = mt;
      if (!sat(M, fic.context, env, fic.body)) {
        ok = false;
        break;
      }
    }
    if (!ok)
      out.push_back("homomorphism does not restrict to " + fic.key());
  }
  return out;
}

// ---------------------------------------------------------------------------
// fragments

// Tuples are encoded as a single token: "~" for the empty tuple, components
// joined by '!' otherwise.  Element names may not contain '!'.
std::string encode_tuple(const Tuple& t) {
  if (t.empty()) return "~";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += "!";
    s += t[i];
  }
  return s;
}

Tuple decode_tuple(const std::string& s) {
  Tuple out;
  if (s == "~") return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t bang = s.find('!', pos);
    if (bang == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, bang - pos));
    pos = bang + 1;
  }
  return out;
}

const FragmentFormula& FragmentSite::formula(const std::string& id) const {
  for (const auto& f : formulas)
    if (f.id == id) return f;
  throw Error("fragment has no formula '" + id + "'");
}

const FragmentArrow& FragmentSite::arrow_data(const std::string& id) const {
  for (const auto& a : arrows)
    if (a.id == id) return a;
  throw Error("fragment has no arrow '" + id + "'");
}

std::vector<Tuple> FragmentSite::formula_elements(const std::string& id) const {
  return eval_formula(model, formula(id).fic);
}

namespace {

Formula identity_theta(const FormulaInContext& fic) {
  // x⃗ ⧺ y⃗ with y_i = x_i and φ(x⃗)
  std::vector<Formula> parts;
  parts.push_back(fic.body);
  const int n = static_cast<int>(fic.context.size());
  for (int i = 0; i < n; ++i)
    parts.push_back(Formula::eq(Term::variable(n + i), Term::variable(i)));
  return normalize(Formula::conj(std::move(parts)));
}

}  // namespace

FragmentSite compile_fragment(const Theory& T, const FinStructure& M,
                              const std::vector<FragmentFormula>& formulas,
                              const std::vector<FragmentArrow>& arrows,
                              const std::vector<FragmentCover>& covers) {
  FragmentSite frag;
  frag.theory = T;
  frag.model = M;

  {
    ValidationReport r = validate_structure(M);
    if (!r.ok())
      throw Error("compile_fragment: structure invalid: " + r.summary());
    require_same_signature(T.signature, M.signature);
    if (!check_model(M, T))
      throw Error("compile_fragment: the structure is not a model of the theory");
  }

  // formulas: unique ids, typechecked, normalized
  std::set<std::string> fids;
  for (const auto& f : formulas) {
    if (!fids.insert(f.id).second)
      throw Error("compile_fragment: duplicate formula id '" + f.id + "'");
    typecheck_formula(T.signature, f.fic.context, f.fic.body);
    FragmentFormula g = f;
    g.fic.body = normalize(f.fic.body);
    frag.formulas.push_back(g);
  }
  std::sort(frag.formulas.begin(), frag.formulas.end(),
            [](const FragmentFormula& a, const FragmentFormula& b) {
              return a.id < b.id;
            });

  // the terminal formula {[].⊤} must be present
  frag.terminal_formula.clear();
  for (const auto& f : frag.formulas)
    if (f.fic.context.empty() && f.fic.body == Formula::top())
      frag.terminal_formula = f.id;
  if (frag.terminal_formula.empty())
    throw Error("compile_fragment: the formula {[].top} is missing");

  for (const auto& s : T.signature.sorts)
    for (const auto& f : frag.formulas)
      if (f.fic.context == std::vector<std::string>{s} &&
          f.fic.body == Formula::top() && !frag.sort_top.count(s))
        frag.sort_top[s] = f.id;

  // arrows: typecheck, functionality, graphs; identify by graph
  auto find_formula = [&](const std::string& id) -> const FragmentFormula& {
    for (const auto& f : frag.formulas)
      if (f.id == id) return f;
    throw Error("compile_fragment: arrow references unknown formula '" + id + "'");
  };

  std::vector<FragmentArrow> all = arrows;
  std::set<std::string> aids;
  for (const auto& a : all)
    if (!aids.insert(a.id).second)
      throw Error("compile_fragment: duplicate arrow id '" + a.id + "'");

  std::map<std::string, std::map<Tuple, Tuple>> graphs;
  for (auto& a : all) {
    const FragmentFormula& df = find_formula(a.dom);
    const FragmentFormula& cf = find_formula(a.cod);
    a.theta = normalize(a.theta);
    if (!check_functional(M, a.theta, df.fic, cf.fic))
      throw Error("compile_fragment: arrow '" + a.id +
                  "' is not functional in the model");
    graphs[a.id] = functional_graph(M, a.theta, df.fic, cf.fic);
  }

  // graph identity: two declared arrows with the same graph denote the same
  // arrow of the compiled category
  for (const auto& a : all)
    for (const auto& b : all)
      if (a.id < b.id && a.dom == b.dom && a.cod == b.cod &&
          graphs[a.id] == graphs[b.id])
        throw Error("compile_fragment: arrows '" + a.id + "' and '" + b.id +
                    "' have identical graphs; the compiled category "
                    "identifies them, declare only one");

  // synthesize identities where no declared arrow has the identity graph
  std::map<std::string, std::string> identity_of;  // formula -> arrow id
  std::vector<FragmentArrow> synthesized;
  for (const auto& f : frag.formulas) {
    std::map<Tuple, Tuple> idg;
    for (const auto& t : eval_formula(M, f.fic)) idg[t] = t;
    for (const auto& a : all)
      if (a.dom == f.id && a.cod == f.id && graphs[a.id] == idg)
        identity_of[f.id] = a.id;
    if (!identity_of.count(f.id)) {
      FragmentArrow ida;
      ida.id = "id:" + f.id;
      if (aids.count(ida.id))
        throw Error("compile_fragment: arrow id '" + ida.id + "' is reserved");
      ida.dom = f.id;
      ida.cod = f.id;
      ida.theta = identity_theta(f.fic);
      graphs[ida.id] = idg;
      identity_of[f.id] = ida.id;
      synthesized.push_back(std::move(ida));
    }
  }
  for (auto& a : synthesized) all.push_back(std::move(a));
  std::sort(all.begin(), all.end(),
            [](const FragmentArrow& a, const FragmentArrow& b) {
              return a.id < b.id;
            });
  frag.arrows = all;
  frag.graphs = graphs;

  // closure of arrows under graph composition, and the composition table
  auto cat = std::make_shared<FinCategory>();
  for (const auto& f : frag.formulas) cat->objects.push_back(f.id);
  for (const auto& a : all) cat->arrows.push_back({a.id, a.dom, a.cod});
  cat->normalize();
  for (const auto& [fid, aid] : identity_of) cat->identities[fid] = aid;

  for (const auto& g : all)
    for (const auto& f : all) {
      if (f.cod != g.dom) continue;
      std::map<Tuple, Tuple> comp;
      for (const auto& [t, u] : graphs[f.id]) comp[t] = graphs[g.id].at(u);
      std::string found;
      for (const auto& h : all)
        if (h.dom == f.dom && h.cod == g.cod && graphs[h.id] == comp) {
          found = h.id;
          break;
        }
      if (found.empty())
        throw Error("compile_fragment: closure violation: the composite of '" +
                    g.id + "' after '" + f.id + "' matches no declared arrow");
      cat->composition[{g.id, f.id}] = found;
    }

  {
    ValidationReport r = validate_category(*cat);
    if (!r.ok())
      throw Error("compile_fragment: compiled category invalid: " + r.summary());
  }
  frag.compiled = cat;

  // the interpretation functor
  frag.interp.source = cat;
  for (const auto& f : frag.formulas) {
    std::vector<std::string> enc;
    for (const auto& t : eval_formula(M, f.fic)) enc.push_back(encode_tuple(t));
    std::sort(enc.begin(), enc.end());
    frag.interp.carriers[f.id] = enc;
  }
  for (const auto& a : all) {
    std::map<std::string, std::string> act;
    for (const auto& [t, u] : graphs[a.id]) act[encode_tuple(t)] = encode_tuple(u);
    frag.interp.actions[a.id] = act;
  }
  {
    ValidationReport r = validate_set_functor(frag.interp);
    if (!r.ok())
      throw Error("compile_fragment: interpretation not functorial: " +
                  r.summary());
  }

  // basis: identity families plus the declared covers, each jointly
  // surjective under the interpretation
  frag.basis = trivial_basis(*cat);
  for (const auto& c : covers) {
    const FragmentFormula& at = find_formula(c.at);
    Presieve p;
    p.codomain = c.at;
    std::set<std::string> hit;
    for (const auto& aid : c.arrows) {
      bool known = false;
      for (const auto& a : all)
        if (a.id == aid) {
          known = true;
          if (a.cod != c.at)
            throw Error("compile_fragment: cover arrow '" + aid +
                        "' does not land in '" + c.at + "'");
        }
      if (!known)
        throw Error("compile_fragment: cover references unknown arrow '" + aid + "'");
      p.arrows.insert(aid);
      for (const auto& [t, u] : graphs[aid]) hit.insert(encode_tuple(u));
    }
    if (hit.size() != frag.interp.carriers[c.at].size())
      throw Error("compile_fragment: declared cover at '" + c.at +
                  "' is not jointly surjective");
    (void)at;
    frag.basis.add(p);
  }

  {
    BasisReport r = check_basis(*cat, frag.basis);
    if (!r.ok())
      throw Error("compile_fragment: closure violation: " + r.summary());
  }

  // pullback registry over all cospans; declared covers must have their
  // pullbacks against every incoming arrow
  std::set<std::pair<std::string, std::string>> required;
  for (const auto& c : covers)
    for (const auto& aid : c.arrows)
      for (const auto& g : cat->arrows_into(c.at)) required.insert({aid, g});
  for (const auto& l : cat->arrows)
    for (const auto& r : cat->arrows) {
      if (l.cod != r.cod) continue;
      auto pb = find_pullback(*cat, l.id, r.id);
      if (pb) {
        frag.pullbacks[{l.id, r.id}] = {pb->vertex, pb->to_left, pb->to_right};
      } else if (required.count({l.id, r.id})) {
        throw Error("compile_fragment: closure violation: pullback of cover "
                    "arrow '" + l.id + "' against '" + r.id + "' is missing");
      }
    }

  return frag;
}

// ---------------------------------------------------------------------------
// the explicit axiomatization

TmAxioms emit_tm_axioms(const FragmentSite& frag) {
  TmAxioms tm;
  ElementsResult elems = category_of_elements(frag.interp);
  const FinCategory& E = *elems.category;

  auto pad = [](std::size_t n) {
    std::string s = std::to_string(n);
    while (s.size() < 3) s = "0" + s;
    return s;
  };

  std::size_t si = 0;
  for (const auto& o : E.objects) tm.sort_of[o] = "S" + pad(si++);
  std::size_t fi = 0;
  for (const auto& a : E.arrows) tm.func_of[a.id] = "f" + pad(fi++);

  tm.theory.name = frag.name.empty() ? "tm" : frag.name + ".tm";
  for (const auto& [o, s] : tm.sort_of) tm.theory.signature.sorts.push_back(s);
  std::sort(tm.theory.signature.sorts.begin(), tm.theory.signature.sorts.end());
  for (const auto& a : E.arrows)
    tm.theory.signature.functions[tm.func_of.at(a.id)] =
        FuncDecl{{tm.sort_of.at(a.dom)}, tm.sort_of.at(a.cod)};

  std::vector<Sequent> axioms;

  // terminal axioms: the fiber over the unique element of {[].⊤} is a point
  {
    const std::string tobj =
        elems.object_id(frag.terminal_formula, encode_tuple({}));
    const std::string& S = tm.sort_of.at(tobj);
    axioms.push_back(Sequent{{},
                             Formula::top(),
                             Formula::exists({S}, Formula::top())});
    axioms.push_back(Sequent{{S, S},
                             Formula::top(),
                             Formula::eq(Term::variable(0), Term::variable(1))});
  }

  // pullback axioms: commutativity, joint monicity, surjectivity onto the
  // vertex.  Instances range over the realized pullback registry; cover
  // cospans are always present there after compilation.
  for (const auto& [cospan, entry] : frag.pullbacks) {
    const auto& [l, r] = cospan;
    if (l > r) continue;  // one orientation per cospan; l == r covers kernels
    const auto& gl = frag.graphs.at(l);
    const auto& gr = frag.graphs.at(r);
    const auto& gpl = frag.graphs.at(entry.to_left);
    const auto& gpr = frag.graphs.at(entry.to_right);
    const std::string ldom = frag.arrow_data(l).dom;
    const std::string rdom = frag.arrow_data(r).dom;
    const std::string vobj = entry.vertex;

    for (const auto& v : frag.formula_elements(vobj)) {
      const Tuple a1 = gpl.at(v);
      const Tuple a2 = gpr.at(v);
      const std::string Sv = tm.sort_of.at(elems.object_id(vobj, encode_tuple(v)));
      const std::string f_pl =
          tm.func_of.at(elems.arrow_id(entry.to_left, encode_tuple(v)));
      const std::string f_pr =
          tm.func_of.at(elems.arrow_id(entry.to_right, encode_tuple(v)));
      const std::string f_l = tm.func_of.at(elems.arrow_id(l, encode_tuple(a1)));
      const std::string f_r = tm.func_of.at(elems.arrow_id(r, encode_tuple(a2)));
      // commutativity
      axioms.push_back(Sequent{
          {Sv},
          Formula::top(),
          Formula::eq(
              Term::apply(f_l, {Term::apply(f_pl, {Term::variable(0)})}),
              Term::apply(f_r, {Term::apply(f_pr, {Term::variable(0)})}))});
      // joint monicity
      axioms.push_back(Sequent{
          {Sv, Sv},
          Formula::conj(
              {Formula::eq(Term::apply(f_pl, {Term::variable(0)}),
                           Term::apply(f_pl, {Term::variable(1)})),
               Formula::eq(Term::apply(f_pr, {Term::variable(0)}),
                           Term::apply(f_pr, {Term::variable(1)}))}),
          Formula::eq(Term::variable(0), Term::variable(1))});
    }
    // surjectivity onto the vertex, per compatible pair of elements
    for (const auto& [t1, c1] : gl)
      for (const auto& [t2, c2] : gr) {
        if (c1 != c2) continue;
        // the unique vertex element over (t1, t2)
        std::string venc;
        for (const auto& [v, img] : gpl)
          if (img == t1 && gpr.at(v) == t2) venc = encode_tuple(v);
        if (venc.empty())
          throw Error("emit_tm_axioms: pullback vertex misses a compatible "
                      "pair of elements");
        const std::string S1 = tm.sort_of.at(elems.object_id(ldom, encode_tuple(t1)));
        const std::string S2 = tm.sort_of.at(elems.object_id(rdom, encode_tuple(t2)));
        const std::string Sv = tm.sort_of.at(elems.object_id(vobj, venc));
        const std::string f_l = tm.func_of.at(elems.arrow_id(l, encode_tuple(t1)));
        const std::string f_r = tm.func_of.at(elems.arrow_id(r, encode_tuple(t2)));
        const std::string f_pl = tm.func_of.at(elems.arrow_id(entry.to_left, venc));
        const std::string f_pr = tm.func_of.at(elems.arrow_id(entry.to_right, venc));
        axioms.push_back(Sequent{
            {S1, S2},
            Formula::eq(Term::apply(f_l, {Term::variable(0)}),
                        Term::apply(f_r, {Term::variable(1)})),
            Formula::exists(
                {Sv},
                Formula::conj(
                    {Formula::eq(Term::apply(f_pl, {Term::variable(2)}),
                                 Term::variable(0)),
                     Formula::eq(Term::apply(f_pr, {Term::variable(2)}),
                                 Term::variable(1))}))});
      }
  }

  // cover axioms: every fiber element has an antecedent along the family
  for (const auto& [obj, fams] : frag.basis.families)
    for (const auto& fam : fams)
      for (const auto& a : frag.formula_elements(obj)) {
        const std::string Sy =
            tm.sort_of.at(elems.object_id(obj, encode_tuple(a)));
        std::vector<Formula> disjuncts;
        for (const auto& th : fam.arrows) {
          const std::string thdom = frag.arrow_data(th).dom;
          for (const auto& [b, img] : frag.graphs.at(th)) {
            if (img != a) continue;
            const std::string Sb =
                tm.sort_of.at(elems.object_id(thdom, encode_tuple(b)));
            const std::string f_th =
                tm.func_of.at(elems.arrow_id(th, encode_tuple(b)));
            disjuncts.push_back(Formula::exists(
                {Sb}, Formula::eq(Term::apply(f_th, {Term::variable(1)}),
                                  Term::variable(0))));
          }
        }
        axioms.push_back(Sequent{
            {Sy}, Formula::top(), normalize(Formula::disj(disjuncts))});
      }

  // deterministic order, duplicates removed
  auto seq_key = [](const Sequent& s) {
    std::string k;
    for (const auto& c : s.context) k += c + " ";
    return k + "|" + s.premise.key() + "|" + s.conclusion.key();
  };
  std::sort(axioms.begin(), axioms.end(),
            [&](const Sequent& a, const Sequent& b) {
              return seq_key(a) < seq_key(b);
            });
  axioms.erase(std::unique(axioms.begin(), axioms.end(),
                           [&](const Sequent& a, const Sequent& b) {
                             return seq_key(a) == seq_key(b);
                           }),
               axioms.end());
  tm.theory.axioms = axioms;
  tm.notes.push_back("sorts: " + std::to_string(tm.sort_of.size()));
  tm.notes.push_back("axioms: " + std::to_string(axioms.size()));
  return tm;
}

FinStructure sigma_structure_of_hom(const FragmentSite& frag,
                                    const TmAxioms& tm, const FinStructure& N,
                                    const ModelHom& g) {
  if (!check_model(N, frag.theory))
    throw Error("sigma_structure_of_hom: N is not a model of the theory");
  if (!check_hom(N, frag.model, g))
    throw Error("sigma_structure_of_hom: g is not a homomorphism into M");

  ElementsResult elems = category_of_elements(frag.interp);
  FinStructure S;
  S.name = "S_g";
  S.signature = tm.theory.signature;

  // carriers: fibers of g over the elements of M
  std::map<std::string, std::vector<Tuple>> fibers;  // element object -> tuples
  for (const auto& [eobj, comp] : elems.components) {
    const auto& [fid, enc] = comp;
    const Tuple a = decode_tuple(enc);
    const FormulaInContext& fic = frag.formula(fid).fic;
    std::vector<Tuple> fib;
    for (const auto& t : eval_formula(N, fic))
      if (g.apply_tuple(fic.context, t) == a) fib.push_back(t);
    fibers[eobj] = fib;
    std::vector<std::string> enc_fib;
    for (const auto& t : fib) enc_fib.push_back(encode_tuple(t));
    std::sort(enc_fib.begin(), enc_fib.end());
    S.carriers[tm.sort_of.at(eobj)] = enc_fib;
  }

  // functions: restrictions of the arrow interpretations in N
  for (const auto& ea : elems.category->arrows) {
    auto at = ea.id.rfind('@');
    const std::string th = ea.id.substr(0, at);
    const FragmentArrow& ad = frag.arrow_data(th);
    const FormulaInContext& df = frag.formula(ad.dom).fic;
    const FormulaInContext& cf = frag.formula(ad.cod).fic;
    std::map<Tuple, Tuple> gN;
    try {
      gN = functional_graph(N, ad.theta, df, cf);
    } catch (const Error&) {
      throw Error("sigma_structure_of_hom: arrow '" + th +
                  "' is not functional in N (flag failure)");
    }
    std::map<Tuple, std::string> table;
    const Arrow& arr = elems.category->arrow(ea.id);
    for (const auto& t : fibers.at(arr.dom)) {
      const Tuple u = gN.at(t);
      // u must land in the fiber over the image element
      bool found = false;
      for (const auto& w : fibers.at(arr.cod))
        if (w == u) found = true;
      if (!found)
        throw Error("sigma_structure_of_hom: naturality failure on '" + th +
                    "'");
      table[{encode_tuple(t)}] = encode_tuple(u);
    }
    S.functions[tm.func_of.at(ea.id)] = table;
  }
  return S;
}

}  // namespace finsite
