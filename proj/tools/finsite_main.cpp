#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "finsite/document.hpp"
#include "finsite/grothendieck.hpp"
#include "finsite/overtopos.hpp"

using namespace finsite;

namespace {

struct Options {
  std::vector<std::string> files;
  std::size_t bound = 2;
  std::size_t witness_limit = 20;
  bool strict = false;
  std::string report_path;
};

class Reporter {
 public:
  void ok(const std::string& msg) { add("ok", msg); }
  void fail(const std::string& msg) {
    add("FAIL", msg);
    ++fails_;
  }
  void warn(const std::string& msg) {
    add("warn", msg);
    ++warns_;
  }
  void error(const std::string& msg) {
    add("error", msg);
    ++errors_;
  }
  void note(const std::string& msg) { add("note", msg); }

  int exit_code(bool strict) const {
    if (errors_ > 0) return 2;
    if (fails_ > 0) return 1;
    if (strict && warns_ > 0) return 1;
    return 0;
  }

  void flush(const std::string& command, const Options& opts) const {
    for (const auto& l : lines_) std::cout << l << "\n";
    std::cout << "summary: " << fails_ << " failed, " << warns_
              << " warnings, " << errors_ << " errors\n";
    if (!opts.report_path.empty()) {
      nlohmann::json j;
      j["format-version"] = 1;
      j["command"] = command;
      j["lines"] = lines_;
      j["failed"] = fails_;
      j["warnings"] = warns_;
      j["errors"] = errors_;
      std::ofstream out(opts.report_path);
      out << j.dump(2) << "\n";
    }
  }

 private:
  void add(const std::string& tag, const std::string& msg) {
    lines_.push_back("[" + tag + "] " + msg);
  }
  std::vector<std::string> lines_;
  int fails_ = 0, warns_ = 0, errors_ = 0;
};

template <typename F>
void guarded(Reporter& rep, const std::string& what, F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    rep.error(what + ": " + e.what());
  } catch (const Error& e) {
    rep.error(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

void cmd_validate(const WorkspaceDocument& doc, const Options& opts,
                  Reporter& rep) {
  for (const auto& [name, cat] : doc.categories) {
    ValidationReport r = validate_category(*cat);
    if (r.ok())
      rep.ok("category " + name + ": valid (" +
             std::to_string(cat->objects.size()) + " objects, " +
             std::to_string(cat->arrows.size()) + " arrows)");
    else
      rep.fail("category " + name + ": " + r.summary());
  }
  for (const auto& [name, f] : doc.functors) {
    ValidationReport r = validate_functor(f);
    if (r.ok())
      rep.ok("functor " + name + ": valid");
    else
      rep.fail("functor " + name + ": " + r.summary());
  }
  for (const auto& [name, d] : doc.diagrams) {
    ValidationReport r = validate_functor(d.functor);
    if (r.ok())
      rep.ok("diagram " + name + ": valid");
    else
      rep.fail("diagram " + name + ": " + r.summary());
  }
  for (const auto& [name, f] : doc.setfunctors) {
    ValidationReport r = validate_set_functor(f);
    if (r.ok())
      rep.ok("setfunctor " + name + ": valid");
    else
      rep.fail("setfunctor " + name + ": " + r.summary());
  }
  for (const auto& [name, p] : doc.presheaves) {
    ValidationReport r = validate_presheaf(p);
    if (r.ok())
      rep.ok("presheaf " + name + ": valid");
    else
      rep.fail("presheaf " + name + ": " + r.summary());
  }
  for (const auto& [name, m] : doc.presheaf_maps) {
    guarded(rep, "psheafmap " + name, [&] {
      PresheafMap alpha;
      alpha.from = &doc.presheaves.at(m.from);
      alpha.to = &doc.presheaves.at(m.to);
      alpha.components = m.components;
      ValidationReport r = validate_presheaf_map(alpha);
      if (r.ok())
        rep.ok("psheafmap " + name + ": valid");
      else
        rep.fail("psheafmap " + name + ": " + r.summary());
    });
  }
  for (const auto& [name, b] : doc.bases) {
    guarded(rep, "basis " + name, [&] {
      const auto& cat = doc.categories.at(doc.basis_on.at(name));
      BasisReport r = check_basis(*cat, b);
      if (r.ok())
        rep.ok("basis " + name + ": satisfies (a), (b), (c)");
      else
        rep.fail("basis " + name + ": " + r.summary());
    });
  }
  for (const auto& [name, t] : doc.theories)
    rep.ok("theory " + name + ": " + std::to_string(t.axioms.size()) +
           " axioms");
  for (const auto& [name, s] : doc.structures) {
    guarded(rep, "structure " + name, [&] {
      ValidationReport r = validate_structure(s);
      if (!r.ok()) {
        rep.fail("structure " + name + ": " + r.summary());
        return;
      }
      const std::string& tn = doc.structure_of.at(name);
      if (check_model(s, doc.theories.at(tn)))
        rep.ok("structure " + name + ": models " + tn);
      else
        rep.fail("structure " + name + ": does not model " + tn);
    });
  }
  for (const auto& [name, h] : doc.homs) {
    guarded(rep, "hom " + name, [&] {
      const auto& [fromn, ton] = doc.hom_endpoints.at(name);
      if (check_hom(doc.structures.at(fromn), doc.structures.at(ton), h))
        rep.ok("hom " + name + ": homomorphism " + fromn + " -> " + ton);
      else
        rep.fail("hom " + name + ": not a homomorphism");
    });
  }
  for (const auto& [name, fd] : doc.fragments) {
    guarded(rep, "fragment " + name, [&] {
      try {
        FragmentSite frag = doc.compile(name);
        rep.ok("fragment " + name + ": compiled (" +
               std::to_string(frag.formulas.size()) + " formulas, " +
               std::to_string(frag.arrows.size()) + " arrows, " +
               std::to_string(frag.basis.family_count()) + " families)");
      } catch (const Error& e) {
        rep.fail("fragment " + name + ": " + e.what());
      }
    });
  }
  for (const auto& [name, ic] : doc.indexed) {
    ValidationReport r = validate_indexed(ic);
    if (r.ok())
      rep.ok("indexed " + name + ": strict and functorial");
    else
      rep.fail("indexed " + name + ": " + r.summary());
  }
  for (const auto& [name, g] : doc.generals) {
    guarded(rep, "general " + name, [&] {
      PresheafModel pm = doc.presheaf_model(name);
      ValidationReport r = validate_presheaf_model(pm);
      if (r.ok())
        rep.ok("general " + name + ": valid presheaf model");
      else
        rep.fail("general " + name + ": " + r.summary());
    });
  }
  (void)opts;
}

void cmd_elements(const WorkspaceDocument& doc, const Options& opts,
                  Reporter& rep) {
  for (const auto& [name, fd] : doc.fragments) {
    guarded(rep, "fragment " + name, [&] {
      FragmentSite frag = doc.compile(name);
      ElementsResult e = category_of_elements(frag.interp);
      rep.ok("fragment " + name + ": category of elements has " +
             std::to_string(e.category->objects.size()) + " objects, " +
             std::to_string(e.category->arrows.size()) + " arrows");
      std::size_t shown = 0;
      for (const auto& o : e.category->objects) {
        if (shown++ >= opts.witness_limit) {
          rep.note("... (" +
                   std::to_string(e.category->objects.size() - shown + 1) +
                   " more objects)");
          break;
        }
        rep.note("object " + o);
      }
      ValidationReport r = validate_category(*e.category);
      if (!r.ok()) rep.fail("fragment " + name + ": elements category: " + r.summary());
      ValidationReport pr = validate_functor(e.projection);
      if (!pr.ok()) rep.fail("fragment " + name + ": projection: " + pr.summary());
    });
  }
}

void cmd_antecedent(const WorkspaceDocument& doc, const Options& opts,
                    Reporter& rep) {
  for (const auto& [name, fd] : doc.fragments) {
    guarded(rep, "fragment " + name, [&] {
      FragmentSite frag = doc.compile(name);
      OverSite over = antecedent_basis(frag);
      rep.ok("fragment " + name + ": antecedent basis has " +
             std::to_string(over.raw_families.size()) + " families (" +
             std::to_string(over.basis.family_count()) + " after closure)");
      std::size_t shown = 0;
      for (const auto& p : over.raw_families) {
        if (shown++ >= opts.witness_limit) break;
        std::string s = "family at " + p.codomain + ":";
        for (const auto& a : p.arrows) s += " " + a;
        rep.note(s);
      }
      for (const auto& n : over.notes) rep.warn("fragment " + name + ": " + n);
      BasisReport br = check_basis(*over.elements, over.basis);
      if (br.ok())
        rep.ok("fragment " + name + ": basis conditions (a), (b), (c) hold");
      else
        rep.fail("fragment " + name + ": " + br.summary());
      auto terminal = find_terminal(*over.elements);
      if (terminal)
        rep.ok("fragment " + name + ": elements category has a terminal object");
      else
        rep.fail("fragment " + name + ": elements category lacks a terminal");
      for (const auto& note : image_factorization_report(frag, over)) {
        if (note.rfind("FAIL", 0) == 0)
          rep.fail("fragment " + name + ": image factorization: " + note);
        else if (note.rfind("skipped", 0) == 0)
          rep.warn("fragment " + name + ": image factorization: " + note);
        else
          rep.ok("fragment " + name + ": image factorization: " + note);
      }
    });
  }
}

void cmd_antecedent_general(const WorkspaceDocument& doc, const Options& opts,
                            Reporter& rep) {
  for (const auto& [name, task] : doc.tasks) {
    if (task.kind != "antecedent-general") continue;
    guarded(rep, "task " + name, [&] {
      PresheafModel pm;
      std::optional<FragmentSite> frag;
      if (task.params.count("fragment")) {
        frag = doc.compile(task.params.at("fragment"));
        pm = presheaf_model_over_terminal(*frag);
      } else if (task.params.count("model")) {
        pm = doc.presheaf_model(task.params.at("model"));
      } else {
        throw Error("task needs a 'fragment' or 'model' parameter");
      }
      OverSite over = antecedent_basis_general(pm);
      rep.ok("task " + name + ": comma category has " +
             std::to_string(over.elements->objects.size()) + " objects; " +
             std::to_string(over.raw_families.size()) + " families (" +
             std::to_string(over.basis.family_count()) + " after closure)");
      BasisReport br = check_basis(*over.elements, over.basis);
      if (br.ok())
        rep.ok("task " + name + ": basis conditions (a), (b), (c) hold");
      else
        rep.fail("task " + name + ": " + br.summary());

      if (frag) {
        // over the terminal site the general construction must agree with
        // the set-based one
        OverSite set_over = antecedent_basis(*frag);
        // transport the general basis across the canonical isomorphism
        CoverageBasis transported;
        for (const auto& [obj, fams] : over.basis.families) {
          const auto& comp = over.general_components.at(obj);
          for (const auto& fam : fams) {
            Presieve p;
            p.codomain = comp[1] + "@" + comp[2];
            for (const auto& arr : fam.arrows) {
              // general arrow ids are u@θ@a@a'
              std::size_t first = arr.find('@');
              std::size_t second = arr.find('@', first + 1);
              std::size_t third = arr.find('@', second + 1);
              const std::string theta =
                  arr.substr(first + 1, second - first - 1);
              const std::string a = arr.substr(second + 1, third - second - 1);
              p.arrows.insert(theta + "@" + a);
            }
            transported.add(p);
          }
        }
        if (same_topology(*set_over.elements, transported, set_over.basis))
          rep.ok("task " + name +
                 ": agrees with the set-based antecedent basis");
        else
          rep.fail("task " + name +
                   ": disagrees with the set-based antecedent basis");
      }
    });
  }
  (void)opts;
}

void cmd_lifted(const WorkspaceDocument& doc, const Options& opts,
                Reporter& rep) {
  for (const auto& [name, task] : doc.tasks) {
    if (task.kind != "lifted") continue;
    guarded(rep, "task " + name, [&] {
      const FinFunctor& fstar = doc.functors.at(task.params.at("functor"));
      const CoverageBasis& bc = doc.bases.at(task.params.at("source-basis"));
      const CoverageBasis& bd = doc.bases.at(task.params.at("target-basis"));
      LiftedSite site = lifted_basis(fstar, bc, bd);
      rep.ok("task " + name + ": comma category has " +
             std::to_string(site.comma->objects.size()) + " objects; basis " +
             std::to_string(site.basis.family_count()) + " families");
      BasisReport br = check_basis(*site.comma, site.basis);
      if (br.ok())
        rep.ok("task " + name + ": basis conditions (a), (b), (c) hold");
      else
        rep.fail("task " + name + ": " + br.summary());
    });
  }
  (void)opts;
}

void cmd_giraud(const WorkspaceDocument& doc, const Options& opts,
                Reporter& rep) {
  for (const auto& [name, task] : doc.tasks) {
    if (task.kind != "giraud") continue;
    guarded(rep, "task " + name, [&] {
      const IndexedCategory& ic = doc.indexed.at(task.params.at("indexed"));
      const CoverageBasis& base = doc.bases.at(task.params.at("basis"));
      GrothendieckTotal total = grothendieck_construction(ic);
      rep.ok("task " + name + ": total category has " +
             std::to_string(total.total->objects.size()) + " objects, " +
             std::to_string(total.total->arrows.size()) + " arrows");
      ValidationReport lv = validate_cartesian_lifts(total);
      if (lv.ok())
        rep.ok("task " + name + ": recorded lifts are cartesian");
      else
        rep.fail("task " + name + ": " + lv.summary());
      CoverageBasis gb = giraud_basis(total, base);
      BasisReport br = check_basis(*total.total, gb);
      if (br.ok())
        rep.ok("task " + name + ": Giraud basis satisfies (a), (b), (c) (" +
               std::to_string(gb.family_count()) + " families)");
      else
        rep.fail("task " + name + ": " + br.summary());
    });
  }
  (void)opts;
}

void cmd_tm(const WorkspaceDocument& doc, const Options& opts, Reporter& rep) {
  for (const auto& [name, fd] : doc.fragments) {
    guarded(rep, "fragment " + name, [&] {
      FragmentSite frag = doc.compile(name);
      TmAxioms tm = emit_tm_axioms(frag);
      rep.ok("fragment " + name + ": emitted " +
             std::to_string(tm.theory.axioms.size()) + " axioms over " +
             std::to_string(tm.theory.signature.sorts.size()) + " sorts");
      std::cout << "# language of " << name << ": sorts are elements, "
                << "functions are arrows of the category of elements\n";
      for (const auto& [obj, sort] : tm.sort_of)
        std::cout << "# sort " << sort << " = " << obj << "\n";
      for (const auto& [arr, fn] : tm.func_of)
        std::cout << "# func " << fn << " = " << arr << "\n";
      std::cout << theory_to_document(name + ".tm", tm.theory);

      // the induced structure of every hom into the fragment's model, with
      // the emitted axioms checked in it
      for (const auto& [hname, h] : doc.homs) {
        const auto& [fromn, ton] = doc.hom_endpoints.at(hname);
        if (ton != fd.structure) continue;
        const FinStructure& N = doc.structures.at(fromn);
        FinStructure sg = sigma_structure_of_hom(frag, tm, N, h);
        std::cout << structure_to_document("Sg." + hname, sg, name + ".tm");
        bool all = true;
        for (const auto& ax : tm.theory.axioms)
          if (!check_sequent(sg, ax)) all = false;
        if (all)
          rep.ok("fragment " + name + ": all axioms hold in Sg." + hname);
        else
          rep.fail("fragment " + name + ": an axiom fails in Sg." + hname);
      }
    });
  }
  (void)opts;
}

void cmd_points(const WorkspaceDocument& doc, const Options& opts,
                Reporter& rep) {
  for (const auto& [name, fd] : doc.fragments) {
    guarded(rep, "fragment " + name, [&] {
      FragmentSite frag = doc.compile(name);
      OverSite over = antecedent_basis(frag);
      auto points = enumerate_points(frag, over, opts.bound);
      rep.ok("fragment " + name + ": " + std::to_string(points.size()) +
             " points with fibers <= " + std::to_string(opts.bound));
      std::size_t shown = 0;
      for (const auto& p : points) {
        if (shown++ >= opts.witness_limit) break;
        std::string s = "point:";
        for (const auto& [sort, fid] : frag.sort_top)
          for (const auto& m : frag.model.carrier(sort))
            s += " |" + sort + "/" + m + "|=" +
                 std::to_string(
                     p.functor.carrier(fid + "@" + encode_tuple({m})).size());
        rep.note(s);
      }
    });
  }
}

void cmd_correspondence(const WorkspaceDocument& doc, const Options& opts,
                        Reporter& rep) {
  for (const auto& [name, fd] : doc.fragments) {
    guarded(rep, "fragment " + name, [&] {
      FragmentSite frag = doc.compile(name);
      OverSite over = antecedent_basis(frag);
      auto points = enumerate_points(frag, over, opts.bound);
      auto homs = enumerate_homs(frag, opts.bound);
      if (points.size() == homs.size())
        rep.ok("fragment " + name + ": " + std::to_string(points.size()) +
               " points = " + std::to_string(homs.size()) + " hom classes");
      else
        rep.fail("fragment " + name + ": " + std::to_string(points.size()) +
                 " points != " + std::to_string(homs.size()) + " hom classes");

      // round trips
      for (const auto& h : homs) {
        PointCandidate pc = hom_to_point(frag, h.model, h.hom, over);
        HomFromPoint back = point_to_hom(frag, pc, over);
        if (!homs_isomorphic_over(frag.model, h, back)) {
          rep.fail("fragment " + name +
                   ": point_to_hom(hom_to_point(g)) is not isomorphic to g");
          return;
        }
      }
      for (const auto& p : points) {
        HomFromPoint h = point_to_hom(frag, p, over);
        PointCandidate back = hom_to_point(frag, h.model, h.hom, over);
        if (!naturally_isomorphic(p.functor, back.functor)) {
          rep.fail("fragment " + name +
                   ": hom_to_point(point_to_hom(G)) is not isomorphic to G");
          return;
        }
      }
      rep.ok("fragment " + name + ": both round trips are identities up to "
             "isomorphism");
    });
  }
}

void cmd_sheaf(const WorkspaceDocument& doc, const Options& opts,
               Reporter& rep) {
  for (const auto& [name, task] : doc.tasks) {
    if (task.kind != "sheaf") continue;
    guarded(rep, "task " + name, [&] {
      if (task.params.count("fragment")) {
        FragmentSite frag = doc.compile(task.params.at("fragment"));
        OverSite over = antecedent_basis(frag);
        bool all = true;
        for (const auto& obj : over.elements->objects) {
          FinPresheaf rp = representable_presheaf(over.elements, obj);
          if (!is_sheaf(rp, over.basis)) {
            rep.fail("task " + name + ": representable at " + obj +
                     " is not a sheaf");
            all = false;
          }
        }
        if (all)
          rep.ok("task " + name + ": all " +
                 std::to_string(over.elements->objects.size()) +
                 " representables are sheaves (subcanonical)");
      } else {
        const FinPresheaf& p = doc.presheaves.at(task.params.at("presheaf"));
        const CoverageBasis& b = doc.bases.at(task.params.at("basis"));
        SheafReport sr = sheaf_report(p, b);
        if (sr.sheaf)
          rep.ok("task " + name + ": sheaf");
        else
          rep.fail("task " + name + ": not a sheaf: " + sr.detail);
      }
    });
  }
  (void)opts;
}

void cmd_descent(const WorkspaceDocument& doc, const Options& opts,
                 Reporter& rep) {
  for (const auto& [name, task] : doc.tasks) {
    if (task.kind != "descent") continue;
    guarded(rep, "task " + name, [&] {
      GrothendieckTotal total;
      if (task.params.count("indexed")) {
        total = grothendieck_construction(doc.indexed.at(task.params.at("indexed")));
      } else if (task.params.count("model")) {
        PresheafModel pm = doc.presheaf_model(task.params.at("model"));
        total = grothendieck_construction(elements_stack(pm));
      } else {
        throw Error("task needs an 'indexed' or 'model' parameter");
      }
      const CoverageBasis& base = doc.bases.at(task.params.at("basis"));
      for (const auto& [obj, fams] : base.families)
        for (const auto& fam : fams) {
          DescentReport dr = check_descent(total, fam);
          std::string fs = "{";
          for (const auto& a : fam.arrows) fs += a + ",";
          fs += "}@" + obj;
          if (dr.ok())
            rep.ok("task " + name + ": descent holds for " + fs + " (" +
                   std::to_string(dr.data_checked) + " data)");
          else
            rep.fail("task " + name + ": descent fails for " + fs + ": " +
                     dr.failures.front());
        }
    });
  }
  (void)opts;
}

void cmd_limits(const WorkspaceDocument& doc, const Options& opts,
                Reporter& rep) {
  for (const auto& [name, task] : doc.tasks) {
    if (task.kind != "limits") continue;
    guarded(rep, "task " + name, [&] {
      const Diagram& dia = doc.diagrams.at(task.params.at("diagram"));
      if (task.params.count("indexed")) {
        GrothendieckTotal total =
            grothendieck_construction(doc.indexed.at(task.params.at("indexed")));
        auto w = limit_in_total(total, dia);
        rep.ok("task " + name + ": fiberwise limit at " + w->apex + " (" +
               std::to_string(w->cones_checked) + " cones checked)");
        auto direct = compute_limit(*total.total, dia);
        if (direct && direct->apex == w->apex)
          rep.ok("task " + name + ": agrees with the direct limit");
        else if (direct)
          rep.note("task " + name + ": direct limit picked " + direct->apex +
                   " (isomorphic apex)");
        else
          rep.fail("task " + name + ": direct limit search found none");
      } else {
        const auto& cat = doc.categories.at(task.params.at("category"));
        auto w = compute_limit(*cat, dia);
        if (w) {
          std::string legs;
          for (const auto& [node, leg] : w->legs) legs += " " + node + ":" + leg;
          rep.ok("task " + name + ": limit at " + w->apex + ", legs" + legs +
                 " (" + std::to_string(w->cones_checked) + " cones checked)");
        } else {
          rep.fail("task " + name + ": no limit exists");
        }
      }
    });
  }
  (void)opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite site computations: categories of elements, coverage "
               "bases, antecedent/Giraud/lifted topologies, and the "
               "point/homomorphism correspondence"};
  app.require_subcommand(1);

  Options opts;
  app.add_option("--bound", opts.bound, "carrier bound for enumerations")
      ->capture_default_str();
  app.add_option("--witness-limit", opts.witness_limit,
                 "maximum listed witnesses per report")
      ->capture_default_str();
  app.add_option("--report", opts.report_path, "write a JSON report here");
  app.add_flag("--strict", opts.strict, "treat warnings as failures");

  std::map<std::string, void (*)(const WorkspaceDocument&, const Options&,
                                 Reporter&)>
      handlers = {
          {"validate", cmd_validate},
          {"elements", cmd_elements},
          {"antecedent", cmd_antecedent},
          {"antecedent-general", cmd_antecedent_general},
          {"lifted", cmd_lifted},
          {"giraud", cmd_giraud},
          {"tm", cmd_tm},
          {"points", cmd_points},
          {"correspondence", cmd_correspondence},
          {"sheaf", cmd_sheaf},
          {"descent", cmd_descent},
          {"limits", cmd_limits},
      };

  for (auto& [name, handler] : handlers) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("files", opts.files, "workspace documents")
        ->required()
        ->check(CLI::ExistingFile);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  Reporter rep;
  int code = 0;
  try {
    WorkspaceDocument doc = parse_workspace_files(opts.files);
    handlers.at(command)(doc, opts, rep);
    code = rep.exit_code(opts.strict);
  } catch (const ParseError& e) {
    rep.error(e.what());
    code = 2;
  } catch (const Error& e) {
    rep.error(e.what());
    code = 2;
  }
  rep.flush(command, opts);
  return code;
}
