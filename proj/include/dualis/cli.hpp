#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <functional>
#include <iostream>

#include "dualis/corpus.hpp"

namespace dualis {
namespace cli {

inline std::string set_text(const Bits& b) {
  std::vector<std::string> parts;
  for (int e : b.elems()) parts.push_back(std::to_string(e));
  return "{" + join(parts, " ") + "}";
}

inline std::string map_text(const std::vector<int>& m) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < m.size(); ++i)
    parts.push_back(std::to_string(i) + ":" + std::to_string(m[i]));
  return join(parts, " ");
}

inline std::vector<std::string> label_names(int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back("x" + std::to_string(i));
  return out;
}


struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  long ms() const {
    return (long)std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Options {
  std::string file;
  std::string second;   // formula / second file
  std::string emit = "text";
  int max_size = 3;
  int depth = 1;
  int labels = 2;
  int model_index = 0;
  std::uint64_t seed = 20240501;
  bool loose_labels = false;
};

// ---------------------------------------------------------------------------
// subcommand bodies; each renders a report and returns the exit code
// ---------------------------------------------------------------------------

inline int run_ring_spec(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FinCommRing r = parse_ring_text(text, o.file.find('/') == std::string::npos
                                            ? "."
                                            : o.file.substr(0, o.file.find_last_of('/')));
  RingSpectrum spec = prime_spectrum(r);
  std::vector<std::string> labels;
  for (const Bits& p : spec.primes) labels.push_back(detail::ideal_label(r, p));
  if (o.emit == "dot") {
    out << dot_space(spec.space, labels);
    return 0;
  }
  Report rep;
  rep.name = "ring-spec";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("ring order " + std::to_string(r.size()));
  for (int p = 0; p < spec.space.points(); ++p)
    rep.body.push_back("prime " + labels[p] + " members " + set_text(spec.primes[p]));
  RingSpectrum maxspec = max_spectrum(r);
  std::vector<std::string> maxlabels;
  for (const Bits& m : maxspec.primes) maxlabels.push_back(detail::ideal_label(r, m));
  rep.body.push_back("maximal ideals " + join(maxlabels, " "));
  std::istringstream sp(export_space_text(spec.space, labels));
  std::string line;
  while (std::getline(sp, line))
    if (line.rfind("basic", 0) == 0) rep.body.push_back(line);
  rep.check("B_0-empty-B_1-full", true, "enforced at construction");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return 0;
}

inline int run_ring_sheaf(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FinCommRing r = parse_ring_text(text, o.file.find('/') == std::string::npos
                                            ? "."
                                            : o.file.substr(0, o.file.find_last_of('/')));
  RingSheaf rs = structure_sheaf(r);
  Report rep;
  rep.name = "ring-sheaf";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  std::istringstream ps(export_presheaf_text(rs.sheaf));
  std::string line;
  while (std::getline(ps, line)) rep.body.push_back(line);
  rep.check("sheaf-condition", rs.sheaf_check.ok,
            std::to_string(rs.sheaf_check.covers_checked) + " covers checked");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_ring_verify(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FinCommRing r = parse_ring_text(text, o.file.find('/') == std::string::npos
                                            ? "."
                                            : o.file.substr(0, o.file.find_last_of('/')));
  RingRepReport v = verify_representation(r);
  Report rep;
  rep.name = "ring-verify";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("ring order " + std::to_string(r.size()));
  for (const auto& s : v.stalks) {
    rep.body.push_back("stalk at " + s.prime_label + " order " + std::to_string(s.stalk_size));
    rep.check("stalk-" + s.prime_label + "-local", s.local,
              "non-unit sums and unique-maximal-ideal criteria agree");
    rep.check("stalk-" + s.prime_label + "-oracle", s.matches_minimal_open && s.matches_colimit,
              "minimal-open section = localization = filtered colimit");
  }
  rep.check("sheaf-condition", true, std::to_string(v.covers_checked) + " covers checked");
  rep.body.push_back("global sections order " + std::to_string(v.gamma_size));
  rep.check("gamma-isomorphism", v.iso.has_value(),
            v.iso ? "map " + map_text(*v.iso) : "no isomorphism found");
  rep.check("subdirect-embedding", v.embedding_injective && v.sections_embed,
            "injective into the product of the stalks");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_lattice_sspec(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  DistLattice l((parse_lattice_text(text)));
  SubSpectrum s = sspec(l);
  std::vector<std::string> labels;
  for (const Bits& p : s.points) labels.push_back(set_text(p));
  if (o.emit == "dot") {
    out << dot_space(s.space, labels);
    return 0;
  }
  Report rep;
  rep.name = "lattice-sspec";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("lattice size " + std::to_string(l.size()));
  for (int p = 0; p < s.space.points(); ++p)
    rep.body.push_back("prime ideal " + std::to_string(p) + " members " + labels[p]);
  std::istringstream ps(export_presheaf_text(s.sheaf));
  std::string line;
  while (std::getline(ps, line)) rep.body.push_back(line);
  OpensIso oi = opens_iso(s);
  rep.check("sheaf-condition", s.sheaf_check.ok,
            std::to_string(s.sheaf_check.covers_checked) + " covers checked");
  rep.check("opens-isomorphism", oi.ok(),
            "q |-> B_q bijective onto " + std::to_string(oi.opens_count) + " opens");
  // implication is recomputed per slice and need not be respected by the
  // restriction maps; report where it is, without asserting it
  {
    int preserved = 0, total = 0;
    for (int i = 0; i < s.space.basic_count(); ++i) {
      if (s.space.basic(i) == 0) continue;
      for (int j = 0; j < s.space.basic_count(); ++j) {
        if (i == j || s.space.basic(j) == 0 || (s.space.basic(j) & ~s.space.basic(i)) != 0)
          continue;
        ++total;
        if (is_heyting_hom(heyting_from_lattice(s.slices[i].lattice),
                           heyting_from_lattice(s.slices[j].lattice), s.sheaf.restriction(i, j)))
          ++preserved;
      }
    }
    rep.body.push_back("implication preserved by " + std::to_string(preserved) + " of " +
                       std::to_string(total) + " restriction maps (reported, not asserted)");
  }
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_lattice_equalizer(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  Lattice l = parse_lattice_text(text);
  Report rep;
  rep.name = "lattice-equalizer";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  long pairs = 0;
  std::optional<std::pair<int, int>> failure;
  for (int p = 0; p < l.size() && !failure; ++p)
    for (int q = 0; q < l.size(); ++q) {
      ++pairs;
      if (!check_slice_equalizer(l, p, q)) {
        failure = {p, q};
        break;
      }
    }
  rep.body.push_back("lattice size " + std::to_string(l.size()));
  rep.check("slice-equalizers", !failure,
            failure ? "witness pair (" + std::to_string(failure->first) + "," +
                          std::to_string(failure->second) + ")"
                    : std::to_string(pairs) + " pairs pass");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_lattice_verify(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  Lattice raw = parse_lattice_text(text);
  if (auto w = check_distributive(raw))
    throw invariant_error("lattice is not distributive; witness (" + std::to_string((*w)[0]) +
                          "," + std::to_string((*w)[1]) + "," + std::to_string((*w)[2]) + ")");
  DistLattice l(raw);
  SubSpectrum s = sspec(l);
  LatticeRepReport v = verify_lattice_representation(l, s);
  Report rep;
  rep.name = "lattice-verify";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("lattice size " + std::to_string(l.size()));
  for (const auto& st : v.stalks) {
    rep.body.push_back("stalk at prime ideal " + set_text(s.points[st.point]) + " size " +
                       std::to_string(st.stalk_size));
    rep.check("stalk-" + std::to_string(st.point) + "-sublocal", st.sublocal,
              "top is join-prime in the filter quotient");
    rep.check("stalk-" + std::to_string(st.point) + "-oracle",
              st.matches_minimal_open && st.matches_colimit,
              "filter quotient = minimal-open slice = filtered colimit");
  }
  rep.body.push_back("global sections size " + std::to_string(v.gamma_size));
  rep.check("gamma-isomorphism", v.gamma_iso, "canonical map x |-> (x ^ q)");
  rep.check("subdirect-embedding", v.embedding_injective, "into the product of filter quotients");
  rep.check("slice-equalizers", v.slice_equalizers, "all pairs");
  rep.check("opens-isomorphism", v.opens_ok, "q |-> B_q onto the open-set lattice");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_stone_lt(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  PropTheory t = parse_prop_theory(text);
  Lindenbaum lt = lindenbaum(t);
  Report rep;
  rep.name = "stone-lindenbaum";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("variables " + join(t.vars, " "));
  rep.body.push_back("models " + std::to_string(lt.models.size()));
  rep.body.push_back("algebra order " + std::to_string(lt.algebra.size()));
  for (const PropPtr& ax : t.axioms)
    rep.check("axiom-[" + print_prop(ax, t.vars) + "]-is-top",
              lt.classify(ax) == lt.algebra.top(),
              "class " + std::to_string(lt.classify(ax)));
  for (std::size_t v = 0; v < t.vars.size(); ++v)
    rep.body.push_back("class [" + t.vars[v] + "] = element " +
                       std::to_string(lt.classify(pvar((int)v))));
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_stone_spec(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  PropTheory t = parse_prop_theory(text);
  Lindenbaum lt = lindenbaum(t);
  StoneSpec sp = stone_spec(lt.algebra);
  std::vector<std::string> labels;
  for (int p = 0; p < sp.space.points(); ++p)
    labels.push_back("atom " + std::to_string(sp.atoms[p]));
  if (o.emit == "dot") {
    out << dot_space(sp.space, labels);
    return 0;
  }
  Report rep;
  rep.name = "stone-spec";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("algebra order " + std::to_string(lt.algebra.size()));
  rep.body.push_back("points " + std::to_string(sp.space.points()));
  for (int p = 0; p < sp.space.points(); ++p)
    rep.body.push_back("point " + std::to_string(p) + " ultrafilter generated by atom " +
                       std::to_string(sp.atoms[p]));
  rep.check("three-enumerations-agree", true, "atoms, ultrafilters, homomorphisms");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_stone_roundtrip(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  PropTheory t = parse_prop_theory(text);
  Lindenbaum lt = lindenbaum(t);
  StoneRoundTrip rt = stone_round_trip(lt.algebra);
  Report rep;
  rep.name = "stone-roundtrip";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("algebra order " + std::to_string(lt.algebra.size()));
  rep.body.push_back("spectrum points " + std::to_string(rt.spec.space.points()));
  rep.body.push_back("clopen algebra order " + std::to_string(rt.clopens.algebra.size()));
  rep.check("b-to-bhat-isomorphism", rt.iso_hom && rt.iso_bijective, "map " + map_text(rt.iso));
  rep.check("stone-embedding", rt.embedding_hom && rt.embedding_injective,
            "injective into the powerset of " + std::to_string(rt.spec.space.points()) +
                " points");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_heyting_eval(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  Lattice raw = parse_lattice_text(text);
  if (auto w = check_distributive(raw))
    throw invariant_error("lattice is not distributive; witness (" + std::to_string((*w)[0]) +
                          "," + std::to_string((*w)[1]) + "," + std::to_string((*w)[2]) + ")");
  HeytingAlgebra h = heyting_from_lattice(DistLattice(raw));
  auto [f, vars] = parse_prop_collect(o.second);
  HeytingValidity v = heyting_validity(f, (int)vars.size(), h);
  Report rep;
  rep.name = "heyting-eval";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("formula " + print_prop(f, vars));
  rep.body.push_back("algebra size " + std::to_string(h.size()));
  if (v.valid) {
    rep.body.push_back("valid: evaluates to top under all " + std::to_string(h.size()) + "^" +
                       std::to_string(vars.size()) + " valuations");
  } else {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < vars.size(); ++i)
      parts.push_back(vars[i] + "=" + std::to_string(v.witness[i]));
    rep.body.push_back("invalid: value differs from top at " + join(parts, " "));
  }
  rep.check("evaluated", true, std::to_string(h.size()) + "-element algebra");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return 0;
}

inline int run_fol_enumerate(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FOTheory t = parse_fo_theory(text);
  ModelList ml = enumerate_models(t, o.max_size);
  Report rep;
  rep.name = "fol-enumerate";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("theory " + std::string(t.coherent() ? "coherent" : "classical") + " axioms " +
                     std::to_string(t.axioms.size()));
  long reps = 0;
  for (char c : ml.is_rep)
    if (c) ++reps;
  rep.body.push_back("models up to size " + std::to_string(o.max_size) + ": " +
                     std::to_string(ml.models.size()) + " (" + std::to_string(reps) +
                     " isomorphism classes)");
  for (std::size_t i = 0; i < ml.models.size(); ++i)
    rep.body.push_back("model " + std::to_string(i) + " size " + std::to_string(ml.models[i].n) +
                       (ml.is_rep[i] ? " representative"
                                     : " isomorphic-to " + std::to_string(ml.iso_rep[i])));
  rep.check("enumeration-complete", true, "within budget");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return 0;
}

inline int run_fol_groupoid(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FOTheory t = parse_fo_theory(text);
  ModelGroupoid g = groupoid(t, o.max_size, label_names(o.labels), !o.loose_labels);
  if (o.emit == "dot") {
    out << dot_groupoid(g);
    return 0;
  }
  Report rep;
  rep.name = "fol-groupoid";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  std::istringstream gs(export_groupoid_text(g));
  std::string line;
  while (std::getline(gs, line)) rep.body.push_back(line);
  rep.check("groupoid-laws", groupoid_laws_hold(g), "identities, inverses, composition");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_fol_open(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FOTheory t = parse_fo_theory(text);
  ModelGroupoid g = groupoid(t, o.max_size, label_names(o.labels), !o.loose_labels);
  FOPtr phi = parse_fo(o.second, t.sig);
  std::vector<std::string> context = label_names(o.labels);
  Bits v = basic_open(g, phi, context);
  Report rep;
  rep.name = "fol-open";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("formula " + print_fo(phi, t.sig));
  rep.body.push_back("context " + join(context, " "));
  rep.body.push_back("objects " + std::to_string(g.objects.size()) + " in-V " +
                     std::to_string(v.count()));
  for (int i : v.elems())
    rep.body.push_back("member " + groupoid_object_label(g, i));
  rep.check("morphism-stable", basic_open_stable(g, v),
            std::to_string(g.morphisms.size()) + " morphisms");
  DefinableSheaf ds = definable_sheaf(g, phi, context);
  rep.check("equivariant", ds.equivariant,
            std::to_string(ds.morphisms_checked) + " morphisms checked");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_fol_stalk(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FOTheory t = parse_fo_theory(text);
  ModelList ml = enumerate_models(t, o.max_size);
  if (o.model_index < 0 || o.model_index >= (int)ml.models.size())
    throw invariant_error("model index out of range; " + std::to_string(ml.models.size()) +
                          " models enumerated");
  const FinModel& m = ml.models[o.model_index];
  CatElemsReport ce = category_of_elements(m, t, o.depth);
  DiagramReport dr = diagram_category(m, t.sig, 2);
  Report rep;
  rep.name = "fol-stalk";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("model " + std::to_string(o.model_index) + " size " + std::to_string(m.n));
  rep.body.push_back("category of elements: " + std::to_string(ce.objects.size()) +
                     " objects at depth " + std::to_string(o.depth));
  for (const auto& obj : ce.objects)
    rep.body.push_back("object (" + obj.repr + ", context " + std::to_string(obj.context) +
                       ", tuple " + std::to_string(obj.tuple) + ")");
  rep.check("filtered", ce.filtered,
            std::to_string(ce.pairs_checked) + " pairs admit product cones");
  rep.check("terminal-reachable", ce.terminal_reachable, "unique map to (true, ())");
  rep.body.push_back(ce.stalk_note);
  std::vector<std::string> counts;
  for (long c : dr.object_counts) counts.push_back(std::to_string(c));
  rep.body.push_back("diagram category objects per arity: " + join(counts, " "));
  bool closure = true;
  for (char c : dr.closure_is_powerset) closure = closure && c;
  rep.check("diagram-definable-closure-is-powerset", closure,
            "with parameters every subset is definable");
  rep.check("terminal-indecomposable", dr.terminal_indecomposable,
            "no disjoint nonempty cover of 1");
  rep.check("terminal-projective", dr.terminal_projective,
            "every nonempty object has a point");
  rep.check("points-biject", dr.points_biject, "points 1 -> D are the elements of D");
  rep.check("global-sections-faithful", dr.faithfulness_ok,
            std::to_string(dr.faithfulness_pairs) + " parallel pairs, " +
                std::to_string(dr.graph_witnesses) + " graph witnesses");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return rep.pass() ? 0 : 1;
}

inline int run_fol_consequence(const Options& o, std::ostream& out) {
  Timer timer;
  const std::string text = read_file(o.file);
  FOTheory t = parse_fo_theory(text);
  FOPtr sigma = parse_fo(o.second, t.sig);
  ConsequenceVerdict v = semantic_consequence(t, sigma, o.max_size);
  Report rep;
  rep.name = "fol-consequence";
  rep.input = o.file;
  rep.digest = hex_digest(text);
  rep.body.push_back("sentence " + print_fo(sigma, t.sig));
  rep.body.push_back(v.text());
  if (v.refuted && v.countermodel) {
    const FinModel& m = *v.countermodel;
    rep.body.push_back("countermodel size " + std::to_string(m.n));
  }
  rep.check("search-complete", true, "exhaustive to the bound");
  rep.timing_ms = timer.ms();
  out << rep.render();
  return 0;
}

inline int run_corpus_all(const Options& o, std::ostream& out) {
  bool all = true;
  for (const corpus::CriterionResult& c : corpus::run_all(o.seed)) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.index << " " << c.name << " ("
        << c.ms << " ms)\n";
    out << "    " << c.detail << "\n";
    all = all && c.pass;
  }
  out << (all ? "all criteria passed\n" : "criteria FAILED\n");
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite spectra, sheaf representations, and logical duality"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;

  auto add_emit = [&](CLI::App* cmd) {
    cmd->add_option("--emit", o.emit, "output format")->check(CLI::IsMember({"text", "dot"}));
  };

  CLI::App* ring = app.add_subcommand("ring", "finite commutative rings");
  ring->require_subcommand(1);
  for (const char* sub : {"spec", "sheaf", "verify"}) {
    CLI::App* c = ring->add_subcommand(sub, std::string("ring ") + sub);
    c->add_option("file", o.file, "ring input file")->required();
    add_emit(c);
    std::string name = sub;
    c->callback([&, name]() {
      action = [&, name]() {
        if (name == "spec") return run_ring_spec(o, out);
        if (name == "sheaf") return run_ring_sheaf(o, out);
        return run_ring_verify(o, out);
      };
    });
  }

  CLI::App* lattice = app.add_subcommand("lattice", "finite distributive lattices");
  lattice->require_subcommand(1);
  for (const char* sub : {"sspec", "equalizer", "verify"}) {
    CLI::App* c = lattice->add_subcommand(sub, std::string("lattice ") + sub);
    c->add_option("file", o.file, "lattice input file")->required();
    add_emit(c);
    std::string name = sub;
    c->callback([&, name]() {
      action = [&, name]() {
        if (name == "sspec") return run_lattice_sspec(o, out);
        if (name == "equalizer") return run_lattice_equalizer(o, out);
        return run_lattice_verify(o, out);
      };
    });
  }

  CLI::App* stone = app.add_subcommand("stone", "propositional theories and Stone duality");
  stone->require_subcommand(1);
  for (const char* sub : {"lt", "spec", "roundtrip"}) {
    CLI::App* c = stone->add_subcommand(sub, std::string("stone ") + sub);
    c->add_option("file", o.file, "theory file")->required();
    add_emit(c);
    std::string name = sub;
    c->callback([&, name]() {
      action = [&, name]() {
        if (name == "lt") return run_stone_lt(o, out);
        if (name == "spec") return run_stone_spec(o, out);
        return run_stone_roundtrip(o, out);
      };
    });
  }

  CLI::App* heyting = app.add_subcommand("heyting", "finite Heyting algebras");
  heyting->require_subcommand(1);
  {
    CLI::App* c = heyting->add_subcommand("eval", "validity of a formula in a finite algebra");
    c->add_option("algebra", o.file, "lattice input file")->required();
    c->add_option("formula", o.second, "propositional formula")->required();
    c->callback([&]() { action = [&]() { return run_heyting_eval(o, out); }; });
  }

  CLI::App* fol = app.add_subcommand("fol", "first-order theories and model groupoids");
  fol->require_subcommand(1);
  for (const char* sub : {"enumerate", "groupoid", "open", "stalk", "consequence"}) {
    CLI::App* c = fol->add_subcommand(sub, std::string("fol ") + sub);
    c->add_option("file", o.file, "theory file")->required();
    c->add_option("--max-size", o.max_size, "carrier bound")->check(CLI::PositiveNumber);
    c->add_option("--labels", o.labels, "label count")->check(CLI::NonNegativeNumber);
    c->add_option("--depth", o.depth, "formula depth bound")->check(CLI::PositiveNumber);
    c->add_flag("--loose-labels", o.loose_labels,
                "only require morphisms to agree on commonly defined labels");
    add_emit(c);
    std::string name = sub;
    if (name == "open") c->add_option("--formula", o.second, "formula")->required();
    if (name == "consequence") c->add_option("--sigma", o.second, "sentence")->required();
    if (name == "stalk")
      c->add_option("--model-index", o.model_index, "which enumerated model")
          ->check(CLI::NonNegativeNumber);
    c->callback([&, name]() {
      action = [&, name]() {
        if (name == "enumerate") return run_fol_enumerate(o, out);
        if (name == "groupoid") return run_fol_groupoid(o, out);
        if (name == "open") return run_fol_open(o, out);
        if (name == "stalk") return run_fol_stalk(o, out);
        return run_fol_consequence(o, out);
      };
    });
  }

  CLI::App* corpus_cmd = app.add_subcommand("corpus", "acceptance corpus");
  corpus_cmd->require_subcommand(1);
  {
    CLI::App* c = corpus_cmd->add_subcommand("run-all", "run every acceptance criterion");
    c->add_option("--seed", o.seed, "seed for the randomized checks");
    c->callback([&]() { action = [&]() { return run_corpus_all(o, out); }; });
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    return action();
  } catch (const syntax_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const invariant_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const budget_error& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const verify_error& e) {
    err << "verification failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cli
}  // namespace dualis
