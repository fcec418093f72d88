#pragma once

#include <fstream>
#include <sstream>

#include "dualis/fol.hpp"
#include "dualis/lattice_spec.hpp"
#include "dualis/prop.hpp"
#include "dualis/ring_spec.hpp"

namespace dualis {

// ---------------------------------------------------------------------------
// Reports: structured text with per-check verdicts; every verdict carries a
// certificate or a witness in its detail.
// ---------------------------------------------------------------------------

struct Report {
  std::string name;
  std::string input;
  std::string digest;
  std::vector<std::string> body;
  std::vector<std::pair<std::string, std::string>> checks;  // name -> "pass ..."/"FAIL ..."
  long timing_ms = 0;

  void check(const std::string& what, bool ok, const std::string& detail = "") {
    checks.emplace_back(what, std::string(ok ? "pass" : "FAIL") +
                                  (detail.empty() ? "" : " " + detail));
  }
  bool pass() const {
    for (const auto& [k, v] : checks)
      if (v.rfind("FAIL", 0) == 0) return false;
    return true;
  }
  std::string render() const {
    std::ostringstream os;
    os << "report " << name << "\n";
    if (!input.empty()) os << "input " << input << " digest " << digest << "\n";
    for (const std::string& l : body) os << l << "\n";
    for (const auto& [k, v] : checks) os << "check " << k << " " << v << "\n";
    os << "verdict " << (pass() ? "PASS" : "FAIL") << "\n";
    os << "timing_ms " << timing_ms << "\n";
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// line-oriented input helpers
// ---------------------------------------------------------------------------

namespace detail {

struct Lines {
  std::vector<std::string> rows;
  std::vector<int> numbers;

  explicit Lines(const std::string& text) {
    std::istringstream is(text);
    std::string row;
    int n = 0;
    while (std::getline(is, row)) {
      ++n;
      auto hash = row.find('#');
      if (hash != std::string::npos) row.erase(hash);
      std::size_t a = row.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      std::size_t b = row.find_last_not_of(" \t\r");
      rows.push_back(row.substr(a, b - a + 1));
      numbers.push_back(n);
    }
  }
};

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

inline int to_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw syntax_error("expected an integer, got '" + s + "'", line, 1);
  }
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invariant_error("cannot read file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// Lattice input: `lattice <n>` with `leq i j` lines or explicit tables, or the
// `downsets-of-poset <n>` shortcut.
// ---------------------------------------------------------------------------

inline Lattice parse_lattice_text(const std::string& text) {
  detail::Lines lines(text);
  if (lines.rows.empty()) throw syntax_error("empty lattice file", 1, 1);
  auto head = detail::words(lines.rows[0]);
  if (head.size() == 2 && head[0] == "downsets-of-poset") {
    const int n = detail::to_int(head[1], lines.numbers[0]);
    std::vector<std::pair<int, int>> rel;
    for (std::size_t i = 1; i < lines.rows.size(); ++i) {
      auto w = detail::words(lines.rows[i]);
      if (w.size() != 3 || w[0] != "leq")
        throw syntax_error("expected 'leq i j'", lines.numbers[i], 1);
      rel.emplace_back(detail::to_int(w[1], lines.numbers[i]),
                       detail::to_int(w[2], lines.numbers[i]));
    }
    return downset_lattice(FinPoset(n, rel)).lattice;
  }
  if (head.size() != 2 || head[0] != "lattice")
    throw syntax_error("expected 'lattice <n>' or 'downsets-of-poset <n>'", lines.numbers[0], 1);
  const int n = detail::to_int(head[1], lines.numbers[0]);
  std::vector<std::pair<int, int>> rel;
  std::vector<std::vector<int>> meet_rows, join_rows;
  std::vector<std::vector<int>>* table = nullptr;
  for (std::size_t i = 1; i < lines.rows.size(); ++i) {
    auto w = detail::words(lines.rows[i]);
    if (w.size() == 3 && w[0] == "leq") {
      rel.emplace_back(detail::to_int(w[1], lines.numbers[i]),
                       detail::to_int(w[2], lines.numbers[i]));
      table = nullptr;
      continue;
    }
    if (w.size() == 2 && w[0] == "table") {
      if (w[1] == "meet") table = &meet_rows;
      else if (w[1] == "join") table = &join_rows;
      else throw syntax_error("unknown table '" + w[1] + "'", lines.numbers[i], 1);
      continue;
    }
    if (table) {
      std::vector<int> row;
      for (const std::string& s : w) row.push_back(detail::to_int(s, lines.numbers[i]));
      if ((int)row.size() != n) throw syntax_error("table row needs " + std::to_string(n) +
                                                   " entries", lines.numbers[i], 1);
      table->push_back(std::move(row));
      continue;
    }
    throw syntax_error("unexpected line '" + lines.rows[i] + "'", lines.numbers[i], 1);
  }
  if (!meet_rows.empty() || !join_rows.empty()) {
    if (!rel.empty())
      throw syntax_error("mixing 'leq' lines with explicit tables is not supported", 1, 1);
    if ((int)meet_rows.size() != n || (int)join_rows.size() != n)
      throw syntax_error("both meet and join tables need " + std::to_string(n) + " rows", 1, 1);
    std::vector<int> mv, jv;
    for (const auto& r : meet_rows) mv.insert(mv.end(), r.begin(), r.end());
    for (const auto& r : join_rows) jv.insert(jv.end(), r.begin(), r.end());
    return Lattice(BinTable(n, std::move(mv)), BinTable(n, std::move(jv)));
  }
  std::vector<char> leq(n * n, 0);
  for (int i = 0; i < n; ++i) leq[i * n + i] = 1;
  for (auto [a, b] : rel) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw syntax_error("leq index out of range", 1, 1);
    leq[a * n + b] = 1;
  }
  for (int k = 0; k < n; ++k)  // transitive closure
    for (int i = 0; i < n; ++i)
      if (leq[i * n + k])
        for (int j = 0; j < n; ++j)
          if (leq[k * n + j]) leq[i * n + j] = 1;
  return Lattice::from_leq(n, leq);
}

// ---------------------------------------------------------------------------
// Ring input: `zmod <n>` | `product <file> <file>` | explicit tables.
// ---------------------------------------------------------------------------

inline FinCommRing parse_ring_text(const std::string& text, const std::string& base_dir = ".");

inline FinCommRing parse_ring_file(const std::string& path) {
  std::string dir = ".";
  auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_ring_text(read_file(path), dir);
}

inline FinCommRing parse_ring_text(const std::string& text, const std::string& base_dir) {
  detail::Lines lines(text);
  if (lines.rows.empty()) throw syntax_error("empty ring file", 1, 1);
  auto head = detail::words(lines.rows[0]);
  if (head.size() == 2 && head[0] == "zmod") return zmod(detail::to_int(head[1], lines.numbers[0]));
  if (head.size() == 3 && head[0] == "product")
    return product_ring(parse_ring_file(base_dir + "/" + head[1]),
                        parse_ring_file(base_dir + "/" + head[2]));
  if (head.size() != 2 || head[0] != "ring")
    throw syntax_error("expected 'zmod <n>', 'product <f> <g>' or 'ring <n>'", lines.numbers[0], 1);
  const int n = detail::to_int(head[1], lines.numbers[0]);
  int zero = 0, one = 1;
  std::vector<std::vector<int>> add_rows, mul_rows;
  std::vector<std::vector<int>>* table = nullptr;
  for (std::size_t i = 1; i < lines.rows.size(); ++i) {
    auto w = detail::words(lines.rows[i]);
    if (w.size() == 2 && w[0] == "zero") { zero = detail::to_int(w[1], lines.numbers[i]); continue; }
    if (w.size() == 2 && w[0] == "one") { one = detail::to_int(w[1], lines.numbers[i]); continue; }
    if (w.size() == 1 && w[0] == "add") { table = &add_rows; continue; }
    if (w.size() == 1 && w[0] == "mul") { table = &mul_rows; continue; }
    if (table) {
      std::vector<int> row;
      for (const std::string& s : w) row.push_back(detail::to_int(s, lines.numbers[i]));
      if ((int)row.size() != n)
        throw syntax_error("table row needs " + std::to_string(n) + " entries", lines.numbers[i], 1);
      table->push_back(std::move(row));
      continue;
    }
    throw syntax_error("unexpected line '" + lines.rows[i] + "'", lines.numbers[i], 1);
  }
  if ((int)add_rows.size() != n || (int)mul_rows.size() != n)
    throw syntax_error("ring needs full add and mul tables", 1, 1);
  std::vector<int> av, mv;
  for (const auto& r : add_rows) av.insert(av.end(), r.begin(), r.end());
  for (const auto& r : mul_rows) mv.insert(mv.end(), r.begin(), r.end());
  return FinCommRing(BinTable(n, std::move(av)), BinTable(n, std::move(mv)), zero, one);
}

// ---------------------------------------------------------------------------
// Propositional theory files: a `vars` line, then one axiom per line.
// ---------------------------------------------------------------------------

inline PropTheory parse_prop_theory(const std::string& text) {
  detail::Lines lines(text);
  if (lines.rows.empty()) throw syntax_error("empty theory file", 1, 1);
  auto head = detail::words(lines.rows[0]);
  if (head.empty() || head[0] != "vars")
    throw syntax_error("expected 'vars p q ...' on the first line", lines.numbers[0], 1);
  PropTheory t;
  t.vars.assign(head.begin() + 1, head.end());
  if (t.vars.empty()) throw syntax_error("at least one variable required", lines.numbers[0], 1);
  for (std::size_t i = 1; i < lines.rows.size(); ++i) {
    try {
      t.axioms.push_back(parse_prop(lines.rows[i], t.vars));
    } catch (const syntax_error& e) {
      throw syntax_error(std::string(e.what()), lines.numbers[i], e.col);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// First-order theory files: symbol declarations, then `axiom <formula>` lines.
// ---------------------------------------------------------------------------

inline FOTheory parse_fo_theory(const std::string& text) {
  detail::Lines lines(text);
  FOTheory t;
  std::vector<std::pair<std::string, int>> axiom_rows;
  for (std::size_t i = 0; i < lines.rows.size(); ++i) {
    auto w = detail::words(lines.rows[i]);
    if (w.size() == 3 && w[0] == "rel") {
      t.sig.rels.push_back({w[1], detail::to_int(w[2], lines.numbers[i])});
    } else if (w.size() == 3 && w[0] == "fun") {
      t.sig.funs.push_back({w[1], detail::to_int(w[2], lines.numbers[i])});
    } else if (w.size() == 2 && w[0] == "const") {
      t.sig.consts.push_back(w[1]);
    } else if (!w.empty() && w[0] == "axiom") {
      axiom_rows.emplace_back(lines.rows[i].substr(5), lines.numbers[i]);
    } else {
      throw syntax_error("expected 'rel', 'fun', 'const' or 'axiom'", lines.numbers[i], 1);
    }
  }
  t.sig.check_distinct();
  for (const auto& [row, num] : axiom_rows) {
    try {
      t.axioms.push_back(parse_fo(row, t.sig));
    } catch (const syntax_error& e) {
      throw syntax_error(std::string(e.what()), num, e.col);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// DOT and structured-text exports
// ---------------------------------------------------------------------------

/// Specialization preorder: an edge p -> q when q lies in the closure of p,
/// i.e. the minimal open of p is contained in that of q.
inline std::string dot_space(const FinTopSpace& x, const std::vector<std::string>& point_labels) {
  std::ostringstream os;
  os << "digraph spectrum {\n  node [shape=box];\n";
  for (int p = 0; p < x.points(); ++p)
    os << "  p" << p << " [label=\"" << point_labels[p] << "\"];\n";
  for (int p = 0; p < x.points(); ++p)
    for (int q = 0; q < x.points(); ++q) {
      if (p == q) continue;
      if ((x.basic(x.minimal_open(p)) & ~x.basic(x.minimal_open(q))) == 0 &&
          x.basic(x.minimal_open(p)) != x.basic(x.minimal_open(q)))
        os << "  p" << p << " -> p" << q << ";\n";
    }
  os << "}\n";
  return os.str();
}

inline std::string export_space_text(const FinTopSpace& x,
                                     const std::vector<std::string>& point_labels) {
  std::ostringstream os;
  os << "space points " << x.points() << "\n";
  for (int p = 0; p < x.points(); ++p) os << "point " << p << " " << point_labels[p] << "\n";
  for (int i = 0; i < x.basic_count(); ++i) {
    os << "basic " << x.key(i) << " = {";
    bool first = true;
    for (int p = 0; p < x.points(); ++p)
      if (x.basic(i) >> p & 1) {
        os << (first ? "" : " ") << p;
        first = false;
      }
    os << "}\n";
  }
  return os.str();
}

inline std::string export_presheaf_text(const StructPresheaf& f) {
  std::ostringstream os;
  const FinTopSpace& x = f.space();
  os << "presheaf kind ";
  bool found = false;
  for (int i = 0; i < x.basic_count() && !found; ++i)
    if (f.has_section(i)) {
      os << alg_kind_name(f.section(i)) << "\n";
      found = true;
    }
  if (!found) os << "none\n";
  for (int i = 0; i < x.basic_count(); ++i) {
    if (!f.has_section(i)) continue;
    os << "section " << x.key(i) << " order " << alg_size(f.section(i)) << "\n";
  }
  for (int i = 0; i < x.basic_count(); ++i)
    for (int j = 0; j < x.basic_count(); ++j) {
      if (i == j || !f.has_section(i) || !f.has_section(j)) continue;
      if ((x.basic(j) & ~x.basic(i)) != 0) continue;
      os << "restriction " << x.key(i) << " -> " << x.key(j) << " :";
      for (int e : f.restriction(i, j)) os << " " << e;
      os << "\n";
    }
  return os.str();
}

inline std::string groupoid_object_label(const ModelGroupoid& g, int oi) {
  const auto& obj = g.objects[oi];
  std::ostringstream os;
  os << "M" << obj.model << "[";
  for (std::size_t k = 0; k < g.labels.size(); ++k) {
    if (k) os << ",";
    if (obj.label[k] < 0) os << "-";
    else os << obj.label[k];
  }
  os << "]";
  return os.str();
}

inline std::string export_groupoid_text(const ModelGroupoid& g) {
  std::ostringstream os;
  os << "groupoid models " << g.models.size() << " objects " << g.objects.size() << " morphisms "
     << g.morphisms.size() << "\n";
  for (std::size_t m = 0; m < g.models.size(); ++m) {
    os << "model " << m << " size " << g.models[m].n;
    for (std::size_t r = 0; r < g.theory.sig.rels.size(); ++r) {
      os << " " << g.theory.sig.rels[r].name << "={";
      const int k = g.theory.sig.rels[r].arity;
      bool first = true;
      for (int t = 0; t < pow_int(g.models[m].n, k); ++t) {
        if (!g.models[m].rels[r].test(t)) continue;
        os << (first ? "" : " ");
        first = false;
        int rest = t;
        os << "(";
        for (int i = 0; i < k; ++i) {
          if (i) os << ",";
          os << rest % g.models[m].n;
          rest /= g.models[m].n;
        }
        os << ")";
      }
      os << "}";
    }
    for (std::size_t fi = 0; fi < g.theory.sig.funs.size(); ++fi) {
      os << " " << g.theory.sig.funs[fi].name << "=[";
      for (std::size_t t = 0; t < g.models[m].funs[fi].size(); ++t) {
        if (t) os << " ";
        os << g.models[m].funs[fi][t];
      }
      os << "]";
    }
    os << "\n";
  }
  for (std::size_t o = 0; o < g.objects.size(); ++o)
    os << "object " << o << " " << groupoid_object_label(g, (int)o) << "\n";
  for (const auto& m : g.morphisms) {
    os << "morphism " << m.src << " -> " << m.dst << " via (";
    for (std::size_t i = 0; i < m.bij.size(); ++i) {
      if (i) os << " ";
      os << m.bij[i];
    }
    os << ")\n";
  }
  return os.str();
}

/// Skeleton only: one node per object, one edge per non-identity morphism.
inline std::string dot_groupoid(const ModelGroupoid& g) {
  std::ostringstream os;
  os << "digraph groupoid {\n  node [shape=box];\n";
  for (std::size_t o = 0; o < g.objects.size(); ++o)
    os << "  o" << o << " [label=\"" << groupoid_object_label(g, (int)o) << "\"];\n";
  for (const auto& m : g.morphisms) {
    bool id = m.src == m.dst;
    for (std::size_t i = 0; i < m.bij.size() && id; ++i)
      if (m.bij[i] != (int)i) id = false;
    if (id) continue;
    os << "  o" << m.src << " -> o" << m.dst << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dualis
