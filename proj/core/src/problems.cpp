#include "mil/problems.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "mil/logic.hpp"
#include "mil/syntax.hpp"

namespace mil {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Metarule named(std::string name, std::string_view text) {
  return make_metarule(std::move(name), parse_clause(text, Mode::metarule));
}

const std::vector<Metarule>& extra_library() {
  static const std::vector<Metarule> lib{analogy_m1()};
  return lib;
}

enum class Section { none, pos, neg, bk, metarules };

std::size_t parse_count(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    throw ParseError("expected a count", line, 1);
  return std::stoul(std::string(s));
}

}  // namespace

std::vector<Metarule> canonical_h22() {
  return {
      named("Identity", "P(x,y) :- Q(x,y)"),
      named("Inverse", "P(x,y) :- Q(y,x)"),
      named("XY-XY-XY", "P(x,y) :- Q(x,y), R(x,y)"),
      named("XY-XY-YX", "P(x,y) :- Q(x,y), R(y,x)"),
      named("Chain", "P(x,y) :- Q(x,z), R(z,y)"),
      named("XY-XZ-YZ", "P(x,y) :- Q(x,z), R(y,z)"),
      named("XY-YX-XY", "P(x,y) :- Q(y,x), R(x,y)"),
      named("XY-YX-YX", "P(x,y) :- Q(y,x), R(y,x)"),
      named("XY-YZ-XZ", "P(x,y) :- Q(y,z), R(x,z)"),
      named("XY-YZ-ZX", "P(x,y) :- Q(y,z), R(z,x)"),
      named("XY-ZX-YZ", "P(x,y) :- Q(z,x), R(y,z)"),
      named("XY-ZX-ZY", "P(x,y) :- Q(z,x), R(z,y)"),
      named("XY-ZY-XZ", "P(x,y) :- Q(z,y), R(x,z)"),
      named("XY-ZY-ZX", "P(x,y) :- Q(z,y), R(z,x)"),
  };
}

std::vector<Metarule> matrix_h22() {
  return {
      named("Meta-monadic", "P(x,y) :- Q(z,u)"),
      named("Meta-dyadic", "P(x,y) :- Q(z,u), R(v,w)"),
  };
}

std::vector<Metarule> punch_upto(std::size_t k) {
  std::vector<Metarule> out;
  for (std::size_t len = 2; len <= k; ++len) {
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < len; ++i) lits.push_back({Atom::atom_var(std::string(1, char('P' + i))), i == 0});
    out.push_back(make_metarule("TOM-" + std::to_string(len), Clause(std::move(lits))));
  }
  return out;
}

Metarule analogy_m1() { return named("M1", "P(x,y,z) :- Q(x,z), R(y,z)"); }

std::optional<Metarule> library_metarule(std::string_view name) {
  std::string key = lower(name);
  if (key.rfind("tom-", 0) == 0) {
    std::string_view digits = std::string_view(key).substr(4);
    if (!digits.empty() && digits.size() < 3 &&
        std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      std::size_t k = std::stoul(std::string(digits));
      if (k >= 2) return punch_upto(k).back();
    }
    return std::nullopt;
  }
  for (const auto& lib : {canonical_h22(), matrix_h22(), extra_library()})
    for (const auto& m : lib)
      if (lower(m.name) == key) return m;
  return std::nullopt;
}

std::optional<std::string> library_name(const Metarule& m) {
  auto key = canonical_key(m);
  for (const auto& lib : {canonical_h22(), matrix_h22(), punch_upto(6), extra_library()})
    for (const auto& l : lib)
      if (canonical_key(l) == key) return l.name;
  return std::nullopt;
}

MilProblem parse_problem(std::string_view text) {
  MilProblem p;
  Section section = Section::none;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.rfind("%%", 0) == 0) continue;
    std::size_t offset = static_cast<std::size_t>(line.data() - raw.data());
    try {
      if (line.front() == '%') {
        auto sp = line.find_first_of(" \t");
        std::string word = lower(line.substr(1, sp == std::string_view::npos ? std::string_view::npos : sp - 1));
        std::string_view arg = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
        if (word == "pos") section = Section::pos;
        else if (word == "neg") section = Section::neg;
        else if (word == "bk") section = Section::bk;
        else if (word == "metarules") section = Section::metarules;
        else if (word == "punch") {
          for (auto& m : punch_upto(parse_count(arg, line_no))) p.metarules.push_back(std::move(m));
        } else if (word == "matrix") {
          if (lower(arg) != "h22") throw ParseError("unknown matrix library '" + std::string(arg) + "'", line_no, 1);
          for (auto& m : matrix_h22()) p.metarules.push_back(std::move(m));
        } else if (word == "invented") {
          p.invented = default_invented_pool(parse_count(arg, line_no));
        } else if (word == "name") {
          p.name = std::string(arg);
        } else if (word == "depth") {
          p.config.max_depth = parse_count(arg, line_no);
        } else if (word == "inferences") {
          p.config.max_inferences = parse_count(arg, line_no);
        } else {
          throw ParseError("unknown directive %" + word, line_no, 1);
        }
        continue;
      }
      switch (section) {
        case Section::none:
          throw ParseError("content outside a section", line_no, 1);
        case Section::pos:
        case Section::neg: {
          Clause c = parse_clause(line);
          if (c.size() != 1 || !c.is_definite()) throw ParseError("example must be a single atom", line_no, 1);
          if (!c.head().is_ground()) throw ParseError("example is not ground", line_no, 1);
          (section == Section::pos ? p.pos : p.neg).push_back(c.head());
          break;
        }
        case Section::bk: {
          Clause c = parse_clause(line);
          if (!c.is_definite()) throw ParseError("background clause is not definite", line_no, 1);
          p.bk.push_back(std::move(c));
          break;
        }
        case Section::metarules: {
          auto sp = line.find_first_of(" \t");
          if (sp == std::string_view::npos) throw ParseError("expected a metarule", line_no, 1);
          std::string word = lower(line.substr(0, sp));
          std::string_view rest = trim(line.substr(sp));
          if (word == "name") {
            if (!rest.empty() && rest.back() == '.') rest.remove_suffix(1);
            rest = trim(rest);
            auto m = library_metarule(rest);
            if (!m) throw ParseError("unknown metarule name '" + std::string(rest) + "'", line_no, 1);
            p.metarules.push_back(std::move(*m));
            break;
          }
          if (word != "punch" && word != "matrix" && word != "sort")
            throw ParseError("expected name, punch, matrix or sort", line_no, 1);
          std::string label;
          auto colon = rest.find(':');
          if (colon != std::string_view::npos && (colon + 1 == rest.size() || rest[colon + 1] != '-')) {
            label = std::string(trim(rest.substr(0, colon)));
            rest = trim(rest.substr(colon + 1));
          }
          Metarule m = make_metarule(label, parse_clause(rest, Mode::metarule));
          if (to_string(m.taxon) != word)
            throw ParseError("metarule is " + std::string(to_string(m.taxon)) + ", not " + word, line_no, 1);
          p.metarules.push_back(std::move(m));
          break;
        }
      }
    } catch (const ParseError& e) {
      // columns are relative to the trimmed line
      std::string what = e.what();
      throw ParseError(what.substr(0, what.rfind(" at ")), line_no, offset + e.column());
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, offset + 1);
    }
  }
  p.validate();
  return p;
}

std::string serialize_problem(const MilProblem& p) {
  std::ostringstream out;
  if (!p.name.empty()) out << "%name " << p.name << "\n";
  ProofConfig defaults;
  if (p.config.max_depth != defaults.max_depth) out << "%depth " << p.config.max_depth << "\n";
  if (p.config.max_inferences != defaults.max_inferences) out << "%inferences " << p.config.max_inferences << "\n";
  if (!p.invented.empty()) out << "%invented " << p.invented.size() << "\n";
  out << "%pos\n";
  for (const auto& a : p.pos) out << to_string(a) << ".\n";
  out << "%neg\n";
  for (const auto& a : p.neg) out << to_string(a) << ".\n";
  out << "%bk\n";
  for (const auto& c : p.bk) out << to_string(c) << "\n";
  out << "%metarules\n";
  for (const auto& m : p.metarules) {
    auto lib = m.name.empty() ? std::nullopt : library_metarule(m.name);
    if (lib && lib->name == m.name && canonical_key(*lib) == canonical_key(m)) {
      out << "name " << m.name << ".\n";
      continue;
    }
    out << to_string(m.taxon) << " ";
    if (!m.name.empty()) out << m.name << ": ";
    out << to_string(m.clause, Mode::metarule) << "\n";
  }
  return out.str();
}

MilProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  MilProblem p = parse_problem(buf.str());
  if (p.name.empty()) {
    auto slash = path.find_last_of('/');
    p.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
  }
  return p;
}

MilProblem gen_anbn(std::size_t n_max) {
  if (n_max == 0) throw Error("n_max must be at least 1");
  MilProblem p;
  p.name = "anbn";
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<Term> items;
    for (std::size_t i = 0; i < n; ++i) items.push_back(Term::constant("a"));
    for (std::size_t i = 0; i < n; ++i) items.push_back(Term::constant("b"));
    p.pos.emplace_back(Term::constant("s"), std::vector<Term>{Term::list(items), Term::list({})});
  }
  p.bk = {parse_clause("a([a|X],X)."), parse_clause("b([b|X],X).")};
  p.metarules = {*library_metarule("Chain")};
  p.invented = default_invented_pool(1);
  return p;
}

std::pair<MilProblem, MilProblem> gen_analogy_problems() {
  MilProblem parents;
  parents.name = "parents";
  parents.pos = {parse_atom("parents(kostas,dora,stassa)")};
  parents.bk = {parse_clause("father(kostas,stassa)."), parse_clause("mother(dora,stassa).")};
  parents.metarules = {analogy_m1()};

  MilProblem bounded;
  bounded.name = "bounded_by";
  bounded.pos = {parse_atom("bounded_by(1,2,3)"), parse_atom("bounded_by(3,2,1)")};
  for (const char* f : {"lt(1,3).", "lt(1,2).", "lt(2,3).", "gt(2,1).", "gt(3,1).", "gt(3,2)."})
    bounded.bk.push_back(parse_clause(f));
  bounded.metarules = {analogy_m1()};
  return {parents, bounded};
}

std::optional<Noise> parse_noise(std::string_view s) {
  std::string k = lower(s);
  if (k == "none") return Noise::none;
  if (k == "false_pos" || k == "false-pos" || k == "false_positives") return Noise::false_pos;
  if (k == "false_neg" || k == "false-neg" || k == "false_negatives") return Noise::false_neg;
  if (k == "ambiguities" || k == "both") return Noise::ambiguities;
  return std::nullopt;
}

std::string_view to_string(Noise n) {
  switch (n) {
    case Noise::none: return "none";
    case Noise::false_pos: return "false_pos";
    case Noise::false_neg: return "false_neg";
    case Noise::ambiguities: return "ambiguities";
  }
  return "?";
}

MilProblem gen_coloured_graph(std::size_t nodes, Noise noise, double rate, std::uint64_t seed, std::size_t colours) {
  if (nodes < 2) throw Error("coloured graph needs at least 2 nodes");
  if (colours < 1) throw Error("coloured graph needs at least 1 colour");
  if (!(rate >= 0.0 && rate <= 1.0)) throw Error("noise rate must be in [0,1]");
  static const char* names[] = {"red", "blue", "green", "yellow", "purple", "orange"};
  auto colour_name = [&](std::size_t i) {
    return i < std::size(names) ? std::string(names[i]) : "colour" + std::to_string(i);
  };
  auto node = [](std::size_t i) { return Term::constant("n" + std::to_string(i)); };

  MilProblem p;
  p.name = "coloured_graph_" + std::string(to_string(noise));
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = 0; j < nodes; ++j)
      if (i != j) p.bk.emplace_back(Atom(Term::constant("edge"), {node(i), node(j)}), std::vector<Atom>{});
  for (std::size_t i = 0; i < nodes; ++i)
    p.bk.emplace_back(Atom(Term::constant(colour_name(i % colours)), {node(i)}), std::vector<Atom>{});

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(rate);
  bool flip_pos = noise == Noise::false_neg || noise == Noise::ambiguities;
  bool flip_neg = noise == Noise::false_pos || noise == Noise::ambiguities;
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = 0; j < nodes; ++j) {
      if (i == j) continue;
      bool same = i % colours == j % colours;
      // draw for every pair so the stream does not depend on the noise kind
      bool f = flip(rng);
      bool label = same;
      if ((same && flip_pos && f) || (!same && flip_neg && f)) label = !label;
      Atom a(Term::constant("connected"), {node(i), node(j)});
      (label ? p.pos : p.neg).push_back(std::move(a));
    }
  p.metarules = canonical_h22();
  return p;
}

MilProblem gen_grid_world(std::size_t width, std::size_t height) {
  if (width < 1 || height < 1) throw Error("grid dimensions must be at least 1");
  auto cell = [](std::size_t x, std::size_t y) {
    return Term::constant("c" + std::to_string(x) + "_" + std::to_string(y));
  };
  auto fact = [](const char* pred, Term a, Term b) {
    return Clause(Atom(Term::constant(pred), {std::move(a), std::move(b)}), {});
  };
  MilProblem p;
  p.name = "grid_world";
  for (std::size_t x = 0; x < width; ++x)
    for (std::size_t y = 0; y < height; ++y) {
      if (y + 1 < height) p.bk.push_back(fact("up", cell(x, y), cell(x, y + 1)));
      if (y > 0) p.bk.push_back(fact("down", cell(x, y), cell(x, y - 1)));
      if (x > 0) p.bk.push_back(fact("left", cell(x, y), cell(x - 1, y)));
      if (x + 1 < width) p.bk.push_back(fact("right", cell(x, y), cell(x + 1, y)));
    }
  for (std::size_t x = 0; x < width; ++x)
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t u = 0; u < width; ++u)
        for (std::size_t v = 0; v < height; ++v)
          p.pos.emplace_back(Term::constant("move"), std::vector<Term>{cell(x, y), cell(u, v)});
  p.metarules = canonical_h22();
  p.invented = default_invented_pool(2);
  return p;
}

}  // namespace mil
