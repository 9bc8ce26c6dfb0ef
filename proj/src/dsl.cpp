#include "monoproj/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "monoproj/json_io.hpp"

namespace monoproj {

namespace {

using nlohmann::json;

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SrcPos pos;
};

struct Bail {};

const std::set<std::string>& verbs() {
  static const std::set<std::string> v = {"classify", "decompose", "iso",        "gamma",
                                          "gammastar", "twist",     "globgen",   "betacheck",
                                          "basechange", "dot",      "points"};
  return v;
}

bool lex(const std::string& src, std::vector<Token>& out, std::vector<Diagnostic>& diags) {
  size_t i = 0;
  int line = 1, col = 1;
  const auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  const std::string punct = ";{},:=~*^-";
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    const SrcPos pos{line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string t;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t += src[i];
        advance();
      }
      out.push_back({Tok::Int, std::move(t), pos});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string t;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t += src[i];
        advance();
      }
      out.push_back({Tok::Ident, std::move(t), pos});
      continue;
    }
    if (punct.find(c) != std::string::npos) {
      out.push_back({Tok::Punct, std::string(1, c), pos});
      advance();
      continue;
    }
    diags.push_back({"E001", std::string("unexpected character '") + c + "'", pos});
    return false;
  }
  out.push_back({Tok::End, "", {line, col}});
  return true;
}

bool is_xvar(const std::string& s) {
  if (s.size() < 2 || s.size() > 7 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct Parser {
  std::vector<Token> toks;
  std::vector<Diagnostic>& diags;
  size_t at = 0;

  const Token& peek(size_t k = 0) const { return toks[std::min(at + k, toks.size() - 1)]; }
  Token take() {
    Token t = peek();
    if (t.kind != Tok::End) ++at;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) {
    diags.push_back({"E001", msg, peek().pos});
    throw Bail{};
  }
  bool is_punct(const std::string& p, size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_ident(const std::string& s, size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  void punct(const std::string& p) {
    if (!is_punct(p)) fail("expected '" + p + "'");
    take();
  }
  void keyword(const std::string& s) {
    if (!is_ident(s)) fail("expected '" + s + "'");
    take();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail("expected " + what);
    return take().text;
  }
  Exp integer() {
    bool neg = false;
    if (is_punct("-")) {
      take();
      neg = true;
    }
    if (peek().kind != Tok::Int) fail("expected an integer");
    const Token t = take();
    try {
      const Exp v = std::stoll(t.text);
      return neg ? -v : v;
    } catch (const std::exception&) {
      diags.push_back({"E001", "integer literal out of range", t.pos});
      throw Bail{};
    }
  }

  void tterm(std::string& gen, Exp& pow) {
    pow = 0;
    if (is_ident("t") && (is_punct("^", 1) || is_punct("*", 1))) {
      take();
      pow = 1;
      if (is_punct("^")) {
        take();
        pow = integer();
      }
      punct("*");
    }
    gen = ident("a generator name");
  }

  GTermDecl gterm() {
    GTermDecl t;
    while (peek().kind == Tok::Ident && is_xvar(peek().text) &&
           (is_punct("*", 1) || is_punct("^", 1))) {
      const Token v = take();
      const int idx = std::stoi(v.text.substr(1));
      Exp e = 1;
      if (is_punct("^")) {
        take();
        e = integer();
      }
      punct("*");
      t.mono.emplace_back(idx, e);
    }
    t.gen = ident("a generator name");
    return t;
  }

  MonoidDecl monoid() {
    MonoidDecl d;
    d.pos = peek().pos;
    keyword("monoid");
    d.name = ident("a monoid name");
    keyword("on");
    d.r = static_cast<int>(integer());
    punct(";");
    return d;
  }

  TModuleDecl tmodule() {
    TModuleDecl d;
    d.pos = peek().pos;
    keyword("tmodule");
    d.name = ident("a module name");
    punct("{");
    keyword("gens");
    d.gens.push_back(ident("a generator name"));
    while (is_punct(",")) {
      take();
      d.gens.push_back(ident("a generator name"));
    }
    punct(";");
    if (is_ident("rels")) {
      take();
      punct("{");
      while (!is_punct("}")) {
        TRelDecl r;
        r.pos = peek().pos;
        tterm(r.lgen, r.lpow);
        punct("=");
        if (peek().kind == Tok::Int && peek().text == "0") {
          take();
          r.to_zero = true;
        } else {
          tterm(r.rgen, r.rpow);
        }
        punct(";");
        d.rels.push_back(std::move(r));
      }
      punct("}");
    }
    punct("}");
    return d;
  }

  GModuleDecl gmodule() {
    GModuleDecl d;
    d.pos = peek().pos;
    keyword("gmodule");
    d.name = ident("a module name");
    keyword("over");
    d.r = static_cast<int>(integer());
    punct("{");
    keyword("gens");
    const auto one_gen = [&] {
      const std::string name = ident("a generator name");
      punct(":");
      d.gens.emplace_back(name, integer());
    };
    one_gen();
    while (is_punct(",")) {
      take();
      one_gen();
    }
    punct(";");
    if (is_ident("rels")) {
      take();
      punct("{");
      while (!is_punct("}")) {
        GRelDecl r;
        r.pos = peek().pos;
        r.lhs = gterm();
        punct("=");
        if (peek().kind == Tok::Int && peek().text == "0") {
          take();
          r.to_zero = true;
        } else {
          r.rhs = gterm();
        }
        punct(";");
        d.rels.push_back(std::move(r));
      }
      punct("}");
    }
    punct("}");
    return d;
  }

  SheafDecl sheaf() {
    SheafDecl d;
    d.pos = peek().pos;
    keyword("sheaf");
    d.name = ident("a sheaf name");
    keyword("on");
    if (!is_ident("P1")) fail("expected 'P1'");
    take();
    punct("{");
    keyword("plus");
    d.plus = ident("a module name");
    punct(";");
    keyword("minus");
    d.minus = ident("a module name");
    punct(";");
    keyword("glue");
    punct("{");
    while (!is_punct("}")) {
      GlueDecl g;
      g.pos = peek().pos;
      if (is_ident("line")) {
        take();
      } else if (is_ident("cycle")) {
        take();
        g.cycle = true;
        g.k = integer();
      } else {
        fail("expected 'line' or 'cycle'");
      }
      g.plus_gen = ident("a generator name");
      punct("~");
      g.minus_gen = ident("a generator name");
      keyword("shift");
      g.shift = integer();
      punct(";");
      d.glue.push_back(std::move(g));
    }
    punct("}");
    punct("}");
    return d;
  }

  CommandDecl cmd() {
    CommandDecl c;
    c.pos = peek().pos;
    c.verb = take().text;
    while (!is_punct(";")) {
      if (peek().kind == Tok::End) fail("expected ';'");
      if (is_punct("-")) {
        const SrcPos p = peek().pos;
        c.args.push_back(std::to_string(integer()));
        c.arg_pos.push_back(p);
        continue;
      }
      if (peek().kind == Tok::Punct) fail("unexpected '" + peek().text + "' in command arguments");
      const Token t = take();
      c.args.push_back(t.text);
      c.arg_pos.push_back(t.pos);
    }
    punct(";");
    return c;
  }
};

struct Printer {
  std::ostringstream out;

  void tterm(const std::string& gen, Exp pow) {
    if (pow != 0) {
      out << "t";
      if (pow != 1) out << "^" << pow;
      out << "*";
    }
    out << gen;
  }

  void gterm(const GTermDecl& t) {
    for (const auto& [v, e] : t.mono) {
      out << "x" << v;
      if (e != 1) out << "^" << e;
      out << "*";
    }
    out << t.gen;
  }

  void operator()(const MonoidDecl& d) { out << "monoid " << d.name << " on " << d.r << ";\n"; }

  void operator()(const TModuleDecl& d) {
    out << "tmodule " << d.name << " {\n  gens ";
    for (size_t i = 0; i < d.gens.size(); ++i) out << (i ? ", " : "") << d.gens[i];
    out << ";\n";
    if (!d.rels.empty()) {
      out << "  rels {\n";
      for (const TRelDecl& r : d.rels) {
        out << "    ";
        tterm(r.lgen, r.lpow);
        out << " = ";
        if (r.to_zero)
          out << "0";
        else
          tterm(r.rgen, r.rpow);
        out << ";\n";
      }
      out << "  }\n";
    }
    out << "}\n";
  }

  void operator()(const GModuleDecl& d) {
    out << "gmodule " << d.name << " over " << d.r << " {\n  gens ";
    for (size_t i = 0; i < d.gens.size(); ++i)
      out << (i ? ", " : "") << d.gens[i].first << ": " << d.gens[i].second;
    out << ";\n";
    if (!d.rels.empty()) {
      out << "  rels {\n";
      for (const GRelDecl& r : d.rels) {
        out << "    ";
        gterm(r.lhs);
        out << " = ";
        if (r.to_zero)
          out << "0";
        else
          gterm(r.rhs);
        out << ";\n";
      }
      out << "  }\n";
    }
    out << "}\n";
  }

  void operator()(const SheafDecl& d) {
    out << "sheaf " << d.name << " on P1 {\n  plus " << d.plus << ";\n  minus " << d.minus
        << ";\n  glue {\n";
    for (const GlueDecl& g : d.glue) {
      out << "    ";
      if (g.cycle)
        out << "cycle " << g.k << " ";
      else
        out << "line ";
      out << g.plus_gen << " ~ " << g.minus_gen << " shift " << g.shift << ";\n";
    }
    out << "  }\n}\n";
  }

  void operator()(const CommandDecl& c) {
    out << c.verb;
    for (const std::string& a : c.args) out << " " << a;
    out << ";\n";
  }
};

struct EvalError {
  std::string code;
  std::string message;
  std::optional<SrcPos> pos;
};

struct Evaluator {
  Session& ss;
  const RunOptions& opt;
  RunResult& res;

  void check_fresh(const std::string& name) {
    if (ss.monoids.count(name) || ss.tmodules.count(name) || ss.gmodules.count(name) ||
        ss.sheaves.count(name))
      throw EvalError{"E003", "name '" + name + "' is already declared", std::nullopt};
  }

  static int lookup(const std::map<std::string, int>& idx, const std::string& name, SrcPos pos) {
    const auto it = idx.find(name);
    if (it == idx.end()) throw EvalError{"E002", "undeclared generator '" + name + "'", pos};
    return it->second;
  }

  void run(const MonoidDecl& d) {
    check_fresh(d.name);
    if (d.r < 0 || d.r > 16) throw EvalError{"E003", "r out of range", d.pos};
    ss.monoids.emplace(d.name, d.r);
  }

  void run(const TModuleDecl& d) {
    check_fresh(d.name);
    TPresentation p;
    std::map<std::string, int> idx;
    for (const std::string& g : d.gens) {
      if (g == "t") throw EvalError{"E003", "'t' is reserved", d.pos};
      if (!idx.emplace(g, p.ngens()).second)
        throw EvalError{"E003", "duplicate generator '" + g + "'", d.pos};
      p.gens.push_back(g);
    }
    for (const TRelDecl& r : d.rels) {
      if (r.lpow < 0 || (!r.to_zero && r.rpow < 0))
        throw EvalError{"E003", "negative exponent", r.pos};
      TRel t;
      t.gi = lookup(idx, r.lgen, r.pos);
      t.a = r.lpow;
      t.to_zero = r.to_zero;
      if (!r.to_zero) {
        t.gj = lookup(idx, r.rgen, r.pos);
        t.b = r.rpow;
      }
      p.rels.push_back(t);
    }
    ModuleEntry e;
    e.pres = std::move(p);
    e.norm = normalize(e.pres);
    ss.tmodules.emplace(d.name, std::move(e));
  }

  void run(const GModuleDecl& d) {
    check_fresh(d.name);
    if (d.r < 0 || d.r > 16) throw EvalError{"E003", "r out of range", d.pos};
    GradedPresentation m;
    m.ambient = free_graded_monoid(d.r);
    std::map<std::string, int> idx;
    for (const auto& [name, deg] : d.gens) {
      if (name == "t" || is_xvar(name))
        throw EvalError{"E003", "'" + name + "' is reserved", d.pos};
      if (!idx.emplace(name, m.ngens()).second)
        throw EvalError{"E003", "duplicate generator '" + name + "'", d.pos};
      m.gens.push_back(name);
      m.deg.push_back(deg);
    }
    const auto term = [&](const GTermDecl& t, SrcPos pos) {
      std::vector<Exp> e(static_cast<size_t>(d.r) + 1, 0);
      for (const auto& [v, pw] : t.mono) {
        if (v > d.r)
          throw EvalError{"E003", "variable x" + std::to_string(v) + " is out of range", pos};
        if (pw < 0) throw EvalError{"E003", "negative exponent", pos};
        e[static_cast<size_t>(v)] += pw;
      }
      return std::make_pair(lookup(idx, t.gen, pos), MonoidValue::monomial(std::move(e)));
    };
    for (const GRelDecl& r : d.rels) {
      GRel g;
      std::tie(g.gi, g.a) = term(r.lhs, r.pos);
      g.to_zero = r.to_zero;
      if (!r.to_zero) std::tie(g.gj, g.b) = term(r.rhs, r.pos);
      m.rels.push_back(std::move(g));
    }
    try {
      m.validate();
    } catch (const Error& e) {
      throw EvalError{"E003", e.what(), d.pos};
    }
    ss.gmodules.emplace(d.name, std::move(m));
  }

  const ModuleEntry& find_tmodule(const std::string& name, SrcPos pos) {
    const auto it = ss.tmodules.find(name);
    if (it == ss.tmodules.end())
      throw EvalError{"E002", "undeclared module '" + name + "'", pos};
    return it->second;
  }

  void run(const SheafDecl& d) {
    check_fresh(d.name);
    const ModuleEntry& P = find_tmodule(d.plus, d.pos);
    const ModuleEntry& M = find_tmodule(d.minus, d.pos);
    const ZOrbitData zp = localize(P.norm.graph);
    const ZOrbitData zm = localize(M.norm.graph);
    std::map<std::string, int> pidx, midx;
    for (int i = 0; i < P.pres.ngens(); ++i) pidx[P.pres.gens[static_cast<size_t>(i)]] = i;
    for (int i = 0; i < M.pres.ngens(); ++i) midx[M.pres.gens[static_cast<size_t>(i)]] = i;

    const auto anchor = [&](const ZOrbitData& z, const NormalizeResult& norm,
                            const std::map<std::string, int>& idx, const std::string& gen,
                            const GlueDecl& g, const char* side) {
      const Elem e = norm.gen_image[static_cast<size_t>(lookup(idx, gen, g.pos))];
      if (e.is_star())
        throw EvalError{"E003", std::string(side) + " generator '" + gen + "' is zero", g.pos};
      const auto q = elem_orbit_pos(z, e);
      if (!q)
        throw EvalError{"E003",
                        std::string(side) + " generator '" + gen + "' is torsion and names no orbit",
                        g.pos};
      const Orbit& ob = z.orbits[static_cast<size_t>(q->orbit)];
      if (g.cycle && (!ob.cycle || ob.k != g.k))
        throw EvalError{"E003",
                        std::string(side) + " generator '" + gen + "' does not sit on a cycle of length " +
                            std::to_string(g.k),
                        g.pos};
      if (!g.cycle && ob.cycle)
        throw EvalError{"E003", std::string(side) + " generator '" + gen + "' sits on a cycle, not a line",
                        g.pos};
      return *q;
    };

    std::vector<MatchedPair> matching;
    for (const GlueDecl& g : d.glue) {
      const OrbitPos qp = anchor(zp, P.norm, pidx, g.plus_gen, g, "plus");
      const OrbitPos qm = anchor(zm, M.norm, midx, g.minus_gen, g, "minus");
      matching.push_back({qp.orbit, qm.orbit, qp.pos + qm.pos + g.shift});
    }
    try {
      ss.sheaves.emplace(d.name, make_sheaf(P.norm.graph, M.norm.graph, std::move(matching)));
    } catch (const Error& e) {
      throw EvalError{"E003", e.what(), d.pos};
    }
  }

  P1Sheaf materialize_sheaf(const std::string& name, SrcPos pos) {
    if (const auto it = ss.sheaves.find(name); it != ss.sheaves.end()) return it->second;
    if (const auto it = ss.gmodules.find(name); it != ss.gmodules.end()) {
      try {
        return sheafify(it->second).sheaf;
      } catch (const Error& e) {
        throw EvalError{"E003", e.what(), pos};
      }
    }
    if (ss.tmodules.count(name))
      throw EvalError{"E003", "'" + name + "' is a module over <t>, not a sheaf", pos};
    throw EvalError{"E002", "undeclared sheaf '" + name + "'", pos};
  }

  static Exp int_arg(const CommandDecl& c, size_t i) {
    try {
      size_t used = 0;
      const Exp v = std::stoll(c.args[i], &used);
      if (used != c.args[i].size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw EvalError{"E003", "expected an integer argument", c.arg_pos[i]};
    }
  }

  void need_args(const CommandDecl& c, size_t n) {
    if (c.args.size() != n)
      throw EvalError{"E003", c.verb + " expects " + std::to_string(n) + " argument(s)", c.pos};
  }

  static const char* type_name(int t) {
    return t == 1 ? "Type1" : t == 2 ? "Type2" : "Type3";
  }

  static json component_json(const FunctionalGraph& comp) {
    const ComponentType t = classify_component(comp);
    json entry{{"type", type_name(t.type)}, {"canonical", canonical_component(comp)}};
    if (t.type == 3) entry["cycle_len"] = t.cycle_len;
    return entry;
  }

  void run(const CommandDecl& c) {
    json out;
    out["cmd"] = c.verb;
    if (!c.args.empty()) out["args"] = c.args;

    if (c.verb == "classify") {
      need_args(c, 1);
      const ModuleEntry& m = find_tmodule(c.args[0], c.arg_pos[0]);
      const Decomposition dec = decompose(m.norm.graph);
      json comps = json::array();
      for (const FunctionalGraph& part : dec.parts) comps.push_back(component_json(part));
      if (dec.parts.size() == 1) {
        out["type"] = comps[0]["type"];
        if (comps[0].contains("cycle_len")) out["cycle_len"] = comps[0]["cycle_len"];
      }
      out["components"] = std::move(comps);
      out["canonical"] = canonical_form(m.norm.graph);
    } else if (c.verb == "decompose") {
      need_args(c, 1);
      if (const auto it = ss.tmodules.find(c.args[0]); it != ss.tmodules.end()) {
        const Decomposition dec = decompose(it->second.norm.graph);
        json comps = json::array();
        for (const FunctionalGraph& part : dec.parts) comps.push_back(component_json(part));
        out["components"] = std::move(comps);
        out["canonical"] = canonical_form(it->second.norm.graph);
      } else {
        const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
        json comps = json::array();
        for (const SheafSummand& s : sheaf_decompose(F)) {
          const char* kind = s.kind == SheafSummand::Kind::TorsionPlus    ? "torsion_plus"
                             : s.kind == SheafSummand::Kind::TorsionMinus ? "torsion_minus"
                             : s.kind == SheafSummand::Kind::Line         ? "line"
                                                                          : "cycle";
          comps.push_back(json{{"kind", kind}, {"canonical", s.canonical}});
        }
        out["components"] = std::move(comps);
        out["canonical"] = sheaf_canonical(F);
      }
    } else if (c.verb == "iso") {
      need_args(c, 2);
      const bool am = ss.tmodules.count(c.args[0]) > 0;
      const bool bm = ss.tmodules.count(c.args[1]) > 0;
      if (am != bm)
        throw EvalError{"E003", "iso needs two modules or two sheaves", c.pos};
      if (am) {
        out["isomorphic"] = is_isomorphic(find_tmodule(c.args[0], c.arg_pos[0]).norm.graph,
                                          find_tmodule(c.args[1], c.arg_pos[1]).norm.graph);
      } else {
        out["isomorphic"] = sheaf_is_isomorphic(materialize_sheaf(c.args[0], c.arg_pos[0]),
                                                materialize_sheaf(c.args[1], c.arg_pos[1]));
      }
    } else if (c.verb == "gamma") {
      need_args(c, 1);
      const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
      const auto secs = global_sections(F);
      out["count"] = secs.size();
      out["sections"] = sections_to_json(F, secs);
    } else if (c.verb == "gammastar") {
      need_args(c, 1);
      const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
      const Exp w = opt.window ? *opt.window : gamma_star_default_window(F);
      out["window"] = w;
      out["module"] = graded_to_json(gamma_star(F, w));
    } else if (c.verb == "twist") {
      need_args(c, 2);
      const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
      const Exp n = int_arg(c, 1);
      const P1Sheaf tw = sheaf_twist(F, n);
      out["n"] = n;
      out["canonical"] = sheaf_canonical(tw);
      out["sections"] = global_sections(tw).size();
    } else if (c.verb == "globgen") {
      need_args(c, 1);
      const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
      const auto g = global_generation(F);
      if (g) {
        out["n0"] = g->n0;
        out["sections"] = g->sections.size();
      } else {
        out["n0"] = nullptr;
      }
    } else if (c.verb == "betacheck") {
      need_args(c, 1);
      const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
      const BetaCheckResult r = beta_check(F, opt.window);
      out["ok"] = r.ok;
      out["window"] = r.window;
    } else if (c.verb == "basechange") {
      FieldCtx field = opt.field;
      if (c.args.size() == 3 && c.args[1] == "field") {
        const std::string& spec = c.args[2];
        if (spec == "q" || spec == "Q") {
          field = FieldCtx::Q();
        } else if (spec.size() >= 2 && (spec[0] == 'f' || spec[0] == 'F')) {
          try {
            field = FieldCtx::Fp(std::stoll(spec.substr(1)));
          } catch (const Error& e) {
            throw EvalError{"E003", e.what(), c.arg_pos[2]};
          } catch (const std::exception&) {
            throw EvalError{"E003", "bad field '" + spec + "'", c.arg_pos[2]};
          }
        } else {
          throw EvalError{"E003", "bad field '" + spec + "'", c.arg_pos[2]};
        }
      } else if (c.args.size() != 1) {
        throw EvalError{"E003", "basechange expects: basechange F [field q|f<p>]", c.pos};
      }
      const P1Sheaf F = materialize_sheaf(c.args[0], c.arg_pos[0]);
      const json rep = report_to_json(phi_K(F, field));
      for (const auto& [k, v] : rep.items()) out[k] = v;
    } else if (c.verb == "dot") {
      need_args(c, 1);
      std::string text;
      if (const auto it = ss.tmodules.find(c.args[0]); it != ss.tmodules.end())
        text = graph_to_dot(it->second.norm.graph, c.args[0]);
      else
        text = sheaf_to_dot(materialize_sheaf(c.args[0], c.arg_pos[0]), c.args[0]);
      if (opt.dot_path) {
        std::ofstream f(*opt.dot_path);
        if (!f) throw EvalError{"E003", "cannot write '" + *opt.dot_path + "'", c.pos};
        f << text;
        out["written"] = *opt.dot_path;
      } else {
        out["dot"] = text;
      }
    } else if (c.verb == "points") {
      need_args(c, 1);
      int r = 0;
      if (const auto it = ss.monoids.find(c.args[0]); it != ss.monoids.end()) {
        r = it->second;
      } else if (!c.args[0].empty() &&
                 (std::isdigit(static_cast<unsigned char>(c.args[0][0])) || c.args[0][0] == '-')) {
        r = static_cast<int>(int_arg(c, 0));
      } else {
        throw EvalError{"E002", "undeclared monoid '" + c.args[0] + "'", c.arg_pos[0]};
      }
      if (r < 0 || r > 16) throw EvalError{"E003", "r out of range", c.pos};
      const auto pts = mproj_points(r);
      out["r"] = r;
      out["count"] = pts.size();
      json arr = json::array();
      for (const PrimePoint& p : pts) arr.push_back(p.T);
      out["points"] = std::move(arr);
    } else {
      throw EvalError{"E001", "unknown command '" + c.verb + "'", c.pos};
    }
    res.outputs.push_back(std::move(out));
  }
};

}  // namespace

std::string Diagnostic::render() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + code + ": " + message;
}

ParseResult parse_script(const std::string& text) {
  ParseResult res;
  std::vector<Token> toks;
  if (!lex(text, toks, res.diagnostics)) return res;
  Parser p{std::move(toks), res.diagnostics};
  try {
    while (p.peek().kind != Tok::End) {
      if (p.peek().kind != Tok::Ident) p.fail("expected a declaration or command");
      const std::string& w = p.peek().text;
      if (w == "monoid")
        res.script.items.push_back(p.monoid());
      else if (w == "tmodule")
        res.script.items.push_back(p.tmodule());
      else if (w == "gmodule")
        res.script.items.push_back(p.gmodule());
      else if (w == "sheaf")
        res.script.items.push_back(p.sheaf());
      else if (verbs().count(w))
        res.script.items.push_back(p.cmd());
      else
        p.fail("unknown declaration '" + w + "'");
    }
    res.ok = true;
  } catch (const Bail&) {
  }
  return res;
}

std::string print_script(const Script& s) {
  Printer p;
  for (const ScriptItem& item : s.items) std::visit(p, item);
  return p.out.str();
}

RunResult run_script(const Script& s, const RunOptions& opt, Session* session) {
  RunResult res;
  Session local;
  Session& ss = session ? *session : local;
  Evaluator ev{ss, opt, res};
  for (const ScriptItem& item : s.items) {
    const SrcPos pos = std::visit([](const auto& n) { return n.pos; }, item);
    try {
      std::visit([&](const auto& n) { ev.run(n); }, item);
    } catch (EvalError& e) {
      res.diagnostics.push_back({e.code, e.message, e.pos.value_or(pos)});
    } catch (const InternalError& e) {
      res.diagnostics.push_back({"internal", e.what(), pos});
      res.exit_code = 2;
      return res;
    } catch (const Error& e) {
      res.diagnostics.push_back({"E003", e.what(), pos});
    }
  }
  if (!res.diagnostics.empty() && res.exit_code == 0) res.exit_code = 1;
  return res;
}

RunResult run_text(const std::string& text, const RunOptions& opt) {
  const ParseResult pr = parse_script(text);
  if (!pr.ok) {
    RunResult res;
    res.diagnostics = pr.diagnostics;
    res.exit_code = 1;
    return res;
  }
  return run_script(pr.script, opt);
}

}  // namespace monoproj
