#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "monoproj/basechange.hpp"
#include "monoproj/grproj.hpp"
#include "monoproj/p1sheaf.hpp"
#include "monoproj/tmod.hpp"

namespace monoproj {

struct SrcPos {
  int line = 1;
  int col = 1;
};

/// E001 syntax error, E002 undeclared or duplicate name, E003 domain
/// violation (negative exponent, kind mismatch, non-bijective glue, ...).
struct Diagnostic {
  std::string code;
  std::string message;
  SrcPos pos;
  std::string render() const;
};

struct MonoidDecl {
  std::string name;
  int r = 1;
  SrcPos pos;
};

struct TRelDecl {
  std::string lgen;
  Exp lpow = 0;
  bool to_zero = false;
  std::string rgen;
  Exp rpow = 0;
  SrcPos pos;
};

/// tmodule M { gens a, b; rels { t^3*a = t*b; t*a = 0; } }
struct TModuleDecl {
  std::string name;
  std::vector<std::string> gens;
  std::vector<TRelDecl> rels;
  SrcPos pos;
};

struct GTermDecl {
  std::vector<std::pair<int, Exp>> mono;  // (variable index, exponent)
  std::string gen;
};

struct GRelDecl {
  GTermDecl lhs;
  bool to_zero = false;
  GTermDecl rhs;
  SrcPos pos;
};

/// gmodule A over 1 { gens e: -2; rels { x0^2*e = x1^2*e; } }
struct GModuleDecl {
  std::string name;
  int r = 1;
  std::vector<std::pair<std::string, Exp>> gens;  // name, degree
  std::vector<GRelDecl> rels;
  SrcPos pos;
};

/// line a ~ c shift 0;   cycle 3 a ~ c shift 1;
/// Generators name orbits through their images; shift 0 identifies the two
/// named elements themselves on the overlap.
struct GlueDecl {
  bool cycle = false;
  Exp k = 0;
  std::string plus_gen;
  std::string minus_gen;
  Exp shift = 0;
  SrcPos pos;
};

struct SheafDecl {
  std::string name;
  std::string plus;
  std::string minus;
  std::vector<GlueDecl> glue;
  SrcPos pos;
};

struct CommandDecl {
  std::string verb;
  std::vector<std::string> args;
  std::vector<SrcPos> arg_pos;
  SrcPos pos;
};

using ScriptItem = std::variant<MonoidDecl, TModuleDecl, GModuleDecl, SheafDecl, CommandDecl>;

struct Script {
  std::vector<ScriptItem> items;
};

struct ParseResult {
  Script script;
  std::vector<Diagnostic> diagnostics;
  bool ok = false;
};

ParseResult parse_script(const std::string& text);

/// Canonical text form; parsing the printed form reproduces the script.
std::string print_script(const Script& s);

struct ModuleEntry {
  TPresentation pres;
  NormalizeResult norm;
};

struct Session {
  std::map<std::string, int> monoids;  // name -> r
  std::map<std::string, ModuleEntry> tmodules;
  std::map<std::string, GradedPresentation> gmodules;
  std::map<std::string, P1Sheaf> sheaves;
};

struct RunOptions {
  std::optional<Exp> window;      // gammastar / betacheck window override
  FieldCtx field = FieldCtx::Q();  // default basechange field
  std::optional<std::string> dot_path;
};

struct RunResult {
  nlohmann::json outputs = nlohmann::json::array();  // one entry per command
  std::vector<Diagnostic> diagnostics;
  int exit_code = 0;  // 0 clean, 1 diagnostics, 2 internal invariant failure
};

/// Evaluates declarations and commands in order; a failing item is reported
/// and skipped. An optional session keeps declarations across calls.
RunResult run_script(const Script& s, const RunOptions& opt = {}, Session* session = nullptr);

/// parse_script + run_script, the CLI entry path.
RunResult run_text(const std::string& text, const RunOptions& opt = {});

}  // namespace monoproj
