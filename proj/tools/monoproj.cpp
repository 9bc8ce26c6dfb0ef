#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "monoproj/dsl.hpp"

int main(int argc, char** argv) {
  CLI::App app{"coherent sheaves on the monoid projective line"};
  std::string script_path;
  bool json_out = false;
  std::string dot_path;
  std::string field_spec = "q";
  long long window = 0;

  app.add_option("script", script_path, "script file; '-' or absent reads stdin");
  app.add_flag("--json", json_out, "emit one indented JSON document on stdout");
  app.add_option("--dot", dot_path, "write the output of dot commands to this file");
  app.add_option("--field", field_spec, "default basechange field, q or f<p>");
  auto* wopt = app.add_option("--window", window, "degree window for gammastar and betacheck");

  CLI11_PARSE(app, argc, argv);

  std::string text;
  if (script_path.empty() || script_path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream f(script_path);
    if (!f) {
      std::cerr << "cannot read '" << script_path << "'\n";
      return 1;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    text = buf.str();
  }

  monoproj::RunOptions opt;
  if (wopt->count() > 0) opt.window = window;
  if (!dot_path.empty()) opt.dot_path = dot_path;
  try {
    if (field_spec == "q" || field_spec == "Q") {
      opt.field = monoproj::FieldCtx::Q();
    } else if (field_spec.size() >= 2 && (field_spec[0] == 'f' || field_spec[0] == 'F')) {
      opt.field = monoproj::FieldCtx::Fp(std::stoll(field_spec.substr(1)));
    } else {
      std::cerr << "bad --field '" << field_spec << "'\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    const monoproj::RunResult res = monoproj::run_text(text, opt);
    for (const auto& d : res.diagnostics) std::cerr << d.render() << "\n";
    if (json_out) {
      std::cout << res.outputs.dump(2) << "\n";
    } else {
      for (const auto& entry : res.outputs) std::cout << entry.dump() << "\n";
    }
    return res.exit_code;
  } catch (const monoproj::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
