#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bunched/io.hpp"

using namespace bunched;

namespace {

const char* kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Parse: return "parse";
    case ErrKind::Validation: return "validation";
    default: return "unsupported";
  }
}

int exit_code(ErrKind k) {
  switch (k) {
    case ErrKind::Parse: return 2;
    case ErrKind::Validation: return 3;
    default: return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toolkit for graded rings with at most one relation"};
  app.require_subcommand(1);

  std::string file, file_b, script_path;
  bool ring = false, toric = false, want_json = false, want_text = false;
  long max_vars = bunch::kDefaultMaxVars;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "input document")->required();
    CLI::Option* r =
        sub->add_flag("--ring", ring, "faces cut out by the relation (default)");
    CLI::Option* t =
        sub->add_flag("--toric", toric, "all faces of the positive orthant");
    r->excludes(t);
    t->excludes(r);
    CLI::Option* js = sub->add_flag("--json", want_json, "machine readable report");
    CLI::Option* tx =
        sub->add_flag("--text", want_text, "human readable report (default)");
    js->excludes(tx);
    tx->excludes(js);
    sub->add_option("--max-vars", max_vars,
                    "cap on the variable count for face enumeration");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "full geometric report");
  add_common(analyze);
  CLI::App* gitfan =
      app.add_subcommand("gitfan", "chamber decomposition of the weight cone");
  add_common(gitfan);
  CLI::App* modify =
      app.add_subcommand("modify", "run a modification script");
  add_common(modify);
  modify->add_option("--script", script_path, "script file; overrides the document");
  CLI::App* reduce = app.add_subcommand(
      "reduce", "contract toward a combinatorially minimal model");
  add_common(reduce);
  CLI::App* compare =
      app.add_subcommand("compare", "equivalence of two documents");
  add_common(compare);
  compare->add_option("file_b", file_b, "second document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    io::json rep;
    if (analyze->parsed()) {
      rep = io::report_analyze(io::load_input(file), toric, max_vars);
    } else if (gitfan->parsed()) {
      rep = io::report_gitfan(io::load_input(file), toric, max_vars);
    } else if (modify->parsed()) {
      io::InputDocument doc = io::load_input(file);
      std::vector<io::ScriptStep> steps =
          script_path.empty() ? doc.script : io::load_script(script_path);
      rep = io::report_modify(doc, steps, max_vars);
    } else if (reduce->parsed()) {
      rep = io::report_reduce(io::load_input(file), max_vars);
    } else {
      rep = io::report_compare(io::load_input(file), io::load_input(file_b));
    }
    if (want_json)
      std::cout << rep.dump(2) << "\n";
    else
      std::cout << io::render_text(rep);
    return 0;
  } catch (const Error& e) {
    if (want_json) {
      io::json err;
      err["error"]["kind"] = kind_name(e.kind);
      err["error"]["message"] = e.what();
      std::cerr << err.dump(2) << "\n";
    } else
      std::cerr << "error (" << kind_name(e.kind) << "): " << e.what() << "\n";
    return exit_code(e.kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
