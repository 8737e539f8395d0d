#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stagedtree/cli/cli.hpp"
#include "stagedtree/tree/dsl.hpp"

using namespace staged;

namespace {

void emit(const cli::Result& r, const std::string& format, bool table) {
  if (format == "json")
    std::cout << r.report.dump(2) << "\n";
  else if (table)
    std::cout << cli::render_table(r.report);
  else
    std::cout << cli::render_text(r.report);
}

int dot(const std::string& path) {
  try {
    std::cout << tree::to_dot(tree::load_tree(path));
    return cli::kOk;
  } catch (const tree::TreeError& e) {
    std::cerr << "invalid tree: " << e.what() << "\n";
    return cli::kInvalid;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return cli::kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric structure of staged tree models"};
  app.require_subcommand(1);

  std::string format = "text";
  std::uint64_t seed = 0;
  std::string budget = "default";
  std::string forms;
  std::string oracle = "on";
  bool timings = false;
  std::string path;

  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--seed", seed, "Seed for randomized stages");
  app.add_option("--budget", budget, "small, default, large, or key=value,... limits");
  app.add_option("--oracle", oracle, "Kernel oracle cross-check")->check(CLI::IsMember({"on", "off", "cache-only"}));
  app.add_flag("--timings", timings, "Per-stage wall-clock times in the report");

  auto* validate = app.add_subcommand("validate", "Parse and validate a tree file");
  validate->add_option("path", path, "Tree file")->required();
  auto* analyze = app.add_subcommand("analyze", "Classify a tree and certify toric structure");
  analyze->add_option("path", path, "Tree file")->required();
  analyze->add_option("--forms", forms, "Linear forms, one per line");
  auto* corpus = app.add_subcommand("corpus", "Analyse every .tree file of a directory");
  corpus->add_option("path", path, "Directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kUsage;
  }

  cli::Options opt;
  opt.seed = seed;
  opt.timings = timings;
  opt.oracle = oracle == "off" ? cli::OracleMode::Off
               : oracle == "cache-only" ? cli::OracleMode::CacheOnly
                                        : cli::OracleMode::On;
  if (const char* dir = std::getenv("STAGEDTREE_CACHE_DIR")) opt.cache_dir = dir;
  if (!forms.empty()) opt.forms_path = forms;
  try {
    opt.limits = cli::parse_budget(budget);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return cli::kUsage;
  }

  if (format == "dot") {
    if (*corpus) {
      std::cerr << "dot output needs a single tree\n";
      return cli::kUsage;
    }
    return dot(path);
  }

  cli::Result r;
  if (*validate)
    r = cli::cmd_validate(path);
  else if (*analyze)
    r = cli::cmd_analyze(path, opt);
  else
    r = cli::cmd_corpus(path, opt);
  emit(r, format, static_cast<bool>(*corpus));
  return r.exit_code;
}
