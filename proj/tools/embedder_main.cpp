#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "bwt/harness.hpp"

namespace {

int run(bwt::ExperimentConfig cfg, const std::string& out_path, bool verbose) {
  std::unique_ptr<std::ofstream> file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file = std::make_unique<std::ofstream>(out_path);
    if (!*file) {
      std::cerr << "error: cannot open " << out_path << " for writing\n";
      return 3;
    }
    out = file.get();
  }
  *out << bwt::csv_header() << '\n';
  const std::uint64_t first = cfg.seed;
  const int runs = cfg.runs;
  for (int q = 0; q < runs; ++q) {
    cfg.seed = first + q;
    bwt::RunRecord rec = bwt::run_pipeline(cfg);
    *out << bwt::csv_row(rec) << '\n';
    out->flush();
    if (verbose) {
      if (!rec.success) std::cerr << "seed " << cfg.seed << ": " << rec.failure_message << '\n';
      for (const auto& w : rec.warnings) std::cerr << "seed " << cfg.seed << ": warning: " << w << '\n';
    }
  }
  if (!*out) {
    std::cerr << "error: write failed\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spanning bandwidth-bounded subgraph embedder"};
  app.require_subcommand(1);
  CLI::App* cmd = app.add_subcommand("run", "Run the embedding pipeline and write CSV rows");

  std::string config_path, out_path;
  bool verbose = false;
  std::map<std::string, std::string> overrides;
  cmd->add_option("--config", config_path, "key = value config file");
  cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  cmd->add_flag("-v,--verbose", verbose, "Print failure messages and warnings to stderr");
  for (const char* key : {"n", "p", "k", "gamma", "seed", "guest", "adversary", "eps", "d", "mode", "runs", "xi",
                          "mu", "beta", "graph", "paley_q", "nu"}) {
    auto* opt = cmd->add_option_function<std::string>(
        std::string("--") + key, [&overrides, key](const std::string& v) { overrides[key] = v; });
    (void)opt;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  bwt::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read " << config_path << '\n';
        return 3;
      }
      bwt::apply_config_text(cfg, in);
    }
    for (const auto& [key, value] : overrides) bwt::apply_config_value(cfg, key, value);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return run(cfg, out_path, verbose);
}
