#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "conesemi/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"conesemi: dissipativity, positivity and representation checks on polyhedral cones"};
  app.require_subcommand(1);

  conesemi::CommandOptions opts;
  std::string file;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string json_out;
  bool quiet = false;
  std::vector<std::size_t> ns;
  std::vector<double> t_grid;

  auto add_common = [&](CLI::App* sub, bool file_required) {
    auto* f = sub->add_option("--file", file, "JSON problem file")->check(CLI::ExistingFile);
    if (file_required) f->required();
    sub->add_option("--seed", seed, "random seed (overrides the file and CONESEMI_SEED)");
    sub->add_option("--samples", samples, "number of random sample points");
    sub->add_option("--json-out", json_out, "write the JSON run report to PATH");
    sub->add_flag("--quiet", quiet, "suppress the text report");
  };
  add_common(app.add_subcommand("check-pod", "positive off-diagonal property"), true);
  add_common(app.add_subcommand("check-dissipative", "p-dissipativity on sampled domain points"), true);
  add_common(app.add_subcommand("simulate", "contractivity and positivity of the generated semigroup"), true);
  add_common(app.add_subcommand("represent", "represent a positive functional by a measure on states"), true);
  auto* demo = app.add_subcommand("dirichlet-demo", "second derivative with Dirichlet boundary conditions");
  add_common(demo, false);
  demo->add_option("--n", ns, "interior grid sizes (default 15 31 63)");
  auto* tg_opt = demo->add_option("--t-grid", t_grid, "times at which T(t) is checked (default 0.1 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!file.empty()) opts.file = file;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--samples")) opts.samples = samples;
  if (const char* env = std::getenv("CONESEMI_SEED")) opts.env_seed = env;
  opts.n_values = ns;
  if (tg_opt->count() > 0) opts.t_grid = t_grid;

  const auto res = conesemi::run_command(sub->get_name(), opts);
  if (!quiet) std::cout << res.text;
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) {
      std::cerr << "cannot write " << json_out << "\n";
      return 2;
    }
    out << res.report.dump(2) << "\n";
  }
  return res.exit_code;
}
