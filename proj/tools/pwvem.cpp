// pwvem: run one experiment series and write CSV / plot data.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "pwvem/config.hpp"
#include "pwvem/experiment.hpp"

namespace {

constexpr int kUsageExit = 2;
constexpr int kFailureExit = 1;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane-wave virtual element solver for the Helmholtz impedance problem"};
  std::string config_file;
  app.add_option("-c,--config", config_file, "key = value config file")->check(CLI::ExistingFile);

  // raw flag text, applied on top of the file
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const Flag flags[] = {
      {"--experiment", "experiment", "table1|voronoi_h|pconv|pollution|singular|patch|infsup"},
      {"--k", "k", "wave number"},
      {"--p", "p", "plane waves per vertex: 13, 3..17 (odd values) or 5,9,13"},
      {"--mesh", "mesh", "structured:N,..|voronoi:CELLS,..|chevron:N,..|file:PATH,.. (';' joins)"},
      {"--variant", "variant", "PWVEM,PUM,GRAD"},
      {"--out", "out", "output directory (default ./out)"},
      {"--offset", "offset", "direction offset angle in radians"},
      {"--seed", "seed", "random seed for Voronoi meshes and patch amplitudes"},
      {"--xi", "xi", "singular-solution orders, e.g. 1,3/2,2/3"},
      {"--hk", "hk", "pollution: fixed product h k"},
      {"--lloyd", "lloyd", "Lloyd sweeps for Voronoi meshes"},
      {"--evaluation", "evaluation", "auto|projection|basis"},
      {"--cells", "cells", "infsup: number of random cells"},
  };
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& f : flags) options.emplace_back(f.key, app.add_option(f.name, values[f.key], f.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  pwvem::ExperimentConfig config;
  try {
    pwvem::KeyValues kv;
    if (!config_file.empty()) kv = pwvem::read_config_file(config_file);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) kv.emplace_back(key, values[key]);
    pwvem::apply(config, kv);
    config = pwvem::resolve(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n" << "run with --help for the option list\n";
    return kUsageExit;
  }

  std::cout << "# resolved configuration\n";
  pwvem::write_config(std::cout, config);
  try {
    pwvem::run_and_write(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailureExit;
  }
  return 0;
}
