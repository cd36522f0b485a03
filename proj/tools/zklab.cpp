// Command-line driver for the gZK laboratory: ground states, conservation
// runs, soliton propagation, the ill-posedness demonstration, pointwise
// convergence, the mass threshold study, norm reports and generic runs.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "zk/config.hpp"
#include "zk/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral laboratory for the critical gZK equation"};
  app.require_subcommand(1);

  const std::vector<std::string> scenarios = {
      "groundstate", "conservation", "soliton", "illposed",
      "pointwise",   "threshold",    "norms",   "run"};

  struct Options {
    std::string config;
    std::string out = "zklab_out";
    std::string resume;
    std::uint64_t seed = 0;
    bool seed_set = false;
  };
  std::map<std::string, Options> opts;

  for (const auto& name : scenarios) {
    CLI::App* sub = app.add_subcommand(name);
    Options& o = opts[name];
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&o](std::uint64_t s) {
          o.seed = s;
          o.seed_set = true;
        },
        "override the run seed");
    sub->add_option("--resume", o.resume, "checkpoint snapshot to resume");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  const Options& o = opts[name];
  try {
    zk::RunConfig cfg = o.config.empty()
                            ? zk::RunConfig()
                            : zk::RunConfig::parse_file(o.config);
    if (o.seed_set) cfg.set("seed", std::to_string(o.seed));
    if (!o.resume.empty()) cfg.set("resume", o.resume);
    const zk::ScenarioResult res = zk::run_scenario(name, cfg, o.out);
    for (const auto& [k, v] : res.summary)
      std::printf("%s = %s\n", k.c_str(), v.c_str());
    return res.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "zklab %s: %s\n", name.c_str(), e.what());
    return 2;
  }
}
