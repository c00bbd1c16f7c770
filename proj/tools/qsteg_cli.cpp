#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsteg/error.hpp"
#include "qsteg/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  bool csv = false;
  bool json = false;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw qsteg::Error(qsteg::ErrorKind::kConfig, "cannot write '" + path.string() + "'");
  f << text;
}

int run(const std::string& kind, const Flags& flags, const CLI::App& sub) {
  qsteg::RunOptions opts;
  opts.kind = kind;
  if (sub.count("--seed") > 0) opts.seed = flags.seed;
  const qsteg::ExperimentResult res =
      flags.config.empty() ? qsteg::run_experiment("{}", opts)
                           : qsteg::run_experiment_file(flags.config, opts);
  if (!flags.out.empty()) {
    std::filesystem::create_directories(flags.out);
    write_file(std::filesystem::path(flags.out) / (kind + ".csv"), res.csv());
    write_file(std::filesystem::path(flags.out) / (kind + ".json"), res.summary_json());
  }
  // With no output selected at all, the table goes to stdout.
  if (flags.csv || (!flags.json && flags.out.empty())) std::cout << res.csv();
  if (flags.json) std::cout << res.summary_json();
  if (!res.passed()) {
    std::cerr << kind << ": " << res.failures() << " of " << res.rows.size()
              << " rows failed their checks\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert quantum communication: rate evaluators, protocol simulations, verifiers"};
  app.require_subcommand(1);
  Flags flags;
  std::string selected;

  const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
      {"rates", {"cc-noiseless", "cc-noisy", "gaussian", "product"}},
      {"simulate", {"cc-noiseless", "cc-noisy", "cc-es", "es-rs", "qc-cc", "resolvability"}},
      {"verify", {"gentle", "pj-bound", "sutherland", "random-code"}},
  };
  std::vector<std::pair<CLI::App*, std::string>> leaves;
  for (const auto& [group, names] : groups) {
    CLI::App* g = app.add_subcommand(group, group + " experiments");
    g->require_subcommand(1);
    for (const auto& name : names) {
      CLI::App* s = g->add_subcommand(name, group + "." + name);
      s->add_option("--config", flags.config, "JSON experiment config")->check(CLI::ExistingFile);
      s->add_option("--seed", flags.seed, "master seed (overrides the config)");
      s->add_option("--out", flags.out, "directory for <kind>.csv and <kind>.json");
      s->add_flag("--csv", flags.csv, "print the CSV table to stdout");
      s->add_flag("--json", flags.json, "print the JSON summary to stdout");
      leaves.emplace_back(s, group + "." + name);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors share the exit code of every other error
  }

  for (const auto& [s, kind] : leaves) {
    if (!s->parsed()) continue;
    try {
      return run(kind, flags, *s);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
