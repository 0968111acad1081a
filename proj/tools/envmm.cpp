// envmm: run a covariance-envelope experiment from a JSON config.
//
//   envmm run --config cfg.json [--out DIR] [--seed N] [--tol X]
//   envmm minimize --config cfg.json ...      (kind given as subcommand)

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "envmm/cli.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("-c,--config", args.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--out", args.out, "output directory (overrides output_dir)");
  sub->add_option("--seed", args.seed, "RNG seed (overrides the config)");
  sub->add_option("--tol", args.tol, "domination / comparison tolerance")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace envmm::cli;
  CLI::App app{"Covariance-envelope minimax projection experiments"};
  app.require_subcommand(1);

  Args args;
  std::vector<std::pair<CLI::App*, std::optional<Kind>>> subs;
  subs.emplace_back(app.add_subcommand("run", "run the kind named in the config"), std::nullopt);
  for (Kind k : {Kind::envelope_check, Kind::minimize, Kind::verify_extremal, Kind::wss_envelope,
                 Kind::wss_filter, Kind::elliptic_demo}) {
    subs.emplace_back(app.add_subcommand(to_string(k), "run a " + to_string(k) + " experiment"), k);
  }
  for (auto& [sub, kind] : subs) add_common(sub, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Overrides ov;
  ov.seed = args.seed;
  ov.tol = args.tol;
  if (!args.out.empty()) ov.output_dir = args.out;
  for (const auto& [sub, kind] : subs) {
    if (sub->parsed()) ov.kind = kind;
  }
  return run(args.config, ov, std::cout, std::cerr);
}
