#include "nilgeo/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

int emit(const nilgeo::io::CommandOutput& out, bool json) {
  if (json) {
    std::cout << out.json.dump(2) << '\n';
  } else {
    std::cout << out.text;
  }
  return out.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nil-affine geometry toolkit: parabolic catalog, invariant suites and dynamics scenarios."};
  app.require_subcommand(1);

  bool json = false;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  app.add_flag("--json", json, "Print the JSON report instead of text");
  app.add_option("--seed", seed, "Seed for sampled checks (overrides a scenario's seed)");
  app.add_option("--threads", threads, "Worker threads for sampled checks; 0 uses every core")->check(CLI::NonNegativeNumber);

  auto* catalog = app.add_subcommand("catalog", "Compute the parabolic table from the matrix realizations");
  std::string family;
  catalog->add_option("--family", family, "Restrict to one real form family");

  auto* check = app.add_subcommand("check", "Run an invariant suite over the nilpotent catalog");
  std::string suite = "all";
  std::size_t samples = 1000;
  check->add_option("--suite", suite, "bch, split, ray, adjoint or all");
  check->add_option("--samples", samples, "Samples per check")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Run a dynamics scenario file");
  std::string path;
  simulate->add_option("path", path, "Scenario JSON")->required();

  for (auto* sub : {catalog, check, simulate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    if (*catalog) return emit(nilgeo::io::cmd_catalog(family), json);
    if (*check) return emit(nilgeo::io::cmd_check(suite, samples, seed.value_or(0), threads), json);
    return emit(nilgeo::io::cmd_simulate(path, seed, threads), json);
  } catch (const nilgeo::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nilgeo::UnknownKey& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nilgeo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
