#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "axisym/axisym.hpp"

namespace {

using axisym::RunConfig;

/// Registers every RunConfig field as --<name> on sub; values land in staged
/// and are copied over the file/default config only when given.
struct Overrides {
  RunConfig staged;
  std::vector<std::pair<CLI::Option*, void (*)(const RunConfig&, RunConfig&)>> opts;

  void attach(CLI::App* sub) {
#define X(f)                                                                                  \
  opts.emplace_back(sub->add_option("--" #f, staged.f, "override config field " #f),           \
                    [](const RunConfig& from, RunConfig& to) { to.f = from.f; });
    AXISYM_CONFIG_FIELDS(X)
#undef X
  }

  RunConfig resolve(const std::string& file) const {
    RunConfig c = file.empty() ? RunConfig{} : axisym::load_config(file);
    for (const auto& [opt, copy] : opts)
      if (opt->count() > 0) copy(staged, c);
    c.validate();
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric Navier-Stokes in a periodic slip cylinder with regularity monitoring"};
  app.require_subcommand(1);

  std::string config_file;
  int verify_n = 64;
  std::string snapshot_path;
  std::vector<std::unique_ptr<Overrides>> overrides;

  auto add_sub = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_file, "JSON config file");
    overrides.push_back(std::make_unique<Overrides>());
    overrides.back()->attach(sub);
    return std::pair{sub, overrides.back().get()};
  };
  auto [sim, sim_o] = add_sub("simulate", "integrate and write diagnostics.csv, final.snap, summary.txt");
  auto [cont, cont_o] = add_sub("continuation", "segment-by-segment run with a certificate report");
  auto [norms, norms_o] = add_sub("norms", "ledger and checks for a stored snapshot");
  norms->add_option("snapshot_file", snapshot_path, "snapshot to analyse")->required();
  CLI::App* verify = app.add_subcommand("verify", "run the oracle suite");
  verify->add_option("-n,--resolution", verify_n, "grid resolution (even, >= 16)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), axisym::exit_config);
  }

  try {
    if (*verify) {
      const axisym::VerifyReport r = axisym::run_verify_suite(verify_n);
      axisym::write_verify_report(std::cout, r);
      return r.all_passed() ? axisym::exit_ok : axisym::exit_numerical;
    }
    axisym::RunOutcome out;
    if (*sim)
      out = axisym::run_simulate(sim_o->resolve(config_file));
    else if (*cont)
      out = axisym::run_continuation(cont_o->resolve(config_file));
    else
      out = axisym::run_norms(snapshot_path, norms_o->resolve(config_file));
    std::cout << out.summary;
    return out.code;
  } catch (const axisym::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return axisym::exit_config;
  } catch (const axisym::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return axisym::exit_numerical;
  }
}
