// kloosterlab: experiment driver for Kloosterman sum tables, angle statistics
// and bound checks. Each subcommand assembles an ExperimentConfig and hands it
// to the engine; precedence is CLI flag > config file > default.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kloosterlab/arith.hpp"
#include "kloosterlab/errors.hpp"
#include "kloosterlab/experiment.hpp"
#include "kloosterlab/kloosterman.hpp"
#include "kloosterlab/report.hpp"

namespace {

using kloosterlab::cli::ExperimentConfig;
using kloosterlab::cli::Format;
using kloosterlab::cli::Kind;

struct SubcommandState {
  Kind kind;
  std::string config_file;
  std::string output;
  std::string format = "csv";
  std::map<std::string, CLI::Option*> param_options;
  std::map<std::string, std::string> param_values;
};

// Registers a string-valued experiment parameter flag.
void add_param(CLI::App* cmd, SubcommandState& state, const std::string& name,
               const std::string& description) {
  state.param_options[name] =
      cmd->add_option("--" + name, state.param_values[name], description);
}

ExperimentConfig assemble(const SubcommandState& state) {
  ExperimentConfig config;
  config.kind = state.kind;
  if (!state.config_file.empty()) {
    config = kloosterlab::cli::load_config_file(state.config_file);
    if (config.kind != state.kind)
      throw kloosterlab::UsageError("config file kind does not match the subcommand");
  }
  for (const auto& [name, option] : state.param_options) {
    if (option->count() > 0) config.params[name] = state.param_values.at(name);
  }
  if (!state.output.empty()) config.output = state.output;
  if (!state.format.empty()) config.format = kloosterlab::cli::parse_format(state.format);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational laboratory for Kloosterman sums and their angle statistics"};
  app.require_subcommand(1);

  // ---- compute: one sum, printed to stdout ----
  std::int64_t compute_a = 0, compute_b = 0;
  std::uint64_t compute_p = 0;
  CLI::App* compute = app.add_subcommand("compute", "evaluate S(a,b;p) directly");
  compute->add_option("a", compute_a, "first argument")->required();
  compute->add_option("b", compute_b, "twist")->required();
  compute->add_option("p", compute_p, "prime modulus")->required();

  // ---- experiment subcommands ----
  struct Spec {
    const char* name;
    Kind kind;
    const char* help;
    std::vector<std::pair<const char*, const char*>> params;
  };
  const std::vector<Spec> specs = {
      {"table", Kind::table, "build a Kloosterman table and report its invariants",
       {{"p", "prime modulus"},
        {"b", "twist (default 1)"},
        {"method", "naive or dft (default dft)"},
        {"cache", "table cache directory"}}},
      {"vst", Kind::vst, "full-period Chebyshev sum against the Katz bound",
       {{"p", "prime modulus"}, {"k", "Chebyshev order"}, {"cache", "table cache directory"}}},
      {"interval", Kind::interval, "short-interval Chebyshev sums against omega_r",
       {{"p", "prime modulus"},
        {"h", "twist (default 1)"},
        {"k", "Chebyshev order"},
        {"M", "interval start (default 0)"},
        {"N", "interval length"},
        {"samples", "draw this many random (M,h) pairs instead of fixed ones"},
        {"seed", "seed for sampled sweeps (default 42)"},
        {"cache", "table cache directory"}}},
      {"moments", Kind::moments, "power moments of S(a,h;p) over an interval",
       {{"p", "prime modulus"},
        {"alpha", "moment exponent"},
        {"signed", "true for the signed moment (integer alpha only)"},
        {"h", "twist (default 1)"},
        {"M", "interval start (default 0)"},
        {"N", "interval length (default p-1)"},
        {"cache", "table cache directory"}}},
      {"signs", Kind::signs, "sign balance of S(a,h;p) over an interval",
       {{"p", "prime modulus"},
        {"h", "twist (default 1)"},
        {"M", "interval start (default 0)"},
        {"N", "interval length (default p-1)"},
        {"cache", "table cache directory"}}},
      {"extremes", Kind::extremes, "small/large value counts at threshold 2*delta*sqrt(p)",
       {{"p", "prime modulus"},
        {"delta", "threshold in (0,1]"},
        {"h", "twist (default 1)"},
        {"M", "interval start (default 0)"},
        {"N", "interval length (default p-1)"},
        {"cache", "table cache directory"}}},
      {"cdf", Kind::cdf, "empirical angle CDF discrepancy against the Sato-Tate law",
       {{"p", "prime modulus"},
        {"h", "twist (default 1)"},
        {"M", "interval start (default 0)"},
        {"N", "interval length (default p-1)"},
        {"cache", "table cache directory"}}},
      {"multisum", Kind::multisum, "multi-linear Chebyshev sums with additive twist",
       {{"p", "prime modulus"},
        {"polys", "linear polynomials, e.g. 1:0|1:3"},
        {"orders", "Chebyshev orders, e.g. 1|2"},
        {"h", "additive twist (default 0)"},
        {"cache", "table cache directory"}}},
      {"gm", Kind::gm, "sliding-window 2r-th moments and their maximal variant",
       {{"p", "prime modulus"},
        {"h", "window length"},
        {"r", "moment order"},
        {"k", "Chebyshev order"},
        {"m", "multiplier (default 1)"},
        {"cache", "table cache directory"}}},
      {"horizontal", Kind::horizontal, "scan over all primes in (x, 2x]",
       {{"x", "prime range start"},
        {"h", "twist for the sign counts (default 1)"},
        {"k", "Chebyshev order (default 1)"},
        {"M", "interval start (default 0)"},
        {"N", "interval length"}}},
      {"bounds", Kind::bounds, "evaluate the bound expressions for given parameters",
       {{"p", "prime modulus"},
        {"N", "interval length for omega_r"},
        {"k", "Chebyshev order"},
        {"h", "window length"},
        {"r", "moment order"},
        {"orders", "Chebyshev orders for the multi-linear bounds"}}},
  };

  std::vector<SubcommandState> states(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Spec& spec = specs[i];
    SubcommandState& state = states[i];
    state.kind = spec.kind;
    CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
    cmd->set_help_flag("--help", "print help");  // frees -h / --h for the twist parameter
    cmd->add_option("--config", state.config_file, "flat key=value config file");
    cmd->add_option("--output", state.output, "report file (default stdout)");
    cmd->add_option("--format", state.format, "csv or json (default csv)");
    for (const auto& [name, help] : spec.params) add_param(cmd, state, name, help);
  }

  // ---- sweep ----
  std::vector<std::string> sweep_files;
  unsigned sweep_workers = 1;
  std::string sweep_output;
  std::string sweep_format = "csv";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run several configs and aggregate the rows");
  sweep_cmd->add_option("configs", sweep_files, "experiment config files")->required();
  sweep_cmd->add_option("--workers", sweep_workers, "concurrent experiments (default 1)");
  sweep_cmd->add_option("--output", sweep_output, "aggregate report file (default stdout)");
  sweep_cmd->add_option("--format", sweep_format, "aggregate format, csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed()) {
      kloosterlab::PrimeModulus p(compute_p);
      std::cout << kloosterlab::report::format_number(
                       kloosterlab::kloosterman_naive(compute_a, compute_b, p))
                << "\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      std::vector<ExperimentConfig> configs;
      configs.reserve(sweep_files.size());
      for (const std::string& file : sweep_files)
        configs.push_back(kloosterlab::cli::load_config_file(file));
      const auto outcome = kloosterlab::cli::sweep(configs, sweep_workers, sweep_output,
                                                   kloosterlab::cli::parse_format(sweep_format));
      return outcome.exit_code;
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
      CLI::App* cmd = app.get_subcommand(specs[i].name);
      if (cmd->parsed()) {
        const auto outcome = kloosterlab::cli::run(assemble(states[i]));
        return outcome.exit_code;
      }
    }
  } catch (const kloosterlab::CostGuardError& e) {
    std::cerr << "{\"error\":{\"exit\":3,\"kind\":\"cost_guard\",\"message\":\"" << e.what()
              << "\"}}\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"exit\":2,\"kind\":\"usage\",\"message\":\"" << e.what()
              << "\"}}\n";
    return 2;
  }
  return 2;
}
