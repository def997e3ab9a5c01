// Command-line front end.
//
// Exit codes: 0 success, 1 a verified identity failed, 2 precision or budget
// exhausted (or an unstable growth window), 3 unreadable or invalid input.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "iwasawa/harness.hpp"
#include "iwasawa/io.hpp"

namespace {

using namespace iwasawa;

constexpr int kExitViolation = 1;
constexpr int kExitPrecision = 2;
constexpr int kExitInput = 3;

int exit_code_for(const Error& e) {
  if (dynamic_cast<const PrecisionExhausted*>(&e) || dynamic_cast<const DimensionBudgetExceeded*>(&e) ||
      dynamic_cast<const SizeExceeded*>(&e) || dynamic_cast<const Unstable*>(&e) ||
      dynamic_cast<const NotDivisible*>(&e)) {
    return kExitPrecision;
  }
  return kExitInput;
}

int run_invariants(const std::string& path, const std::string& route, std::optional<int> n_max) {
  const PresentedModule m = io::load_module(path);
  io::Json out;
  int code = 0;
  auto attempt = [&](const std::string& key, auto&& compute) {
    try {
      out[key] = io::to_json(compute());
    } catch (const NotSquare& e) {
      if (route != "both") throw;
      out[key] = io::Json{{"skipped", e.what()}};
    } catch (const Error& e) {
      const int c = exit_code_for(e);
      if (c != kExitPrecision) throw;
      out[key] = io::Json{{"error", e.what()}};
      code = c;
    }
  };
  if (route == "char" || route == "both") attempt("char", [&] { return char_invariants(m); });
  if (route == "growth" || route == "both") {
    attempt("growth", [&] { return invariants_via_growth(m, {n_max, fplin::kDefaultDimensionBudget}); });
  }
  std::cout << io::dump(out);
  return code;
}

int run_growth(const std::string& path, std::optional<int> n_max, const std::string& format) {
  const PresentedModule m = io::load_module(path);
  const GrowthTrace trace = growth_trace(m, n_max.value_or(default_growth_window(m.params().prime())));
  std::cout << (format == "csv" ? io::growth_csv(trace) : io::dump(io::to_json(trace)));
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::uint32_t p = 3;
  int precision_p = 6;
  int precision_x = 32;
  std::optional<std::int64_t> u0;
  std::optional<int> n_max;
  std::optional<std::uint64_t> replay;
};

int run_verify(const VerifyArgs& args) {
  const auto suite = parse_suite(args.suite);
  if (!suite) {
    std::cerr << "unknown suite '" << args.suite << "' (expected additivity, growth, twist-probe, congruence, delta)\n";
    return kExitInput;
  }
  SuiteConfig config;
  config.params = args.u0 ? RingParams(args.p, args.precision_p, args.precision_x, *args.u0)
                          : RingParams(args.p, args.precision_p, args.precision_x);
  config.trials = args.trials;
  config.seed = args.seed;
  config.n_max = args.n_max;
  const SuiteReport report = args.replay ? replay_trial(*suite, config, *args.replay) : run_suite(*suite, config);
  std::cout << io::dump(io::to_json(report));
  std::cerr << report.suite << ": " << report.passes << " passed, " << report.failures.size() << " failures, "
            << report.runtime_seconds << " s\n";
  if (*suite == Suite::twist_probe) return 0;
  return report.ok() ? 0 : kExitViolation;
}

int run_delta(const std::string& f_path, const std::string& g_path, std::optional<int> n_max) {
  const SelmerSkeleton f = io::load_skeleton(f_path);
  const SelmerSkeleton g = io::load_skeleton(g_path);
  const SuiteReport report = assemble_delta(f, g, n_max);
  std::cout << io::dump(io::to_json(report));
  return report.ok() ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iwasawa mu and lambda invariants of finitely presented Lambda-modules"};
  app.require_subcommand(1);

  std::string path;
  std::string route = "both";
  std::string format = "csv";
  std::optional<int> n_max;
  auto* invariants = app.add_subcommand("invariants", "Invariants of a module file");
  invariants->add_option("path", path, "Module file (JSON)")->required();
  invariants->add_option("--route", route, "char, growth or both")->check(CLI::IsMember({"char", "growth", "both"}));
  invariants->add_option("--nmax", n_max, "Largest level n of the growth window");

  auto* growth = app.add_subcommand("growth", "Coinvariant exponents e((M/p)_{Gamma_n}) for n = 0..nmax");
  growth->add_option("path", path, "Module file (JSON)")->required();
  growth->add_option("--nmax", n_max, "Largest level n");
  growth->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run a seeded verification suite");
  verify->add_option("suite", verify_args.suite, "additivity, growth, twist-probe, congruence or delta")->required();
  verify->add_option("--trials", verify_args.trials, "Number of random trials");
  verify->add_option("--seed", verify_args.seed, "Suite seed");
  verify->add_option("--p", verify_args.p, "Odd prime p");
  verify->add_option("--Np", verify_args.precision_p, "p-adic precision N");
  verify->add_option("--Mx", verify_args.precision_x, "X-adic precision M");
  verify->add_option("--u0", verify_args.u0, "Image of the topological generator (default 1+p)");
  verify->add_option("--nmax", verify_args.n_max, "Override the level window");
  verify->add_option("--replay", verify_args.replay, "Run only the trial with this trial seed");

  std::string f_path;
  std::string g_path;
  auto* delta = app.add_subcommand("delta", "Lambda bookkeeping for two congruent skeleton files");
  delta->add_option("f", f_path, "Skeleton file for f")->required();
  delta->add_option("g", g_path, "Skeleton file for g")->required();
  delta->add_option("--nmax", n_max, "Largest level n of the growth window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*invariants) return run_invariants(path, route, n_max);
    if (*growth) return run_growth(path, n_max, format);
    if (*verify) return run_verify(verify_args);
    if (*delta) return run_delta(f_path, g_path, n_max);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitInput;
}
