#include "iwasawa/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace iwasawa {

std::int64_t SelmerSkeleton::delta() const {
  std::int64_t total = 0;
  for (const auto& [place, lambda] : local_lambdas) total += lambda;
  return total;
}

void SelmerSkeleton::validate() const {
  if (expected_corank != 0 && expected_corank != 1) {
    throw InvalidArgument("skeleton " + label + ": expected_corank must be 0 or 1");
  }
  for (const auto& [place, lambda] : local_lambdas) {
    if (lambda < 0) throw InvalidArgument("skeleton " + label + ": local lambda at " + place + " is negative");
  }
  if (ck_lambda && *ck_lambda < 0) throw InvalidArgument("skeleton " + label + ": ck_lambda is negative");
}

namespace {

using TrialFn = void (*)(const SuiteConfig&, std::uint64_t, SuiteReport&);

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// The default window, widened until the three top levels all satisfy p^n >= dmax.
int level_window(const RingParams& params, std::int64_t dmax, std::optional<int> override) {
  if (override) return *override;
  int n = default_growth_window(params.prime());
  while (static_cast<std::int64_t>(ipow(params.prime(), n - 2)) < dmax) ++n;
  return n;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename T>
std::string show(const std::optional<T>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

void fail(SuiteReport& report, std::uint64_t seed, std::string check, std::string detail) {
  report.failures.push_back({seed, std::move(check), std::move(detail)});
}

template <typename A, typename B>
void expect_eq(SuiteReport& report, std::uint64_t seed, const std::string& check, const A& got, const B& want) {
  if (!(got == want)) {
    std::ostringstream os;
    os << "got " << got << ", expected " << want;
    fail(report, seed, check, os.str());
  }
}

void run_one(TrialFn fn, const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const std::size_t before = report.failures.size();
  try {
    fn(config, seed, report);
  } catch (const Error& e) {
    fail(report, seed, "exception", e.what());
  }
  if (report.failures.size() == before) ++report.passes;
}

SuiteReport start_report(Suite suite, const SuiteConfig& config) {
  SuiteReport report;
  report.suite = suite_name(suite);
  report.params = config.params;
  report.seed = config.seed;
  report.trials = config.trials;
  return report;
}

void finish(SuiteReport& report, std::chrono::steady_clock::time_point start) {
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const SuiteFailure& a, const SuiteFailure& b) { return a.trial_seed < b.trial_seed; });
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SuiteReport run_trials(Suite suite, const SuiteConfig& config, TrialFn fn) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report = start_report(suite, config);
  for (std::size_t t = 0; t < config.trials; ++t) run_one(fn, config, trial_seed(config.seed, t), report);
  finish(report, start);
  return report;
}

struct TorsionDraw {
  std::vector<int> a;
  std::vector<IwasawaSeries> F;
  std::vector<int> d;

  int mu() const { return std::accumulate(a.begin(), a.end(), 0); }
  int lambda() const { return std::accumulate(d.begin(), d.end(), 0); }
  int dmax() const { return d.empty() ? 0 : *std::max_element(d.begin(), d.end()); }
};

TorsionDraw draw_torsion(const RingParams& params, Rng& rng, int max_s, int max_t, int max_a, int max_d) {
  TorsionDraw draw;
  const auto s = rng.uniform(0, max_s);
  const auto t = rng.uniform(0, max_t);
  max_a = std::min(max_a, params.precision_p() - 1);
  max_d = std::min(max_d, params.precision_x() - 1);
  for (std::int64_t i = 0; i < s; ++i) draw.a.push_back(static_cast<int>(rng.uniform(1, max_a)));
  for (std::int64_t j = 0; j < t; ++j) {
    const int d = static_cast<int>(rng.uniform(1, max_d));
    draw.d.push_back(d);
    draw.F.push_back(random_distinguished(params, d, rng));
  }
  return draw;
}

// Like draw_torsion, but never the zero module.
TorsionDraw draw_nonzero_torsion(const RingParams& params, Rng& rng, int max_s, int max_t, int max_a, int max_d) {
  while (true) {
    TorsionDraw draw = draw_torsion(params, rng, max_s, max_t, max_a, max_d);
    if (!draw.a.empty() || !draw.F.empty()) return draw;
  }
}

// --- growth ---------------------------------------------------------------

void growth_trial(const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const RingParams& params = config.params;
  Rng rng(seed);
  const auto r = static_cast<std::size_t>(rng.uniform(0, 2));
  const TorsionDraw tors = draw_torsion(params, rng, 2, 3, 2, 8);
  const auto s = static_cast<std::int64_t>(tors.a.size());
  const PresentedModule m = elementary(params, r, tors.a, tors.F);
  const int n_max = level_window(params, tors.dmax(), config.n_max);
  const GrowthTrace trace = growth_trace(m, n_max);
  const auto rs = static_cast<std::int64_t>(r) + s;

  for (const auto& entry : trace.entries) {
    std::int64_t bounded = 0;
    for (int d : tors.d) bounded += std::min<std::int64_t>(d, static_cast<std::int64_t>(entry.pn));
    const std::int64_t main = rs * static_cast<std::int64_t>(entry.pn);
    const std::string at = "n=" + std::to_string(entry.n);
    expect_eq(report, seed, "exact_law " + at, entry.e, main + bounded);
    if (entry.e - main < 0 || entry.e - main > tors.lambda()) {
      fail(report, seed, "bounded " + at, "deviation " + std::to_string(entry.e - main) + " outside [0, lambda]");
    }
    if (s == 0 && static_cast<std::int64_t>(entry.pn) >= tors.dmax()) {
      expect_eq(report, seed, "intercept " + at, entry.e - main, tors.lambda());
    }
  }
  expect_eq(report, seed, "slope", show(trace.slope), std::to_string(rs));

  const InvariantReport inv = invariants_via_growth(m, {n_max, fplin::kDefaultDimensionBudget});
  expect_eq(report, seed, "rank", inv.rank, r);
  expect_eq(report, seed, "mu_zero", show(inv.mu_zero), std::to_string(s == 0));
  expect_eq(report, seed, "mu", show(inv.mu), std::to_string(tors.mu()));
  if (s == 0) expect_eq(report, seed, "lambda", show(inv.lambda), std::to_string(tors.lambda()));
}

// --- cross route ----------------------------------------------------------

void cross_route_trial(const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const RingParams& params = config.params;
  Rng rng(seed);
  const TorsionDraw tors = draw_nonzero_torsion(params, rng, 2, 3, 2, 8);
  const PresentedModule m = conjugate(elementary(params, 0, tors.a, tors.F), rng.next());
  const InvariantReport ch = char_invariants(m);
  const InvariantReport gr =
      invariants_via_growth(m, {level_window(params, tors.dmax(), config.n_max), fplin::kDefaultDimensionBudget});
  expect_eq(report, seed, "char_mu", show(ch.mu), std::to_string(tors.mu()));
  expect_eq(report, seed, "char_lambda", show(ch.lambda), std::to_string(tors.lambda()));
  expect_eq(report, seed, "rank", gr.rank, std::size_t{0});
  expect_eq(report, seed, "mu", show(gr.mu), show(ch.mu));
  expect_eq(report, seed, "lambda", show(gr.lambda), show(ch.lambda));
  expect_eq(report, seed, "lambda_tag", to_string(gr.lambda_tag), to_string(LambdaTag::exact));
}

// --- additivity -----------------------------------------------------------

void additivity_trial(const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const RingParams& params = config.params;
  Rng rng(seed);
  const auto r = static_cast<std::size_t>(rng.uniform(0, 2));
  const TorsionDraw ta = draw_nonzero_torsion(params, rng, 1, 2, 2, 5);
  const TorsionDraw tc = draw_nonzero_torsion(params, rng, 1, 2, 2, 5);
  const PresentedModule a = elementary(params, 0, ta.a, ta.F);
  const PresentedModule c = elementary(params, 0, tc.a, tc.F);
  SeriesMatrix coupling(params, a.generators(), c.relation_count());
  for (std::size_t i = 0; i < coupling.rows(); ++i) {
    for (std::size_t j = 0; j < coupling.cols(); ++j) coupling(i, j) = random_polynomial(params, 2, rng);
  }
  const PresentedModule b_tors = extension(a, c, coupling);

  const InvariantReport ia = char_invariants(a);
  const InvariantReport ic = char_invariants(c);
  const InvariantReport ib = char_invariants(b_tors);
  expect_eq(report, seed, "oracle_mu_A", show(ia.mu), std::to_string(ta.mu()));
  expect_eq(report, seed, "oracle_lambda_A", show(ia.lambda), std::to_string(ta.lambda()));
  expect_eq(report, seed, "oracle_mu_C", show(ic.mu), std::to_string(tc.mu()));
  expect_eq(report, seed, "oracle_lambda_C", show(ic.lambda), std::to_string(tc.lambda()));
  const int mu_sum = ta.mu() + tc.mu();
  const int lambda_sum = ta.lambda() + tc.lambda();
  expect_eq(report, seed, "char_mu_additive", show(ib.mu), std::to_string(mu_sum));
  expect_eq(report, seed, "char_lambda_additive", show(ib.lambda), std::to_string(lambda_sum));

  // With a free part added, the growth route must still see the rank, the mu = 0
  // verdict and, when mu vanishes, the summed lambda.
  const PresentedModule b = conjugate(direct_sum(free_module(params, r), b_tors), rng.next());
  const InvariantReport gb =
      invariants_via_growth(b, {level_window(params, lambda_sum + mu_sum, config.n_max), fplin::kDefaultDimensionBudget});
  expect_eq(report, seed, "growth_rank", gb.rank, r);
  expect_eq(report, seed, "growth_rank_certified", gb.rank_certified, true);
  expect_eq(report, seed, "growth_mu_zero", show(gb.mu_zero), std::to_string(mu_sum == 0));
  if (mu_sum == 0) {
    // B/p is then an F_p-space of dimension lambda(B) on which X is nilpotent.
    expect_eq(report, seed, "growth_lambda_additive", show(gb.lambda), std::to_string(lambda_sum));
  }
}

// --- congruence -----------------------------------------------------------

void congruence_trial(const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const RingParams& params = config.params;
  Rng rng(seed);
  TorsionDraw tors = draw_torsion(params, rng, 1, 3, 2, 6);
  if (tors.F.empty()) {
    tors.d.push_back(1);
    tors.F.push_back(random_distinguished(params, 1, rng));
  }
  const PresentedModule a = conjugate(elementary(params, 0, tors.a, tors.F), rng.next());
  const PresentedModule b = mod_p_isomorphic_perturbation(a, rng.next());
  expect_eq(report, seed, "same_mod_p", same_mod_p(a, b), true);

  const InvariantReport ia = char_invariants(a);
  std::optional<InvariantReport> ib;
  try {
    ib = char_invariants(b);
  } catch (const PrecisionExhausted&) {
    // det(B) is congruent to det(A) mod p, so this only happens when mu(A) > 0.
  }
  const bool a_mu_zero = ia.mu == 0;
  const bool b_mu_zero = ib && ib->mu == 0;
  expect_eq(report, seed, "mu_zero_equivalence", b_mu_zero, a_mu_zero);
  if (a_mu_zero && b_mu_zero) expect_eq(report, seed, "lambda_equal", show(ib->lambda), show(ia.lambda));

  const int n_max = level_window(params, tors.dmax(), config.n_max);
  const GrowthTrace ta = growth_trace(direct_sum(free_module(params, 1), a), n_max);
  const GrowthTrace tb = growth_trace(direct_sum(free_module(params, 1), b), n_max);
  for (std::size_t k = 0; k < ta.entries.size(); ++k) {
    expect_eq(report, seed, "rank1_trace n=" + std::to_string(ta.entries[k].n), tb.entries[k].e, ta.entries[k].e);
  }
}

// --- twist probe ----------------------------------------------------------

struct ProbeInstance {
  std::string name;
  PresentedModule m;
  // Finite cokernel C of M -> N, and C/C[p].
  PresentedModule c;
  PresentedModule c_over_torsion;
  // Torsion summands of N untouched by C, and the degree of the one that is.
  std::vector<int> plain_degrees;
  std::optional<int> touched_degree;
  int lambda = 0;
  bool mandatory = false;
};

PresentedModule finite_cyclic(const RingParams& params, int a, int b) {
  const auto pa = static_cast<std::int64_t>(modarith::pow(params.prime(), static_cast<std::uint64_t>(a), params.modulus()));
  return PresentedModule(params, 1, {{IwasawaSeries::constant(params, pa)}, {IwasawaSeries::monomial(params, b, 1)}});
}

ProbeInstance mandatory_instance(const RingParams& params) {
  return {"mandatory (X,-p)",
          ideal_module(params, 1, 1),
          finite_cyclic(params, 1, 1),
          PresentedModule::zero(params),
          {},
          std::nullopt,
          char_invariants(PresentedModule::zero(params)).lambda.value_or(0),
          true};
}

ProbeInstance random_instance(const RingParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const auto r = static_cast<std::size_t>(rng.uniform(0, 2));
  const TorsionDraw tors = draw_torsion(params, rng, 0, 2, 1, 4);
  auto kind = rng.uniform(0, 2);
  if (kind == 1 && r == 0) kind = 0;
  if (kind == 2 && tors.F.empty()) kind = 0;

  ProbeInstance inst{"", PresentedModule::zero(params), PresentedModule::zero(params), PresentedModule::zero(params),
                     tors.d, std::nullopt, 0, false};
  PresentedModule complement = elementary(params, 0, {}, tors.F);
  PresentedModule m = PresentedModule::zero(params);
  if (kind == 0) {
    inst.name = "C=0";
    m = elementary(params, r, {}, tors.F);
  } else if (kind == 1) {
    const int a = static_cast<int>(rng.uniform(1, std::min(2, params.precision_p() - 1)));
    const int b = static_cast<int>(rng.uniform(1, 3));
    inst.name = "ideal(p^" + std::to_string(a) + ",X^" + std::to_string(b) + ")";
    m = direct_sum(ideal_module(params, a, b), elementary(params, r - 1, {}, tors.F));
    inst.c = finite_cyclic(params, a, b);
    if (a >= 2) inst.c_over_torsion = finite_cyclic(params, a - 1, b);
  } else {
    inst.name = "augmentation(deg " + std::to_string(tors.d.front()) + ")";
    const std::vector<IwasawaSeries> rest(tors.F.begin() + 1, tors.F.end());
    complement = direct_sum(augmentation_submodule(tors.F.front()), elementary(params, 0, {}, rest));
    m = direct_sum(free_module(params, r), complement);
    inst.c = finite_cyclic(params, 1, 1);
    inst.touched_degree = tors.d.front();
    inst.plain_degrees.erase(inst.plain_degrees.begin());
  }
  inst.name += " r=" + std::to_string(r) + " seed=" + hex(seed);
  inst.m = conjugate(m, rng.next());
  inst.lambda = char_invariants(complement).lambda.value_or(0);
  return inst;
}

void probe_instance(const ProbeInstance& inst, int n_max, std::uint64_t seed, SuiteReport& report) {
  const RingParams& params = inst.m.params();
  const RankEstimate rank = rank_estimate(inst.m);
  int dmax = inst.touched_degree.value_or(0);
  for (int d : inst.plain_degrees) dmax = std::max(dmax, d);
  const auto r = static_cast<std::int64_t>(rank.rank);
  if (inst.mandatory) {
    expect_eq(report, seed, "mandatory_rank", rank.rank, std::size_t{1});
    expect_eq(report, seed, "mandatory_lambda", inst.lambda, 0);
  }
  const bool c_zero = inst.c.generators() == 0;

  for (int n = 0; n <= n_max; ++n) {
    const std::uint64_t pn = ipow(params.prime(), n);
    if (static_cast<std::int64_t>(pn) < dmax) continue;
    // Mod p twisting is trivial, so this part does not depend on i.
    std::int64_t image = 0;
    for (int d : inst.plain_degrees) image += std::min<std::int64_t>(d, static_cast<std::int64_t>(pn));
    if (inst.touched_degree) {
      const std::int64_t d = *inst.touched_degree;
      image += std::min(std::min(d, static_cast<std::int64_t>(pn)), d - 1);
    }
    std::optional<std::int64_t> first;
    for (std::int64_t i = -5; i <= 5; ++i) {
      DefectRow row;
      row.instance = inst.name;
      row.twist = i;
      row.n = n;
      row.pn = pn;
      row.e = coinvariant_exponent(twist_module(inst.m, i), n);
      row.rank = rank.rank;
      row.lambda = inst.lambda;
      row.defect = row.e - r * static_cast<std::int64_t>(pn) - inst.lambda;
      // For a finite module, invariants and coinvariants of omega_n have equal length.
      row.c_mod_p_invariants = c_zero ? 0 : coinvariant_exponent(twist_module(inst.c, i), n);
      row.image_invariants = image;
      row.c_over_torsion_invariants =
          inst.c_over_torsion.generators() == 0
              ? 0
              : coinvariant_length(twist_module(inst.c_over_torsion, i), n, params.precision_p());
      row.hypotheses_hold =
          row.c_mod_p_invariants == 0 && row.image_invariants == 0 && row.c_over_torsion_invariants == 0;
      const std::string at = "n=" + std::to_string(n) + " i=" + std::to_string(i);
      if (!first) first = row.defect;
      if (row.defect != *first) {
        fail(report, seed, "twist_independence " + at,
             inst.name + ": defect " + std::to_string(row.defect) + " vs " + std::to_string(*first));
      }
      if (inst.mandatory) expect_eq(report, seed, "mandatory_defect " + at, row.defect, std::int64_t{1});
      if (c_zero) expect_eq(report, seed, "zero_cokernel_defect " + at, row.defect, std::int64_t{0});
      report.defects.push_back(std::move(row));
    }
  }
}

void twist_trial(const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const ProbeInstance inst = random_instance(config.params, seed);
  probe_instance(inst, level_window(config.params, 4, config.n_max), seed, report);
}

// --- delta assembly ---------------------------------------------------------

void delta_trial(const SuiteConfig& config, std::uint64_t seed, SuiteReport& report) {
  const RingParams& params = config.params;
  Rng rng(seed);
  const int corank = static_cast<int>(rng.uniform(0, 1));
  const TorsionDraw tors = draw_nonzero_torsion(params, rng, 0, 3, 1, 6);
  const PresentedModule sf =
      conjugate(direct_sum(free_module(params, static_cast<std::size_t>(corank)), elementary(params, 0, {}, tors.F)),
                rng.next());
  const PresentedModule sg = mod_p_isomorphic_perturbation(sf, rng.next());
  const std::int64_t lambda_s = tors.lambda();

  auto skeleton = [&](const std::string& label, const PresentedModule& s) {
    SelmerSkeleton sk{label + "-" + hex(seed), s, {}, corank, std::nullopt};
    const std::int64_t v1 = rng.uniform(0, lambda_s);
    const std::int64_t v2 = rng.uniform(0, lambda_s - v1);
    sk.local_lambdas = {{"v1", v1}, {"v2", v2}};
    if (rng.coin()) sk.ck_lambda = rng.uniform(0, lambda_s - v1 - v2);
    return sk;
  };
  SelmerSkeleton f = skeleton("f", sf);
  SelmerSkeleton g = skeleton("g", sg);
  if (f.ck_lambda.has_value() != g.ck_lambda.has_value()) {
    f.ck_lambda.reset();
    g.ck_lambda.reset();
  }

  const SuiteReport pair = assemble_delta(f, g, level_window(params, tors.dmax(), config.n_max));
  for (const auto& failure : pair.failures) fail(report, seed, failure.check, failure.detail);
  report.deltas.insert(report.deltas.end(), pair.deltas.begin(), pair.deltas.end());
}

TrialFn trial_fn(Suite suite) {
  switch (suite) {
    case Suite::additivity: return additivity_trial;
    case Suite::growth: return growth_trial;
    case Suite::twist_probe: return twist_trial;
    case Suite::congruence: return congruence_trial;
    case Suite::delta: return delta_trial;
    case Suite::cross_route: return cross_route_trial;
  }
  throw InvalidArgument("unknown suite");
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "additivity") return Suite::additivity;
  if (name == "growth") return Suite::growth;
  if (name == "twist-probe") return Suite::twist_probe;
  if (name == "congruence") return Suite::congruence;
  if (name == "delta") return Suite::delta;
  return std::nullopt;
}

std::string suite_name(Suite suite) {
  switch (suite) {
    case Suite::additivity: return "additivity";
    case Suite::growth: return "growth";
    case Suite::twist_probe: return "twist-probe";
    case Suite::congruence: return "congruence";
    case Suite::delta: return "delta";
    case Suite::cross_route: return "cross-route";
  }
  return "unknown";
}

SuiteReport verify_additivity(const SuiteConfig& config) {
  return run_trials(Suite::additivity, config, additivity_trial);
}

SuiteReport verify_growth(const SuiteConfig& config) { return run_trials(Suite::growth, config, growth_trial); }

SuiteReport verify_congruence_transfer(const SuiteConfig& config) {
  return run_trials(Suite::congruence, config, congruence_trial);
}

SuiteReport verify_delta(const SuiteConfig& config) { return run_trials(Suite::delta, config, delta_trial); }

SuiteReport verify_cross_route(const SuiteConfig& config) {
  return run_trials(Suite::cross_route, config, cross_route_trial);
}

SuiteReport probe_twist(const SuiteConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report = start_report(Suite::twist_probe, config);
  // The fixed instance is probed on the full window regardless of trials.
  const int n_max = config.n_max.value_or(default_growth_window(config.params.prime()));
  const std::size_t before = report.failures.size();
  try {
    probe_instance(mandatory_instance(config.params), n_max, 0, report);
  } catch (const Error& e) {
    fail(report, 0, "exception", e.what());
  }
  if (report.failures.size() == before) ++report.passes;
  for (std::size_t t = 0; t < config.trials; ++t) run_one(twist_trial, config, trial_seed(config.seed, t), report);
  finish(report, start);
  return report;
}

SuiteReport run_suite(Suite suite, const SuiteConfig& config) {
  if (suite == Suite::twist_probe) return probe_twist(config);
  return run_trials(suite, config, trial_fn(suite));
}

SuiteReport replay_trial(Suite suite, const SuiteConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  SuiteConfig single = config;
  single.trials = 1;
  SuiteReport report = start_report(suite, single);
  run_one(trial_fn(suite), single, seed, report);
  finish(report, start);
  return report;
}

SuiteReport assemble_delta(const SelmerSkeleton& f, const SelmerSkeleton& g, std::optional<int> n_max) {
  const auto start = std::chrono::steady_clock::now();
  f.validate();
  g.validate();
  if (!same_mod_p(f.S_nonprimitive, g.S_nonprimitive)) {
    throw CongruenceViolation("skeletons " + f.label + " and " + g.label + " differ mod p");
  }
  if (f.expected_corank != g.expected_corank) {
    throw CorankMismatch("skeletons " + f.label + " and " + g.label + " declare different coranks");
  }
  const RingParams& params = f.S_nonprimitive.params();
  SuiteReport report;
  report.suite = "delta-assembly";
  report.params = params;
  report.trials = 1;
  const int window = n_max.value_or(default_growth_window(params.prime()));
  const std::int64_t corank = f.expected_corank;

  struct Side {
    std::int64_t lambda_s = 0;
    bool mu_zero = false;
  };
  auto measure = [&](const SelmerSkeleton& sk) {
    const RankEstimate rank = rank_estimate(sk.S_nonprimitive);
    if (static_cast<std::int64_t>(rank.rank) != corank) {
      fail(report, 0, "corank " + sk.label,
           "rank estimate " + std::to_string(rank.rank) + ", declared " + std::to_string(corank));
    }
    const GrowthTrace trace = growth_trace(sk.S_nonprimitive, window);
    if (!trace.slope) throw Unstable("skeleton " + sk.label + ": slope not stable within the window");
    const GrowthEntry& last = trace.entries.back();
    return Side{last.e - corank * static_cast<std::int64_t>(last.pn), *trace.slope == corank};
  };
  const Side sf = measure(f);
  const Side sg = measure(g);

  DeltaRow row;
  row.label_f = f.label;
  row.label_g = g.label;
  row.delta_f = f.delta();
  row.delta_g = g.delta();
  row.lambda_s_f = sf.lambda_s;
  row.lambda_s_g = sg.lambda_s;
  row.mu_verdict = sf.mu_zero && sg.mu_zero ? "mu=0 both" : (!sf.mu_zero && !sg.mu_zero ? "mu>0 both" : "mu mismatch");
  if (sf.mu_zero != sg.mu_zero) fail(report, 0, "mu_transfer", f.label + " vs " + g.label);

  if (sf.mu_zero && sg.mu_zero) {
    row.lambda_l_f = row.lambda_s_f - row.delta_f;
    row.lambda_l_g = row.lambda_s_g - row.delta_g;
    row.difference = row.lambda_l_f - row.lambda_l_g;
    row.identity_orientation_holds = row.difference == row.delta_g - row.delta_f;
    row.stated_orientation_holds = row.difference == row.delta_f - row.delta_g;
    if (row.lambda_s_f != row.lambda_s_g) {
      fail(report, 0, "lambda_transfer",
           std::to_string(row.lambda_s_f) + " vs " + std::to_string(row.lambda_s_g));
    }
    if (!row.identity_orientation_holds) {
      fail(report, 0, "delta_identity",
           "difference " + std::to_string(row.difference) + ", expected " + std::to_string(row.delta_g - row.delta_f));
    }
    if (f.ck_lambda && g.ck_lambda) {
      row.ck_f = f.ck_lambda;
      row.ck_g = g.ck_lambda;
      const std::int64_t lf = row.lambda_l_f - *f.ck_lambda;
      const std::int64_t lg = row.lambda_l_g - *g.ck_lambda;
      const std::int64_t bracket_f = row.delta_f + *f.ck_lambda;
      const std::int64_t bracket_g = row.delta_g + *g.ck_lambda;
      row.corrected_difference = lf - lg;
      row.corrected_identity_orientation_holds = lf - lg == bracket_g - bracket_f;
      row.corrected_stated_orientation_holds = lf - lg == bracket_f - bracket_g;
      if (!*row.corrected_identity_orientation_holds) {
        fail(report, 0, "ck_identity",
             "difference " + std::to_string(lf - lg) + ", expected " + std::to_string(bracket_g - bracket_f));
      }
    }
  }
  report.deltas.push_back(std::move(row));
  if (report.failures.empty()) report.passes = 1;
  finish(report, start);
  return report;
}

}  // namespace iwasawa
