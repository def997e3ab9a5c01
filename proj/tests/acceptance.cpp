// Acceptance run: one PASS/FAIL line per criterion, then the total time.
// Exit status is non-zero when any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "iwasawa/harness.hpp"
#include "iwasawa/io.hpp"
#include "iwasawa/weierstrass.hpp"
#include "oracle.hpp"

using namespace iwasawa;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string secs_text(double secs) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", secs);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o, double secs) {
  std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(id, title, o, seconds_since(start));
}

std::string summary(const SuiteReport& r) {
  std::string s = std::to_string(r.passes) + "/" + std::to_string(r.trials) + " trials passed, " +
                  std::to_string(r.failures.size()) + " failures";
  if (!r.failures.empty()) {
    s += "; first: seed " + std::to_string(r.failures[0].trial_seed) + " " + r.failures[0].check + " " +
         r.failures[0].detail;
  }
  return s;
}

SuiteConfig config(std::size_t trials, std::uint64_t seed) {
  SuiteConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

struct Recorded {
  Suite suite;
  SuiteConfig config;
  std::string json;
};
std::vector<Recorded> recorded;

SuiteReport run_and_record(Suite suite, const SuiteConfig& c) {
  SuiteReport r = run_suite(suite, c);
  recorded.push_back({suite, c, io::dump(io::to_json(r))});
  return r;
}

Outcome weierstrass_round_trip() {
  std::size_t ok = 0;
  std::size_t total = 0;
  const auto start = Clock::now();
  for (std::uint32_t p : {3U, 5U}) {
    const RingParams params(p, 6, 32);
    Rng rng(20260 + p);
    for (int trial = 0; trial < 250; ++trial, ++total) {
      const IwasawaSeries f = random_nonzero_series(params, rng);
      const WeierstrassData w = weierstrass_prepare(f);
      // p^mu * u * F by schoolbook multiplication.
      const auto uf = oracle::poly_mul({w.unit.coeffs().begin(), w.unit.coeffs().end()},
                                       {w.distinguished.coeffs().begin(), w.distinguished.coeffs().end()},
                                       params.modulus(), 32);
      const std::uint64_t scale = oracle::powmod(p, static_cast<std::uint64_t>(w.mu), params.modulus());
      bool same = is_distinguished(w.distinguished) && w.unit.is_unit();
      for (std::size_t k = 0; k < 32; ++k) same = same && oracle::mulmod(uf[k], scale, params.modulus()) == f[k];
      ok += same;
    }
  }
  const double secs = seconds_since(start);
  return {ok == total && secs < 5.0,
          std::to_string(ok) + "/" + std::to_string(total) + " recompositions exact, " + secs_text(secs) + " (limit 5 s)"};
}

Outcome distinguished_exactness() {
  const RingParams params(3, 6, 32);
  Rng rng(2025);
  std::size_t checks = 0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = static_cast<int>(rng.uniform(1, 10));
    const PresentedModule m = elementary(params, 0, {}, {random_distinguished(params, d, rng)});
    std::uint64_t pn = 1;
    for (int n = 0; n <= default_growth_window(3); ++n, pn *= 3) {
      if (pn < static_cast<std::uint64_t>(d)) continue;
      ++checks;
      bad += coinvariant_exponent(m, n) != d;
    }
  }
  return {bad == 0, std::to_string(checks) + " levels with p^n >= d, " + std::to_string(bad) + " with e_n != d"};
}

Outcome suite_outcome(Suite suite, std::size_t trials, double limit = 0.0) {
  const SuiteReport r = run_and_record(suite, config(trials, 1));
  bool pass = r.ok() && r.passes == trials;
  std::string detail = summary(r);
  if (limit > 0.0) {
    pass = pass && r.runtime_seconds < limit;
    detail += ", " + secs_text(r.runtime_seconds) + " (limit " + std::to_string(static_cast<int>(limit)) + " s)";
  }
  return {pass, detail};
}

Outcome twist_probe() {
  const SuiteReport r = run_and_record(Suite::twist_probe, config(40, 1));
  std::size_t mandatory = 0;
  std::size_t mandatory_bad = 0;
  bool seen[11][5] = {};
  for (const DefectRow& row : r.defects) {
    if (row.instance.rfind("mandatory", 0) != 0 || row.n > 4) continue;
    ++mandatory;
    const bool good = row.rank == 1 && row.lambda == 0 && row.defect == 1;
    mandatory_bad += !good;
    if (good && row.twist >= -5 && row.twist <= 5) seen[row.twist + 5][row.n] = true;
  }
  std::size_t covered = 0;
  for (auto& by_i : seen) {
    for (bool s : by_i) covered += s;
  }
  // Consecutive rows with the same instance and level differ only in i.
  std::size_t groups = 0;
  std::size_t dependent = 0;
  for (std::size_t k = 0; k < r.defects.size();) {
    std::size_t end = k;
    bool same = true;
    while (end < r.defects.size() && r.defects[end].instance == r.defects[k].instance && r.defects[end].n == r.defects[k].n) {
      same = same && r.defects[end].defect == r.defects[k].defect;
      ++end;
    }
    ++groups;
    dependent += !same;
    k = end;
  }
  const bool pass = r.ok() && covered == 55 && mandatory_bad == 0 && dependent == 0 && r.runtime_seconds < 120.0;
  return {pass, "mandatory r=1, lambda=0, defect 1 at " + std::to_string(covered) + "/55 (i, n) points (" +
                    std::to_string(mandatory_bad) + " off); " + std::to_string(groups) + " (instance, n) groups, " +
                    std::to_string(dependent) + " i-dependent; " + std::to_string(r.failures.size()) + " failures; " +
                    secs_text(r.runtime_seconds) + " (limit 120 s)"};
}

Outcome delta_assembly() {
  const SuiteReport r = run_and_record(Suite::delta, config(20, 1));
  std::size_t identity = 0;
  std::size_t with_ck = 0;
  std::size_t ck_balanced = 0;
  for (const DeltaRow& row : r.deltas) {
    identity += row.identity_orientation_holds && row.difference == row.delta_g - row.delta_f;
    if (row.corrected_difference) {
      ++with_ck;
      ck_balanced += row.corrected_identity_orientation_holds.value_or(false);
    }
  }
  const bool pass = r.ok() && r.deltas.size() == 20 && identity == 20 && with_ck > 0 && ck_balanced == with_ck;
  return {pass, std::to_string(identity) + "/" + std::to_string(r.deltas.size()) +
                    " pairs with difference = delta_g - delta_f, ck variant balanced in " +
                    std::to_string(ck_balanced) + "/" + std::to_string(with_ck) + "; " + summary(r)};
}

Outcome determinism() {
  std::size_t same = 0;
  for (const Recorded& rec : recorded) same += io::dump(io::to_json(run_suite(rec.suite, rec.config))) == rec.json;
  return {!recorded.empty() && same == recorded.size(),
          std::to_string(same) + "/" + std::to_string(recorded.size()) + " suite reports byte-identical on rerun"};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  run(1, "Weierstrass round-trip", weierstrass_round_trip);
  run(2, "coinvariant exponent of Lambda/(F) equals deg F", distinguished_exactness);
  run(3, "exact elementary growth law", [] { return suite_outcome(Suite::growth, 100); });
  run(4, "char route equals growth route", [] { return suite_outcome(Suite::cross_route, 100, 60.0); });
  run(5, "additivity in short exact sequences", [] { return suite_outcome(Suite::additivity, 100); });
  run(6, "congruence transfer", [] { return suite_outcome(Suite::congruence, 100); });
  run(7, "twist probe", twist_probe);
  run(8, "delta assembly", delta_assembly);
  run(9, "determinism", determinism);
  const double total = seconds_since(start);
  report(10, "total wall-clock", {total < 300.0, secs_text(total) + " (limit 300 s)"}, total);
  return failures == 0 ? 0 : 1;
}
