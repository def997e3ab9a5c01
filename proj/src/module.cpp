#include "iwasawa/module.hpp"

#include <algorithm>
#include <functional>

namespace iwasawa {

ModuleFlags conjunction(const ModuleFlags& a, const ModuleFlags& b) {
  auto both = [](Provenance x, Provenance y) {
    return x == Provenance::certified && y == Provenance::certified ? Provenance::certified : Provenance::unknown;
  };
  return {both(a.no_finite_submodule, b.no_finite_submodule), both(a.elementary_iso, b.elementary_iso)};
}

PresentedModule::PresentedModule(const RingParams& params, std::size_t generators, std::vector<Relation> relations,
                                 ModuleFlags flags)
    : params_(params), generators_(generators), relations_(std::move(relations)), flags_(flags) {
  for (const auto& rel : relations_) {
    if (rel.size() != generators_) throw InvalidArgument("relation length differs from generator count");
    for (const auto& entry : rel) {
      if (!(entry.params() == params_)) throw ParamMismatch("relation entry lives in a different ring");
    }
  }
}

PresentedModule PresentedModule::from_matrix(const SeriesMatrix& relations, ModuleFlags flags) {
  std::vector<Relation> rels;
  rels.reserve(relations.cols());
  for (std::size_t j = 0; j < relations.cols(); ++j) {
    Relation rel;
    rel.reserve(relations.rows());
    for (std::size_t i = 0; i < relations.rows(); ++i) rel.push_back(relations(i, j));
    rels.push_back(std::move(rel));
  }
  return PresentedModule(relations.params(), relations.rows(), std::move(rels), flags);
}

PresentedModule PresentedModule::zero(const RingParams& params) {
  return PresentedModule(params, 0, {}, ModuleFlags::certified_elementary());
}

SeriesMatrix PresentedModule::relation_matrix() const {
  SeriesMatrix m(params_, generators_, relations_.size());
  for (std::size_t j = 0; j < relations_.size(); ++j) {
    for (std::size_t i = 0; i < generators_; ++i) m(i, j) = relations_[j][i];
  }
  return m;
}

int PresentedModule::max_degree() const {
  int d = -1;
  for (const auto& rel : relations_) {
    for (const auto& e : rel) d = std::max(d, e.degree());
  }
  return d;
}

int default_growth_window(std::uint32_t p) {
  int n = 0;
  std::uint64_t pn = 1;
  while (pn < 64) {
    pn *= p;
    ++n;
  }
  return std::max(n, 2);
}

// --- Constructions -------------------------------------------------------

PresentedModule elementary(const RingParams& params, std::size_t r, const std::vector<int>& a,
                           const std::vector<IwasawaSeries>& F) {
  const std::size_t g = r + a.size() + F.size();
  std::vector<PresentedModule::Relation> rels;
  std::size_t gen = r;
  for (int ai : a) {
    if (ai < 1) throw InvalidArgument("elementary: exponents a_i must be >= 1");
    if (ai >= params.precision_p()) throw PrecisionExhausted("elementary: p^a vanishes at precision N");
    PresentedModule::Relation rel(g, IwasawaSeries(params));
    rel[gen++] = IwasawaSeries::constant(params, static_cast<std::int64_t>(
                                                     modarith::pow(params.prime(), static_cast<std::uint64_t>(ai),
                                                                   params.modulus())));
    rels.push_back(std::move(rel));
  }
  for (const auto& f : F) {
    if (!(f.params() == params)) throw ParamMismatch("elementary: F_j lives in a different ring");
    if (!is_distinguished(f)) throw NotDistinguished("elementary: " + f.to_string() + " is not distinguished");
    PresentedModule::Relation rel(g, IwasawaSeries(params));
    rel[gen++] = f;
    rels.push_back(std::move(rel));
  }
  return PresentedModule(params, g, std::move(rels), ModuleFlags::certified_elementary());
}

PresentedModule free_module(const RingParams& params, std::size_t r) { return elementary(params, r, {}, {}); }

PresentedModule direct_sum(const PresentedModule& a, const PresentedModule& b) {
  if (!(a.params() == b.params())) throw ParamMismatch("direct_sum: ring parameters differ");
  const RingParams& params = a.params();
  const std::size_t g = a.generators() + b.generators();
  std::vector<PresentedModule::Relation> rels;
  for (const auto& rel : a.relations()) {
    PresentedModule::Relation r(rel);
    r.resize(g, IwasawaSeries(params));
    rels.push_back(std::move(r));
  }
  for (const auto& rel : b.relations()) {
    PresentedModule::Relation r(a.generators(), IwasawaSeries(params));
    r.insert(r.end(), rel.begin(), rel.end());
    rels.push_back(std::move(r));
  }
  return PresentedModule(params, g, std::move(rels), conjunction(a.flags(), b.flags()));
}

PresentedModule extension(const PresentedModule& a, const PresentedModule& c, const SeriesMatrix& coupling) {
  if (!(a.params() == c.params()) || !(coupling.params() == a.params())) {
    throw ParamMismatch("extension: ring parameters differ");
  }
  if (coupling.rows() != a.generators() || coupling.cols() != c.relation_count()) {
    throw InvalidArgument("extension: coupling must be generators(A) x relations(C)");
  }
  const RankEstimate rc = rank_estimate(c);
  if (!rc.certified || rc.rank + c.relation_count() != c.generators()) {
    throw InvalidArgument("extension: relations of C must be independent");
  }
  const RingParams& params = a.params();
  const std::size_t g = a.generators() + c.generators();
  std::vector<PresentedModule::Relation> rels;
  for (const auto& rel : a.relations()) {
    PresentedModule::Relation r(rel);
    r.resize(g, IwasawaSeries(params));
    rels.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < c.relation_count(); ++j) {
    PresentedModule::Relation r;
    r.reserve(g);
    for (std::size_t i = 0; i < a.generators(); ++i) r.push_back(coupling(i, j));
    const auto& rel = c.relations()[j];
    r.insert(r.end(), rel.begin(), rel.end());
    rels.push_back(std::move(r));
  }
  // An extension of modules without finite submodules has none either.
  ModuleFlags flags;
  flags.no_finite_submodule = conjunction(a.flags(), c.flags()).no_finite_submodule;
  return PresentedModule(params, g, std::move(rels), flags);
}

PresentedModule ideal_module(const RingParams& params, int a, int b) {
  if (a < 1 || a >= params.precision_p() || b < 1 || b >= params.precision_x()) {
    throw InvalidArgument("ideal_module: need 1 <= a < N and 1 <= b < M");
  }
  const auto pa = static_cast<std::int64_t>(modarith::pow(params.prime(), static_cast<std::uint64_t>(a), params.modulus()));
  PresentedModule::Relation rel{IwasawaSeries::monomial(params, b, 1), IwasawaSeries::constant(params, -pa)};
  ModuleFlags flags;
  flags.no_finite_submodule = Provenance::certified;
  return PresentedModule(params, 2, {std::move(rel)}, flags);
}

PresentedModule augmentation_submodule(const IwasawaSeries& F) {
  if (!is_distinguished(F) || F.degree() < 1) {
    throw NotDistinguished("augmentation_submodule: need a distinguished polynomial of degree >= 1");
  }
  const RingParams& params = F.params();
  // Generators y1 = p, y2 = X. Writing F = p*alpha + X*beta gives the second
  // relation; the first is the Koszul relation X*y1 - p*y2 = 0.
  const Residue c0 = F[0];
  const IwasawaSeries alpha = IwasawaSeries::from_residues(params, {c0 / params.prime()});
  std::vector<Residue> shifted(F.coeffs().begin() + 1, F.coeffs().end());
  const IwasawaSeries beta = IwasawaSeries::from_residues(params, std::move(shifted));
  PresentedModule::Relation koszul{IwasawaSeries::x(params), IwasawaSeries::constant(params, -static_cast<std::int64_t>(params.prime()))};
  PresentedModule::Relation lift{alpha, beta};
  ModuleFlags flags;
  flags.no_finite_submodule = Provenance::certified;
  return PresentedModule(params, 2, {std::move(koszul), std::move(lift)}, flags);
}

PresentedModule conjugate(const PresentedModule& m, std::uint64_t seed, int operations) {
  const RingParams& params = m.params();
  const std::size_t g = m.generators();
  const std::size_t nrel = m.relation_count();
  SeriesMatrix a = m.relation_matrix();
  if (g == 0 || nrel == 0) return m;
  Rng rng(seed);
  const int count = operations >= 0 ? operations : static_cast<int>(2 * (g + nrel));
  const int limit = params.precision_x();

  auto fits = [&](const IwasawaSeries& c, bool rows, std::size_t from, std::size_t to) {
    const int dc = c.degree();
    const std::size_t n = rows ? nrel : g;
    for (std::size_t k = 0; k < n; ++k) {
      const IwasawaSeries& src = rows ? a(from, k) : a(k, from);
      const IwasawaSeries& dst = rows ? a(to, k) : a(k, to);
      if (src.is_zero()) continue;
      if (std::max(dst.degree(), dc + src.degree()) >= limit) return false;
    }
    return true;
  };

  for (int op = 0; op < count; ++op) {
    const auto kind = rng.below(4);
    const bool rows = (kind % 2 == 0);
    const std::size_t n = rows ? g : nrel;
    if (kind < 2) {
      // Add a polynomial multiple of one line to another.
      if (n < 2) continue;
      const std::size_t from = rng.below(n);
      std::size_t to = rng.below(n - 1);
      if (to >= from) ++to;
      const IwasawaSeries c = random_polynomial(params, 1, rng);
      if (!fits(c, rows, from, to)) continue;
      const std::size_t len = rows ? nrel : g;
      for (std::size_t k = 0; k < len; ++k) {
        if (rows) a(to, k) += c * a(from, k);
        else a(k, to) += c * a(k, from);
      }
    } else {
      // Scale a line by a unit constant, or swap two lines.
      const std::size_t i = rng.below(n);
      if (rng.coin() || n < 2) {
        const IwasawaSeries u = random_unit_polynomial(params, 0, rng);
        const std::size_t len = rows ? nrel : g;
        for (std::size_t k = 0; k < len; ++k) {
          if (rows) a(i, k) *= u;
          else a(k, i) *= u;
        }
      } else {
        std::size_t j = rng.below(n - 1);
        if (j >= i) ++j;
        const std::size_t len = rows ? nrel : g;
        for (std::size_t k = 0; k < len; ++k) {
          if (rows) std::swap(a(i, k), a(j, k));
          else std::swap(a(k, i), a(k, j));
        }
      }
    }
  }
  return PresentedModule::from_matrix(a, m.flags());
}

PresentedModule twist_module(const PresentedModule& m, std::int64_t i) {
  std::vector<PresentedModule::Relation> rels;
  rels.reserve(m.relation_count());
  for (const auto& rel : m.relations()) {
    PresentedModule::Relation r;
    r.reserve(rel.size());
    for (const auto& e : rel) r.push_back(twist_substitute(e, i));
    rels.push_back(std::move(r));
  }
  return PresentedModule(m.params(), m.generators(), std::move(rels), m.flags());
}

PresentedModule mod_p_isomorphic_perturbation(const PresentedModule& m, std::uint64_t seed) {
  const RingParams& params = m.params();
  Rng rng(seed);
  const auto p = static_cast<std::int64_t>(params.prime());
  std::vector<PresentedModule::Relation> rels;
  rels.reserve(m.relation_count());
  for (const auto& rel : m.relations()) {
    PresentedModule::Relation r;
    r.reserve(rel.size());
    for (const auto& e : rel) r.push_back(e + random_polynomial(params, 2, rng).scaled(p));
    rels.push_back(std::move(r));
  }
  return PresentedModule(params, m.generators(), std::move(rels));
}

bool same_mod_p(const PresentedModule& a, const PresentedModule& b) {
  if (!(a.params() == b.params()) || a.generators() != b.generators() || a.relation_count() != b.relation_count()) {
    return false;
  }
  for (std::size_t j = 0; j < a.relation_count(); ++j) {
    for (std::size_t i = 0; i < a.generators(); ++i) {
      if (reduce_mod_p(a.entry(i, j)) != reduce_mod_p(b.entry(i, j))) return false;
    }
  }
  return true;
}

// --- Invariants ----------------------------------------------------------

std::int64_t coinvariant_exponent(const PresentedModule& m, int n, std::size_t budget) {
  const std::size_t g = m.generators();
  const std::uint32_t p = m.params().prime();
  const std::size_t dim = fplin::level_dimension(p, n, g, budget);
  if (g == 0) return 0;
  const std::size_t nrel = m.relation_count();
  // Mod p, (omega_n, p) = (X^{p^n}, p): work in F_p[X]/(X^{p^n}).
  fplin::FpMatrix big(p, g * dim, nrel * dim);
  for (std::size_t j = 0; j < nrel; ++j) {
    for (std::size_t i = 0; i < g; ++i) {
      const auto fbar = reduce_mod_p(m.entry(i, j));
      if (std::all_of(fbar.begin(), fbar.end(), [](std::uint32_t c) { return c == 0; })) continue;
      big.set_block(i * dim, j * dim, fplin::truncated_mult_matrix(p, fbar, dim));
    }
  }
  return static_cast<std::int64_t>(fplin::cokernel_dim(big));
}

namespace {

// omega_n = (1+X)^{p^n} - 1 over Z/p^k, dim + 1 coefficients.
std::vector<std::uint64_t> omega_poly(std::uint32_t p, std::size_t dim, std::uint64_t q) {
  std::vector<std::uint64_t> w(dim + 1, 0);
  // Binomial(dim, j) tracked as unit * p^v.
  std::uint64_t unit = 1;
  int v = 0;
  auto split = [p](std::uint64_t x, int& val) {
    while (x % p == 0) {
      x /= p;
      ++val;
    }
    return x;
  };
  for (std::size_t j = 1; j <= dim; ++j) {
    int up = 0;
    int down = 0;
    const std::uint64_t num = split(dim - j + 1, up);
    const std::uint64_t den = split(j, down);
    unit = modarith::mul(unit, num % q, q);
    unit = modarith::mul(unit, modarith::inverse(den % q, q), q);
    v += up - down;
    std::uint64_t value = unit;
    bool vanished = false;
    for (int t = 0; t < v; ++t) {
      value = modarith::mul(value, p, q);
      if (value == 0) {
        vanished = true;
        break;
      }
    }
    w[j] = vanished ? 0 : value;
  }
  return w;
}

}  // namespace

std::vector<int> coinvariant_factors(const PresentedModule& m, int n, int k, std::size_t budget) {
  const RingParams& params = m.params();
  if (k < 1 || k > params.precision_p()) throw InvalidArgument("coinvariant_factors: need 1 <= k <= N");
  const std::size_t g = m.generators();
  const std::uint32_t p = params.prime();
  const std::size_t dim = fplin::level_dimension(p, n, g, budget);
  if (g == 0) return {};
  const std::size_t nrel = m.relation_count();
  fplin::PkMatrix big(p, k, g * dim, nrel * dim);
  const std::uint64_t q = big.modulus();
  const std::vector<std::uint64_t> w = omega_poly(p, dim, q);

  for (std::size_t j = 0; j < nrel; ++j) {
    for (std::size_t i = 0; i < g; ++i) {
      const IwasawaSeries& f = m.entry(i, j);
      // f mod omega_n, by long division against the monic omega_n.
      std::vector<std::uint64_t> rem(std::max<std::size_t>(dim, static_cast<std::size_t>(f.length())), 0);
      for (int t = 0; t < f.length(); ++t) rem[static_cast<std::size_t>(t)] = f[static_cast<std::size_t>(t)] % q;
      for (std::size_t top = rem.size(); top-- > dim;) {
        const std::uint64_t c = rem[top];
        if (c == 0) continue;
        for (std::size_t t = 0; t <= dim; ++t) {
          const std::size_t pos = top - dim + t;
          rem[pos] = (rem[pos] + q - modarith::mul(c, w[t], q)) % q;
        }
      }
      rem.resize(dim);
      // Column t of the block is X^t f mod omega_n.
      for (std::size_t t = 0; t < dim; ++t) {
        for (std::size_t r = 0; r < dim; ++r) {
          if (rem[r] != 0) big.set(i * dim + r, j * dim + t, rem[r]);
        }
        const std::uint64_t lead = rem[dim - 1];
        for (std::size_t r = dim - 1; r > 0; --r) rem[r] = rem[r - 1];
        rem[0] = 0;
        if (lead != 0) {
          for (std::size_t r = 0; r < dim; ++r) rem[r] = (rem[r] + q - modarith::mul(lead, w[r], q)) % q;
        }
      }
    }
  }
  return fplin::invariant_factor_exponents(big);
}

std::int64_t coinvariant_length(const PresentedModule& m, int n, int k, std::size_t budget) {
  const auto f = coinvariant_factors(m, n, k, budget);
  std::int64_t total = 0;
  for (int e : f) total += e;
  return total;
}

namespace {

struct StableFit {
  std::int64_t slope = 0;
  std::int64_t intercept = 0;
};

// Slope and intercept when the last two increments agree on both.
std::optional<StableFit> stable_fit(const std::vector<GrowthEntry>& entries) {
  if (entries.size() < 3) return std::nullopt;
  const auto& a = entries[entries.size() - 3];
  const auto& b = entries[entries.size() - 2];
  const auto& c = entries[entries.size() - 1];
  const auto step1 = static_cast<std::int64_t>(b.pn - a.pn);
  const auto step2 = static_cast<std::int64_t>(c.pn - b.pn);
  if ((b.e - a.e) % step1 != 0 || (c.e - b.e) % step2 != 0) return std::nullopt;
  const std::int64_t s1 = (b.e - a.e) / step1;
  const std::int64_t s2 = (c.e - b.e) / step2;
  if (s1 != s2) return std::nullopt;
  return StableFit{s2, c.e - s2 * static_cast<std::int64_t>(c.pn)};
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

GrowthTrace growth_trace(const PresentedModule& m, int n_max, std::size_t budget) {
  if (n_max < 0) throw InvalidArgument("growth_trace: negative n_max");
  GrowthTrace trace{m.params(), {}, std::nullopt, std::nullopt};
  // Validate the whole window before doing any work.
  fplin::level_dimension(m.params().prime(), n_max, m.generators(), budget);
  for (int n = 0; n <= n_max; ++n) {
    trace.entries.push_back({n, ipow(m.params().prime(), n), coinvariant_exponent(m, n, budget)});
  }
  if (const auto fit = stable_fit(trace.entries)) {
    trace.slope = fit->slope;
    trace.intercept = fit->intercept;
  }
  return trace;
}

RankEstimate rank_estimate(const PresentedModule& m, std::size_t max_size) {
  const std::size_t g = m.generators();
  const std::size_t nrel = m.relation_count();
  if (g > max_size || nrel > max_size) {
    throw SizeExceeded("rank_estimate: presentation larger than the minor bound");
  }
  const std::size_t top = std::min(g, nrel);
  if (top == 0) return {g, true};
  const SeriesMatrix a = m.relation_matrix();

  // Visit every k-subset of [0, n) in lexicographic order.
  auto for_each_subset = [](std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (fn(idx)) return true;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) return false;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  };

  for (std::size_t k = top; k >= 1; --k) {
    const bool found = for_each_subset(g, k, [&](const std::vector<std::size_t>& rows) {
      return for_each_subset(nrel, k, [&](const std::vector<std::size_t>& cols) {
        return !det(a.minor(rows, cols), max_size).is_zero();
      });
    });
    // Every larger minor vanished at precision, which need not be exact.
    if (found) return {g - k, k == top};
  }
  return {g, false};
}

InvariantReport char_invariants(const PresentedModule& m) {
  if (m.generators() != m.relation_count()) {
    throw NotSquare("char_invariants: presentation is not square (free part or extra relations)");
  }
  InvariantReport report;
  report.method = InvariantMethod::char_generator;
  report.rank = 0;
  const IwasawaSeries d = det(m.relation_matrix());
  if (d.is_zero()) throw PrecisionExhausted("char_invariants: determinant vanishes at precision");
  const SeriesInvariants inv = series_invariants(d);
  report.mu = inv.mu;
  report.lambda = inv.lambda;
  report.lambda_tag = LambdaTag::exact;
  return report;
}

InvariantReport invariants_via_growth(const PresentedModule& m, const GrowthOptions& options) {
  const RingParams& params = m.params();
  const int n_max = options.n_max.value_or(default_growth_window(params.prime()));
  InvariantReport report;
  report.method = InvariantMethod::growth;
  const RankEstimate rank = rank_estimate(m);
  report.rank = rank.rank;
  report.rank_certified = rank.certified;

  const GrowthTrace trace = growth_trace(m, n_max, options.budget);
  if (!trace.slope) throw Unstable("invariants_via_growth: slope not stable within n <= " + std::to_string(n_max));
  const std::int64_t slope = *trace.slope;
  const auto r = static_cast<std::int64_t>(rank.rank);
  if (slope < r) throw Unstable("invariants_via_growth: slope below the rank estimate");
  report.slope = slope;
  report.mu_zero = slope == r;
  report.lambda = static_cast<int>(*trace.intercept);
  report.lambda_tag = m.flags().elementary_iso == Provenance::certified ? LambdaTag::exact : LambdaTag::with_defect;

  if (*report.mu_zero) {
    report.mu = 0;
  } else if (m.flags().elementary_iso == Provenance::certified) {
    // e((M/p^k)_{Gamma_n}) = (r*k + sum_i min(a_i, k)) p^n + t with 0 <= t <= k*lambda
    // for an elementary module, so the leading coefficient is a floor once
    // k*lambda < p^n. Its excess over r*k stops growing when k passes max a_i.
    const std::int64_t lambda_bound = std::max<std::int64_t>(*trace.intercept, 0);
    std::int64_t previous = slope - r;
    for (int k = 2; k <= params.precision_p(); ++k) {
      // Lowest level in the window where the floor is certified.
      int n = 0;
      while (n < n_max && k * lambda_bound >= static_cast<std::int64_t>(ipow(params.prime(), n))) ++n;
      const auto top = static_cast<std::int64_t>(ipow(params.prime(), n));
      if (k * lambda_bound >= top) break;
      const std::int64_t e = coinvariant_length(m, n, k, options.budget);
      const std::int64_t excess = (e - r * k * top) / top;
      if (excess == previous) {
        report.mu = static_cast<int>(excess);
        break;
      }
      previous = excess;
    }
  }
  report.precision_ok = rank.certified && report.mu.has_value();
  return report;
}

std::string to_string(InvariantMethod method) {
  return method == InvariantMethod::char_generator ? "char_generator" : "growth";
}

std::string to_string(LambdaTag tag) { return tag == LambdaTag::exact ? "lambda" : "lambda+defect"; }

std::string to_string(Provenance provenance) {
  return provenance == Provenance::certified ? "certified" : "unknown";
}

}  // namespace iwasawa
