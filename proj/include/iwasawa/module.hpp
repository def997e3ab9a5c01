#pragma once

// Finitely presented Lambda-modules M = Lambda^g / (span of relation vectors).
//
// Relation entries are read as polynomials of degree < M (the X-adic
// precision). Invariants come from two independent routes: the determinant of
// a square presentation, and the growth of e((M/p)_{Gamma_n}) in n.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwasawa/fplin.hpp"
#include "iwasawa/random.hpp"
#include "iwasawa/ring.hpp"
#include "iwasawa/series_matrix.hpp"

namespace iwasawa {

enum class Provenance { unknown, certified };

struct ModuleFlags {
  Provenance no_finite_submodule = Provenance::unknown;
  Provenance elementary_iso = Provenance::unknown;

  static ModuleFlags certified_elementary() { return {Provenance::certified, Provenance::certified}; }
  friend bool operator==(const ModuleFlags&, const ModuleFlags&) = default;
};

/// Certified only where both inputs are.
ModuleFlags conjunction(const ModuleFlags& a, const ModuleFlags& b);

class PresentedModule {
 public:
  using Relation = std::vector<IwasawaSeries>;

  /// Flags should only be certified by constructions that guarantee them.
  PresentedModule(const RingParams& params, std::size_t generators, std::vector<Relation> relations,
                  ModuleFlags flags = {});
  static PresentedModule from_matrix(const SeriesMatrix& relations, ModuleFlags flags = {});
  static PresentedModule zero(const RingParams& params);

  const RingParams& params() const { return params_; }
  std::size_t generators() const { return generators_; }
  std::size_t relation_count() const { return relations_.size(); }
  const std::vector<Relation>& relations() const { return relations_; }
  const IwasawaSeries& entry(std::size_t generator, std::size_t relation) const {
    return relations_[relation][generator];
  }
  const ModuleFlags& flags() const { return flags_; }

  /// generators x relations.
  SeriesMatrix relation_matrix() const;
  /// Largest polynomial degree among the entries (-1 when all vanish).
  int max_degree() const;

  friend bool operator==(const PresentedModule&, const PresentedModule&) = default;

 private:
  RingParams params_;
  std::size_t generators_;
  std::vector<Relation> relations_;
  ModuleFlags flags_;
};

struct RankEstimate {
  std::size_t rank = 0;
  bool certified = true;
};

enum class InvariantMethod { char_generator, growth };

/// Whether a reported lambda is provably lambda or may carry a defect.
enum class LambdaTag { exact, with_defect };

struct InvariantReport {
  std::size_t rank = 0;
  std::optional<int> mu;
  std::optional<int> lambda;
  InvariantMethod method = InvariantMethod::char_generator;
  bool precision_ok = true;
  LambdaTag lambda_tag = LambdaTag::exact;
  bool rank_certified = true;
  // Growth route only.
  std::optional<bool> mu_zero;
  std::optional<std::int64_t> slope;
};

struct GrowthEntry {
  int n = 0;
  std::uint64_t pn = 1;
  std::int64_t e = 0;
};

struct GrowthTrace {
  RingParams params;
  std::vector<GrowthEntry> entries;
  /// (e_{n+1} - e_n) / (p^{n+1} - p^n), when integral and equal over the last two steps.
  std::optional<std::int64_t> slope;
  /// e_n - slope * p^n at the last level, when the slope is stable.
  std::optional<std::int64_t> intercept;
};

struct GrowthOptions {
  std::optional<int> n_max;
  std::size_t budget = fplin::kDefaultDimensionBudget;
};

/// Default level window: n up to 4 for p = 3, 3 for p = 5.
int default_growth_window(std::uint32_t p);

// --- Constructions -------------------------------------------------------

/// Lambda^r + sum Lambda/p^{a_i} + sum Lambda/(F_j), block diagonal.
PresentedModule elementary(const RingParams& params, std::size_t r, const std::vector<int>& a,
                           const std::vector<IwasawaSeries>& F);
PresentedModule free_module(const RingParams& params, std::size_t r);
PresentedModule direct_sum(const PresentedModule& a, const PresentedModule& b);

/// B with 0 -> A -> B -> C -> 0: presentation [[R_A, coupling], [0, R_C]].
/// `coupling` is generators(A) x relation_count(C). C's relations must be
/// independent so that A injects.
PresentedModule extension(const PresentedModule& a, const PresentedModule& c, const SeriesMatrix& coupling);

/// The ideal (p^a, X^b) of Lambda: Lambda^2 / <(X^b, -p^a)>. Cokernel in Lambda is finite.
PresentedModule ideal_module(const RingParams& params, int a, int b);

/// The submodule (p, X) Lambda/(F) of Lambda/(F), index p. F distinguished.
PresentedModule augmentation_submodule(const IwasawaSeries& F);

/// Same module under seeded invertible row and column operations over Lambda.
/// Operations that would push a degree to M or beyond are skipped.
PresentedModule conjugate(const PresentedModule& m, std::uint64_t seed, int operations = -1);

/// Entrywise twist_substitute; flags are preserved.
PresentedModule twist_module(const PresentedModule& m, std::int64_t i);

/// Relations + p * (seeded random polynomials of degree <= 2).
PresentedModule mod_p_isomorphic_perturbation(const PresentedModule& m, std::uint64_t seed);

/// Equal shapes and entries congruent mod p.
bool same_mod_p(const PresentedModule& a, const PresentedModule& b);

// --- Invariants ----------------------------------------------------------

/// e((M/p)_{Gamma_n}) = dim_Fp coker over F_p[X]/(X^{p^n}).
std::int64_t coinvariant_exponent(const PresentedModule& m, int n,
                                  std::size_t budget = fplin::kDefaultDimensionBudget);

/// e((M/p^k)_{Gamma_n}) computed over (Z/p^k)[X]/(omega_n); 1 <= k <= N.
std::int64_t coinvariant_length(const PresentedModule& m, int n, int k,
                                std::size_t budget = fplin::kDefaultDimensionBudget);

/// Cyclic factor exponents of (M/p^k)_{Gamma_n} as an abelian group.
std::vector<int> coinvariant_factors(const PresentedModule& m, int n, int k,
                                     std::size_t budget = fplin::kDefaultDimensionBudget);

GrowthTrace growth_trace(const PresentedModule& m, int n_max,
                         std::size_t budget = fplin::kDefaultDimensionBudget);

RankEstimate rank_estimate(const PresentedModule& m, std::size_t max_size = kDefaultDetBound);

InvariantReport char_invariants(const PresentedModule& m);

InvariantReport invariants_via_growth(const PresentedModule& m, const GrowthOptions& options = {});

std::string to_string(InvariantMethod method);
std::string to_string(LambdaTag tag);
std::string to_string(Provenance provenance);

}  // namespace iwasawa
