#ifndef ENTROFLOW_TIMECHANGE_HPP
#define ENTROFLOW_TIMECHANGE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entroflow/flow.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/numeric.hpp"

namespace entroflow {

/// Fiberwise-constant speed a(x, u) = a(x) over the unit-roof suspension.
class SpeedFunction {
 public:
  static SpeedFunction constant(const Rational& c);
  /// `at_infinity` defaults to the rule's value on the constant fixed-symbol sequence.
  static SpeedFunction base_step(CylinderRule rule, std::optional<Rational> at_infinity = std::nullopt);
  /// "const:<p/q>" or "step:<pattern>@<anchor>:<inside>:<outside>".
  static SpeedFunction parse(std::string_view spec);

  bool is_constant() const noexcept { return !rule_; }
  Rational eval(const Sequence& seq, const BigInt& k) const;
  Rational at_infinity(int fixed_symbol) const;
  Rational min_value() const;
  Rational max_value() const;
  /// Roof of the suspension the time-changed flow is conjugate to.
  RoofFunction as_roof() const;
  std::string describe() const;

 private:
  Rational c_ = 1;
  std::optional<CylinderRule> rule_;
  std::optional<Rational> infinity_;
};

/// theta(p, t) = integral_0^t a(Phi^1_s p) ds, exact.
Rational theta(const SuspensionPoint& p, const Rational& t, const SpeedFunction& a, const Sequence& seq);
/// Unit-flow time needed to accumulate s: theta(p, tau(p, s)) = s.
Rational tau(const SuspensionPoint& p, const Rational& s, const SpeedFunction& a, const Sequence& seq);
/// Phi^1_{tau(p, s)} p.
SuspensionPoint timechanged_step(const SuspensionPoint& p, const Rational& s, const SpeedFunction& a,
                                 const Sequence& seq);

/// (k, u) -> (k, u * a(k)) into the suspension with roof a.
SuspensionPoint conjugacy_pi(const SuspensionPoint& p, const SpeedFunction& a, const Sequence& seq);
SuspensionPoint conjugacy_pi_inverse(const SuspensionPoint& q, const SpeedFunction& a, const Sequence& seq);

struct ConjugacySample {
  SuspensionPoint q;  // point of the roof-a suspension
  Rational t;
};

/// `count` points Base(k, v) with k uniform in [k_lo, k_hi), v on a 1/1024
/// grid of [0, a(k)), and times on a 1/256 grid of [-t_max, t_max].
std::vector<ConjugacySample> sample_conjugacy_inputs(const SpeedFunction& a, const Sequence& seq,
                                                     std::int64_t k_lo, std::int64_t k_hi, std::size_t count,
                                                     std::uint64_t seed, std::int64_t t_max = 4);

struct ConjugacyMismatch {
  ConjugacySample sample;
  SuspensionPoint via_time_change;  // pi(hat-Phi_t(pi^-1 q))
  SuspensionPoint via_roof;         // Phi^a_t q
};

struct ConjugacyReport {
  std::size_t samples = 0;
  std::vector<ConjugacyMismatch> mismatches;
  bool ok() const noexcept { return mismatches.empty(); }
};

ConjugacyReport verify_conjugacy(const std::vector<ConjugacySample>& samples, const SpeedFunction& a,
                                 const Sequence& seq);

struct CocycleReport {
  std::size_t cocycle_checks = 0;
  std::size_t cocycle_failures = 0;
  std::size_t inversion_checks = 0;
  std::size_t inversion_failures = 0;
  bool ok() const noexcept { return cocycle_failures == 0 && inversion_failures == 0; }
};

/// theta(p, t+s) = theta(p, t) + theta(Phi^1_t p, s) and theta(p, tau(p, s)) = s
/// on `count` seeded samples with base points in [k_lo, k_hi).
CocycleReport check_cocycle(const SpeedFunction& a, const Sequence& seq, std::int64_t k_lo, std::int64_t k_hi,
                            std::size_t count, std::uint64_t seed);

struct AbramovResult {
  Rational h_base;          // input snapped to 12 significant digits
  Rational expected_theta;  // E_m(theta(., 1))
  Rational value;           // h_base / expected_theta
  std::string display() const { return format_sig(value, 12); }
};

AbramovResult abramov_entropy(double h_base, const EmpiricalMeasure& m, const SpeedFunction& a);
AbramovResult abramov_entropy(const Rational& h_base, const EmpiricalMeasure& m, const SpeedFunction& a);

enum class TheoremMode { A, B };

struct BowenCrossCheck {
  double unit = 0;
  double changed = 0;
  double ratio = 0;      // changed / unit
  double predicted = 0;  // 1 / E(theta(., 1))
  double deviation = 0;  // |ratio - predicted|
  bool warning = false;
};

struct TheoremReport {
  TheoremMode mode = TheoremMode::B;
  Rational target_b;
  Rational h_estimate;
  SpeedFunction speed = SpeedFunction::constant(1);
  ConjugacyReport conjugacy;
  AbramovResult abramov;
  std::optional<BowenCrossCheck> bowen;
  bool achieved() const { return conjugacy.ok() && abramov.value == target_b; }
};

/// Entropy estimator used for the cross-check; receives the roof to suspend under.
using BowenProbe = std::function<std::pair<double, bool>(const RoofFunction&)>;

/// Speed a = h_estimate / b. Mode A requires 0 < b < h_estimate.
TheoremReport theorem_runner(const Rational& target_b, TheoremMode mode, double h_estimate,
                             const EmpiricalMeasure& m, std::size_t conjugacy_samples, std::uint64_t seed,
                             const BowenProbe& bowen = {});

}  // namespace entroflow

#endif
