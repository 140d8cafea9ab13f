#ifndef ENTROFLOW_MEASURE_HPP
#define ENTROFLOW_MEASURE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "entroflow/flow.hpp"
#include "entroflow/numeric.hpp"

namespace entroflow {

/// Mass 1/L on each of the base points start, ..., start + L - 1.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::shared_ptr<const Sequence> seq, BigInt start, std::uint64_t horizon);

  const Sequence& sequence() const noexcept { return *seq_; }
  std::shared_ptr<const Sequence> sequence_ptr() const noexcept { return seq_; }
  const BigInt& start() const noexcept { return start_; }
  std::uint64_t horizon() const noexcept { return horizon_; }

 private:
  std::shared_ptr<const Sequence> seq_;
  BigInt start_;
  std::uint64_t horizon_;
};

/// Exact fraction of the L orbit points lying in the cylinder.
Rational birkhoff_frequency(const EmpiricalMeasure& m, const CylinderIndicator& c);

struct RoofDiagnostic {
  int n = 0;
  Rational frequency;  // of I_n
  Rational bound;      // 1/(4*3^n)
  Rational weighted;   // n*4*3^n*frequency
  bool frequency_bound_holds = false;
  bool exceeds_n = false;  // weighted > n
};

struct RoofExpectation {
  Rational mean;
  Rational max_value;
  std::vector<RoofDiagnostic> diagnostics;  // filled for the Ohno roof
};

/// Exact average of the roof over the segment. For the Ohno roof the
/// diagnostics carry n*4*3^n*freq(I_n) for n = 1..levels.
RoofExpectation expected_roof(const EmpiricalMeasure& m, const RoofFunction& roof, int levels = 3);

// ---------------------------------------------------------------------------
// Observables on suspensions
// ---------------------------------------------------------------------------

/// coef * [base in cylinder] * [base == position] * t^power, where t is the
/// fiber coordinate. Absent restrictions mean "everywhere".
struct ObservableTerm {
  Rational coef = 1;
  std::optional<CylinderIndicator> cylinder;
  std::optional<BigInt> position;
  unsigned power = 0;
};

class Observable {
 public:
  static Observable constant(const Rational& c);
  static Observable indicator(const CylinderIndicator& c);
  static Observable at_position(const BigInt& k);
  static Observable fiber_power(unsigned p, const Rational& coef = 1);

  Observable& add(ObservableTerm term);
  Observable operator+(const Observable& o) const;
  Observable scaled(const Rational& c) const;
  /// Product of two single-term observables.
  Observable times(const Observable& o) const;

  const std::vector<ObservableTerm>& terms() const noexcept { return terms_; }
  unsigned degree() const noexcept;

  Rational eval(const Sequence& seq, const BigInt& k, const Rational& t) const;
  /// Exact integral of t -> f(k, t) over [lo, hi].
  Rational fiber_integral(const Sequence& seq, const BigInt& k, const Rational& lo, const Rational& hi) const;

 private:
  std::vector<ObservableTerm> terms_;
};

/// (1/E(roof)) E(integral_0^roof f(x, t) dt), exact for polynomial observables.
Rational suspend_measure(const EmpiricalMeasure& m, const RoofFunction& roof, const Observable& f);

using FiberFunction = std::function<double(const Sequence&, const BigInt&, double)>;
/// Same formula for an arbitrary integrand; fiber integrals by the midpoint
/// rule, refined until successive estimates differ by less than `tol`
/// (relative once the estimate exceeds 1).
double suspend_measure(const EmpiricalMeasure& m, const RoofFunction& roof, const FiberFunction& f,
                       double tol = 1e-9);

// ---------------------------------------------------------------------------
// Time-change transforms on a periodic orbit
// ---------------------------------------------------------------------------

/// Invariant measure of the unit-roof flow over the periodic orbit that
/// closes the segment start..start+L-1 into a cycle: weight w_i on fiber
/// start+i, uniform in the fiber coordinate.
class FiberMeasure {
 public:
  static FiberMeasure uniform(const EmpiricalMeasure& m);
  FiberMeasure(std::shared_ptr<const Sequence> seq, BigInt start, std::vector<Rational> weights);

  const Sequence& sequence() const noexcept { return *seq_; }
  std::shared_ptr<const Sequence> sequence_ptr() const noexcept { return seq_; }
  const BigInt& start() const noexcept { return start_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  /// sum_i w_i * integral_0^1 f(start+i, t) dt
  Rational expectation(const Observable& f) const;

 private:
  std::shared_ptr<const Sequence> seq_;
  BigInt start_;
  std::vector<Rational> weights_;
};

enum class TimeChangeDirection { forward, inverse };

/// forward: E(f) for the time-changed measure, (1/E(theta(.,1))) E(int_0^theta(x,1) f(hat-phi_s x) ds).
/// inverse: E(f) for the original measure recovered from a time-changed one,
///          (1/E(tau(.,1))) E(int_0^tau(x,1) f(phi_t x) dt).
/// `speed[i]` is the fiberwise speed on fiber start+i. Path integrals follow
/// the orbit through fiber crossings and are integrated exactly in u.
Rational timechange_measure(const FiberMeasure& m, const std::vector<Rational>& speed, const Observable& f,
                            TimeChangeDirection direction);

/// The transformed measure itself, its weights read off fiber by fiber.
FiberMeasure timechange_transform(const FiberMeasure& m, const std::vector<Rational>& speed,
                                  TimeChangeDirection direction);

}  // namespace entroflow

#endif
