#ifndef ENTROFLOW_FLOW_HPP
#define ENTROFLOW_FLOW_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entroflow/numeric.hpp"
#include "entroflow/symbols.hpp"
#include "entroflow/wordgen.hpp"

namespace entroflow {

// ---------------------------------------------------------------------------
// Bi-infinite sequence views
// ---------------------------------------------------------------------------

/// Read-only view of a two-sided {0,1}-sequence known on a finite stretch.
/// Reads outside that stretch throw WindowExhausted.
class Sequence {
 public:
  virtual ~Sequence() = default;

  virtual int at(const BigInt& k) const = 0;
  /// `len` symbols starting at `lo` as '0'/'1' text.
  virtual std::string extract(const BigInt& lo, std::size_t len) const;
  /// Symbols at k - radius .. k + radius.
  std::string window(const BigInt& k, std::int64_t radius) const {
    return extract(k - radius, static_cast<std::size_t>(2 * radius + 1));
  }
  /// Symbol of the constant sequence collapsed to the compactification point.
  virtual int fixed_symbol() const noexcept = 0;
  virtual std::string name() const = 0;
};

/// A materialized window, e.g. x* on [-R, R].
class WindowSequence final : public Sequence {
 public:
  WindowSequence(SymbolWindow symbols, int fixed_symbol, std::string name = "window");
  explicit WindowSequence(const BiSequenceWindow& w);

  int at(const BigInt& k) const override;
  std::string extract(const BigInt& lo, std::size_t len) const override;
  int fixed_symbol() const noexcept override { return fixed_; }
  std::string name() const override { return name_; }
  const SymbolWindow& symbols() const noexcept { return symbols_; }

 private:
  SymbolWindow symbols_;
  int fixed_;
  std::string name_;
};

/// y as known from A_depth: zeros on k < 0, A_depth on [0, |A|), then the
/// zero block O(|A|^2) that A_{depth+1} appends next.
class OmegaSequence final : public Sequence {
 public:
  explicit OmegaSequence(CompressedWord a_depth);

  int at(const BigInt& k) const override;
  std::string extract(const BigInt& lo, std::size_t len) const override;
  int fixed_symbol() const noexcept override { return 0; }
  std::string name() const override { return "omega"; }

  const CompressedWord& word() const noexcept { return a_; }
  /// One past the last known coordinate: |A| + |A|^2.
  const BigInt& known_end() const noexcept { return end_; }

 private:
  CompressedWord a_;
  BigInt end_;
};

// ---------------------------------------------------------------------------
// Cylinder step rules, roofs and points
// ---------------------------------------------------------------------------

/// Cylinder set: `pattern` read starting at coordinate k + anchor.
struct CylinderIndicator {
  std::string pattern;
  std::int64_t anchor = 0;

  bool matches(const Sequence& seq, const BigInt& k) const;
  /// "<pattern>@<anchor>".
  std::string describe() const;
  static CylinderIndicator parse(std::string_view spec);
  /// I_n: ones on [-n+1, n-1].
  static CylinderIndicator ohno(int n);
};

/// `inside` on the cylinder, `outside` elsewhere.
struct CylinderRule {
  CylinderIndicator cylinder;
  Rational inside = 1;
  Rational outside = 1;

  Rational eval(const Sequence& seq, const BigInt& k) const;
  /// Value on the constant sequence of `fixed_symbol`.
  Rational at_fixed_point(int fixed_symbol) const;
  Rational min_value() const { return inside < outside ? inside : outside; }
  Rational max_value() const { return inside < outside ? outside : inside; }

  /// "<pattern>@<anchor>:<inside>:<outside>", e.g. "1@0:2:1".
  std::string describe() const;
  static CylinderRule parse(std::string_view spec);
};

class RoofFunction {
 public:
  enum class Kind : std::uint8_t { unit, constant, ohno, cylinder_step };

  static RoofFunction unit();
  static RoofFunction constant(const Rational& c);
  /// n*4*3^n on I_n \ I_{n+1}, 1 off I_1.
  static RoofFunction ohno();
  static RoofFunction step(CylinderRule rule);
  /// "unit", "const:<p/q>", "ohno" or "step:<rule>".
  static RoofFunction parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  /// Constant value for unit and constant roofs.
  const Rational& value() const noexcept { return c_; }
  const CylinderRule& rule() const;
  bool is_constant() const noexcept { return kind_ == Kind::unit || kind_ == Kind::constant; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::unit;
  Rational c_ = 1;
  std::shared_ptr<const CylinderRule> rule_;
};

/// Largest n with the sequence equal to 1 on [k-n+1, k+n-1] (0 if x(k) = 0).
std::int64_t ohno_level(const Sequence& seq, const BigInt& k);

Rational roof_eval(const RoofFunction& roof, const Sequence& seq, const BigInt& k);

struct SuspensionPoint {
  bool infinity = false;
  BigInt k = 0;
  Rational u = 0;

  static SuspensionPoint base(BigInt k, Rational u) { return {false, std::move(k), std::move(u)}; }
  static SuspensionPoint at_infinity() { return {true, 0, 0}; }

  bool operator==(const SuspensionPoint& o) const {
    return infinity == o.infinity && (infinity || (k == o.k && u == o.u));
  }
  std::string describe() const;
};

struct FlowOutcome {
  SuspensionPoint point;
  std::int64_t crossings = 0;  // signed number of roof crossings
};

/// Exact flow map; the result satisfies 0 <= u < roof(k).
FlowOutcome flow(const SuspensionPoint& p, const Rational& t, const RoofFunction& roof, const Sequence& seq);
SuspensionPoint flow_step(const SuspensionPoint& p, const Rational& t, const RoofFunction& roof,
                          const Sequence& seq);

/// d_X + |u - u'| with d_X = 2^-min{|j| <= R : symbols differ}, 0 if none.
/// Infinity counts as the constant fixed-symbol sequence at height 0.
Rational distance(const SuspensionPoint& p, const SuspensionPoint& q, std::int64_t radius, const Sequence& seq);

// ---------------------------------------------------------------------------
// Finite witnesses for the omega system
// ---------------------------------------------------------------------------

struct TransitivityHit {
  SuspensionPoint target;
  std::optional<SuspensionPoint> orbit_point;  // empty if no hit was found
  Rational orbit_time = 0;
  Rational distance = 0;
  bool reached = false;
};

struct TransitivityReport {
  std::vector<TransitivityHit> hits;
  Rational threshold;
  std::int64_t radius = 0;
  bool all_reached = false;
};

/// Targets: `samples - 1` points Base(m, u) with m uniform in [0, |A_4|) and
/// u uniform in [0, 1) on a 1/1024 grid, plus Infinity. Each target is
/// matched with the leftmost forward-orbit point of Base(0, 0) (unit roof)
/// at orbit time >= t_min whose base window of `radius` equals the target's.
TransitivityReport transitivity_probe(const OmegaSequence& seq, std::size_t samples, std::uint64_t seed,
                                      std::int64_t radius = 5, const BigInt& t_min = 0);

struct NearInfinityWitness {
  SuspensionPoint point;
  Rational distance;
};

/// Orbit point at the middle of the zero block O(|A_4|^2) inside A_5.
NearInfinityWitness near_infinity_witness(const OmegaSequence& seq, std::int64_t radius);

}  // namespace entroflow

#endif
