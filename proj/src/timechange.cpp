#include "entroflow/timechange.hpp"

#include <algorithm>
#include <random>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

Rational min_of(const Rational& a, const Rational& b) { return a < b ? a : b; }

Rational uniform_grid(std::mt19937_64& rng, const Rational& lo, const Rational& hi, unsigned cells) {
  std::uniform_int_distribution<unsigned> d(0, cells - 1);
  return lo + (hi - lo) * Rational(d(rng), cells);
}

void require_unit_fiber(const SuspensionPoint& p) {
  if (!p.infinity && (p.u < 0 || p.u >= 1)) throw DomainError("point is not on the unit-roof suspension");
}

}  // namespace

SpeedFunction SpeedFunction::constant(const Rational& c) {
  if (c <= 0) throw DomainError("speed must be positive");
  SpeedFunction a;
  a.c_ = c;
  return a;
}

SpeedFunction SpeedFunction::base_step(CylinderRule rule, std::optional<Rational> at_infinity) {
  if (rule.min_value() <= 0 || (at_infinity && *at_infinity <= 0)) throw DomainError("speed must be positive");
  SpeedFunction a;
  a.rule_ = std::move(rule);
  a.infinity_ = std::move(at_infinity);
  return a;
}

SpeedFunction SpeedFunction::parse(std::string_view spec) {
  if (spec.starts_with("const:")) return constant(parse_rational(spec.substr(6)));
  if (spec.starts_with("step:")) return base_step(CylinderRule::parse(spec.substr(5)));
  throw DomainError("unknown speed '" + std::string(spec) + "'");
}

Rational SpeedFunction::eval(const Sequence& seq, const BigInt& k) const {
  return rule_ ? rule_->eval(seq, k) : c_;
}

Rational SpeedFunction::at_infinity(int fixed_symbol) const {
  if (!rule_) return c_;
  return infinity_ ? *infinity_ : rule_->at_fixed_point(fixed_symbol);
}

Rational SpeedFunction::min_value() const {
  if (!rule_) return c_;
  return infinity_ ? min_of(rule_->min_value(), *infinity_) : rule_->min_value();
}

Rational SpeedFunction::max_value() const {
  if (!rule_) return c_;
  Rational m = rule_->max_value();
  return infinity_ && *infinity_ > m ? *infinity_ : m;
}

RoofFunction SpeedFunction::as_roof() const {
  return rule_ ? RoofFunction::step(*rule_) : RoofFunction::constant(c_);
}

std::string SpeedFunction::describe() const {
  if (!rule_) return "const:" + to_wire(c_);
  std::string s = "step:" + rule_->describe();
  if (infinity_) s += " (infinity " + to_wire(*infinity_) + ")";
  return s;
}

Rational theta(const SuspensionPoint& p, const Rational& t, const SpeedFunction& a, const Sequence& seq) {
  require_unit_fiber(p);
  if (p.infinity) return a.at_infinity(seq.fixed_symbol()) * t;
  if (a.is_constant()) return a.eval(seq, p.k) * t;
  BigInt k = p.k;
  Rational u = p.u, rem = t < 0 ? Rational(-t) : t, acc = 0;
  if (t >= 0) {
    while (rem > 0) {
      Rational seg = min_of(rem, 1 - u);
      acc += seg * a.eval(seq, k);
      rem -= seg;
      ++k;
      u = 0;
    }
    return acc;
  }
  while (rem > 0) {
    if (u == 0) {
      --k;
      u = 1;
    }
    Rational seg = min_of(rem, u);
    acc -= seg * a.eval(seq, k);
    rem -= seg;
    u -= seg;
  }
  return acc;
}

Rational tau(const SuspensionPoint& p, const Rational& s, const SpeedFunction& a, const Sequence& seq) {
  require_unit_fiber(p);
  if (p.infinity) return s / a.at_infinity(seq.fixed_symbol());
  if (a.is_constant()) return s / a.eval(seq, p.k);
  BigInt k = p.k;
  Rational u = p.u, rem = s < 0 ? Rational(-s) : s, acc = 0;
  if (s >= 0) {
    while (rem > 0) {
      Rational speed = a.eval(seq, k);
      Rational cost = (1 - u) * speed;
      if (rem <= cost) return acc + rem / speed;
      acc += 1 - u;
      rem -= cost;
      ++k;
      u = 0;
    }
    return acc;
  }
  while (rem > 0) {
    if (u == 0) {
      --k;
      u = 1;
    }
    Rational speed = a.eval(seq, k);
    Rational cost = u * speed;
    if (rem <= cost) return acc - rem / speed;
    acc -= u;
    rem -= cost;
    u = 0;
  }
  return acc;
}

SuspensionPoint timechanged_step(const SuspensionPoint& p, const Rational& s, const SpeedFunction& a,
                                 const Sequence& seq) {
  if (p.infinity) return p;
  return flow_step(p, tau(p, s, a, seq), RoofFunction::unit(), seq);
}

SuspensionPoint conjugacy_pi(const SuspensionPoint& p, const SpeedFunction& a, const Sequence& seq) {
  if (p.infinity) return p;
  require_unit_fiber(p);
  return SuspensionPoint::base(p.k, p.u * a.eval(seq, p.k));
}

SuspensionPoint conjugacy_pi_inverse(const SuspensionPoint& q, const SpeedFunction& a, const Sequence& seq) {
  if (q.infinity) return q;
  Rational h = a.eval(seq, q.k);
  if (q.u < 0 || q.u >= h) throw DomainError("point is not on the suspension with roof a");
  return SuspensionPoint::base(q.k, q.u / h);
}

std::vector<ConjugacySample> sample_conjugacy_inputs(const SpeedFunction& a, const Sequence& seq,
                                                     std::int64_t k_lo, std::int64_t k_hi, std::size_t count,
                                                     std::uint64_t seed, std::int64_t t_max) {
  if (k_hi <= k_lo) throw DomainError("empty sampling range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> kd(k_lo, k_hi - 1);
  std::vector<ConjugacySample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    BigInt k = kd(rng);
    Rational v = uniform_grid(rng, 0, a.eval(seq, k), 1024);
    Rational t = uniform_grid(rng, -t_max, t_max, static_cast<unsigned>(512 * t_max + 1));
    out.push_back({SuspensionPoint::base(std::move(k), std::move(v)), std::move(t)});
  }
  return out;
}

ConjugacyReport verify_conjugacy(const std::vector<ConjugacySample>& samples, const SpeedFunction& a,
                                 const Sequence& seq) {
  ConjugacyReport r;
  r.samples = samples.size();
  const RoofFunction roof = a.as_roof();
  for (const auto& s : samples) {
    SuspensionPoint lhs = conjugacy_pi(timechanged_step(conjugacy_pi_inverse(s.q, a, seq), s.t, a, seq), a, seq);
    SuspensionPoint rhs = flow_step(s.q, s.t, roof, seq);
    if (!(lhs == rhs)) r.mismatches.push_back({s, std::move(lhs), std::move(rhs)});
  }
  return r;
}

CocycleReport check_cocycle(const SpeedFunction& a, const Sequence& seq, std::int64_t k_lo, std::int64_t k_hi,
                            std::size_t count, std::uint64_t seed) {
  if (k_hi <= k_lo) throw DomainError("empty sampling range");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> kd(k_lo, k_hi - 1);
  const RoofFunction unit = RoofFunction::unit();
  CocycleReport r;
  for (std::size_t i = 0; i < count; ++i) {
    SuspensionPoint p = SuspensionPoint::base(kd(rng), uniform_grid(rng, 0, 1, 1024));
    Rational t = uniform_grid(rng, -4, 4, 2049), s = uniform_grid(rng, -4, 4, 2049);
    ++r.cocycle_checks;
    if (theta(p, t + s, a, seq) != theta(p, t, a, seq) + theta(flow_step(p, t, unit, seq), s, a, seq))
      ++r.cocycle_failures;
    ++r.inversion_checks;
    if (theta(p, tau(p, s, a, seq), a, seq) != s) ++r.inversion_failures;
  }
  return r;
}

AbramovResult abramov_entropy(const Rational& h_base, const EmpiricalMeasure& m, const SpeedFunction& a) {
  if (h_base < 0) throw DomainError("base entropy must be nonnegative");
  AbramovResult r;
  r.h_base = h_base;
  r.expected_theta = expected_roof(m, a.as_roof(), 0).mean;
  if (r.expected_theta <= 0) throw DegenerateMeasure("expected time cost is not positive");
  r.value = h_base / r.expected_theta;
  return r;
}

AbramovResult abramov_entropy(double h_base, const EmpiricalMeasure& m, const SpeedFunction& a) {
  return abramov_entropy(snap12(h_base), m, a);
}

TheoremReport theorem_runner(const Rational& target_b, TheoremMode mode, double h_estimate,
                             const EmpiricalMeasure& m, std::size_t conjugacy_samples, std::uint64_t seed,
                             const BowenProbe& bowen) {
  if (!(h_estimate > 0)) throw DomainError("entropy estimate must be positive");
  if (target_b <= 0) throw DomainError("target entropy must be positive");
  TheoremReport r;
  r.mode = mode;
  r.target_b = target_b;
  r.h_estimate = snap12(h_estimate);
  if (mode == TheoremMode::A && target_b >= r.h_estimate)
    throw DomainError("mode A needs a target below the entropy estimate");
  r.speed = SpeedFunction::constant(r.h_estimate / target_b);

  const std::int64_t lo = static_cast<std::int64_t>(m.start());
  const std::int64_t span = static_cast<std::int64_t>(std::min<std::uint64_t>(m.horizon(), 1000));
  r.conjugacy = verify_conjugacy(
      sample_conjugacy_inputs(r.speed, m.sequence(), lo, lo + span, conjugacy_samples, seed), r.speed, m.sequence());
  r.abramov = abramov_entropy(r.h_estimate, m, r.speed);

  if (bowen) {
    BowenCrossCheck b;
    auto [unit, w1] = bowen(RoofFunction::unit());
    auto [changed, w2] = bowen(r.speed.as_roof());
    b.unit = unit;
    b.changed = changed;
    b.warning = w1 || w2 || unit <= 0;
    b.ratio = unit > 0 ? changed / unit : 0;
    b.predicted = to_double(1 / r.abramov.expected_theta);
    b.deviation = std::abs(b.ratio - b.predicted);
    r.bowen = b;
  }
  return r;
}

}  // namespace entroflow
