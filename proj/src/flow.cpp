#include "entroflow/flow.hpp"

#include <algorithm>
#include <random>

#include "entroflow/errors.hpp"
#include "entroflow/language.hpp"

namespace entroflow {

namespace {

std::int64_t radius_needed(const BigInt& k) {
  BigInt a = k < 0 ? BigInt(-k) : k;
  if (a > BigInt(INT64_MAX)) return INT64_MAX;
  return a.convert_to<std::int64_t>();
}

Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace

std::string Sequence::extract(const BigInt& lo, std::size_t len) const {
  std::string out;
  out.reserve(len);
  for (std::size_t j = 0; j < len; ++j) out.push_back(at(lo + j) ? '1' : '0');
  return out;
}

// ---------------------------------------------------------------------------
// WindowSequence
// ---------------------------------------------------------------------------

WindowSequence::WindowSequence(SymbolWindow symbols, int fixed_symbol, std::string name)
    : symbols_(std::move(symbols)), fixed_(fixed_symbol), name_(std::move(name)) {}

WindowSequence::WindowSequence(const BiSequenceWindow& w) : WindowSequence(w.symbols, 1, "ohno") {}

int WindowSequence::at(const BigInt& k) const {
  if (k < symbols_.first() || k >= symbols_.end())
    throw WindowExhausted("coordinate " + k.str() + " outside the materialized window", radius_needed(k));
  return symbols_[k.convert_to<std::int64_t>()];
}

std::string WindowSequence::extract(const BigInt& lo, std::size_t len) const {
  BigInt hi = lo + len;
  if (lo < symbols_.first() || hi > symbols_.end())
    throw WindowExhausted("range [" + lo.str() + ", " + hi.str() + ") leaves the materialized window",
                          std::max(radius_needed(lo), radius_needed(hi - 1)));
  auto b = symbols_.bits().subspan(static_cast<std::size_t>(lo.convert_to<std::int64_t>() - symbols_.first()), len);
  return bits_to_string(b);
}

// ---------------------------------------------------------------------------
// OmegaSequence
// ---------------------------------------------------------------------------

OmegaSequence::OmegaSequence(CompressedWord a_depth)
    : a_(std::move(a_depth)), end_(a_.length() + a_.length() * a_.length()) {}

int OmegaSequence::at(const BigInt& k) const {
  if (k < 0) return 0;
  if (k < a_.length()) return a_.at(k);
  if (k < end_) return 0;
  throw WindowExhausted("coordinate " + k.str() + " lies beyond the known part of y", radius_needed(k));
}

std::string OmegaSequence::extract(const BigInt& first, std::size_t len) const {
  BigInt lo = first, hi = first + len;
  if (hi > end_)
    throw WindowExhausted("range ending at " + hi.str() + " lies beyond the known part of y", radius_needed(hi - 1));
  std::string out;
  out.reserve(len);
  if (lo < 0) {
    BigInt z = hi < 0 ? BigInt(hi - lo) : BigInt(-lo);
    out.append(z.convert_to<std::size_t>(), '0');
    lo = 0;
  }
  if (lo < hi && lo < a_.length()) {
    BigInt stop = hi < a_.length() ? hi : a_.length();
    out += a_.extract(lo, (stop - lo).convert_to<std::size_t>());
    lo = stop;
  }
  if (lo < hi) out.append((hi - lo).convert_to<std::size_t>(), '0');
  return out;
}

// ---------------------------------------------------------------------------
// Rules and roofs
// ---------------------------------------------------------------------------

bool CylinderIndicator::matches(const Sequence& seq, const BigInt& k) const {
  return seq.extract(k + anchor, pattern.size()) == pattern;
}

std::string CylinderIndicator::describe() const { return pattern + "@" + std::to_string(anchor); }

CylinderIndicator CylinderIndicator::parse(std::string_view spec) {
  auto fail = [&] { throw FormatError("cylinder must look like <pattern>@<anchor>, got '" + std::string(spec) + "'"); };
  CylinderIndicator c;
  auto at = spec.find('@');
  c.pattern = std::string(spec.substr(0, at));
  if (c.pattern.empty()) fail();
  for (char ch : c.pattern)
    if (ch != '0' && ch != '1') fail();
  if (at != std::string_view::npos) {
    try {
      std::size_t used = 0;
      std::string a(spec.substr(at + 1));
      c.anchor = std::stoll(a, &used);
      if (used != a.size()) fail();
    } catch (const std::logic_error&) {
      fail();
    }
  }
  return c;
}

CylinderIndicator CylinderIndicator::ohno(int n) {
  if (n < 1) throw DomainError("I_n needs n >= 1");
  return {std::string(static_cast<std::size_t>(2 * n - 1), '1'), -(n - 1)};
}

Rational CylinderRule::eval(const Sequence& seq, const BigInt& k) const {
  return cylinder.matches(seq, k) ? inside : outside;
}

Rational CylinderRule::at_fixed_point(int fixed_symbol) const {
  const char c = fixed_symbol ? '1' : '0';
  const auto& p = cylinder.pattern;
  return std::all_of(p.begin(), p.end(), [c](char x) { return x == c; }) ? inside : outside;
}

std::string CylinderRule::describe() const {
  return cylinder.describe() + ":" + to_wire(inside) + ":" + to_wire(outside);
}

CylinderRule CylinderRule::parse(std::string_view spec) {
  auto fail = [&] {
    throw FormatError("step rule must look like <pattern>@<anchor>:<inside>:<outside>, got '" + std::string(spec) + "'");
  };
  auto c1 = spec.find(':');
  if (c1 == std::string_view::npos) fail();
  auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) fail();
  CylinderRule r;
  r.cylinder = CylinderIndicator::parse(spec.substr(0, c1));
  r.inside = parse_rational(spec.substr(c1 + 1, c2 - c1 - 1));
  r.outside = parse_rational(spec.substr(c2 + 1));
  if (r.inside <= 0 || r.outside <= 0) throw DomainError("step values must be positive");
  return r;
}

RoofFunction RoofFunction::unit() { return RoofFunction(); }

RoofFunction RoofFunction::constant(const Rational& c) {
  if (c <= 0) throw DomainError("roof constant must be positive");
  RoofFunction r;
  r.kind_ = c == 1 ? Kind::unit : Kind::constant;
  r.c_ = c;
  return r;
}

RoofFunction RoofFunction::ohno() {
  RoofFunction r;
  r.kind_ = Kind::ohno;
  return r;
}

RoofFunction RoofFunction::step(CylinderRule rule) {
  if (rule.min_value() <= 0) throw DomainError("step values must be positive");
  RoofFunction r;
  r.kind_ = Kind::cylinder_step;
  r.rule_ = std::make_shared<const CylinderRule>(std::move(rule));
  return r;
}

RoofFunction RoofFunction::parse(std::string_view spec) {
  if (spec == "unit") return unit();
  if (spec == "ohno") return ohno();
  if (spec.starts_with("const:")) return constant(parse_rational(spec.substr(6)));
  if (spec.starts_with("step:")) return step(CylinderRule::parse(spec.substr(5)));
  throw FormatError("roof must be unit, const:<p/q>, ohno or step:<rule>, got '" + std::string(spec) + "'");
}

const CylinderRule& RoofFunction::rule() const {
  if (!rule_) throw DomainError("roof has no step rule");
  return *rule_;
}

std::string RoofFunction::describe() const {
  switch (kind_) {
    case Kind::unit: return "unit";
    case Kind::constant: return "const:" + to_wire(c_);
    case Kind::ohno: return "ohno";
    case Kind::cylinder_step: return "step:" + rule_->describe();
  }
  return "unit";
}

std::int64_t ohno_level(const Sequence& seq, const BigInt& k) {
  for (std::int64_t j = 0;; ++j)
    if (seq.at(k - j) == 0 || seq.at(k + j) == 0) return j;
}

Rational roof_eval(const RoofFunction& roof, const Sequence& seq, const BigInt& k) {
  switch (roof.kind()) {
    case RoofFunction::Kind::unit:
    case RoofFunction::Kind::constant:
      return roof.value();
    case RoofFunction::Kind::cylinder_step:
      return roof.rule().eval(seq, k);
    case RoofFunction::Kind::ohno: {
      std::int64_t n = ohno_level(seq, k);
      if (n == 0) return 1;
      return Rational(BigInt(n) * 4 * pow3(static_cast<unsigned>(n)));
    }
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Points and the flow map
// ---------------------------------------------------------------------------

std::string SuspensionPoint::describe() const {
  if (infinity) return "Infinity";
  return "(" + k.str() + ", " + to_wire(u) + ")";
}

FlowOutcome flow(const SuspensionPoint& p, const Rational& t, const RoofFunction& roof, const Sequence& seq) {
  if (p.infinity) return {p, 0};
  if (p.u < 0) throw DomainError("fiber coordinate must be nonnegative");
  BigInt k = p.k;
  Rational s = p.u + t;
  std::int64_t crossings = 0;
  if (roof.is_constant()) {
    const Rational& c = roof.value();
    BigInt q = floor_of(s / c);
    k += q;
    s -= Rational(q) * c;
    crossings = q.convert_to<std::int64_t>();
    return {SuspensionPoint::base(std::move(k), std::move(s)), crossings};
  }
  for (Rational g = roof_eval(roof, seq, k); s >= g; g = roof_eval(roof, seq, k)) {
    s -= g;
    ++k;
    ++crossings;
  }
  while (s < 0) {
    --k;
    s += roof_eval(roof, seq, k);
    --crossings;
  }
  return {SuspensionPoint::base(std::move(k), std::move(s)), crossings};
}

SuspensionPoint flow_step(const SuspensionPoint& p, const Rational& t, const RoofFunction& roof,
                          const Sequence& seq) {
  return flow(p, t, roof, seq).point;
}

Rational distance(const SuspensionPoint& p, const SuspensionPoint& q, std::int64_t radius, const Sequence& seq) {
  if (radius < 0) throw BoundsError("radius must be nonnegative");
  if (p.infinity && q.infinity) return 0;
  auto first_difference = [radius](const std::string& a, const std::string& b) -> std::optional<std::int64_t> {
    for (std::int64_t j = 0; j <= radius; ++j) {
      if (a[static_cast<std::size_t>(radius + j)] != b[static_cast<std::size_t>(radius + j)] ||
          a[static_cast<std::size_t>(radius - j)] != b[static_cast<std::size_t>(radius - j)])
        return j;
    }
    return std::nullopt;
  };
  auto dx = [](std::optional<std::int64_t> j) {
    return j ? Rational(1, pow2(static_cast<unsigned>(*j))) : Rational(0);
  };
  if (p.infinity || q.infinity) {
    const SuspensionPoint& b = p.infinity ? q : p;
    std::string w = seq.window(b.k, radius);
    std::string fixed(w.size(), seq.fixed_symbol() ? '1' : '0');
    return dx(first_difference(w, fixed)) + abs_of(b.u);
  }
  std::string a = seq.window(p.k, radius), b = seq.window(q.k, radius);
  return dx(first_difference(a, b)) + abs_of(p.u - q.u);
}

// ---------------------------------------------------------------------------
// Omega witnesses
// ---------------------------------------------------------------------------

TransitivityReport transitivity_probe(const OmegaSequence& seq, std::size_t samples, std::uint64_t seed,
                                      std::int64_t radius, const BigInt& t_min) {
  if (samples == 0) throw DomainError("need at least one target");
  if (radius < 1) throw DomainError("radius must be positive");
  const BigInt a4 = build_A(4).A(4).length();
  if (seq.word().length() < a4) throw ResourceBound("transitivity probe needs y known through A_4", "depth >= 4");

  // Orbit centers k map to positions k in zeros(radius) A O(|A|^2).
  const CompressedWord& a = seq.word();
  CompressedWord padded = CompressedWord::concat(
      CompressedWord::concat(CompressedWord::zeros(radius), a), CompressedWord::zeros(a.length() * a.length()));

  std::mt19937_64 rng(seed);
  std::vector<SuspensionPoint> targets;
  const auto span = a4.convert_to<std::uint64_t>();
  for (std::size_t i = 0; i + 1 < samples; ++i) {
    BigInt m = rng() % span;
    Rational u(static_cast<long>(rng() % 1024), 1024);
    targets.push_back(SuspensionPoint::base(m, u));
  }
  targets.push_back(SuspensionPoint::at_infinity());

  TransitivityReport rep;
  rep.threshold = Rational(1, 32);
  rep.radius = radius;
  rep.all_reached = true;
  for (const auto& target : targets) {
    TransitivityHit hit;
    hit.target = target;
    std::string pat = target.infinity ? std::string(static_cast<std::size_t>(2 * radius + 1), '0')
                                      : seq.window(target.k, radius);
    std::optional<BigInt> center;
    for (std::size_t limit = 16;; limit *= 4) {
      auto occ = occurrences(padded, pat, limit);
      for (const auto& p : occ)
        if (p >= t_min) {
          center = p;
          break;
        }
      if (center || occ.size() < limit) break;
    }
    if (center) {
      Rational u = target.infinity ? Rational(0) : target.u;
      hit.orbit_point = SuspensionPoint::base(*center, u);
      hit.orbit_time = Rational(*center) + u;
      // the orbit of Base(0, 0) under the unit roof visits (k, u) at time k + u
      SuspensionPoint check = flow_step(SuspensionPoint::base(0, 0), hit.orbit_time, RoofFunction::unit(), seq);
      if (!(check == *hit.orbit_point)) throw Error("orbit bookkeeping mismatch");
      hit.distance = distance(*hit.orbit_point, target, radius, seq);
      hit.reached = hit.distance < rep.threshold;
    }
    rep.all_reached = rep.all_reached && hit.reached;
    rep.hits.push_back(std::move(hit));
  }
  return rep;
}

NearInfinityWitness near_infinity_witness(const OmegaSequence& seq, std::int64_t radius) {
  const BigInt a4 = build_A(4).A(4).length();
  if (seq.word().length() < a4) throw ResourceBound("witness needs y known through A_4", "depth >= 4");
  BigInt mid = a4 + a4 * a4 / 2;
  SuspensionPoint p = SuspensionPoint::base(mid, 0);
  return {p, distance(p, SuspensionPoint::at_infinity(), radius, seq)};
}

}  // namespace entroflow
