#include "entroflow/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

Rational rpow(const Rational& x, unsigned p) {
  Rational r = 1;
  for (unsigned i = 0; i < p; ++i) r *= x;
  return r;
}

[[noreturn]] void rethrow_short(const WindowExhausted& e) {
  throw BoundsError(std::string("word too short for this measure: ") + e.what() + " (radius " +
                    std::to_string(e.needed_radius()) + " needed)");
}

// Closed Newton-Cotes weights on [0,1] with nodes j/m, exact up to degree m.
const std::vector<Rational>& newton_cotes(unsigned m) {
  static std::map<unsigned, std::vector<Rational>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  const unsigned n = m + 1;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (unsigned r = 0; r < n; ++r) {
    for (unsigned j = 0; j < n; ++j) a[r][j] = rpow(Rational(j, m), r);
    a[r][n] = Rational(1, r + 1);
  }
  for (unsigned c = 0; c < n; ++c) {
    unsigned piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    for (unsigned r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (unsigned k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<Rational> w(n);
  for (unsigned j = 0; j < n; ++j) w[j] = a[j][n] / a[j][j];
  return cache.emplace(m, std::move(w)).first->second;
}

// Exact integral of a polynomial of degree <= m over [lo, hi].
template <class G>
Rational integrate_poly(const G& g, const Rational& lo, const Rational& hi, unsigned m) {
  const auto& w = newton_cotes(m);
  Rational acc = 0, width = hi - lo;
  for (unsigned j = 0; j <= m; ++j) acc += w[j] * g(lo + width * Rational(j, m));
  return acc * width;
}

}  // namespace

// ---------------------------------------------------------------------------
// EmpiricalMeasure and frequencies
// ---------------------------------------------------------------------------

EmpiricalMeasure::EmpiricalMeasure(std::shared_ptr<const Sequence> seq, BigInt start, std::uint64_t horizon)
    : seq_(std::move(seq)), start_(std::move(start)), horizon_(horizon) {
  if (!seq_) throw DomainError("measure needs a sequence");
  if (horizon_ == 0) throw DomainError("horizon must be positive");
}

Rational birkhoff_frequency(const EmpiricalMeasure& m, const CylinderIndicator& c) {
  if (c.pattern.empty()) throw DomainError("cylinder pattern must be nonempty");
  std::string text;
  try {
    text = m.sequence().extract(m.start() + c.anchor, static_cast<std::size_t>(m.horizon()) + c.pattern.size() - 1);
  } catch (const WindowExhausted& e) {
    rethrow_short(e);
  }
  std::uint64_t hits = 0;
  for (auto p = text.find(c.pattern); p != std::string::npos; p = text.find(c.pattern, p + 1)) ++hits;
  return Rational(BigInt(hits), BigInt(m.horizon()));
}

RoofExpectation expected_roof(const EmpiricalMeasure& m, const RoofFunction& roof, int levels) {
  RoofExpectation out;
  const std::uint64_t L = m.horizon();
  if (roof.is_constant()) {
    out.mean = roof.value();
    out.max_value = roof.value();
    return out;
  }
  const Sequence& seq = m.sequence();
  Rational sum = 0;
  if (roof.kind() == RoofFunction::Kind::cylinder_step) {
    try {
      for (std::uint64_t i = 0; i < L; ++i) {
        Rational v = roof_eval(roof, seq, m.start() + i);
        if (v > out.max_value) out.max_value = v;
        sum += v;
      }
    } catch (const WindowExhausted& e) {
      rethrow_short(e);
    }
    out.mean = sum / L;
    return out;
  }

  // Ohno roof: level(k) = distance from k to the nearest zero.
  std::int64_t margin = std::max<std::int64_t>(256, static_cast<std::int64_t>(L));
  std::string text;
  for (;; margin /= 2) {
    try {
      text = seq.extract(m.start() - margin, static_cast<std::size_t>(L + 2 * static_cast<std::uint64_t>(margin)));
      break;
    } catch (const WindowExhausted&) {
      if (margin == 0) throw;
    }
  }
  const std::size_t n = text.size();
  std::vector<std::int64_t> left(n), right(n);
  for (std::size_t i = 0; i < n; ++i)
    left[i] = text[i] == '0' ? 0 : (i ? left[i - 1] + 1 : INT64_MAX / 4);
  for (std::size_t i = n; i-- > 0;)
    right[i] = text[i] == '0' ? 0 : (i + 1 < n ? right[i + 1] + 1 : INT64_MAX / 4);

  std::map<std::int64_t, std::uint64_t> per_level;
  try {
    for (std::uint64_t i = 0; i < L; ++i) {
      const std::size_t pos = static_cast<std::size_t>(i) + static_cast<std::size_t>(margin);
      std::int64_t lvl = std::min(left[pos], right[pos]);
      if (lvl >= INT64_MAX / 8 || static_cast<std::size_t>(lvl) > std::min(pos, n - 1 - pos))
        lvl = ohno_level(seq, m.start() + i);
      ++per_level[lvl];
    }
  } catch (const WindowExhausted& e) {
    rethrow_short(e);
  }
  // sum_n c_n * n * 4 * 3^n by Horner over n = top..1
  BigInt total = per_level.count(0) ? BigInt(per_level[0]) : BigInt(0);
  const std::int64_t top = per_level.rbegin()->first;
  BigInt acc = 0;
  for (std::int64_t lvl = top; lvl >= 1; --lvl) {
    acc *= 3;
    if (auto it = per_level.find(lvl); it != per_level.end()) acc += BigInt(it->second) * lvl;
  }
  total += acc * 12;
  BigInt max_value = top == 0 ? BigInt(1) : BigInt(top) * 4 * pow3(static_cast<unsigned>(top));
  std::vector<std::uint64_t> level_count(static_cast<std::size_t>(std::max(levels, 0) + 1), 0);
  for (const auto& [lvl, c] : per_level)
    for (int k = 1; k <= levels && k <= lvl; ++k) level_count[static_cast<std::size_t>(k)] += c;
  out.mean = Rational(total, BigInt(L));
  out.max_value = Rational(max_value);
  for (int k = 1; k <= levels; ++k) {
    RoofDiagnostic d;
    d.n = k;
    d.frequency = Rational(BigInt(level_count[static_cast<std::size_t>(k)]), BigInt(L));
    d.bound = Rational(1, 4 * pow3(static_cast<unsigned>(k)));
    d.weighted = Rational(BigInt(k) * 4 * pow3(static_cast<unsigned>(k))) * d.frequency;
    d.frequency_bound_holds = d.frequency >= d.bound;
    d.exceeds_n = d.weighted > k;
    out.diagnostics.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

Observable Observable::constant(const Rational& c) {
  Observable o;
  o.terms_.push_back({c, std::nullopt, std::nullopt, 0});
  return o;
}

Observable Observable::indicator(const CylinderIndicator& c) {
  Observable o;
  o.terms_.push_back({1, c, std::nullopt, 0});
  return o;
}

Observable Observable::at_position(const BigInt& k) {
  Observable o;
  o.terms_.push_back({1, std::nullopt, k, 0});
  return o;
}

Observable Observable::fiber_power(unsigned p, const Rational& coef) {
  Observable o;
  o.terms_.push_back({coef, std::nullopt, std::nullopt, p});
  return o;
}

Observable& Observable::add(ObservableTerm term) {
  terms_.push_back(std::move(term));
  return *this;
}

Observable Observable::operator+(const Observable& o) const {
  Observable r = *this;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  return r;
}

Observable Observable::scaled(const Rational& c) const {
  Observable r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Observable Observable::times(const Observable& o) const {
  if (terms_.size() != 1 || o.terms_.size() != 1) throw DomainError("times() takes single-term observables");
  const auto& a = terms_[0];
  const auto& b = o.terms_[0];
  if ((a.cylinder && b.cylinder) || (a.position && b.position))
    throw DomainError("product would need two restrictions of the same kind");
  ObservableTerm t;
  t.coef = a.coef * b.coef;
  t.cylinder = a.cylinder ? a.cylinder : b.cylinder;
  t.position = a.position ? a.position : b.position;
  t.power = a.power + b.power;
  Observable r;
  r.terms_.push_back(std::move(t));
  return r;
}

unsigned Observable::degree() const noexcept {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.power);
  return d;
}

Rational Observable::eval(const Sequence& seq, const BigInt& k, const Rational& t) const {
  Rational acc = 0;
  for (const auto& term : terms_) {
    if (term.position && *term.position != k) continue;
    if (term.cylinder && !term.cylinder->matches(seq, k)) continue;
    acc += term.coef * rpow(t, term.power);
  }
  return acc;
}

Rational Observable::fiber_integral(const Sequence& seq, const BigInt& k, const Rational& lo,
                                    const Rational& hi) const {
  Rational acc = 0;
  for (const auto& term : terms_) {
    if (term.position && *term.position != k) continue;
    if (term.cylinder && !term.cylinder->matches(seq, k)) continue;
    const unsigned p1 = term.power + 1;
    acc += term.coef * (rpow(hi, p1) - rpow(lo, p1)) / p1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Suspension measures
// ---------------------------------------------------------------------------

Rational suspend_measure(const EmpiricalMeasure& m, const RoofFunction& roof, const Observable& f) {
  const Rational e_roof = expected_roof(m, roof, 0).mean;
  if (e_roof <= 0) throw DegenerateMeasure("expected roof is not positive");
  Rational acc = 0;
  try {
    for (std::uint64_t i = 0; i < m.horizon(); ++i) {
      const BigInt k = m.start() + i;
      acc += f.fiber_integral(m.sequence(), k, 0, roof_eval(roof, m.sequence(), k));
    }
  } catch (const WindowExhausted& e) {
    rethrow_short(e);
  }
  return acc / m.horizon() / e_roof;
}

double suspend_measure(const EmpiricalMeasure& m, const RoofFunction& roof, const FiberFunction& f, double tol) {
  const Rational e_roof = expected_roof(m, roof, 0).mean;
  if (e_roof <= 0) throw DegenerateMeasure("expected roof is not positive");
  std::vector<double> heights;
  heights.reserve(m.horizon());
  try {
    for (std::uint64_t i = 0; i < m.horizon(); ++i)
      heights.push_back(to_double(roof_eval(roof, m.sequence(), m.start() + i)));
  } catch (const WindowExhausted& e) {
    rethrow_short(e);
  }
  auto total = [&](std::size_t cells) {
    double acc = 0;
    for (std::uint64_t i = 0; i < m.horizon(); ++i) {
      const BigInt k = m.start() + i;
      const double h = heights[i] / static_cast<double>(cells);
      double s = 0;
      for (std::size_t j = 0; j < cells; ++j) s += f(m.sequence(), k, (static_cast<double>(j) + 0.5) * h);
      acc += s * h;
    }
    return acc / static_cast<double>(m.horizon()) / to_double(e_roof);
  };
  double prev = total(8);
  for (std::size_t cells = 16; cells <= (std::size_t{1} << 20); cells *= 2) {
    double cur = total(cells);
    if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw Error("midpoint rule did not reach the requested tolerance");
}

// ---------------------------------------------------------------------------
// Periodic-orbit measures and time changes
// ---------------------------------------------------------------------------

FiberMeasure FiberMeasure::uniform(const EmpiricalMeasure& m) {
  std::vector<Rational> w(static_cast<std::size_t>(m.horizon()), Rational(1, BigInt(m.horizon())));
  return FiberMeasure(m.sequence_ptr(), m.start(), std::move(w));
}

FiberMeasure::FiberMeasure(std::shared_ptr<const Sequence> seq, BigInt start, std::vector<Rational> weights)
    : seq_(std::move(seq)), start_(std::move(start)), weights_(std::move(weights)) {
  if (!seq_) throw DomainError("measure needs a sequence");
  if (weights_.empty()) throw DomainError("measure needs at least one fiber");
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw DomainError("weights must be nonnegative");
    total += w;
  }
  if (total != 1) throw DomainError("weights must sum to 1, got " + to_wire(total));
}

Rational FiberMeasure::expectation(const Observable& f) const {
  Rational acc = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] != 0) acc += weights_[i] * f.fiber_integral(*seq_, start_ + i, 0, 1);
  return acc;
}

namespace {

class CyclicPaths {
 public:
  CyclicPaths(const FiberMeasure& m, const std::vector<Rational>& speed) : m_(m), a_(speed) {
    if (a_.size() != m.size()) throw DomainError("one speed per fiber is required");
    for (const auto& v : a_)
      if (v <= 0) throw DegenerateMeasure("speeds must be positive");
  }

  // integral of f along the time-changed path of unit-flow duration 1,
  // measured in time-changed time
  Rational forward(std::size_t i, const Rational& u, const Observable& f) const {
    const std::size_t j = next(i);
    return a_[i] * f.fiber_integral(seq(), base(i), u, 1) + a_[j] * f.fiber_integral(seq(), base(j), 0, u);
  }

  // integral of f along the unit-flow path of time-changed duration 1,
  // measured in unit-flow time
  Rational inverse(std::size_t i, const Rational& u, const Observable& f) const {
    Rational budget = 1, acc = 0, v = u;
    for (std::size_t j = i;; j = next(j), v = 0) {
      Rational cost = a_[j] * (1 - v);
      if (budget <= cost) return acc + f.fiber_integral(seq(), base(j), v, v + budget / a_[j]);
      acc += f.fiber_integral(seq(), base(j), v, 1);
      budget -= cost;
    }
  }

  // u in (0,1) where the inverse path ends exactly on a fiber boundary
  std::vector<Rational> inverse_breaks(std::size_t i) const {
    std::vector<Rational> out;
    Rational partial = 0;
    for (std::size_t j = i;;) {
      Rational u = 1 - (1 - partial) / a_[i];
      if (u > 0 && u < 1) out.push_back(u);
      j = next(j);
      partial += a_[j];
      if (partial >= 1) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t size() const noexcept { return a_.size(); }

 private:
  std::size_t next(std::size_t i) const noexcept { return i + 1 == a_.size() ? 0 : i + 1; }
  const Sequence& seq() const noexcept { return m_.sequence(); }
  BigInt base(std::size_t i) const { return m_.start() + i; }

  const FiberMeasure& m_;
  const std::vector<Rational>& a_;
};

Rational path_expectation(const FiberMeasure& m, const CyclicPaths& paths, const Observable& f,
                          TimeChangeDirection direction) {
  // path integrals are polynomials in u of degree <= deg f + 1 between breaks
  const unsigned deg = f.degree() + 2;
  Rational acc = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights()[i] == 0) continue;
    std::vector<Rational> cuts{0};
    if (direction == TimeChangeDirection::inverse) {
      auto b = paths.inverse_breaks(i);
      cuts.insert(cuts.end(), b.begin(), b.end());
    }
    cuts.push_back(1);
    Rational fiber = 0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (direction == TimeChangeDirection::forward)
        fiber += integrate_poly([&](const Rational& u) { return paths.forward(i, u, f); }, cuts[c], cuts[c + 1], deg);
      else
        fiber += integrate_poly([&](const Rational& u) { return paths.inverse(i, u, f); }, cuts[c], cuts[c + 1], deg);
    }
    acc += m.weights()[i] * fiber;
  }
  return acc;
}

}  // namespace

Rational timechange_measure(const FiberMeasure& m, const std::vector<Rational>& speed, const Observable& f,
                            TimeChangeDirection direction) {
  CyclicPaths paths(m, speed);
  const Rational norm = path_expectation(m, paths, Observable::constant(1), direction);
  if (norm <= 0) throw DegenerateMeasure("expected time cost is not positive");
  return path_expectation(m, paths, f, direction) / norm;
}

FiberMeasure timechange_transform(const FiberMeasure& m, const std::vector<Rational>& speed,
                                  TimeChangeDirection direction) {
  std::vector<Rational> w;
  w.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    w.push_back(timechange_measure(m, speed, Observable::at_position(m.start() + i), direction));
  return FiberMeasure(m.sequence_ptr(), m.start(), std::move(w));
}

}  // namespace entroflow
