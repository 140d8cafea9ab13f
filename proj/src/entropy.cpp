#include "entroflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>

#include "entroflow/errors.hpp"
#include "entroflow/language.hpp"

namespace entroflow {

namespace {

std::uint64_t alpha_count(int n) { return (pow3(static_cast<unsigned>(n - 1)) + 1).convert_to<std::uint64_t>() / 2; }

// One orbit segment over [0, T]: fiber start times and interned base windows.
struct Segment {
  std::vector<Rational> start;
  std::vector<int> window;
};

constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxProfilePoints = 512;

}  // namespace

std::string EntropyCertificate::kind_name() const {
  return kind == Kind::block_lower_bound ? "BlockLowerBound" : "FrequencyLowerBound";
}

double quarter_ln2() { return std::log(2.0) / 4; }

EntropyCertificate block_lower_certificate(const CorrectedPrefix& prefix, int n) {
  if (n < 1) throw DomainError("stage must be positive");
  if (n > prefix.max_corrected_stage) throw DomainError("stage " + std::to_string(n) + " is not corrected in this prefix");
  EntropyCertificate c;
  c.kind = EntropyCertificate::Kind::block_lower_bound;
  c.n = n;
  const std::uint64_t p = alpha_count(n);
  const BigInt block_len = 2 * pow3(static_cast<unsigned>(n - 1));
  c.count = count_variants(prefix, n);
  c.exact_ratio = Rational(BigInt(p), block_len);
  c.value = to_double(c.exact_ratio) * std::log(2.0);
  c.bound = Rational(1, 4);
  if (block_len <= kBlockCap)
    c.raw_blocks = block_count(Bits(prefix.bits), block_len.convert_to<std::size_t>());
  const bool count_ok = c.count == pow2(static_cast<unsigned>(p));
  const bool raw_ok = !c.raw_blocks || BigInt(*c.raw_blocks) >= c.count;
  c.satisfied = count_ok && raw_ok && c.exact_ratio > c.bound;
  return c;
}

EntropyCertificate frequency_lower_certificate(const EmpiricalMeasure& m, int n) {
  if (n < 1) throw DomainError("stage must be positive");
  const BigInt need = 40 * pow3(static_cast<unsigned>(n));
  if (BigInt(m.horizon()) < need) throw DomainError("horizon must be at least " + to_wire(need));
  EntropyCertificate c;
  c.kind = EntropyCertificate::Kind::frequency_lower_bound;
  c.n = n;
  c.frequency = birkhoff_frequency(m, CylinderIndicator::ohno(n));
  c.value = to_double(c.frequency);
  c.bound = Rational(1, 4 * pow3(static_cast<unsigned>(n)));
  c.satisfied = c.frequency >= c.bound;
  return c;
}

BowenEstimate bowen_estimate(const Sequence& seq, std::int64_t k_lo, std::int64_t k_hi, const RoofFunction& roof,
                             const BowenParams& params) {
  if (params.epsilon <= 0 || params.horizon <= 0) throw DomainError("epsilon and horizon must be positive");
  if (params.samples == 0) throw DomainError("need at least one sample");
  if (params.radius < 0) throw DomainError("radius must be nonnegative");
  if (k_hi <= k_lo) throw DomainError("empty sampling range");
  const Rational& T = params.horizon;

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::int64_t> kd(k_lo, k_hi - 1);
  std::vector<std::int64_t> starts(params.samples);
  for (auto& k : starts) k = kd(rng);

  std::unordered_map<std::string, int> intern;
  std::vector<std::string> windows;
  std::vector<Segment> segs(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Rational t = 0;
    for (BigInt k = starts[i]; t <= T; ++k) {
      std::string w = seq.window(k, params.radius);
      auto [it, fresh] = intern.emplace(std::move(w), static_cast<int>(windows.size()));
      if (fresh) windows.push_back(it->first);
      segs[i].start.push_back(t);
      segs[i].window.push_back(it->second);
      t += roof_eval(roof, seq, k);
    }
  }

  // d_X between interned windows, memoized.
  std::map<std::pair<int, int>, Rational> dx_memo;
  auto dx = [&](int a, int b) -> const Rational& {
    static const Rational zero = 0;
    if (a == b) return zero;
    auto key = std::minmax(a, b);
    auto it = dx_memo.find(key);
    if (it != dx_memo.end()) return it->second;
    const std::string &x = windows[static_cast<std::size_t>(a)], &y = windows[static_cast<std::size_t>(b)];
    const std::int64_t R = params.radius;
    Rational v = 0;
    for (std::int64_t j = 0; j <= R; ++j) {
      if (x[static_cast<std::size_t>(R + j)] != y[static_cast<std::size_t>(R + j)] ||
          x[static_cast<std::size_t>(R - j)] != y[static_cast<std::size_t>(R - j)]) {
        v = Rational(1, pow2(static_cast<unsigned>(j)));
        break;
      }
    }
    return dx_memo.emplace(key, std::move(v)).first->second;
  };

  // First time the two segments are more than epsilon apart. Both fiber
  // coordinates grow at unit rate, so the distance is constant between events.
  auto separation = [&](const Segment& a, const Segment& b) -> std::optional<Rational> {
    std::size_t ia = 0, ib = 0;
    Rational tau = 0;
    for (;;) {
      Rational d = dx(a.window[ia], b.window[ib]);
      if (a.start[ia] != b.start[ib]) d += a.start[ia] < b.start[ib] ? b.start[ib] - a.start[ia] : a.start[ia] - b.start[ib];
      if (d > params.epsilon) return tau;
      const bool na = ia + 1 < a.start.size(), nb = ib + 1 < b.start.size();
      if (!na && !nb) return std::nullopt;
      if (na && (!nb || a.start[ia + 1] <= b.start[ib + 1])) {
        tau = a.start[ia + 1];
        if (nb && b.start[ib + 1] == tau) ++ib;
        ++ia;
      } else {
        tau = b.start[ib + 1];
        ++ib;
      }
      if (tau > T) return std::nullopt;
    }
  };

  const std::size_t S = starts.size();
  std::vector<std::optional<Rational>> sep(S * S);
  std::vector<Rational> times{0};
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = i + 1; j < S; ++j) {
      if (starts[i] == starts[j]) continue;
      auto s = separation(segs[i], segs[j]);
      if (s) times.push_back(*s);
      sep[i * S + j] = sep[j * S + i] = std::move(s);
    }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.size() > kMaxProfilePoints) {
    std::vector<Rational> thinned;
    for (std::size_t q = 0; q < kMaxProfilePoints; ++q)
      thinned.push_back(times[q * (times.size() - 1) / (kMaxProfilePoints - 1)]);
    thinned.erase(std::unique(thinned.begin(), thinned.end()), thinned.end());
    times = std::move(thinned);
  }

  // Separation times as ranks into `times`; kNever when never separated.
  std::vector<std::size_t> rank(S * S, kNever);
  for (std::size_t p = 0; p < S * S; ++p)
    if (sep[p]) rank[p] = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), *sep[p]) - times.begin());

  auto greedy = [&](std::size_t r) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < S; ++i) {
      bool ok = true;
      for (std::size_t c : chosen)
        if (rank[i * S + c] > r) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(i);
    }
    return chosen.size();
  };

  BowenEstimate out;
  std::size_t last = kNever;
  for (std::size_t r = 0; r < times.size(); ++r) {
    std::size_t n = greedy(r);
    if (n != last) out.profile.emplace_back(times[r], n);
    last = n;
  }
  out.initial = out.profile.front().second;
  const std::size_t cap = std::max<std::size_t>(S / 4, 1);
  std::optional<std::size_t> saturated;
  for (std::size_t i = 0; i < out.profile.size(); ++i)
    if (out.profile[i].second > cap) {
      saturated = i;
      break;
    }
  if (!saturated) {
    out.t_star = T;
    out.separated = out.profile.back().second;
  } else if (*saturated > 0) {
    out.t_star = out.profile[*saturated - 1].first;
    out.separated = out.profile[*saturated - 1].second;
  }
  if (out.t_star > 0) {
    out.value = std::log(static_cast<double>(out.separated) / static_cast<double>(out.initial)) / to_double(out.t_star);
  } else {
    out.separated = out.profile.back().second;
    out.value = std::log(static_cast<double>(out.separated)) / to_double(T);
    out.warning = true;
    out.warning_reason = "sample pool saturated at horizon 0; reported (1/T) ln N(T)";
  }
  if (S < 50) {
    out.warning = true;
    out.warning_reason = out.warning_reason.empty() ? "fewer than 50 samples" : out.warning_reason + "; fewer than 50 samples";
  }
  return out;
}

namespace {

std::shared_ptr<const WindowSequence> ohno_xstar() {
  static std::mutex mu;
  static std::shared_ptr<const WindowSequence> cached;
  std::lock_guard lock(mu);
  if (!cached) {
    const std::size_t len = minimal_prefix_length(4);
    auto prefix = build_corrected_prefix(len, 4);
    cached = std::make_shared<WindowSequence>(xstar_window(prefix, static_cast<std::int64_t>(len)));
  }
  return cached;
}

Rational min_roof(const RoofFunction& roof) {
  switch (roof.kind()) {
    case RoofFunction::Kind::unit:
    case RoofFunction::Kind::constant:
      return roof.value();
    case RoofFunction::Kind::cylinder_step:
      return roof.rule().min_value();
    case RoofFunction::Kind::ohno:
      return 1;
  }
  return 1;
}

}  // namespace

SystemSample system_sample(SystemKind system, const RoofFunction& roof, const BowenParams& params, int omega_depth) {
  SystemSample s;
  const Rational lo_roof = min_roof(roof);
  if (lo_roof <= 0) throw DomainError("roof must be positive");
  const std::int64_t margin =
      (floor_of(params.horizon / lo_roof) + 2).convert_to<std::int64_t>() + params.radius + 64;
  if (system == SystemKind::ohno) {
    auto x = ohno_xstar();
    const std::int64_t R = x->symbols().first() < 0 ? -x->symbols().first() : 0;
    if (margin >= R) throw ResourceBound("horizon too long for the materialized x* window");
    s.seq = x;
    s.k_lo = -R + margin;
    s.k_hi = R - margin;
  } else {
    auto a = build_A(omega_depth).A(omega_depth);
    const std::int64_t len = a.length().convert_to<std::int64_t>();
    s.seq = std::make_shared<OmegaSequence>(a);
    s.k_lo = 0;
    s.k_hi = len;
  }
  return s;
}

BowenEstimate bowen_estimate(SystemKind system, const RoofFunction& roof, const BowenParams& params) {
  auto s = system_sample(system, roof, params);
  return bowen_estimate(*s.seq, s.k_lo, s.k_hi, roof, params);
}

}  // namespace entroflow
