#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "entroflow/entropy.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/language.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/timechange.hpp"
#include "entroflow/wordgen.hpp"

using namespace entroflow;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::uint64_t pow3_u64(unsigned e) {
  std::uint64_t v = 1;
  while (e--) v *= 3;
  return v;
}

std::shared_ptr<const Sequence> xstar_l5() {
  static auto seq = [] {
    auto prefix = build_corrected_prefix(200000, 3);
    return std::shared_ptr<const Sequence>(std::make_shared<WindowSequence>(xstar_window(prefix, 200000)));
  }();
  return seq;
}

Result stage_words() {
  Result r;
  for (int n = 1; n <= 12; ++n) {
    auto st = build_ohno_stage(n);
    const std::uint64_t t = pow3_u64(static_cast<unsigned>(n - 1));
    r.require(st.word.size() == 2 * t, "|x_" + std::to_string(n) + "|");
    r.require(st.tilde.size() == 2 * t, "|x~_" + std::to_string(n) + "|");
    r.require(st.word.alpha_count() == (t + 1) / 2, "alpha count at n=" + std::to_string(n));
    r.require(st.tilde.longest_one_run() >= static_cast<std::size_t>(2 * n - 1), "1^(2n-1) in x~_" + std::to_string(n));
  }
  if (r.ok) r.detail = "n=1..12";
  return r;
}

Result window_condition() {
  Result r;
  auto prefix = build_corrected_prefix(10000, 3);
  for (int n = 1; n <= 3; ++n) {
    auto wc = verify_window_condition(Bits(prefix.bits), n);
    r.require(wc.ok && !wc.first_violation, "violation at n=" + std::to_string(n));
  }
  if (r.ok) r.detail = "length 10^4, n=1..3, zero violations";
  return r;
}

Result variant_counts() {
  Result r;
  auto prefix = build_corrected_prefix(10000, 3);
  const std::uint64_t expect[] = {2, 4, 32};
  for (int n = 1; n <= 3; ++n) {
    const std::uint64_t c = count_variants(prefix, n);
    r.require(c == expect[n - 1], "count_variants(" + std::to_string(n) + ")=" + std::to_string(c));
    const std::uint64_t t = pow3_u64(static_cast<unsigned>(n - 1));
    const double oracle = static_cast<double>((t + 1) / 2) * std::log(2.0) / static_cast<double>(2 * t);
    auto cert = block_lower_certificate(prefix, n);
    r.require(cert.value_text() == format_sig(oracle, 12), "certificate value at n=" + std::to_string(n));
    r.require(cert.value > std::log(2.0) / 4 && cert.value > 0.173287, "certificate bound at n=" + std::to_string(n));
    r.require(cert.satisfied, "certificate unsatisfied at n=" + std::to_string(n));
    if (r.ok && n == 3) r.detail = "counts 2,4,32; h >= " + cert.value_text();
  }
  return r;
}

Result birkhoff() {
  Result r;
  EmpiricalMeasure m(xstar_l5(), 0, 100000);
  const Rational f1 = birkhoff_frequency(m, CylinderIndicator::ohno(1));
  const Rational f2 = birkhoff_frequency(m, CylinderIndicator::ohno(2));
  r.require(f1 >= Rational(1, 12), "freq(I1)=" + to_wire(f1));
  r.require(f2 >= Rational(1, 36), "freq(I2)=" + to_wire(f2));
  if (r.ok) r.detail = "freq(I1)=" + to_wire(f1) + " freq(I2)=" + to_wire(f2);
  return r;
}

Result roof_divergence() {
  Result r;
  auto seq = xstar_l5();
  auto e = expected_roof(EmpiricalMeasure(seq, 0, 100000), RoofFunction::ohno(), 3);
  r.require(e.diagnostics.size() == 3, "diagnostic levels");
  for (const auto& d : e.diagnostics) {
    const Rational weighted = Rational(d.n * 4) * Rational(pow3(static_cast<unsigned>(d.n))) * d.frequency;
    r.require(weighted == d.weighted, "weighted value at n=" + std::to_string(d.n));
    r.require(weighted > d.n, "n*4*3^n*freq <= n at n=" + std::to_string(d.n));
  }
  Rational prev = -1;
  std::string means;
  for (std::uint64_t L : {1000u, 10000u, 100000u}) {
    const Rational mean = expected_roof(EmpiricalMeasure(seq, 0, L), RoofFunction::ohno(), 0).mean;
    r.require(mean >= prev, "expected_roof decreased at L=" + std::to_string(L));
    prev = mean;
    const auto digits = static_cast<long>(numerator(mean).str().size()) - static_cast<long>(denominator(mean).str().size());
    means += (means.empty() ? "" : " <= ") + std::string("~1e") + std::to_string(digits);
  }
  if (r.ok) r.detail = "E(roof): " + means;
  return r;
}

Result time_change() {
  Result r;
  auto seq = xstar_l5();
  const auto step = SpeedFunction::parse("step:1@0:2:1/3");
  auto coc = check_cocycle(step, *seq, 0, 1000, 200, 0);
  r.require(coc.cocycle_checks == 200 && coc.inversion_checks == 200, "sample counts");
  r.require(coc.ok(), "cocycle or inversion failure");
  for (const auto& a : {SpeedFunction::constant(2), SpeedFunction::constant(Rational(1, 3)), step}) {
    auto rep = verify_conjugacy(sample_conjugacy_inputs(a, *seq, 0, 1000, 100, 0), a, *seq);
    r.require(rep.samples == 100, "conjugacy sample count for " + a.describe());
    r.require(rep.ok(), std::to_string(rep.mismatches.size()) + " mismatches for " + a.describe());
  }
  if (r.ok) r.detail = "200 cocycle samples, 3x100 conjugacy samples, exact";
  return r;
}

Result theorem_ab() {
  Result r;
  auto prefix = build_corrected_prefix(10000, 3);
  const double h = block_lower_certificate(prefix, 3).value;
  EmpiricalMeasure m(xstar_l5(), 0, 100000);
  for (const auto& b : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(10)}) {
    auto rep = theorem_runner(b, TheoremMode::B, h, m, 100, 0);
    r.require(rep.abramov.value == b, "abramov != " + to_wire(b));
    r.require(format_sig(to_double(rep.abramov.value), 12) == format_sig(to_double(b), 12), "12-digit display");
    r.require(rep.conjugacy.ok(), "conjugacy for b=" + to_wire(b));
  }
  BowenParams p;  // epsilon 2^-6, T 64, 500 samples, seed 0
  const double unit = bowen_estimate(SystemKind::ohno, RoofFunction::unit(), p).value;
  const double two = bowen_estimate(SystemKind::ohno, RoofFunction::constant(2), p).value;
  const double ratio = unit > 0 ? two / unit : 0;
  r.require(unit > 0, "bowen(Unit) is zero");
  r.require(ratio >= 0.35 && ratio <= 0.65, "ratio " + format_sig(ratio, 6));
  if (r.ok) r.detail = "b in {1/2,1,3/2,10} exact; bowen ratio " + format_sig(ratio, 6);
  return r;
}

Result omega_structure() {
  Result r;
  auto sc = build_A(24);
  for (int n = 2; n <= 24; ++n) {
    const BigInt& prev = sc.A(n - 1).length();
    const CompressedWord& an = sc.A(n);
    r.require(an.length() == prev + prev * prev + sc.Q(static_cast<std::uint64_t>(n - 1)).length(),
              "|A_" + std::to_string(n) + "| recursion");
    r.require(an.kind() == CompressedWord::Kind::concat && an.left().kind() == CompressedWord::Kind::concat &&
                  an.left().left().id() == sc.A(n - 1).id(),
              "A_" + std::to_string(n - 1) + " is not the leading node of A_" + std::to_string(n));
    if (n <= 5) {
      const std::string small = sc.A(n - 1).materialize();
      r.require(an.extract(0, small.size()) == small, "prefix bits at n=" + std::to_string(n));
    }
  }
  const std::uint64_t expect_len[] = {1, 5, 34, 1198, 1436407};
  for (int n = 1; n <= 5; ++n) r.require(sc.A(n).length() == expect_len[n - 1], "|A_" + std::to_string(n) + "|");
  Rational prev = 2;
  for (int n = 3; n <= 24; ++n) {
    const Rational d = word_stats(sc.A(n)).density;
    r.require(d < prev, "density not decreasing at n=" + std::to_string(n));
    prev = d;
  }
  const Rational d5 = word_stats(sc.A(5)).density;
  r.require(d5 < Rational(1, 100000), "density(A5)=" + to_wire(d5));
  if (r.ok) r.detail = "n<=24; density(A5)=" + to_wire(d5);
  return r;
}

Result mixing_transitivity() {
  Result r;
  auto mix = mixing_probe(23, 1, 1, 7);
  r.require(mix.size() == 7, "mixing gaps");
  for (const auto& [g, ok] : mix) r.require(ok, "mixing gap " + std::to_string(g));
  auto sc = build_A(5);
  OmegaSequence y(sc.A(5));
  auto rep = transitivity_probe(y, 20, 0);
  r.require(rep.hits.size() == 20, "target count");
  for (const auto& h : rep.hits) {
    r.require(h.reached && h.orbit_point.has_value(), "unreached target");
    if (h.orbit_point) r.require(distance(*h.orbit_point, h.target, rep.radius, y) <= Rational(1, 32), "distance above 2^-5");
  }
  r.require(rep.all_reached, "all_reached");
  if (r.ok) r.detail = "gaps 1..7 at depth 23; 20/20 targets within 2^-5";
  return r;
}

Result omega_entropy() {
  Result r;
  BowenParams p;
  auto e = bowen_estimate(SystemKind::omega, RoofFunction::unit(), p);
  r.require(e.value < 0.05, "estimate " + format_sig(e.value, 6));
  if (r.ok) r.detail = "estimate " + format_sig(e.value, 6);
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {"stage-word laws", 1, stage_words},
      {"window condition witness", 5, window_condition},
      {"variant counts and block certificates", 5, variant_counts},
      {"Birkhoff frequency bound", 5, birkhoff},
      {"Ohno-roof divergence diagnostics", 10, roof_divergence},
      {"time-change exactness", 10, time_change},
      {"Abramov runners and Bowen ratio", 120, theorem_ab},
      {"omega structure", 5, omega_structure},
      {"mixing and transitivity probes", 30, mixing_transitivity},
      {"omega-system entropy", 60, omega_entropy},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s >= c.limit_s) r.require(false, "runtime over " + format_sig(c.limit_s, 3) + " s");
    std::printf("%-4s criterion %2zu %-40s %8.3f s  %s\n", r.ok ? "PASS" : "FAIL", i + 1, c.name, s, r.detail.c_str());
    failures += r.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
