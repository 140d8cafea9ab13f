#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "entroflow/errors.hpp"
#include "entroflow/flow.hpp"

using namespace entroflow;

namespace {

WindowSequence seq_from(std::string_view s, std::int64_t first, int fixed = 1) {
  return WindowSequence(SymbolWindow(bits_from_string(s), first), fixed);
}

Rational random_rational(std::mt19937_64& rng, long lo, long hi) {
  long den = 1 + static_cast<long>(rng() % 12);
  long num = lo * den + static_cast<long>(rng() % static_cast<std::uint64_t>((hi - lo) * den + 1));
  return Rational(num, den);
}

// Absolute-time oracle: (k,u) sits at time T(k) + u with T(0) = 0.
struct TimeLine {
  std::vector<Rational> starts;  // starts[i] = T(lo + i)
  std::int64_t lo;
  TimeLine(const RoofFunction& roof, const Sequence& seq, std::int64_t lo_, std::int64_t hi) : lo(lo_) {
    std::vector<Rational> g;
    for (std::int64_t k = lo; k <= hi; ++k) g.push_back(roof_eval(roof, seq, k));
    Rational t0 = 0;
    for (std::int64_t k = lo; k < 0; ++k) t0 -= g[static_cast<std::size_t>(k - lo)];
    Rational acc = t0;
    for (auto& v : g) {
      starts.push_back(acc);
      acc += v;
    }
  }
  Rational time_of(const SuspensionPoint& p) const {
    return starts[static_cast<std::size_t>(p.k.convert_to<std::int64_t>() - lo)] + p.u;
  }
  SuspensionPoint point_at(const Rational& t) const {
    std::size_t i = 0;
    while (i + 1 < starts.size() && starts[i + 1] <= t) ++i;
    return SuspensionPoint::base(lo + static_cast<std::int64_t>(i), t - starts[i]);
  }
};

std::string random_bits(std::mt19937_64& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(rng() % 4 ? '1' : '0');
  return s;
}

}  // namespace

TEST_CASE("roof values") {
  auto s = seq_from("01010", -1);
  CHECK(roof_eval(RoofFunction::ohno(), s, 0) == 12);
  CHECK(roof_eval(RoofFunction::ohno(), s, 1) == 1);
  auto s2 = seq_from("0111110", -3);
  CHECK(roof_eval(RoofFunction::ohno(), s2, 0) == 3 * 4 * 27);
  auto s3 = seq_from("1011101", -3);
  CHECK(roof_eval(RoofFunction::ohno(), s3, 0) == 72);
  CHECK(roof_eval(RoofFunction::unit(), s, 0) == 1);
  CHECK(roof_eval(RoofFunction::constant(Rational(5, 2)), s, 0) == Rational(5, 2));
  auto ones = seq_from("11111", -2);
  try {
    roof_eval(RoofFunction::ohno(), ones, 0);
    FAIL("expected WindowExhausted");
  } catch (const WindowExhausted& e) {
    CHECK(e.needed_radius() == 3);
  }
}

TEST_CASE("roof parsing") {
  CHECK(RoofFunction::parse("unit").kind() == RoofFunction::Kind::unit);
  CHECK(RoofFunction::parse("const:3/2").value() == Rational(3, 2));
  CHECK(RoofFunction::parse("ohno").describe() == "ohno");
  auto st = RoofFunction::parse("step:1@0:2:1");
  CHECK(st.rule().inside == 2);
  CHECK(st.describe() == "step:1@0:2/1:1/1");
  CHECK_THROWS_AS(RoofFunction::parse("bogus"), FormatError);
  CHECK_THROWS_AS(RoofFunction::parse("const:0"), DomainError);
}

TEST_CASE("flow examples") {
  auto s = seq_from("1011", -1);
  auto u = RoofFunction::unit();
  CHECK(flow_step(SuspensionPoint::base(0, 0), 1, u, s) == SuspensionPoint::base(1, 0));
  CHECK(flow_step(SuspensionPoint::base(0, Rational(1, 4)), Rational(1, 2), u, s) ==
        SuspensionPoint::base(0, Rational(3, 4)));
  CHECK(flow_step(SuspensionPoint::at_infinity(), 1000000, u, s) == SuspensionPoint::at_infinity());
  CHECK(flow_step(SuspensionPoint::base(0, 0), Rational(-1, 2), u, s) == SuspensionPoint::base(-1, Rational(1, 2)));
  auto out = flow(SuspensionPoint::base(0, 0), Rational(7, 2), RoofFunction::constant(2), s);
  CHECK(out.point == SuspensionPoint::base(1, Rational(3, 2)));
  CHECK(out.crossings == 1);
}

TEST_CASE("flow agrees with the absolute-time oracle and obeys the group law") {
  std::mt19937_64 rng(1);
  std::string bits = "0" + random_bits(rng, 400) + "0";
  auto s = seq_from(bits, -201);
  std::vector<RoofFunction> roofs{RoofFunction::unit(), RoofFunction::constant(Rational(3, 7)),
                                  RoofFunction::ohno(), RoofFunction::step(CylinderRule::parse("11@-1:5/2:1/3"))};
  for (const auto& roof : roofs) {
    TimeLine line(roof, s, -150, 150);
    for (int i = 0; i < 200; ++i) {
      std::int64_t k = static_cast<std::int64_t>(rng() % 41) - 20;
      Rational g = roof_eval(roof, s, k);
      Rational u = g * Rational(static_cast<long>(rng() % 100), 100);
      SuspensionPoint p = SuspensionPoint::base(k, u);
      Rational a = random_rational(rng, -4, 4), b = random_rational(rng, -4, 4);
      auto once = flow_step(p, a + b, roof, s);
      auto twice = flow_step(flow_step(p, a, roof, s), b, roof, s);
      CHECK(once == twice);
      CHECK(once == line.point_at(line.time_of(p) + a + b));
      CHECK(once.u >= 0);
      CHECK(once.u < roof_eval(roof, s, once.k));
    }
    for (int i = 0; i < 100; ++i) {
      std::int64_t k = static_cast<std::int64_t>(rng() % 201) - 100;
      CHECK(flow_step(SuspensionPoint::base(k, 0), roof_eval(roof, s, k), roof, s) == SuspensionPoint::base(k + 1, 0));
    }
  }
}

TEST_CASE("distance") {
  auto s = seq_from("1111111111111111", -8);
  auto p = SuspensionPoint::base(0, 0);
  CHECK(distance(p, p, 3, s) == 0);
  CHECK(distance(p, SuspensionPoint::base(0, Rational(1, 2)), 3, s) == Rational(1, 2));
  // bases differing first at |j| = 3
  auto d = seq_from("00000000100000000", -8, 0);
  auto e = seq_from("00000000000000000", -8, 0);
  CHECK(distance(SuspensionPoint::base(-3, 0), SuspensionPoint::base(3, 0), 4, d) == Rational(1, 8));
  CHECK(distance(SuspensionPoint::base(0, 0), SuspensionPoint::at_infinity(), 4, e) == 0);
  CHECK(distance(SuspensionPoint::base(-2, Rational(1, 3)), SuspensionPoint::at_infinity(), 4, d) == Rational(1, 4) + Rational(1, 3));
  CHECK(distance(SuspensionPoint::at_infinity(), SuspensionPoint::at_infinity(), 4, d) == 0);
  CHECK_THROWS_AS(distance(p, p, 9, s), WindowExhausted);
}

TEST_CASE("omega sequence view") {
  auto sc = build_A(3);
  OmegaSequence y(sc.A(3));
  CHECK(y.at(-5) == 0);
  CHECK(y.at(0) == 1);
  CHECK(y.at(30) == 1);
  CHECK(y.at(40) == 0);
  CHECK(y.known_end() == 34 + 34 * 34);
  CHECK_THROWS_AS(y.at(BigInt(34 + 34 * 34)), WindowExhausted);
  CHECK(y.window(1, 3) == "0010101");
  CHECK(y.window(32, 3) == "0100100");
  for (std::int64_t k = -10; k < 60; ++k) CHECK(y.window(k, 4) == y.Sequence::window(k, 4));
  auto deep = build_A(5);
  OmegaSequence y5(deep.A(5));
  CHECK(y5.window(y5.word().length() - 1, 2) == y5.Sequence::window(y5.word().length() - 1, 2));
}

TEST_CASE("transitivity and near-infinity witnesses") {
  auto sc = build_A(5);
  OmegaSequence y(sc.A(5));
  auto rep = transitivity_probe(y, 20, 0);
  CHECK(rep.hits.size() == 20);
  CHECK(rep.all_reached);
  CHECK(rep.hits.back().target.infinity);
  for (const auto& h : rep.hits) {
    REQUIRE(h.orbit_point);
    CHECK(h.distance < Rational(1, 32));
    if (!h.target.infinity) CHECK(h.orbit_point->k <= h.target.k);
  }
  auto late = transitivity_probe(y, 3, 0, 5, 2000);
  for (const auto& h : late.hits)
    if (h.orbit_point) CHECK(h.orbit_point->k >= 2000);
  auto w = near_infinity_witness(y, 12);
  CHECK(w.distance < Rational(1, 1024));
  auto w4 = near_infinity_witness(OmegaSequence(sc.A(4)), 64);
  CHECK(w4.distance == 0);
}
