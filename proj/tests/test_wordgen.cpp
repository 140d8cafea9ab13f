#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>

#include "entroflow/errors.hpp"
#include "entroflow/wordgen.hpp"

using namespace entroflow;

namespace {

// Straight string recursion, independent of the library's run bookkeeping.
std::pair<std::string, std::string> naive_stage(int n) {
  std::string x = "1a", t = "11";
  for (int m = 2; m <= n; ++m) {
    std::string nx = x + t + x;
    std::string need(static_cast<std::size_t>(2 * m - 1), '1');
    std::string nt;
    for (std::size_t q = 0; q < nx.size(); ++q) {
      if (nx[q] != 'a') continue;
      std::string cand = nx;
      cand[q] = '1';
      if (cand.find(need) != std::string::npos) {
        nt = cand;
        break;
      }
    }
    x = nx;
    t = nt;
  }
  return {x, t};
}

bool window_ok(const std::vector<std::uint8_t>& bits, int n) {
  std::size_t w = 4;
  for (int i = 0; i < n; ++i) w *= 3;
  ++w;
  std::size_t run_len = static_cast<std::size_t>(2 * n - 1);
  // last index where a full run ends, for each position
  std::vector<long> last_run_start(bits.size(), -1);
  long run = 0, last = -1;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    run = bits[i] ? run + 1 : 0;
    if (static_cast<std::size_t>(run) >= run_len) last = static_cast<long>(i) - static_cast<long>(run_len) + 1;
    last_run_start[i] = last;
  }
  for (std::size_t s = 0; s + w <= bits.size(); ++s)
    if (last_run_start[s + w - 1] < static_cast<long>(s)) return false;
  return true;
}

}  // namespace

TEST_CASE("stage words for small n") {
  auto s1 = build_ohno_stage(1);
  CHECK(s1.word.str() == "1a");
  CHECK(s1.tilde.str() == "11");
  auto s2 = build_ohno_stage(2);
  CHECK(s2.word.str() == "1a111a");
  CHECK(s2.tilde.str() == "11111a");
  auto s3 = build_ohno_stage(3);
  CHECK(s3.word.str() == "1a111a11111a1a111a");
  CHECK(s3.word.alpha_count() == 5);
}

TEST_CASE("stage word laws match the naive recursion") {
  for (int n = 1; n <= 9; ++n) {
    auto s = build_ohno_stage(n);
    auto [x, t] = naive_stage(n);
    CHECK(s.word.str() == x);
    CHECK(s.tilde.str() == t);
    CHECK(BigInt(s.word.size()) == 2 * pow3(static_cast<unsigned>(n - 1)));
    CHECK(BigInt(s.word.alpha_count()) == pn(n));
    CHECK(s.tilde.longest_one_run() >= static_cast<std::size_t>(2 * n - 1));
    // every non-trailing alpha sits between ones
    const auto& sym = s.word.symbols;
    for (std::size_t i = 0; i + 1 < sym.size(); ++i)
      if (sym[i] == Symbol::alpha) CHECK((i > 0 && sym[i - 1] == Symbol::one && sym[i + 1] == Symbol::one));
  }
}

TEST_CASE("pn values") {
  CHECK(pn(1) == 1);
  CHECK(pn(2) == 2);
  CHECK(pn(5) == 41);
  CHECK_THROWS_AS(pn(0), DomainError);
  CHECK_THROWS_AS(build_ohno_stage(16), ResourceBound);
}

TEST_CASE("corrected prefix basics") {
  auto p = build_corrected_prefix(6, 1);
  CHECK(bits_to_string(p.bits) == "101111");
  CHECK(p.stage(1).starts == std::vector<std::size_t>{0, 4});

  auto p2 = build_corrected_prefix(10000, 2);
  const auto& c2 = p2.stage(2);
  std::set<std::string> variants;
  for (auto s : c2.starts) variants.insert(bits_to_string(std::span(p2.bits).subspan(s, 6)));
  CHECK(variants.size() == 4);
  CHECK(c2.starts.front() >= p2.stage(1).starts.back() + 2);

  CHECK_THROWS_AS(build_corrected_prefix(100, 5), ResourceBound);
  try {
    build_corrected_prefix(10, 3);
    FAIL("expected ResourceBound");
  } catch (const ResourceBound& e) {
    CHECK(e.feasible() == "target_length >= " + std::to_string(minimal_prefix_length(3)));
  }
}

TEST_CASE("minimal prefix length is exact") {
  for (int s = 1; s <= 3; ++s) {
    std::size_t m = minimal_prefix_length(s);
    CHECK_NOTHROW(build_corrected_prefix(m, s));
    CHECK_THROWS_AS(build_corrected_prefix(m - 1, s), ResourceBound);
  }
}

TEST_CASE("corrected prefix window condition, variants and disjointness") {
  auto p = build_corrected_prefix(10000, 3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(window_ok(p.bits, n));
    const auto& c = p.stage(n);
    std::size_t len = 2;
    for (int i = 1; i < n; ++i) len *= 3;
    std::set<std::string> variants;
    for (std::size_t i = 0; i < c.starts.size(); ++i) {
      variants.insert(bits_to_string(std::span(p.bits).subspan(c.starts[i], len)));
      if (i) CHECK(c.starts[i] >= c.starts[i - 1] + len);
      CHECK(c.starts[i] % len == 0);
    }
    CHECK(BigInt(variants.size()) == pow2(pn(n).convert_to<unsigned>()));
    if (n > 1) {
      std::size_t prev_len = len / 3;
      CHECK(c.starts.front() >= p.stage(n - 1).starts.back() + prev_len);
    }
  }
}

TEST_CASE("xstar mirror") {
  CorrectedPrefix p;
  p.bits = {1, 0, 1};
  auto w1 = xstar_window(p, 1);
  CHECK(w1.at(-1) == 1);
  CHECK(w1.at(0) == 0);
  CHECK(w1.at(1) == 1);
  auto w2 = xstar_window(p, 2);
  CHECK(bits_to_string(w2.symbols.bits()) == "01010");
  CHECK_THROWS_AS(xstar_window(p, 4), BoundsError);
}

TEST_CASE("compressed word basics") {
  auto w = CompressedWord::concat(CompressedWord::literal("101"), CompressedWord::zeros(BigInt(100)));
  CHECK(w.length() == 103);
  CHECK(w.ones() == 2);
  CHECK(w.at(BigInt(2)) == 1);
  CHECK(w.at(BigInt(50)) == 0);
  CHECK(w.extract(BigInt(1), 4) == "0100");
  CHECK(w.head().size() == 64);
  CHECK(w.head().substr(0, 4) == "1010");
  CHECK(w.tail() == std::string(64, '0'));
  std::string lit(200, '0');
  lit[150] = '1';
  auto big = CompressedWord::literal(lit);
  CHECK(big.materialize() == lit);
  CHECK(big.kind() == CompressedWord::Kind::concat);
  auto z = word_stats(CompressedWord::zeros(BigInt(1000000)));
  CHECK(z.length == 1000000);
  CHECK(z.ones == 0);
  CHECK(z.density == 0);
}

TEST_CASE("random compressed words agree with their strings") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<CompressedWord, std::string>> pool;
    for (int i = 0; i < 6; ++i) {
      std::string s;
      std::size_t len = 1 + rng() % 90;
      for (std::size_t j = 0; j < len; ++j) s.push_back(rng() % 2 ? '1' : '0');
      pool.emplace_back(CompressedWord::literal(s), s);
      std::size_t z = 1 + rng() % 100;
      pool.emplace_back(CompressedWord::zeros(BigInt(z)), std::string(z, '0'));
    }
    for (int i = 0; i < 20; ++i) {
      auto& a = pool[rng() % pool.size()];
      auto& b = pool[rng() % pool.size()];
      pool.emplace_back(CompressedWord::concat(a.first, b.first), a.second + b.second);
    }
    for (auto& [w, s] : pool) {
      REQUIRE(w.materialize() == s);
      CHECK(w.head() == s.substr(0, std::min<std::size_t>(64, s.size())));
      CHECK(w.tail() == s.substr(s.size() - std::min<std::size_t>(64, s.size())));
      CHECK(w.ones() == static_cast<long>(std::count(s.begin(), s.end(), '1')));
      std::size_t pos = rng() % s.size();
      CHECK(w.at(BigInt(pos)) == s[pos] - '0');
    }
  }
}

TEST_CASE("q_cell and q_index are inverse") {
  CHECK(q_cell(1) == std::pair<std::uint64_t, std::uint64_t>{1, 1});
  CHECK(q_cell(5) == std::pair<std::uint64_t, std::uint64_t>{2, 2});
  CHECK(q_cell(7) == std::pair<std::uint64_t, std::uint64_t>{1, 4});
  CHECK(q_index(1, 7) == 22);
  for (std::uint64_t r = 1; r <= 100; ++r)
    for (std::uint64_t c = 1; c <= 100; ++c) CHECK(q_cell(q_index(r, c)) == std::pair{r, c});
}

TEST_CASE("omega scaffold small depths") {
  auto s = build_A(4);
  CHECK(s.A(1).materialize() == "1");
  CHECK(s.A(2).materialize() == "10101");
  CHECK(s.A(3).materialize() == "10101" + std::string(25, '0') + "1001");
  CHECK(s.P(3).materialize() == "101");
  CHECK(q_word(s, 1, 1).materialize() == "101");
  CHECK(q_word(s, 2, 1).materialize() == "10000010");
  CHECK(q_word(s, 2, 2).length() == 9);
  CHECK_THROWS_AS(q_word(s, 5, 1), OrderingError);
  auto a2 = word_stats(s.A(2));
  CHECK(a2.density == Rational(3, 5));
  auto a3 = word_stats(s.A(3));
  CHECK(a3.length == 34);
  CHECK(a3.ones == 5);
  CHECK(s.A(4).length() == 34 + 34 * 34 + 8);
  CHECK_THROWS_AS(build_A(25), ResourceBound);
}

TEST_CASE("omega scaffold recursion to depth 24") {
  auto s = build_A(24);
  BigInt len = 1;
  for (int n = 2; n <= 24; ++n) {
    auto [r, c] = q_cell(static_cast<std::uint64_t>(n - 1));
    BigInt q = 2 * BigInt(r) + BigInt(r) * r + c - 1;  // |P(r)| = r
    len = len + len * len + q;
    CHECK(s.A(n).length() == len);
    CHECK(s.A(n).extract(0, std::min<std::size_t>(64, n < 5 ? s.A(n - 1).length().convert_to<std::size_t>() : 64)) ==
          s.A(n - 1).head());
  }
  for (int n = 4; n <= 24; ++n) CHECK(word_stats(s.A(n)).density < word_stats(s.A(n - 1)).density);
  CHECK(word_stats(s.A(5)).density < Rational(1, 100000));
}
