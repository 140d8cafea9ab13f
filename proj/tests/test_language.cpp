#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "entroflow/errors.hpp"
#include "entroflow/language.hpp"

using namespace entroflow;

namespace {

std::vector<std::uint8_t> B(std::string_view s) { return bits_from_string(s); }

std::vector<std::string> naive_blocks(const std::string& s, std::size_t n) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) out.insert(s.substr(i, n));
  return {out.begin(), out.end()};
}

std::vector<std::size_t> naive_occ(const std::string& s, const std::string& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + p.size() <= s.size(); ++i)
    if (s.compare(i, p.size(), p) == 0) out.push_back(i);
  return out;
}

// random DAG with a shared pool; the string oracle is built alongside
std::pair<CompressedWord, std::string> random_word(std::mt19937_64& rng, std::size_t max_len) {
  std::vector<std::pair<CompressedWord, std::string>> pool;
  for (int i = 0; i < 5; ++i) {
    std::string s;
    std::size_t len = 1 + rng() % 70;
    for (std::size_t j = 0; j < len; ++j) s.push_back(rng() % 3 ? '1' : '0');
    pool.emplace_back(CompressedWord::literal(s), s);
    std::size_t z = 1 + rng() % 80;
    pool.emplace_back(CompressedWord::zeros(BigInt(z)), std::string(z, '0'));
  }
  std::pair<CompressedWord, std::string> cur = pool[0];
  for (int i = 0; i < 40; ++i) {
    auto& a = pool[rng() % pool.size()];
    auto& b = pool[rng() % pool.size()];
    if (a.second.size() + b.second.size() > max_len) continue;
    pool.emplace_back(CompressedWord::concat(a.first, b.first), a.second + b.second);
    cur = pool.back();
  }
  return cur;
}

}  // namespace

TEST_CASE("block sets on small words") {
  auto w = B("10101");
  CHECK(block_set(w, 2) == std::vector<std::string>{"01", "10"});
  CHECK(block_set(B("11"), 1) == std::vector<std::string>{"1"});
  CHECK_THROWS_AS(block_set(w, 6), BoundsError);
  auto a3 = build_A(3).A(3);
  auto text = a3.materialize();
  CHECK(block_set(a3, 3) == naive_blocks(text, 3));
  CHECK(block_set(a3, 3) == std::vector<std::string>{"000", "001", "010", "100", "101"});
}

TEST_CASE("compressed block sets match materialization") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto [w, s] = random_word(rng, 10000);
    for (std::size_t n = 1; n <= 8 && n <= s.size(); ++n) {
      auto expect = naive_blocks(s, n);
      CHECK(block_set(w, n) == expect);
      CHECK(block_set(B(s), n) == expect);
    }
  }
}

TEST_CASE("complexity table") {
  auto t = complexity_table(B("10101"), 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].count == 2);
  CHECK(t.rows[0].estimate == "0.69314718056");
  CHECK(t.rows[1].count == 2);
  CHECK(t.rows[1].estimate == "0.34657359028");
  auto z = complexity_table(B(std::string(20, '0')), 10);
  for (auto& r : z.rows) {
    CHECK(r.count == 1);
    CHECK(r.estimate == "0");
  }
  CHECK(t.csv() == "n,count,estimate\n1,2,0.69314718056\n2,2,0.34657359028\n");
}

TEST_CASE("complexity growth law on random words") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::uint8_t> w(200 + rng() % 500);
    for (auto& b : w) b = rng() % 4 == 0;
    auto t = complexity_table(w, 12);
    for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
      CHECK(t.rows[i + 1].count <= 2 * t.rows[i].count);
      CHECK(t.rows[i].count >= 1);
    }
  }
}

TEST_CASE("window condition") {
  CHECK(verify_window_condition(B(std::string(13, '1')), 1).ok);
  auto bad = verify_window_condition(B(std::string(13, '0')), 1);
  CHECK_FALSE(bad.ok);
  CHECK(bad.first_violation == 0u);
  CHECK_THROWS_AS(verify_window_condition(B("111"), 1), BoundsError);
  auto p = build_corrected_prefix(10000, 3);
  for (int n = 1; n <= 3; ++n) CHECK(verify_window_condition(p.bits, n).ok);
  // a zero block of 13 placed late
  std::string s(40, '1');
  for (int i = 20; i < 33; ++i) s[static_cast<std::size_t>(i)] = '0';
  auto r = verify_window_condition(B(s), 1);
  CHECK(r.first_violation == 20u);
}

TEST_CASE("variants of the corrected prefix") {
  auto p = build_corrected_prefix(10000, 3);
  CHECK(count_variants(p, 1) == 2);
  CHECK(count_variants(p, 2) == 4);
  CHECK(count_variants(p, 3) == 32);
  CHECK_THROWS_AS(count_variants(p, 4), DomainError);
  CHECK(complexity_table(p.bits, 18).rows.back().count >= 32);
}

TEST_CASE("occurrences") {
  CHECK(occurrences(B("10101"), "101", 10) == std::vector<std::size_t>{0, 2});
  auto a3 = build_A(3).A(3);
  auto occ = occurrences(a3, "1001", 10);
  CHECK(std::find(occ.begin(), occ.end(), BigInt(30)) != occ.end());
  CHECK(occurrences(CompressedWord::zeros(BigInt(100)), "1", 10).empty());
  auto zz = occurrences(CompressedWord::zeros(BigInt(100)), "00", 3);
  CHECK(zz == std::vector<BigInt>{0, 1, 2});

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto [w, s] = random_word(rng, 5000);
    std::size_t m = 1 + rng() % 12;
    if (m > s.size()) continue;
    std::string pat = s.substr(rng() % (s.size() - m + 1), m);
    if (trial % 3 == 0) pat[rng() % m] ^= 1;
    auto expect = naive_occ(s, pat);
    std::size_t limit = 1 + rng() % 30;
    if (expect.size() > limit) expect.resize(limit);
    auto got = occurrences(w, pat, limit);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == expect[i]);
      CHECK(w.extract(got[i], m) == pat);
    }
  }
}

TEST_CASE("occurrences in a deep scaffold are exact") {
  auto s = build_A(12);
  auto occ = occurrences(s.A(12), "100001", 5);
  REQUIRE_FALSE(occ.empty());
  for (std::size_t i = 0; i < occ.size(); ++i) {
    CHECK(s.A(12).extract(occ[i], 6) == "100001");
    if (i) CHECK(occ[i] > occ[i - 1]);
  }
}

TEST_CASE("recurrence") {
  CHECK(recurrence_probe(B("10101"), 1, 10) == std::vector<std::size_t>{2, 4});
  auto a3 = build_A(3).A(3);
  auto r = recurrence_probe(a3, 3, 10);
  CHECK(std::find(r.begin(), r.end(), BigInt(2)) != r.end());
  CHECK(recurrence_probe(B("00001"), 1, 10) == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("mixing probe") {
  CHECK(mixing_probe(2, 1, 1, 1).at(1));
  CHECK(mixing_probe(8, 1, 4, 4).at(4));
  auto s = build_A(23);
  auto m = mixing_probe(s, 1, 1, 7);
  for (std::uint64_t g = 1; g <= 7; ++g) CHECK(m.at(g));
  try {
    mixing_probe(5, 1, 7, 7);
    FAIL("expected ResourceBound");
  } catch (const ResourceBound& e) {
    CHECK(e.feasible() == "depth >= 23");
  }
  auto m2 = mixing_probe(s, 2, 4, 5);
  CHECK(m2.at(4));
  CHECK(m2.at(5));
}
