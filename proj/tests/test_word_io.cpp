#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>

#include "entroflow/errors.hpp"
#include "entroflow/word_io.hpp"

using namespace entroflow;

TEST_CASE("OSWD1 layout") {
  std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 0, 0, 0, 1, 1};
  std::string data = write_oswd(bits);
  CHECK(data.substr(0, 9) == "OSWD1\n10\n");
  REQUIRE(data.size() == 11);
  CHECK(static_cast<unsigned char>(data[9]) == 0xB0);
  CHECK(static_cast<unsigned char>(data[10]) == 0xC0);
  CHECK(read_oswd(data) == bits);
  CHECK(read_oswd(write_oswd({})).empty());
}

TEST_CASE("OSWD1 round trip and corruption") {
  std::mt19937_64 rng(1);
  for (std::size_t len : {1u, 7u, 8u, 9u, 1000u, 10007u}) {
    std::vector<std::uint8_t> bits(len);
    for (auto& b : bits) b = rng() & 1;
    auto data = write_oswd(bits);
    CHECK(read_oswd(data) == bits);
    CHECK(write_oswd(read_oswd(data)) == data);
  }
  auto good = write_oswd(std::vector<std::uint8_t>(12, 1));
  CHECK_THROWS_AS(read_oswd("OSWD2\n1\n\x80"), FormatError);
  CHECK_THROWS_AS(read_oswd(good.substr(0, good.size() - 1)), FormatError);
  CHECK_THROWS_AS(read_oswd("OSWD1\nx\n"), FormatError);
  CHECK_THROWS_AS(read_oswd(std::string("OSWD1\n1\n\xC0", 9)), FormatError);
}

TEST_CASE("ODAG1 layout and round trip") {
  auto w = CompressedWord::concat(CompressedWord::literal("101"), CompressedWord::zeros(BigInt(25)));
  auto shared = CompressedWord::concat(w, w);
  std::string data = write_odag(shared);
  CHECK(data == "ODAG1\nLIT 101\nZRUN 25\nCAT 0 1\nCAT 2 2\n");
  auto back = read_odag(data);
  CHECK(back.length() == 56);
  CHECK(back.materialize() == shared.materialize());
  CHECK(write_odag(back) == data);

  auto a = build_A(8).A(8);
  auto dag = write_odag(a);
  auto b = read_odag(dag);
  CHECK(b.length() == a.length());
  CHECK(b.ones() == a.ones());
  CHECK(write_odag(b) == dag);
  CHECK(b.extract(0, 200) == a.extract(0, 200));
}

TEST_CASE("ODAG1 rejects malformed tables") {
  CHECK_THROWS_AS(read_odag("ODAG1\n"), FormatError);
  CHECK_THROWS_AS(read_odag("ODAG1\nCAT 0 0\n"), FormatError);
  CHECK_THROWS_AS(read_odag("ODAG1\nLIT 102\n"), FormatError);
  CHECK_THROWS_AS(read_odag("ODAG1\nZRUN -3\n"), FormatError);
  CHECK_THROWS_AS(read_odag("ODAG1\nLIT 1"), FormatError);
  CHECK_THROWS_AS(read_odag("XDAG1\nLIT 1\n"), FormatError);
}

TEST_CASE("atomic file writes") {
  auto dir = std::filesystem::temp_directory_path() / "entroflow_word_io_test";
  std::filesystem::remove_all(dir);
  auto path = (dir / "sub" / "w.oswd").string();
  write_file_atomic(path, write_oswd(std::vector<std::uint8_t>{1, 1, 0}));
  CHECK(read_oswd(read_file(path)) == std::vector<std::uint8_t>{1, 1, 0});
  write_file_atomic(path, "replaced");
  CHECK(read_file(path) == "replaced");
  std::size_t files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir / "sub")) files += e.is_regular_file();
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}
