#include "entroflow/word_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

constexpr std::string_view kRawMagic = "OSWD1\n";
constexpr std::string_view kDagMagic = "ODAG1\n";

std::string_view next_line(std::string_view& rest) {
  auto nl = rest.find('\n');
  if (nl == std::string_view::npos) throw FormatError("truncated header");
  std::string_view line = rest.substr(0, nl);
  rest.remove_prefix(nl + 1);
  return line;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) throw FormatError(std::string("bad ") + what);
  return v;
}

BigInt parse_big(std::string_view s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) throw FormatError("bad zero-run length");
  return BigInt(std::string(s));
}

}  // namespace

std::string write_oswd(std::span<const std::uint8_t> bits) {
  std::string out(kRawMagic);
  out += std::to_string(bits.size());
  out += '\n';
  const std::size_t start = out.size();
  out.resize(start + (bits.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[start + i / 8] = static_cast<char>(static_cast<unsigned char>(out[start + i / 8]) | (0x80u >> (i % 8)));
  return out;
}

std::vector<std::uint8_t> read_oswd(std::string_view data) {
  if (!data.starts_with(kRawMagic)) throw FormatError("missing OSWD1 magic");
  data.remove_prefix(kRawMagic.size());
  const std::uint64_t len = parse_u64(next_line(data), "length");
  if (data.size() != (len + 7) / 8) throw FormatError("payload size does not match the declared length");
  std::vector<std::uint8_t> bits(len);
  for (std::size_t i = 0; i < len; ++i)
    bits[i] = (static_cast<unsigned char>(data[i / 8]) >> (7 - i % 8)) & 1u;
  for (std::size_t i = len; i < data.size() * 8; ++i)
    if ((static_cast<unsigned char>(data[i / 8]) >> (7 - i % 8)) & 1u) throw FormatError("nonzero padding bits");
  return bits;
}

std::string write_odag(const CompressedWord& w) {
  std::unordered_map<std::uint64_t, std::size_t> line_of;
  std::ostringstream out;
  out << kDagMagic;
  std::size_t next = 0;
  // iterative post-order
  std::vector<std::pair<CompressedWord, bool>> stack{{w, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (line_of.count(node.id())) continue;
    if (node.kind() == CompressedWord::Kind::concat && !expanded) {
      stack.emplace_back(node, true);
      stack.emplace_back(node.right(), false);
      stack.emplace_back(node.left(), false);
      continue;
    }
    switch (node.kind()) {
      case CompressedWord::Kind::literal:
        out << "LIT " << node.literal_bits() << '\n';
        break;
      case CompressedWord::Kind::zero_run:
        out << "ZRUN " << node.length() << '\n';
        break;
      case CompressedWord::Kind::concat:
        out << "CAT " << line_of.at(node.left().id()) << ' ' << line_of.at(node.right().id()) << '\n';
        break;
    }
    line_of[node.id()] = next++;
  }
  return out.str();
}

CompressedWord read_odag(std::string_view data) {
  if (!data.starts_with(kDagMagic)) throw FormatError("missing ODAG1 magic");
  data.remove_prefix(kDagMagic.size());
  std::vector<CompressedWord> nodes;
  while (!data.empty()) {
    std::string_view line = next_line(data);
    if (line.starts_with("LIT ")) {
      std::string_view bits = line.substr(4);
      if (bits.empty() || bits.find_first_not_of("01") != std::string_view::npos) throw FormatError("bad literal");
      nodes.push_back(CompressedWord::literal(bits));
    } else if (line.starts_with("ZRUN ")) {
      nodes.push_back(CompressedWord::zeros(parse_big(line.substr(5))));
    } else if (line.starts_with("CAT ")) {
      std::string_view ids = line.substr(4);
      auto sp = ids.find(' ');
      if (sp == std::string_view::npos) throw FormatError("CAT needs two ids");
      auto l = parse_u64(ids.substr(0, sp), "node id"), r = parse_u64(ids.substr(sp + 1), "node id");
      if (l >= nodes.size() || r >= nodes.size()) throw FormatError("CAT references a later node");
      nodes.push_back(CompressedWord::concat(nodes[l], nodes[r]));
    } else {
      throw FormatError("unknown node line '" + std::string(line) + "'");
    }
  }
  if (nodes.empty()) throw FormatError("empty node table");
  return nodes.back();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::random_device rd;
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace entroflow
