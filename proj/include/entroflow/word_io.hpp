#ifndef ENTROFLOW_WORD_IO_HPP
#define ENTROFLOW_WORD_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entroflow/wordgen.hpp"

namespace entroflow {

/// "OSWD1\n<length>\n" then the bits packed MSB-first, zero padded.
std::string write_oswd(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> read_oswd(std::string_view data);

/// "ODAG1\n" then one node per line, children before parents, root last:
/// "LIT <bits>", "ZRUN <length>" or "CAT <id> <id>" with 0-based line ids.
std::string write_odag(const CompressedWord& w);
CompressedWord read_odag(std::string_view data);

/// Whole-file helpers; writes go to a temporary sibling and are renamed into place.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace entroflow

#endif
