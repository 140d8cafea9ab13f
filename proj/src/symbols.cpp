#include "entroflow/symbols.hpp"

#include "entroflow/errors.hpp"

namespace entroflow {

int SymbolWindow::at(std::int64_t k) const {
  if (k < first_ || k >= end())
    throw WindowExhausted("coordinate " + std::to_string(k) + " outside window [" +
                              std::to_string(first_) + ", " + std::to_string(end()) + ")",
                          k < 0 ? -k : k);
  return bits_[static_cast<std::size_t>(k - first_)];
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

std::vector<std::uint8_t> bits_from_string(std::string_view text) {
  std::vector<std::uint8_t> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw FormatError("expected a 0/1 string");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

}  // namespace entroflow
