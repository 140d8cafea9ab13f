#ifndef ENTROFLOW_SYMBOLS_HPP
#define ENTROFLOW_SYMBOLS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace entroflow {

/// A finite stretch of a {0,1}-sequence addressed by integer coordinates
/// [first, first + size). Coordinates may be negative.
class SymbolWindow {
 public:
  SymbolWindow() = default;
  SymbolWindow(std::vector<std::uint8_t> bits, std::int64_t first)
      : bits_(std::move(bits)), first_(first) {}

  std::int64_t first() const noexcept { return first_; }
  std::int64_t end() const noexcept { return first_ + static_cast<std::int64_t>(bits_.size()); }
  std::size_t size() const noexcept { return bits_.size(); }
  bool covers(std::int64_t lo, std::int64_t hi) const noexcept { return lo >= first_ && hi <= end(); }

  /// Throws BoundsError outside the window.
  int at(std::int64_t k) const;
  int operator[](std::int64_t k) const noexcept {
    return bits_[static_cast<std::size_t>(k - first_)];
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::int64_t first_ = 0;
};

/// "0101" rendering of raw bits.
std::string bits_to_string(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> bits_from_string(std::string_view text);

}  // namespace entroflow

#endif
