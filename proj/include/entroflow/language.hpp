#ifndef ENTROFLOW_LANGUAGE_HPP
#define ENTROFLOW_LANGUAGE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entroflow/numeric.hpp"
#include "entroflow/wordgen.hpp"

namespace entroflow {

using Bits = std::span<const std::uint8_t>;

inline constexpr std::size_t kBlockCap = 64;

// ---------------------------------------------------------------------------
// Factor sets and complexity
// ---------------------------------------------------------------------------

/// Distinct length-n factors, sorted.
std::vector<std::string> block_set(Bits w, std::size_t n);
/// Boundary-crossing enumeration over the DAG; never materializes `w`.
std::vector<std::string> block_set(const CompressedWord& w, std::size_t n,
                                   std::size_t cap = kBlockCap);

std::uint64_t block_count(Bits w, std::size_t n);
std::uint64_t block_count(const CompressedWord& w, std::size_t n, std::size_t cap = kBlockCap);

struct ComplexityRow {
  std::size_t n = 0;
  std::uint64_t count = 0;
  std::string estimate;  // ln(count)/n, 12 significant digits
};

struct ComplexityTable {
  std::vector<ComplexityRow> rows;

  /// "n,count,estimate" header plus one line per row.
  std::string csv() const;
};

ComplexityTable complexity_table(Bits w, std::size_t n_max);
ComplexityTable complexity_table(const CompressedWord& w, std::size_t n_max,
                                 std::size_t cap = kBlockCap);

// ---------------------------------------------------------------------------
// Ohno-specific checks
// ---------------------------------------------------------------------------

struct WindowCheck {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // start of the first bad window
  std::size_t windows = 0;
};

/// Every window of length 4*3^n + 1 must contain 2n-1 consecutive ones.
WindowCheck verify_window_condition(Bits w, int n);

/// Distinct filled x_n blocks among the recorded stage-n occurrences.
std::uint64_t count_variants(const CorrectedPrefix& prefix, int n);

// ---------------------------------------------------------------------------
// Occurrences, recurrence, mixing
// ---------------------------------------------------------------------------

/// Up to `limit` leftmost start positions of `pattern`, increasing.
std::vector<std::size_t> occurrences(Bits w, std::string_view pattern, std::size_t limit);
std::vector<BigInt> occurrences(const CompressedWord& w, std::string_view pattern,
                                std::size_t limit, std::size_t cap = kBlockCap);

/// Positions p > 0 where the initial ell-block returns.
std::vector<std::size_t> recurrence_probe(Bits w, std::size_t ell, std::size_t limit);
std::vector<BigInt> recurrence_probe(const CompressedWord& w, std::size_t ell, std::size_t limit);

/// For each gap g in [gap_lo, gap_hi], whether P(row) O(g) P(row) occurs in
/// A_depth. Cells appended at depth <= `depth` are found on the DAG spine;
/// other gaps fall back to a compressed occurrence search. Throws
/// ResourceBound naming the minimal depth when a gap is out of reach.
std::map<std::uint64_t, bool> mixing_probe(const OmegaScaffold& scaffold, std::uint64_t row,
                                           std::uint64_t gap_lo, std::uint64_t gap_hi);
std::map<std::uint64_t, bool> mixing_probe(int depth, std::uint64_t row, std::uint64_t gap_lo,
                                           std::uint64_t gap_hi);

}  // namespace entroflow

#endif
