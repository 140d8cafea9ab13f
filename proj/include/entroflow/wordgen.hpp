#ifndef ENTROFLOW_WORDGEN_HPP
#define ENTROFLOW_WORDGEN_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entroflow/numeric.hpp"
#include "entroflow/symbols.hpp"

namespace entroflow {

// ---------------------------------------------------------------------------
// Ohno stage words over {0, 1, alpha}
// ---------------------------------------------------------------------------

enum class Symbol : std::uint8_t { zero = 0, one = 1, alpha = 2 };

/// x_n or its tilde variant. `alpha` marks a free slot filled later.
struct StageWord {
  int stage = 0;
  std::vector<Symbol> symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  std::size_t alpha_count() const noexcept;
  /// Longest run of literal ones (alpha does not count as one).
  std::size_t longest_one_run() const noexcept;
  /// Rendering with 'a' for alpha, e.g. "1a111a".
  std::string str() const;
};

struct OhnoStage {
  StageWord word;   // x_n
  StageWord tilde;  // x~_n
};

inline constexpr int kStageWordCap = 15;
inline constexpr int kCorrectionStageCap = 4;

/// x_n and x~_n. x~_n changes the leftmost alpha whose replacement by 1
/// produces a run of 2n-1 ones.
OhnoStage build_ohno_stage(int n, int stage_cap = kStageWordCap);

/// Number of alphas in x_n: (3^(n-1)+1)/2.
BigInt pn(int n);

// ---------------------------------------------------------------------------
// Corrected one-sided sequence x+ and the mirrored two-sided x*
// ---------------------------------------------------------------------------

/// Correction record for one stage: the structural x_n occurrences that were
/// filled, and the integer whose big-endian bits filled their alphas.
struct StageCorrection {
  int stage = 0;
  std::vector<std::size_t> starts;  // 0-based offsets into CorrectedPrefix::bits
  std::vector<std::uint64_t> fills;
};

/// Prefix of the corrected x+. bits[i] holds x+(i+1).
struct CorrectedPrefix {
  std::vector<std::uint8_t> bits;
  std::vector<StageCorrection> corrections;
  int max_corrected_stage = 0;

  /// One past the last symbol touched by any correction.
  std::size_t corrected_end() const noexcept;
  const StageCorrection& stage(int n) const;
};

/// Realizes the left-to-right correction procedure up to `max_stage` and sets
/// every remaining alpha to 1. Throws ResourceBound when `max_stage` exceeds
/// `stage_cap` or `target_length` cannot host the required occurrences.
CorrectedPrefix build_corrected_prefix(std::size_t target_length, int max_stage,
                                       int stage_cap = kCorrectionStageCap);

/// Smallest target length for which build_corrected_prefix(len, max_stage) succeeds.
std::size_t minimal_prefix_length(int max_stage, int stage_cap = kCorrectionStageCap);

struct BiSequenceWindow {
  std::int64_t radius = 0;
  SymbolWindow symbols;  // coordinates [-radius, radius]

  int at(std::int64_t k) const { return symbols.at(k); }
};

/// x*(k) = x+(k) for k >= 1, 0 at k = 0, x+(-k) for k <= -1.
BiSequenceWindow xstar_window(const CorrectedPrefix& prefix, std::int64_t radius);

// ---------------------------------------------------------------------------
// Concatenation-DAG words
// ---------------------------------------------------------------------------

/// Immutable binary word stored as a DAG of literals, zero runs and
/// concatenations. Lengths are arbitrary precision; sub-nodes may be shared.
class CompressedWord {
 public:
  enum class Kind : std::uint8_t { literal, zero_run, concat };
  static constexpr std::size_t kLiteralMax = 64;
  static constexpr std::size_t kEdge = 64;

  /// Literals longer than kLiteralMax are split into a balanced concat tree.
  static CompressedWord literal(std::string_view bits01);
  static CompressedWord zeros(const BigInt& length);
  static CompressedWord concat(const CompressedWord& left, const CompressedWord& right);

  Kind kind() const noexcept;
  const BigInt& length() const noexcept;
  const BigInt& ones() const noexcept;
  /// Unique node identity (shared sub-nodes have equal ids).
  std::uint64_t id() const noexcept;

  const std::string& literal_bits() const;  // Kind::literal only
  CompressedWord left() const;              // Kind::concat only
  CompressedWord right() const;

  /// First / last min(64, length) symbols as '0'/'1' text.
  const std::string& head() const noexcept;
  const std::string& tail() const noexcept;

  int at(const BigInt& pos) const;
  /// `len` symbols starting at `pos`; throws BoundsError if the range leaves the word.
  std::string extract(const BigInt& pos, std::size_t len) const;
  /// Whole word as text; throws ResourceBound above `max_len` symbols.
  std::string materialize(std::size_t max_len = std::size_t{1} << 26) const;

  /// Number of distinct nodes reachable from this one.
  std::size_t node_count() const;

 private:
  struct Node;
  explicit CompressedWord(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct WordStats {
  BigInt length;
  BigInt ones;
  Rational density;
};

/// Exact length, number of ones and density by memoized DAG traversal.
WordStats word_stats(const CompressedWord& w);

inline constexpr int kOmegaDepthCap = 24;

/// A_1..A_depth with the P(n) prefixes and Q_i cells they reference.
class OmegaScaffold {
 public:
  int depth() const noexcept { return static_cast<int>(a_.size()); }
  const CompressedWord& A(int n) const;
  const CompressedWord& P(int n) const;
  const CompressedWord& Q(std::uint64_t i) const;
  /// Q_i cells materialized so far (i = 1..depth-1).
  std::uint64_t q_count() const noexcept { return q_.size(); }

 private:
  friend OmegaScaffold build_A(int, int);
  std::vector<CompressedWord> a_, p_, q_;
};

/// A_n = A_{n-1} O(|A_{n-1}|^2) Q_{n-1}, A_1 = 1, P(n) = first n symbols of A_n.
OmegaScaffold build_A(int n, int cap = kOmegaDepthCap);

/// Anti-diagonal enumeration of the Q matrix: i(r,c) = (r+c-1)(r+c-2)/2 + r.
std::uint64_t q_index(std::uint64_t row, std::uint64_t col);
std::pair<std::uint64_t, std::uint64_t> q_cell(std::uint64_t i);

/// P(row) O(row^2 + col - 1) P(row). Throws OrderingError if P(row) is not
/// yet determined by the scaffold.
CompressedWord q_word(const OmegaScaffold& scaffold, std::uint64_t row, std::uint64_t col);

}  // namespace entroflow

#endif
