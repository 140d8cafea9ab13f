#ifndef ENTROFLOW_ENTROPY_HPP
#define ENTROFLOW_ENTROPY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entroflow/flow.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/numeric.hpp"
#include "entroflow/wordgen.hpp"

namespace entroflow {

struct EntropyCertificate {
  enum class Kind { block_lower_bound, frequency_lower_bound };
  Kind kind = Kind::block_lower_bound;
  int n = 0;
  BigInt count;             // block certificates: distinct filled x_n blocks
  Rational frequency;       // frequency certificates
  Rational exact_ratio;     // p_n / (2*3^(n-1)); the value is this times ln 2
  double value = 0;         // block: p_n ln 2 / (2*3^(n-1)); frequency: the frequency
  Rational bound;           // block: 1/4 (times ln 2); frequency: 1/(4*3^n)
  std::optional<std::uint64_t> raw_blocks;  // distinct words of length 2*3^(n-1) in the prefix
  bool satisfied = false;

  std::string kind_name() const;
  std::string value_text() const { return format_sig(value, 12); }
};

/// 1/4 ln 2 to full double precision.
double quarter_ln2();

/// Needs stage n corrected in the prefix; certifies 2^(p_n) distinct x_n blocks.
EntropyCertificate block_lower_certificate(const CorrectedPrefix& prefix, int n);

/// Needs horizon >= 40*3^n; compares freq(I_n) with 1/(4*3^n).
EntropyCertificate frequency_lower_certificate(const EmpiricalMeasure& m, int n);

struct BowenParams {
  Rational epsilon = Rational(1, 64);
  Rational horizon = 64;
  std::size_t samples = 500;
  std::int64_t radius = 8;
  std::uint64_t seed = 0;
};

struct BowenEstimate {
  double value = 0;
  /// Greedy separated-set sizes N(t) at each horizon where N changes.
  std::vector<std::pair<Rational, std::size_t>> profile;
  std::size_t initial = 0;    // N(0)
  std::size_t separated = 0;  // N(t*)
  Rational t_star = 0;
  bool warning = false;
  std::string warning_reason;
};

/// Growth rate (1/t*) ln(N(t*)/N(0)) of greedily built (epsilon, t)-separated
/// sets among `samples` orbit segments starting at Base(k, 0), k uniform in
/// [k_lo, k_hi). t* is the longest horizon <= T whose set stays below a
/// quarter of the sample pool. Distances are the flow module's pseudo-metric.
BowenEstimate bowen_estimate(const Sequence& seq, std::int64_t k_lo, std::int64_t k_hi, const RoofFunction& roof,
                             const BowenParams& params);

enum class SystemKind { ohno, omega };

/// Sequence and sampling range the named system is estimated on.
struct SystemSample {
  std::shared_ptr<const Sequence> seq;
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
};

/// ohno: x* from the minimal stage-4 prefix; omega: y known through A_depth.
SystemSample system_sample(SystemKind system, const RoofFunction& roof, const BowenParams& params,
                           int omega_depth = 5);

BowenEstimate bowen_estimate(SystemKind system, const RoofFunction& roof, const BowenParams& params);

}  // namespace entroflow

#endif
