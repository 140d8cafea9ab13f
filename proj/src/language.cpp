#include "entroflow/language.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

void check_block_length(std::size_t n, std::size_t available) {
  if (n == 0) throw BoundsError("block length must be positive");
  if (n > available)
    throw BoundsError("block length " + std::to_string(n) + " exceeds word length " +
                      std::to_string(available));
}

std::string decode(std::uint64_t code, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i)
    if ((code >> (n - 1 - i)) & 1u) s[i] = '1';
  return s;
}

// Rolling codes of all n-windows, n <= 64.
template <class F>
void for_each_code(Bits w, std::size_t n, F&& f) {
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    code = ((code << 1) | (w[i] & 1u)) & mask;
    if (i + 1 >= n) f(code);
  }
}

std::set<std::string> windows_of(std::string_view s, std::size_t n) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) out.emplace(s.substr(i, n));
  return out;
}

class CompressedBlocks {
 public:
  explicit CompressedBlocks(std::size_t n) : n_(n) {}

  const std::set<std::string>& of(const CompressedWord& w) {
    if (auto it = memo_.find(w.id()); it != memo_.end()) return it->second;
    std::set<std::string> out;
    switch (w.kind()) {
      case CompressedWord::Kind::literal:
        out = windows_of(w.literal_bits(), n_);
        break;
      case CompressedWord::Kind::zero_run:
        if (w.length() >= n_) out.insert(std::string(n_, '0'));
        break;
      case CompressedWord::Kind::concat: {
        CompressedWord l = w.left(), r = w.right();
        out = of(l);
        const auto& rs = of(r);
        out.insert(rs.begin(), rs.end());
        const std::string& lt = l.tail();
        const std::string& rh = r.head();
        std::string cross = lt.substr(lt.size() - std::min(lt.size(), n_ - 1)) +
                            rh.substr(0, std::min(rh.size(), n_ - 1));
        auto c = windows_of(cross, n_);
        out.insert(c.begin(), c.end());
        break;
      }
    }
    return memo_.emplace(w.id(), std::move(out)).first->second;
  }

 private:
  std::size_t n_;
  std::unordered_map<std::uint64_t, std::set<std::string>> memo_;
};

std::string estimate_text(std::uint64_t count, std::size_t n) {
  if (count <= 1) return "0";
  return format_sig(std::log(static_cast<double>(count)) / static_cast<double>(n), 12);
}

}  // namespace

std::vector<std::string> block_set(Bits w, std::size_t n) {
  check_block_length(n, w.size());
  if (n <= 64) {
    std::unordered_set<std::uint64_t> codes;
    for_each_code(w, n, [&](std::uint64_t c) { codes.insert(c); });
    std::vector<std::string> out;
    out.reserve(codes.size());
    for (auto c : codes) out.push_back(decode(c, n));
    std::sort(out.begin(), out.end());
    return out;
  }
  std::set<std::string> s;
  std::string text = bits_to_string(w);
  for (std::size_t i = 0; i + n <= text.size(); ++i) s.emplace(text.substr(i, n));
  return {s.begin(), s.end()};
}

std::vector<std::string> block_set(const CompressedWord& w, std::size_t n, std::size_t cap) {
  if (n > cap) throw BoundsError("block length " + std::to_string(n) + " exceeds block cap " + std::to_string(cap));
  if (n == 0) throw BoundsError("block length must be positive");
  if (w.length() < n) throw BoundsError("block length exceeds word length");
  CompressedBlocks blocks(n);
  const auto& s = blocks.of(w);
  return {s.begin(), s.end()};
}

std::uint64_t block_count(Bits w, std::size_t n) {
  check_block_length(n, w.size());
  if (n <= 64) {
    std::unordered_set<std::uint64_t> codes;
    for_each_code(w, n, [&](std::uint64_t c) { codes.insert(c); });
    return codes.size();
  }
  return block_set(w, n).size();
}

std::uint64_t block_count(const CompressedWord& w, std::size_t n, std::size_t cap) {
  return block_set(w, n, cap).size();
}

std::string ComplexityTable::csv() const {
  std::ostringstream os;
  os << "n,count,estimate\n";
  for (const auto& r : rows) os << r.n << ',' << r.count << ',' << r.estimate << '\n';
  return os.str();
}

ComplexityTable complexity_table(Bits w, std::size_t n_max) {
  check_block_length(n_max, w.size());
  ComplexityTable t;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto c = block_count(w, n);
    t.rows.push_back({n, c, estimate_text(c, n)});
  }
  return t;
}

ComplexityTable complexity_table(const CompressedWord& w, std::size_t n_max, std::size_t cap) {
  if (n_max == 0 || w.length() < n_max) throw BoundsError("n_max outside [1, length]");
  if (n_max > cap) throw BoundsError("n_max exceeds block cap");
  ComplexityTable t;
  for (std::size_t n = 1; n <= n_max; ++n) {
    CompressedBlocks blocks(n);
    auto c = static_cast<std::uint64_t>(blocks.of(w).size());
    t.rows.push_back({n, c, estimate_text(c, n)});
  }
  return t;
}

WindowCheck verify_window_condition(Bits w, int n) {
  if (n < 1) throw DomainError("stage must be >= 1");
  std::size_t len = 4;
  for (int i = 0; i < n; ++i) len *= 3;
  ++len;
  if (w.size() < len)
    throw BoundsError("word of length " + std::to_string(w.size()) + " is shorter than one window (" +
                      std::to_string(len) + ")");
  const std::size_t need = static_cast<std::size_t>(2 * n - 1);
  // start of the rightmost full run of ones seen so far
  WindowCheck out;
  std::size_t run = 0;
  std::optional<std::size_t> latest;
  for (std::size_t i = 0; i < w.size(); ++i) {
    run = w[i] ? run + 1 : 0;
    if (run >= need) latest = i + 1 - need;
    if (i + 1 >= len) {
      std::size_t start = i + 1 - len;
      ++out.windows;
      if (!latest || *latest < start) {
        if (out.ok) out.first_violation = start;
        out.ok = false;
      }
    }
  }
  return out;
}

std::uint64_t count_variants(const CorrectedPrefix& prefix, int n) {
  if (n < 1 || n > prefix.max_corrected_stage)
    throw DomainError("stage " + std::to_string(n) + " is not corrected in this prefix");
  const auto& c = prefix.stage(n);
  std::size_t len = 2;
  for (int i = 1; i < n; ++i) len *= 3;
  std::set<std::string> variants;
  Bits bits(prefix.bits);
  for (auto s : c.starts) variants.insert(bits_to_string(bits.subspan(s, len)));
  return variants.size();
}

std::vector<std::size_t> occurrences(Bits w, std::string_view pattern, std::size_t limit) {
  std::vector<std::size_t> out;
  if (pattern.empty() || pattern.size() > w.size()) return out;
  std::string text = bits_to_string(w);
  for (std::size_t p = text.find(pattern); p != std::string::npos && out.size() < limit;
       p = text.find(pattern, p + 1))
    out.push_back(p);
  return out;
}

namespace {

class CompressedSearch {
 public:
  CompressedSearch(std::string_view pattern, std::size_t limit)
      : pat_(pattern), limit_(limit), all_zero_(pattern.find('1') == std::string_view::npos) {}

  void run(const CompressedWord& w, const BigInt& offset, std::vector<BigInt>& out) {
    if (out.size() >= limit_ || !contains(w)) return;
    switch (w.kind()) {
      case CompressedWord::Kind::literal: {
        const std::string& s = w.literal_bits();
        for (auto p = s.find(pat_); p != std::string::npos && out.size() < limit_; p = s.find(pat_, p + 1))
          out.push_back(offset + p);
        return;
      }
      case CompressedWord::Kind::zero_run: {
        BigInt last = w.length() - pat_.size();
        for (BigInt p = 0; p <= last && out.size() < limit_; ++p) out.push_back(offset + p);
        return;
      }
      case CompressedWord::Kind::concat: {
        CompressedWord l = w.left(), r = w.right();
        run(l, offset, out);
        if (out.size() >= limit_) return;
        // crossing matches start in l and end in r
        const std::size_t m = pat_.size();
        const std::string& lt = l.tail();
        const std::string& rh = r.head();
        std::size_t ltake = std::min(lt.size(), m - 1), rtake = std::min(rh.size(), m - 1);
        std::string cross = lt.substr(lt.size() - ltake) + rh.substr(0, rtake);
        BigInt base = offset + l.length() - ltake;
        for (auto p = cross.find(pat_); p != std::string::npos && out.size() < limit_; p = cross.find(pat_, p + 1))
          if (p < ltake && p + m > ltake) out.push_back(base + p);
        if (out.size() >= limit_) return;
        run(r, offset + l.length(), out);
        return;
      }
    }
  }

 private:
  bool contains(const CompressedWord& w) {
    if (auto it = memo_.find(w.id()); it != memo_.end()) return it->second;
    bool found = false;
    switch (w.kind()) {
      case CompressedWord::Kind::literal:
        found = w.literal_bits().find(pat_) != std::string::npos;
        break;
      case CompressedWord::Kind::zero_run:
        found = all_zero_ && w.length() >= pat_.size();
        break;
      case CompressedWord::Kind::concat: {
        CompressedWord l = w.left(), r = w.right();
        found = contains(l) || contains(r);
        if (!found) {
          const std::size_t m = pat_.size();
          const std::string& lt = l.tail();
          const std::string& rh = r.head();
          std::string cross = lt.substr(lt.size() - std::min(lt.size(), m - 1)) +
                              rh.substr(0, std::min(rh.size(), m - 1));
          found = cross.find(pat_) != std::string::npos;
        }
        break;
      }
    }
    memo_.emplace(w.id(), found);
    return found;
  }

  std::string pat_;
  std::size_t limit_;
  bool all_zero_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

std::vector<BigInt> occurrences(const CompressedWord& w, std::string_view pattern, std::size_t limit,
                                std::size_t cap) {
  if (pattern.size() > cap) throw BoundsError("pattern longer than block cap");
  for (char c : pattern)
    if (c != '0' && c != '1') throw FormatError("pattern must be over {0,1}");
  std::vector<BigInt> out;
  if (pattern.empty() || limit == 0 || w.length() < pattern.size()) return out;
  CompressedSearch search(pattern, limit);
  search.run(w, 0, out);
  return out;
}

std::vector<std::size_t> recurrence_probe(Bits w, std::size_t ell, std::size_t limit) {
  check_block_length(ell, w.size());
  std::string head = bits_to_string(w.first(ell));
  auto occ = occurrences(w, head, limit + 1);
  if (!occ.empty() && occ.front() == 0) occ.erase(occ.begin());
  if (occ.size() > limit) occ.resize(limit);
  return occ;
}

std::vector<BigInt> recurrence_probe(const CompressedWord& w, std::size_t ell, std::size_t limit) {
  if (ell == 0 || w.length() < ell) throw BoundsError("ell outside [1, length]");
  auto occ = occurrences(w, w.extract(0, ell), limit + 1);
  if (!occ.empty() && occ.front() == 0) occ.erase(occ.begin());
  if (occ.size() > limit) occ.resize(limit);
  return occ;
}

std::map<std::uint64_t, bool> mixing_probe(const OmegaScaffold& scaffold, std::uint64_t row,
                                           std::uint64_t gap_lo, std::uint64_t gap_hi) {
  if (row < 1 || gap_lo < 1 || gap_hi < gap_lo) throw DomainError("row and gaps must be >= 1, gap_lo <= gap_hi");
  const int depth = scaffold.depth();

  // Right children along the spine A_n = (A_{n-1} O) Q_{n-1} are the Q cells.
  std::unordered_set<std::uint64_t> spine_cells;
  for (int n = depth; n >= 2; --n) spine_cells.insert(scaffold.A(n).right().id());

  std::map<std::uint64_t, bool> out;
  for (std::uint64_t g = gap_lo; g <= gap_hi; ++g) {
    // row r holds gaps r^2, r^2 + 1, ... in columns 1, 2, ...
    const bool has_cell = g >= row * row;
    const std::uint64_t i = has_cell ? q_index(row, g - row * row + 1) : 0;
    if (has_cell && i <= scaffold.q_count() && spine_cells.count(scaffold.Q(i).id())) {
      out[g] = true;
      continue;
    }
    if (row <= static_cast<std::uint64_t>(depth) && 2 * row + g <= kBlockCap) {
      const std::string p = scaffold.P(static_cast<int>(row)).materialize();
      if (!occurrences(scaffold.A(depth), p + std::string(g, '0') + p, 1).empty()) {
        out[g] = true;
        continue;
      }
    }
    if (!has_cell) {
      out[g] = false;
      continue;
    }
    throw ResourceBound("cell for row " + std::to_string(row) + ", gap " + std::to_string(g) +
                            " is appended only at depth " + std::to_string(i + 1),
                        "depth >= " + std::to_string(i + 1));
  }
  return out;
}

std::map<std::uint64_t, bool> mixing_probe(int depth, std::uint64_t row, std::uint64_t gap_lo,
                                           std::uint64_t gap_hi) {
  return mixing_probe(build_A(depth), row, gap_lo, gap_hi);
}

}  // namespace entroflow
