#include "entroflow/wordgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <unordered_set>

#include "entroflow/errors.hpp"

namespace entroflow {

// ---------------------------------------------------------------------------
// Stage words
// ---------------------------------------------------------------------------

std::size_t StageWord::alpha_count() const noexcept {
  return static_cast<std::size_t>(std::count(symbols.begin(), symbols.end(), Symbol::alpha));
}

std::size_t StageWord::longest_one_run() const noexcept {
  std::size_t best = 0, run = 0;
  for (Symbol s : symbols) {
    run = s == Symbol::one ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::string StageWord::str() const {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) out.push_back(s == Symbol::alpha ? 'a' : s == Symbol::one ? '1' : '0');
  return out;
}

namespace {

std::vector<Symbol> concat3(const std::vector<Symbol>& a, const std::vector<Symbol>& b,
                            const std::vector<Symbol>& c) {
  std::vector<Symbol> out;
  out.reserve(a.size() + b.size() + c.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

StageWord make_tilde(const StageWord& x) {
  const auto& s = x.symbols;
  const std::size_t need = 2 * static_cast<std::size_t>(x.stage) - 1;
  const std::size_t n = s.size();
  std::vector<std::size_t> left(n, 0), right(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    left[i] = s[i] == Symbol::one ? (i ? left[i - 1] : 0) + 1 : 0;
  for (std::size_t i = n; i-- > 0;)
    right[i] = s[i] == Symbol::one ? (i + 1 < n ? right[i + 1] : 0) + 1 : 0;
  const std::size_t current = x.longest_one_run();
  for (std::size_t q = 0; q < n; ++q) {
    if (s[q] != Symbol::alpha) continue;
    std::size_t merged = (q ? left[q - 1] : 0) + 1 + (q + 1 < n ? right[q + 1] : 0);
    if (std::max(current, merged) >= need) {
      StageWord t = x;
      t.symbols[q] = Symbol::one;
      return t;
    }
  }
  throw Error("no alpha of x_" + std::to_string(x.stage) + " yields the required run of ones");
}

std::vector<OhnoStage> build_stages(int n) {
  std::vector<OhnoStage> stages;
  stages.reserve(static_cast<std::size_t>(n));
  OhnoStage first;
  first.word = {1, {Symbol::one, Symbol::alpha}};
  first.tilde = {1, {Symbol::one, Symbol::one}};
  stages.push_back(std::move(first));
  for (int m = 2; m <= n; ++m) {
    const OhnoStage& prev = stages.back();
    OhnoStage next;
    next.word = {m, concat3(prev.word.symbols, prev.tilde.symbols, prev.word.symbols)};
    next.tilde = make_tilde(next.word);
    stages.push_back(std::move(next));
  }
  return stages;
}

void check_stage_cap(int n, int cap) {
  if (n < 1) throw DomainError("stage must be >= 1");
  if (n > cap)
    throw ResourceBound("stage " + std::to_string(n) + " exceeds the stage-word cap " +
                            std::to_string(cap),
                        "n <= " + std::to_string(cap));
}

}  // namespace

OhnoStage build_ohno_stage(int n, int stage_cap) {
  check_stage_cap(n, stage_cap);
  auto stages = build_stages(n);
  return std::move(stages.back());
}

BigInt pn(int n) {
  if (n < 1) throw DomainError("p_n needs n >= 1");
  return (pow3(static_cast<unsigned>(n - 1)) + 1) / 2;
}

// ---------------------------------------------------------------------------
// Corrected prefix
// ---------------------------------------------------------------------------

std::size_t CorrectedPrefix::corrected_end() const noexcept {
  std::size_t end = 0;
  for (const auto& c : corrections) {
    if (c.starts.empty()) continue;
    std::size_t len = 2 * static_cast<std::size_t>(std::pow(3, c.stage - 1) + 0.5);
    end = std::max(end, c.starts.back() + len);
  }
  return end;
}

const StageCorrection& CorrectedPrefix::stage(int n) const {
  for (const auto& c : corrections)
    if (c.stage == n) return c;
  throw DomainError("stage " + std::to_string(n) + " is not corrected in this prefix");
}

namespace {

std::size_t stage_length(int n) {
  std::size_t len = 2;
  for (int i = 1; i < n; ++i) len *= 3;
  return len;
}

// Picks the structural x_n occurrences for stages 1..max_stage inside
// [0, limit) of the uncorrected word. Returns nullopt if they do not fit.
std::optional<std::vector<StageCorrection>> select_occurrences(const std::vector<Symbol>& raw,
                                                               const std::vector<OhnoStage>& stages,
                                                               int max_stage, std::size_t limit) {
  std::vector<StageCorrection> out;
  std::size_t region_end = 0;
  for (int n = 1; n <= max_stage; ++n) {
    const auto& pattern = stages[static_cast<std::size_t>(n - 1)].word.symbols;
    const std::size_t len = pattern.size();
    const std::uint64_t need = std::uint64_t{1} << pn(n).convert_to<unsigned>();
    StageCorrection c;
    c.stage = n;
    for (std::size_t j = (region_end + len - 1) / len; c.starts.size() < need; ++j) {
      std::size_t start = j * len;
      if (start + len > limit || start + len > raw.size()) return std::nullopt;
      if (std::equal(pattern.begin(), pattern.end(), raw.begin() + static_cast<std::ptrdiff_t>(start))) {
        c.fills.push_back(c.starts.size());
        c.starts.push_back(start);
      }
    }
    region_end = c.starts.back() + len;
    out.push_back(std::move(c));
  }
  return out;
}

int stages_for_length(std::size_t length) {
  int m = 1;
  while (stage_length(m) < length) ++m;
  return m;
}

}  // namespace

std::size_t minimal_prefix_length(int max_stage, int stage_cap) {
  if (max_stage < 1) throw DomainError("max_stage must be >= 1");
  if (max_stage > stage_cap)
    throw ResourceBound("correction stage " + std::to_string(max_stage) + " exceeds cap " +
                            std::to_string(stage_cap) + " (2^p_n occurrences are infeasible)",
                        "max_stage <= " + std::to_string(stage_cap));
  for (int m = max_stage + 1; m <= kStageWordCap; ++m) {
    auto stages = build_stages(m);
    const auto& raw = stages.back().word.symbols;
    if (auto sel = select_occurrences(raw, stages, max_stage, raw.size())) {
      const auto& last = sel->back();
      return last.starts.back() + stage_length(last.stage);
    }
  }
  throw ResourceBound("no feasible prefix length within the stage-word cap");
}

CorrectedPrefix build_corrected_prefix(std::size_t target_length, int max_stage, int stage_cap) {
  if (target_length == 0) throw BoundsError("target_length must be positive");
  if (max_stage < 1) throw DomainError("max_stage must be >= 1");
  if (max_stage > stage_cap)
    throw ResourceBound("correction stage " + std::to_string(max_stage) + " exceeds cap " +
                            std::to_string(stage_cap) + " (2^p_n occurrences are infeasible)",
                        "max_stage <= " + std::to_string(stage_cap));
  const int m = std::max(stages_for_length(target_length), max_stage + 1);
  check_stage_cap(m, kStageWordCap);
  const auto stages = build_stages(m);
  const auto& raw = stages.back().word.symbols;

  auto selected = select_occurrences(raw, stages, max_stage, target_length);
  if (!selected) {
    throw ResourceBound("target_length " + std::to_string(target_length) +
                            " cannot host 2^p_n structural occurrences for every stage <= " +
                            std::to_string(max_stage),
                        "target_length >= " + std::to_string(minimal_prefix_length(max_stage, stage_cap)));
  }

  CorrectedPrefix out;
  out.max_corrected_stage = max_stage;
  out.bits.assign(target_length, 1);
  for (std::size_t i = 0; i < target_length; ++i)
    out.bits[i] = raw[i] == Symbol::zero ? 0 : 1;  // leftover alphas become 1

  for (const auto& c : *selected) {
    const auto& pattern = stages[static_cast<std::size_t>(c.stage - 1)].word.symbols;
    std::vector<std::size_t> alpha_pos;
    for (std::size_t i = 0; i < pattern.size(); ++i)
      if (pattern[i] == Symbol::alpha) alpha_pos.push_back(i);
    const std::size_t p = alpha_pos.size();
    for (std::size_t k = 0; k < c.starts.size(); ++k) {
      for (std::size_t a = 0; a < p; ++a) {
        out.bits[c.starts[k] + alpha_pos[a]] =
            static_cast<std::uint8_t>((c.fills[k] >> (p - 1 - a)) & 1u);
      }
    }
  }
  out.corrections = std::move(*selected);
  return out;
}

BiSequenceWindow xstar_window(const CorrectedPrefix& prefix, std::int64_t radius) {
  if (radius < 1) throw BoundsError("radius must be positive");
  if (static_cast<std::size_t>(radius) > prefix.bits.size())
    throw BoundsError("radius " + std::to_string(radius) + " exceeds prefix length " +
                      std::to_string(prefix.bits.size()));
  std::vector<std::uint8_t> v(static_cast<std::size_t>(2 * radius + 1));
  for (std::int64_t k = -radius; k <= radius; ++k) {
    std::uint8_t b = 0;
    if (k >= 1) b = prefix.bits[static_cast<std::size_t>(k - 1)];
    else if (k <= -1) b = prefix.bits[static_cast<std::size_t>(-k - 1)];
    v[static_cast<std::size_t>(k + radius)] = b;
  }
  return {radius, SymbolWindow(std::move(v), -radius)};
}

// ---------------------------------------------------------------------------
// CompressedWord
// ---------------------------------------------------------------------------

struct CompressedWord::Node {
  Kind kind;
  std::string lit;
  BigInt len;
  BigInt ones;
  std::shared_ptr<const Node> left, right;
  std::string head, tail;
  std::uint64_t id;
};

namespace {

std::uint64_t next_node_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

CompressedWord CompressedWord::literal(std::string_view bits01) {
  if (bits01.empty()) throw BoundsError("empty literal");
  for (char c : bits01)
    if (c != '0' && c != '1') throw FormatError("literal must be over {0,1}");
  if (bits01.size() > kLiteralMax) {
    std::size_t half = bits01.size() / 2;
    return concat(literal(bits01.substr(0, half)), literal(bits01.substr(half)));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::literal;
  n->lit = std::string(bits01);
  n->len = static_cast<unsigned long>(bits01.size());
  n->ones = static_cast<unsigned long>(std::count(bits01.begin(), bits01.end(), '1'));
  n->head = n->lit;
  n->tail = n->lit;
  n->id = next_node_id();
  return CompressedWord(std::move(n));
}

CompressedWord CompressedWord::zeros(const BigInt& length) {
  if (length < 1) throw BoundsError("zero run length must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::zero_run;
  n->len = length;
  n->ones = 0;
  std::size_t edge = length >= kEdge ? kEdge : length.convert_to<std::size_t>();
  n->head = std::string(edge, '0');
  n->tail = n->head;
  n->id = next_node_id();
  return CompressedWord(std::move(n));
}

CompressedWord CompressedWord::concat(const CompressedWord& left, const CompressedWord& right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::concat;
  n->left = left.node_;
  n->right = right.node_;
  n->len = left.length() + right.length();
  n->ones = left.ones() + right.ones();
  n->head = left.head();
  if (n->head.size() < kEdge) n->head += right.head().substr(0, kEdge - n->head.size());
  n->tail = right.tail();
  if (n->tail.size() < kEdge) {
    const std::string& lt = left.tail();
    std::size_t take = std::min(lt.size(), kEdge - n->tail.size());
    n->tail = lt.substr(lt.size() - take) + n->tail;
  }
  n->id = next_node_id();
  return CompressedWord(std::move(n));
}

CompressedWord::Kind CompressedWord::kind() const noexcept { return node_->kind; }
const BigInt& CompressedWord::length() const noexcept { return node_->len; }
const BigInt& CompressedWord::ones() const noexcept { return node_->ones; }
std::uint64_t CompressedWord::id() const noexcept { return node_->id; }
const std::string& CompressedWord::head() const noexcept { return node_->head; }
const std::string& CompressedWord::tail() const noexcept { return node_->tail; }

const std::string& CompressedWord::literal_bits() const {
  if (node_->kind != Kind::literal) throw DomainError("not a literal node");
  return node_->lit;
}

CompressedWord CompressedWord::left() const {
  if (node_->kind != Kind::concat) throw DomainError("not a concat node");
  return CompressedWord(node_->left);
}

CompressedWord CompressedWord::right() const {
  if (node_->kind != Kind::concat) throw DomainError("not a concat node");
  return CompressedWord(node_->right);
}

int CompressedWord::at(const BigInt& pos) const {
  if (pos < 0 || pos >= node_->len) throw BoundsError("position outside compressed word");
  const Node* n = node_.get();
  BigInt p = pos;
  while (n->kind == Kind::concat) {
    if (p < n->left->len) {
      n = n->left.get();
    } else {
      p -= n->left->len;
      n = n->right.get();
    }
  }
  if (n->kind == Kind::zero_run) return 0;
  return n->lit[p.convert_to<std::size_t>()] == '1';
}

namespace {

void emit(const CompressedWord& w, const BigInt& pos, std::size_t len, std::string& out) {
  if (len == 0) return;
  switch (w.kind()) {
    case CompressedWord::Kind::literal:
      out.append(w.literal_bits(), pos.convert_to<std::size_t>(), len);
      return;
    case CompressedWord::Kind::zero_run:
      out.append(len, '0');
      return;
    case CompressedWord::Kind::concat: {
      CompressedWord l = w.left();
      if (pos < l.length()) {
        BigInt avail = l.length() - pos;
        std::size_t take = avail >= len ? len : avail.convert_to<std::size_t>();
        emit(l, pos, take, out);
        emit(w.right(), 0, len - take, out);
      } else {
        emit(w.right(), pos - l.length(), len, out);
      }
      return;
    }
  }
}

}  // namespace

std::string CompressedWord::extract(const BigInt& pos, std::size_t len) const {
  if (pos < 0 || pos + len > node_->len) throw BoundsError("extract range outside compressed word");
  std::string out;
  out.reserve(len);
  emit(*this, pos, len, out);
  return out;
}

std::string CompressedWord::materialize(std::size_t max_len) const {
  if (node_->len > max_len)
    throw ResourceBound("word of length " + node_->len.str() + " is too long to materialize",
                        "length <= " + std::to_string(max_len));
  return extract(0, node_->len.convert_to<std::size_t>());
}

std::size_t CompressedWord::node_count() const {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (n->kind == Kind::concat) {
      stack.push_back(n->left.get());
      stack.push_back(n->right.get());
    }
  }
  return seen.size();
}

WordStats word_stats(const CompressedWord& w) {
  // Node caches are filled bottom-up at construction, so each shared node is
  // counted once.
  return {w.length(), w.ones(), Rational(w.ones(), w.length())};
}

// ---------------------------------------------------------------------------
// Omega construction
// ---------------------------------------------------------------------------

const CompressedWord& OmegaScaffold::A(int n) const {
  if (n < 1 || n > depth()) throw BoundsError("A_" + std::to_string(n) + " not built");
  return a_[static_cast<std::size_t>(n - 1)];
}

const CompressedWord& OmegaScaffold::P(int n) const {
  if (n < 1 || n > depth()) throw OrderingError("P(" + std::to_string(n) + ") not yet determined");
  return p_[static_cast<std::size_t>(n - 1)];
}

const CompressedWord& OmegaScaffold::Q(std::uint64_t i) const {
  if (i < 1 || i > q_.size()) throw BoundsError("Q_" + std::to_string(i) + " not built");
  return q_[i - 1];
}

std::uint64_t q_index(std::uint64_t row, std::uint64_t col) {
  if (row < 1 || col < 1) throw DomainError("matrix cells are 1-based");
  std::uint64_t d = row + col - 1;
  return d * (d - 1) / 2 + row;
}

std::pair<std::uint64_t, std::uint64_t> q_cell(std::uint64_t i) {
  if (i < 1) throw DomainError("Q index must be >= 1");
  auto d = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(i)) - 1) / 2);
  while (d * (d + 1) / 2 < i) ++d;
  while (d > 1 && (d - 1) * d / 2 >= i) --d;
  std::uint64_t row = i - d * (d - 1) / 2;
  return {row, d + 1 - row};
}

CompressedWord q_word(const OmegaScaffold& scaffold, std::uint64_t row, std::uint64_t col) {
  if (row < 1 || col < 1) throw DomainError("matrix cells are 1-based");
  if (row > static_cast<std::uint64_t>(scaffold.depth()))
    throw OrderingError("P(" + std::to_string(row) + ") is not determined at depth " +
                        std::to_string(scaffold.depth()));
  const CompressedWord& p = scaffold.P(static_cast<int>(row));
  BigInt gap = BigInt(row) * row + col - 1;
  return CompressedWord::concat(CompressedWord::concat(p, CompressedWord::zeros(gap)), p);
}

OmegaScaffold build_A(int n, int cap) {
  if (n < 1) throw DomainError("depth must be >= 1");
  if (n > cap)
    throw ResourceBound("depth " + std::to_string(n) + " exceeds the DAG depth cap " + std::to_string(cap),
                        "depth <= " + std::to_string(cap));
  OmegaScaffold s;
  s.a_.push_back(CompressedWord::literal("1"));
  s.p_.push_back(s.a_.back());
  for (int k = 2; k <= n; ++k) {
    auto [row, col] = q_cell(static_cast<std::uint64_t>(k - 1));
    s.q_.push_back(q_word(s, row, col));
    const CompressedWord& prev = s.a_.back();
    CompressedWord pad = CompressedWord::zeros(prev.length() * prev.length());
    s.a_.push_back(CompressedWord::concat(CompressedWord::concat(prev, pad), s.q_.back()));
    s.p_.push_back(CompressedWord::literal(s.a_.back().extract(0, static_cast<std::size_t>(k))));
  }
  return s;
}

}  // namespace entroflow
