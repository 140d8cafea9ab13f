#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entroflow/entropy.hpp"
#include "entroflow/errors.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/language.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/timechange.hpp"
#include "entroflow/word_io.hpp"
#include "entroflow/wordgen.hpp"

using json = nlohmann::ordered_json;
using namespace entroflow;

namespace {

// ---------------------------------------------------------------------------
// Usage errors and wire helpers
// ---------------------------------------------------------------------------

struct UsageError : Error {
  using Error::Error;
};

std::string wire(const Rational& q) { return to_wire(q); }
std::string wire(const BigInt& n) { return to_wire(n); }

Rational parse_arg_rational(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw UsageError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

SystemKind parse_system(const std::string& s) {
  if (s == "ohno") return SystemKind::ohno;
  if (s == "omega") return SystemKind::omega;
  throw UsageError("unknown system '" + s + "'");
}

json point_json(const SuspensionPoint& p) {
  if (p.infinity) return json{{"infinity", true}};
  return json{{"base_k", wire(p.k)}, {"u", wire(p.u)}};
}

// ---------------------------------------------------------------------------
// Word cache
// ---------------------------------------------------------------------------

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("ENTROFLOW_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/entroflow";
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/entroflow";
  return ".entroflow-cache";
}

struct CacheInfo {
  std::string key;
  std::string path;
  bool hit = false;
  std::string content_hash;
};

json cache_json(const CacheInfo& c) {
  return json{{"key", c.key}, {"path", c.path}, {"hit", c.hit}, {"content_hash", c.content_hash}};
}

// Entries are <key>.<ext> plus <key>.fnv holding the content hash. Anything
// unreadable, unparsable or off-hash is regenerated and overwritten.
template <class T>
T cached_word(const std::string& dir, const std::string& params, const std::string& ext,
              const std::function<T()>& build, const std::function<std::string(const T&)>& encode,
              const std::function<T(std::string_view)>& decode, CacheInfo& info) {
  info.key = hex64(fnv1a(params));
  info.path = (std::filesystem::path(dir) / (info.key + "." + ext)).string();
  const std::string sum_path = (std::filesystem::path(dir) / (info.key + ".fnv")).string();
  if (std::filesystem::exists(info.path)) {
    try {
      std::string data = read_file(info.path);
      std::string expect = read_file(sum_path);
      if (hex64(fnv1a(data)) != expect) throw FormatError("content hash mismatch");
      T word = decode(data);
      info.hit = true;
      info.content_hash = expect;
      return word;
    } catch (const Error& e) {
      std::cerr << "warning: corrupt cache entry " << info.path << " (" << e.what() << "); regenerating\n";
    }
  }
  T word = build();
  std::string data = encode(word);
  info.content_hash = hex64(fnv1a(data));
  write_file_atomic(info.path, data);
  write_file_atomic(sum_path, info.content_hash);
  return word;
}

std::vector<std::uint8_t> ohno_bits(const std::string& dir, std::size_t length, int max_stage, CacheInfo& info) {
  const std::string params = "ohno|length=" + std::to_string(length) + "|max_stage=" + std::to_string(max_stage);
  return cached_word<std::vector<std::uint8_t>>(
      dir, params, "oswd", [&] { return build_corrected_prefix(length, max_stage).bits; },
      [](const std::vector<std::uint8_t>& b) { return write_oswd(b); },
      [&](std::string_view d) {
        auto b = read_oswd(d);
        if (b.size() != length) throw FormatError("cached word has the wrong length");
        return b;
      },
      info);
}

CompressedWord omega_word(const std::string& dir, int depth, CacheInfo& info) {
  const std::string params = "omega|depth=" + std::to_string(depth);
  return cached_word<CompressedWord>(
      dir, params, "odag", [&] { return build_A(depth).A(depth); }, [](const CompressedWord& w) { return write_odag(w); },
      [](std::string_view d) { return read_odag(d); }, info);
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

struct Global {
  std::string cache;
  std::string format = "json";
  std::string out;
};

struct PrefixOpts {
  std::size_t length = 10000;
  int max_stage = 3;
  void add(CLI::App* app) {
    app->add_option("--length", length, "prefix length")->capture_default_str();
    app->add_option("--max-stage", max_stage, "highest corrected stage")->capture_default_str();
  }
  json echo() const {
    if (length == 0) throw UsageError("--length must be positive");
    return json{{"length", length}, {"max_stage", max_stage}};
  }
};

struct BowenOpts {
  std::string epsilon = "1/64";
  std::string horizon = "64";
  std::size_t samples = 500;
  std::int64_t radius = 8;
  void add(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "separation scale")->capture_default_str();
    app->add_option("--horizon", horizon, "time horizon T")->capture_default_str();
    app->add_option("--samples", samples, "orbit segments sampled")->capture_default_str();
    app->add_option("--radius", radius, "window radius of the pseudo-metric")->capture_default_str();
  }
  BowenParams params(std::uint64_t seed) const {
    BowenParams p;
    p.epsilon = parse_arg_rational(epsilon, "epsilon");
    p.horizon = parse_arg_rational(horizon, "horizon");
    p.samples = samples;
    p.radius = radius;
    p.seed = seed;
    return p;
  }
  json echo() const {
    return json{{"epsilon", epsilon}, {"horizon", horizon}, {"samples", samples}, {"radius", radius}};
  }
};

json bowen_json(const BowenEstimate& e) {
  json profile = json::array();
  for (const auto& [t, n] : e.profile) profile.push_back(json{{"t", wire(t)}, {"N", n}});
  return json{{"value", format_sig(e.value, 12)},
              {"initial", e.initial},
              {"separated", e.separated},
              {"t_star", wire(e.t_star)},
              {"warning", e.warning},
              {"warning_reason", e.warning_reason},
              {"profile", profile}};
}

json certificate_json(const EntropyCertificate& c, json parameters) {
  json j{{"kind", c.kind_name()}, {"n", c.n}};
  if (c.kind == EntropyCertificate::Kind::block_lower_bound) {
    j["value"] = c.value_text();
    j["exact_ratio_times_ln2"] = wire(c.exact_ratio);
    j["count"] = wire(c.count);
    j["bound"] = format_sig(quarter_ln2(), 12);
    j["bound_label"] = "1/4 ln 2";
    if (c.raw_blocks) j["raw_blocks"] = *c.raw_blocks;
  } else {
    j["value"] = wire(c.frequency);
    j["bound"] = wire(c.bound);
  }
  j["satisfied"] = c.satisfied;
  j["parameters"] = std::move(parameters);
  return j;
}

struct Outcome {
  json results;
  bool pass = true;
  std::string csv;  // set when the command produced a table
};

// h(T) is only known from below: the block certificate at the highest corrected stage.
EntropyCertificate entropy_lower_bound(const PrefixOpts& p) {
  auto prefix = build_corrected_prefix(p.length, p.max_stage);
  return block_lower_certificate(prefix, p.max_stage);
}

std::shared_ptr<const Sequence> ohno_xstar(const PrefixOpts& p, std::int64_t radius) {
  auto prefix = build_corrected_prefix(std::max<std::size_t>(p.length, static_cast<std::size_t>(radius)), p.max_stage);
  return std::make_shared<WindowSequence>(xstar_window(prefix, radius));
}

// ---------------------------------------------------------------------------
// Theorem suites
// ---------------------------------------------------------------------------

struct TheoremOpts {
  std::string which = "B";
  std::string target_b;
  std::string h_estimate;
  std::size_t conjugacy_samples = 100;
  std::size_t horizon_L = 100000;
  PrefixOpts prefix;
  BowenOpts bowen;
  int depth = 23;
};

Outcome theorem_ab(const TheoremOpts& o, std::uint64_t seed, TheoremMode mode) {
  Outcome out;
  auto cert = entropy_lower_bound(o.prefix);
  const double h = o.h_estimate.empty() ? cert.value : to_double(parse_arg_rational(o.h_estimate, "h-estimate"));
  Rational b;
  if (!o.target_b.empty()) {
    b = parse_arg_rational(o.target_b, "target-b");
  } else {
    b = mode == TheoremMode::A ? Rational(1, 10) : Rational(3, 2);
  }
  if (b <= 0) throw UsageError("target-b must be positive");
  if (mode == TheoremMode::A && b >= snap12(h)) throw UsageError("mode A needs target-b below the entropy estimate");
  auto seq = ohno_xstar(o.prefix, static_cast<std::int64_t>(2 * o.horizon_L));
  EmpiricalMeasure m(seq, 0, o.horizon_L);
  const BowenParams bp = o.bowen.params(seed);
  BowenProbe probe = [&](const RoofFunction& roof) {
    auto e = bowen_estimate(SystemKind::ohno, roof, bp);
    return std::pair<double, bool>{e.value, e.warning};
  };
  auto r = theorem_runner(b, mode, h, m, o.conjugacy_samples, seed, probe);
  out.results = json{
      {"mode", mode == TheoremMode::A ? "A" : "B"},
      {"target_b", wire(b)},
      {"h_estimate", json{{"value", wire(r.h_estimate)}, {"display", format_sig(r.h_estimate, 12)},
                          {"label", o.h_estimate.empty() ? "LOWER BOUND (block certificate)" : "supplied"}}},
      {"speed", r.speed.describe()},
      {"conjugacy", json{{"samples", r.conjugacy.samples}, {"mismatches", r.conjugacy.mismatches.size()}}},
      {"abramov", json{{"h_base", wire(r.abramov.h_base)},
                       {"expected_theta", wire(r.abramov.expected_theta)},
                       {"result", wire(r.abramov.value)},
                       {"display", r.abramov.display()}}},
  };
  if (r.bowen) {
    out.results["bowen"] = json{{"unit", format_sig(r.bowen->unit, 12)},
                                {"changed", format_sig(r.bowen->changed, 12)},
                                {"ratio", format_sig(r.bowen->ratio, 12)},
                                {"predicted_ratio", format_sig(r.bowen->predicted, 12)},
                                {"deviation", format_sig(r.bowen->deviation, 12)},
                                {"warning", r.bowen->warning}};
  }
  out.results["achieved_entropy"] = wire(r.abramov.value);
  out.pass = r.achieved();
  return out;
}

Outcome theorem_c(const TheoremOpts& o, std::uint64_t seed) {
  Outcome out;
  auto mix = mixing_probe(o.depth, 1, 1, 7);
  json gaps = json::object();
  bool mix_ok = true;
  for (const auto& [g, ok] : mix) {
    gaps[std::to_string(g)] = ok;
    mix_ok = mix_ok && ok;
  }
  auto sc = build_A(5);
  OmegaSequence y(sc.A(5));
  auto rep = transitivity_probe(y, 20, seed);
  json hits = json::array();
  for (const auto& h : rep.hits) {
    json j{{"target", point_json(h.target)}, {"reached", h.reached}, {"distance", wire(h.distance)}};
    if (h.orbit_point) {
      j["orbit_point"] = point_json(*h.orbit_point);
      j["orbit_time"] = wire(h.orbit_time);
    }
    hits.push_back(std::move(j));
  }
  auto w = near_infinity_witness(y, 12);
  const bool near_ok = w.distance < Rational(1, 1024);
  out.results = json{
      {"mixing", json{{"depth", o.depth}, {"row", 1}, {"gaps", gaps}, {"all_true", mix_ok}}},
      {"transitivity", json{{"samples", rep.hits.size()}, {"threshold", wire(rep.threshold)}, {"radius", rep.radius},
                            {"all_reached", rep.all_reached}, {"hits", hits}}},
      {"near_infinity", json{{"point", point_json(w.point)}, {"distance", wire(w.distance)}, {"below_2^-10", near_ok}}},
      {"metric", "d_X + |u - u'| with d_X = 2^-min{|j| <= R : symbols differ}"},
  };
  out.pass = mix_ok && rep.all_reached && near_ok;
  return out;
}

Outcome theorem_d(const TheoremOpts& o, std::uint64_t seed) {
  Outcome out;
  const int top = 24;
  auto sc = build_A(top);
  json lengths = json::array();
  bool recursion_ok = true, prefix_ok = true;
  for (int n = 2; n <= top; ++n) {
    const BigInt& prev = sc.A(n - 1).length();
    const CompressedWord& an = sc.A(n);
    const BigInt q = an.right().length();
    recursion_ok = recursion_ok && an.length() == prev + prev * prev + q;
    // A_n = (A_{n-1} O(|A_{n-1}|^2)) Q_{n-1}: the left spine starts with A_{n-1}
    prefix_ok = prefix_ok && an.left().left().id() == sc.A(n - 1).id();
    if (n <= 8) lengths.push_back(json{{"n", n}, {"length", wire(an.length())}});
  }
  json densities = json::array();
  bool decreasing = true;
  Rational prev_density = 2;
  for (int n = 3; n <= 8; ++n) {
    auto st = word_stats(sc.A(n));
    densities.push_back(json{{"n", n}, {"ones", wire(st.ones)}, {"length", wire(st.length)}, {"density", wire(st.density)},
                             {"display", format_sig(st.density, 6)}});
    decreasing = decreasing && st.density < prev_density;
    prev_density = st.density;
  }
  const Rational d5 = word_stats(sc.A(5)).density;
  const bool small = d5 < Rational(1, 100000);
  auto be = bowen_estimate(SystemKind::omega, RoofFunction::unit(), o.bowen.params(seed));
  const bool zero_entropy = be.value < 0.05;
  out.results = json{
      {"recursion_exact_through", top},
      {"recursion_ok", recursion_ok},
      {"prefix_property", prefix_ok},
      {"lengths", lengths},
      {"densities", densities},
      {"densities_decreasing", decreasing},
      {"density_A5", wire(d5)},
      {"density_A5_below_1e-5", small},
      {"bowen_omega_unit", bowen_json(be)},
      {"bowen_below_0.05", zero_entropy},
  };
  out.pass = recursion_ok && prefix_ok && decreasing && small && zero_entropy;
  return out;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

int emit(const Global& g, const std::string& command, const json& config, const Outcome& o, double seconds) {
  std::string text;
  if (g.format == "csv") {
    if (o.csv.empty()) throw UsageError("--format csv is only available for table-producing commands");
    text = o.csv;
  } else {
    json report{{"command", command}, {"config", config}, {"results", o.results}, {"pass", o.pass},
                {"wall_time", seconds}};
    text = report.dump(2) + "\n";
  }
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(g.out, text);
  }
  return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic suspension flows: construction, certificates and time-change checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  std::uint64_t seed = 0;
  app.add_option("--cache-dir", g.cache, "word cache directory (default: $ENTROFLOW_CACHE)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_option("--seed", seed, "seed for every sampling step")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a word and store it in the cache");
  std::string gen_system = "ohno", gen_file;
  PrefixOpts gen_prefix;
  int gen_depth = 8;
  gen->add_option("--system", gen_system, "ohno or omega")->capture_default_str();
  gen_prefix.add(gen);
  gen->add_option("--depth", gen_depth, "omega depth n of A_n")->capture_default_str();
  gen->add_option("--word-out", gen_file, "also copy the word file here");

  // complexity
  auto* cx = app.add_subcommand("complexity", "block complexity table");
  std::string cx_system = "ohno";
  PrefixOpts cx_prefix;
  int cx_depth = 8;
  std::size_t cx_nmax = 32;
  cx->add_option("--system", cx_system, "ohno or omega")->capture_default_str();
  cx_prefix.add(cx);
  cx->add_option("--depth", cx_depth, "omega depth")->capture_default_str();
  cx->add_option("--n-max", cx_nmax, "largest block length (<= 64)")->capture_default_str();

  // verify
  auto* vf = app.add_subcommand("verify", "window condition and variant counts on the corrected prefix");
  PrefixOpts vf_prefix;
  vf_prefix.add(vf);

  // birkhoff
  auto* bk = app.add_subcommand("birkhoff", "cylinder frequency on the corrected prefix");
  PrefixOpts bk_prefix;
  bk_prefix.length = 200000;
  std::size_t bk_L = 100000;
  int bk_n = 1;
  bk_prefix.add(bk);
  bk->add_option("-L,--horizon", bk_L, "orbit segment length")->capture_default_str();
  bk->add_option("-n,--stage", bk_n, "cylinder I_n")->capture_default_str();

  // suspend
  auto* sp = app.add_subcommand("suspend", "flow a point of the suspension");
  std::string sp_system = "ohno", sp_roof = "unit", sp_start = "0,0", sp_time = "1";
  PrefixOpts sp_prefix;
  int sp_depth = 5;
  std::int64_t sp_radius = 5000;
  sp->add_option("--system", sp_system, "ohno or omega")->capture_default_str();
  sp->add_option("--roof", sp_roof, "unit | const:<p/q> | ohno | step:<rule>")->capture_default_str();
  sp->add_option("--start", sp_start, "<k,u> or inf")->capture_default_str();
  sp->add_option("--time", sp_time, "flow time p/q")->capture_default_str();
  sp_prefix.add(sp);
  sp->add_option("--depth", sp_depth, "omega depth")->capture_default_str();
  sp->add_option("--radius", sp_radius, "x* window radius")->capture_default_str();

  // timechange
  auto* tc = app.add_subcommand("timechange", "cocycle, conjugacy and Abramov checks for a speed");
  std::string tc_speed = "const:2", tc_h;
  std::size_t tc_samples = 100, tc_L = 100000;
  PrefixOpts tc_prefix;
  tc->add_option("--speed", tc_speed, "const:<p/q> | step:<pattern>@<anchor>:<in>:<out>")->capture_default_str();
  tc->add_option("--verify-samples", tc_samples, "conjugacy and cocycle samples")->capture_default_str();
  tc->add_option("--h-base", tc_h, "base entropy (default: block certificate lower bound)");
  tc->add_option("-L,--horizon", tc_L, "segment length for E(theta(., 1))")->capture_default_str();
  tc_prefix.add(tc);

  // entropy
  auto* en = app.add_subcommand("entropy", "entropy certificates and the Bowen estimator");
  std::string en_kind = "block", en_system = "ohno", en_roof = "unit";
  int en_n = 3;
  std::size_t en_L = 100000;
  PrefixOpts en_prefix;
  BowenOpts en_bowen;
  en->add_option("--kind", en_kind, "block | frequency | bowen")->check(CLI::IsMember({"block", "frequency", "bowen"}))->capture_default_str();
  en->add_option("-n,--stage", en_n, "stage n")->capture_default_str();
  en->add_option("-L,--horizon-length", en_L, "segment length for frequency certificates")->capture_default_str();
  en->add_option("--system", en_system, "ohno or omega (bowen)")->capture_default_str();
  en->add_option("--roof", en_roof, "roof for bowen")->capture_default_str();
  en_prefix.add(en);
  en_bowen.add(en);

  // theorem
  auto* th = app.add_subcommand("theorem", "full check suite for one theorem");
  TheoremOpts th_o;
  th->add_option("--which", th_o.which, "A | B | C | D")->check(CLI::IsMember({"A", "B", "C", "D"}))->capture_default_str();
  th->add_option("--target-b", th_o.target_b, "target entropy b (A/B)");
  th->add_option("--h-estimate", th_o.h_estimate, "entropy estimate (default: block certificate lower bound)");
  th->add_option("--conjugacy-samples", th_o.conjugacy_samples, "samples for verify_conjugacy")->capture_default_str();
  th->add_option("--depth", th_o.depth, "omega depth for the mixing probe")->capture_default_str();
  th_o.prefix.add(th);
  th_o.bowen.add(th);

  // report-all
  auto* ra = app.add_subcommand("report-all", "every check at default parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  const std::string dir = cache_dir(g.cache);

  try {
    json config{{"seed", seed}, {"cache_dir", dir}, {"format", g.format}};
    Outcome o;
    std::string command;

    if (*gen) {
      command = "gen";
      config["system"] = gen_system;
      CacheInfo info;
      std::string data;
      if (parse_system(gen_system) == SystemKind::ohno) {
        config["prefix"] = gen_prefix.echo();
        auto bits = ohno_bits(dir, gen_prefix.length, gen_prefix.max_stage, info);
        std::size_t ones = 0;
        for (auto b : bits) ones += b;
        o.results["stats"] = json{{"length", std::to_string(bits.size())}, {"ones", std::to_string(ones)},
                                  {"density", wire(Rational(BigInt(ones), BigInt(std::max<std::size_t>(bits.size(), 1))))}};
        o.results["format"] = "OSWD1";
        if (!gen_file.empty()) write_file_atomic(gen_file, write_oswd(bits));
      } else {
        config["depth"] = gen_depth;
        auto w = omega_word(dir, gen_depth, info);
        auto st = word_stats(w);
        o.results["stats"] = json{{"length", wire(st.length)}, {"ones", wire(st.ones)}, {"density", wire(st.density)},
                                  {"nodes", w.node_count()}};
        o.results["format"] = "ODAG1";
        if (!gen_file.empty()) write_file_atomic(gen_file, write_odag(w));
      }
      o.results["cache"] = cache_json(info);
      if (!gen_file.empty()) o.results["word_file"] = gen_file;
    } else if (*cx) {
      command = "complexity";
      config["system"] = cx_system;
      config["n_max"] = cx_nmax;
      if (cx_nmax < 1 || cx_nmax > kBlockCap) throw UsageError("--n-max must lie in 1..64");
      CacheInfo info;
      ComplexityTable table;
      if (parse_system(cx_system) == SystemKind::ohno) {
        config["prefix"] = cx_prefix.echo();
        auto bits = ohno_bits(dir, cx_prefix.length, cx_prefix.max_stage, info);
        table = complexity_table(Bits(bits), cx_nmax);
      } else {
        config["depth"] = cx_depth;
        table = complexity_table(omega_word(dir, cx_depth, info), cx_nmax);
      }
      json rows = json::array();
      for (const auto& r : table.rows) rows.push_back(json{{"n", r.n}, {"count", wire(BigInt(r.count))}, {"estimate", r.estimate}});
      o.results = json{{"rows", rows}, {"cache", cache_json(info)}};
      o.csv = table.csv();
    } else if (*vf) {
      command = "verify";
      config["prefix"] = vf_prefix.echo();
      auto prefix = build_corrected_prefix(vf_prefix.length, vf_prefix.max_stage);
      json stages = json::array();
      for (int n = 1; n <= vf_prefix.max_stage; ++n) {
        auto wc = verify_window_condition(Bits(prefix.bits), n);
        const std::uint64_t variants = count_variants(prefix, n);
        const BigInt expect = pow2(static_cast<unsigned>((pow3(static_cast<unsigned>(n - 1)) + 1) / 2));
        json s{{"n", n}, {"window_ok", wc.ok}, {"windows", wc.windows}, {"variants", variants}, {"expected_variants", wire(expect)}};
        if (wc.first_violation) s["first_violation"] = *wc.first_violation;
        stages.push_back(s);
        o.pass = o.pass && wc.ok && BigInt(variants) == expect;
      }
      o.results = json{{"stages", stages}};
    } else if (*bk) {
      command = "birkhoff";
      config["prefix"] = bk_prefix.echo();
      config["L"] = bk_L;
      config["n"] = bk_n;
      if (bk_n < 1) throw UsageError("stage must be positive");
      auto seq = ohno_xstar(bk_prefix, static_cast<std::int64_t>(std::max<std::size_t>(bk_prefix.length, 2 * bk_L)));
      EmpiricalMeasure m(seq, 0, bk_L);
      auto cyl = CylinderIndicator::ohno(bk_n);
      Rational f = birkhoff_frequency(m, cyl);
      Rational bound(1, 4 * pow3(static_cast<unsigned>(bk_n)));
      o.results = json{{"cylinder", cyl.describe()}, {"L", bk_L}, {"frequency", wire(f)},
                       {"bound", "1/(4*3^" + std::to_string(bk_n) + ")"}, {"bound_value", wire(bound)},
                       {"satisfied", f >= bound}};
      o.pass = f >= bound;
    } else if (*sp) {
      command = "suspend";
      config["system"] = sp_system;
      config["roof"] = sp_roof;
      config["start"] = sp_start;
      config["time"] = sp_time;
      RoofFunction roof = [&] {
        try {
          return RoofFunction::parse(sp_roof);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }();
      SuspensionPoint p = SuspensionPoint::at_infinity();
      if (sp_start != "inf") {
        auto comma = sp_start.find(',');
        if (comma == std::string::npos) throw UsageError("--start expects <k,u> or inf");
        BigInt k = floor_of(parse_arg_rational(sp_start.substr(0, comma), "start k"));
        p = SuspensionPoint::base(k, parse_arg_rational(sp_start.substr(comma + 1), "start u"));
      }
      const Rational t = parse_arg_rational(sp_time, "time");
      std::shared_ptr<const Sequence> seq;
      if (parse_system(sp_system) == SystemKind::ohno) {
        config["prefix"] = sp_prefix.echo();
        config["radius"] = sp_radius;
        seq = ohno_xstar(sp_prefix, sp_radius);
      } else {
        config["depth"] = sp_depth;
        CacheInfo info;
        seq = std::make_shared<OmegaSequence>(omega_word(dir, sp_depth, info));
      }
      if (!p.infinity && (p.u < 0 || p.u >= roof_eval(roof, *seq, p.k))) throw UsageError("start u must lie in [0, roof(k))");
      auto r = flow(p, t, roof, *seq);
      if (r.point.infinity) {
        o.results = json{{"infinity", true}, {"crossings", 0}};
      } else {
        o.results = json{{"base_k", wire(r.point.k)}, {"u", wire(r.point.u)}, {"crossings", r.crossings}};
      }
    } else if (*tc) {
      command = "timechange";
      config["speed"] = tc_speed;
      config["verify_samples"] = tc_samples;
      config["L"] = tc_L;
      config["prefix"] = tc_prefix.echo();
      SpeedFunction a = [&] {
        try {
          return SpeedFunction::parse(tc_speed);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }();
      auto seq = ohno_xstar(tc_prefix, static_cast<std::int64_t>(2 * tc_L));
      const std::int64_t span = static_cast<std::int64_t>(std::min<std::size_t>(tc_L, 1000));
      auto conj = verify_conjugacy(sample_conjugacy_inputs(a, *seq, 0, span, tc_samples, seed), a, *seq);
      auto coc = check_cocycle(a, *seq, 0, span, tc_samples, seed);
      Rational h = tc_h.empty() ? snap12(entropy_lower_bound(tc_prefix).value) : parse_arg_rational(tc_h, "h-base");
      config["h_base"] = tc_h.empty() ? "block certificate lower bound" : tc_h;
      auto ab = abramov_entropy(h, EmpiricalMeasure(seq, 0, tc_L), a);
      json mism = json::array();
      for (const auto& mm : conj.mismatches)
        mism.push_back(json{{"q", point_json(mm.sample.q)}, {"t", wire(mm.sample.t)},
                            {"via_time_change", point_json(mm.via_time_change)}, {"via_roof", point_json(mm.via_roof)}});
      o.results = json{
          {"samples", conj.samples},
          {"mismatches", mism},
          {"cocycle_checks", json{{"cocycle", coc.cocycle_checks}, {"cocycle_failures", coc.cocycle_failures},
                                  {"inversion", coc.inversion_checks}, {"inversion_failures", coc.inversion_failures}}},
          {"abramov", json{{"h_base", wire(ab.h_base)}, {"expected_theta", wire(ab.expected_theta)},
                           {"result", wire(ab.value)}, {"display", ab.display()}}},
      };
      o.pass = conj.ok() && coc.ok();
    } else if (*en) {
      command = "entropy";
      config["kind"] = en_kind;
      config["n"] = en_n;
      if (en_kind == "block") {
        config["prefix"] = en_prefix.echo();
        auto prefix = build_corrected_prefix(en_prefix.length, en_prefix.max_stage);
        auto c = block_lower_certificate(prefix, en_n);
        o.results = certificate_json(c, en_prefix.echo());
        o.results["h_T"] = json{{"value", entropy_lower_bound(en_prefix).value_text()}, {"label", "LOWER BOUND"}};
        o.pass = c.satisfied;
      } else if (en_kind == "frequency") {
        config["L"] = en_L;
        PrefixOpts p = en_prefix;
        p.length = std::max<std::size_t>(p.length, 2 * en_L);
        config["prefix"] = p.echo();
        auto seq = ohno_xstar(p, static_cast<std::int64_t>(2 * en_L));
        auto c = frequency_lower_certificate(EmpiricalMeasure(seq, 0, en_L), en_n);
        json params = p.echo();
        params["L"] = en_L;
        o.results = certificate_json(c, params);
        o.pass = c.satisfied;
      } else {
        config["system"] = en_system;
        config["roof"] = en_roof;
        config["bowen"] = en_bowen.echo();
        RoofFunction roof = [&] {
          try {
            return RoofFunction::parse(en_roof);
          } catch (const Error& e) {
            throw UsageError(e.what());
          }
        }();
        auto e = bowen_estimate(parse_system(en_system), roof, en_bowen.params(seed));
        json params = en_bowen.echo();
        params["system"] = en_system;
        params["roof"] = en_roof;
        params["seed"] = seed;
        o.results = json{{"kind", "BowenEstimate"}, {"n", nullptr}, {"value", format_sig(e.value, 12)}, {"bound", nullptr},
                         {"satisfied", !e.warning}, {"parameters", params}, {"details", bowen_json(e)}};
        o.pass = true;
      }
    } else if (*th) {
      command = "theorem";
      config["which"] = th_o.which;
      config["target_b"] = th_o.target_b.empty() ? json(nullptr) : json(th_o.target_b);
      config["h_estimate"] = th_o.h_estimate.empty() ? json("block certificate lower bound") : json(th_o.h_estimate);
      config["prefix"] = th_o.prefix.echo();
      config["bowen"] = th_o.bowen.echo();
      config["conjugacy_samples"] = th_o.conjugacy_samples;
      config["depth"] = th_o.depth;
      if (th_o.which == "A") o = theorem_ab(th_o, seed, TheoremMode::A);
      if (th_o.which == "B") o = theorem_ab(th_o, seed, TheoremMode::B);
      if (th_o.which == "C") o = theorem_c(th_o, seed);
      if (th_o.which == "D") o = theorem_d(th_o, seed);
    } else if (*ra) {
      command = "report-all";
      TheoremOpts d;
      config["defaults"] = json{{"prefix", d.prefix.echo()}, {"bowen", d.bowen.echo()}, {"depth", d.depth}};
      json sections = json::object();
      auto add = [&](const std::string& name, const std::function<Outcome()>& f) {
        Outcome s = f();
        sections[name] = json{{"pass", s.pass}, {"results", s.results}};
        o.pass = o.pass && s.pass;
      };
      add("verify", [&] {
        Outcome s;
        auto prefix = build_corrected_prefix(d.prefix.length, d.prefix.max_stage);
        json st = json::array();
        for (int n = 1; n <= d.prefix.max_stage; ++n) {
          auto wc = verify_window_condition(Bits(prefix.bits), n);
          auto c = block_lower_certificate(prefix, n);
          st.push_back(certificate_json(c, json{{"window_ok", wc.ok}}));
          s.pass = s.pass && wc.ok && c.satisfied;
        }
        s.results = st;
        return s;
      });
      add("birkhoff", [&] {
        Outcome s;
        PrefixOpts p{200000, 3};
        auto seq = ohno_xstar(p, 200000);
        EmpiricalMeasure m(seq, 0, 100000);
        json st = json::array();
        for (int n = 1; n <= 2; ++n) {
          auto c = frequency_lower_certificate(m, n);
          st.push_back(certificate_json(c, json{{"L", 100000}}));
          s.pass = s.pass && c.satisfied;
        }
        auto roof = expected_roof(m, RoofFunction::ohno());
        json diag = json::array();
        for (const auto& dg : roof.diagnostics) {
          diag.push_back(json{{"n", dg.n}, {"weighted", wire(dg.weighted)}, {"exceeds_n", dg.exceeds_n}});
          s.pass = s.pass && dg.exceeds_n;
        }
        Rational prev = 0;
        bool monotone = true;
        for (std::uint64_t L : {1000u, 10000u, 100000u}) {
          Rational mean = expected_roof(EmpiricalMeasure(seq, 0, L), RoofFunction::ohno(), 0).mean;
          monotone = monotone && mean >= prev;
          prev = mean;
        }
        s.pass = s.pass && monotone;
        s.results = json{{"certificates", st}, {"ohno_roof_diagnostics", diag}, {"expected_roof_nondecreasing", monotone}};
        return s;
      });
      add("timechange", [&] {
        Outcome s;
        auto seq = ohno_xstar(d.prefix, 4000);
        json st = json::array();
        for (const char* spec : {"const:2", "const:1/3", "step:1@0:2:1/2"}) {
          auto a = SpeedFunction::parse(spec);
          auto conj = verify_conjugacy(sample_conjugacy_inputs(a, *seq, 0, 1000, 100, seed), a, *seq);
          auto coc = check_cocycle(a, *seq, 0, 1000, 200, seed);
          st.push_back(json{{"speed", spec}, {"mismatches", conj.mismatches.size()}, {"cocycle_ok", coc.ok()}});
          s.pass = s.pass && conj.ok() && coc.ok();
        }
        s.results = st;
        return s;
      });
      add("theorem_A", [&] { return theorem_ab(d, seed, TheoremMode::A); });
      add("theorem_B", [&] { return theorem_ab(d, seed, TheoremMode::B); });
      add("theorem_C", [&] { return theorem_c(d, seed); });
      add("theorem_D", [&] { return theorem_d(d, seed); });
      o.results = sections;
    }
    return emit(g, command, config, o, elapsed());
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceBound& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    if (!e.feasible().empty()) std::cerr << "minimal feasible parameters: " << e.feasible() << "\n";
    return 3;
  } catch (const WindowExhausted& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    std::cerr << "minimal feasible parameters: window radius >= " << e.needed_radius() << "\n";
    return 3;
  } catch (const BoundsError& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
