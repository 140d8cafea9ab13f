#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entroflow/entropy.hpp"
#include "entroflow/errors.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/language.hpp"
#include "entroflow/measure.hpp"
#include "entroflow/timechange.hpp"
#include "entroflow/word_io.hpp"
#include "entroflow/wordgen.hpp"

namespace py = pybind11;
using namespace entroflow;

namespace {

std::shared_ptr<const Sequence> ohno_seq(std::size_t length, int max_stage, std::int64_t radius) {
  auto prefix = build_corrected_prefix(std::max<std::size_t>(length, static_cast<std::size_t>(radius)), max_stage);
  return std::make_shared<WindowSequence>(xstar_window(prefix, radius));
}

std::string bits_text(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

py::dict certificate(const EntropyCertificate& c) {
  py::dict d;
  d["kind"] = c.kind_name();
  d["n"] = c.n;
  d["value"] = c.value;
  d["satisfied"] = c.satisfied;
  if (c.kind == EntropyCertificate::Kind::block_lower_bound) {
    d["count"] = to_wire(c.count);
    d["exact_ratio"] = to_wire(c.exact_ratio);
  } else {
    d["frequency"] = to_wire(c.frequency);
  }
  d["bound"] = to_wire(c.bound);
  return d;
}

py::dict point(const SuspensionPoint& p) {
  py::dict d;
  d["infinity"] = p.infinity;
  if (!p.infinity) {
    d["k"] = to_wire(p.k);
    d["u"] = to_wire(p.u);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact symbolic suspension flows";

  py::register_exception<Error>(m, "EntroflowError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ResourceBound>(m, "ResourceBound", PyExc_RuntimeError);

  m.def("stage_word", [](int n) {
    auto st = build_ohno_stage(n);
    py::dict d;
    d["word"] = st.word.str();
    d["tilde"] = st.tilde.str();
    d["alpha_count"] = st.word.alpha_count();
    d["longest_one_run"] = st.tilde.longest_one_run();
    return d;
  }, py::arg("n"));

  m.def("corrected_prefix", [](std::size_t length, int max_stage) {
    return bits_text(build_corrected_prefix(length, max_stage).bits);
  }, py::arg("length"), py::arg("max_stage") = 3);

  m.def("count_variants", [](int n, std::size_t length, int max_stage) {
    return count_variants(build_corrected_prefix(length, max_stage), n);
  }, py::arg("n"), py::arg("length") = 10000, py::arg("max_stage") = 3);

  m.def("window_condition", [](int n, std::size_t length, int max_stage) {
    return verify_window_condition(Bits(build_corrected_prefix(length, max_stage).bits), n).ok;
  }, py::arg("n"), py::arg("length") = 10000, py::arg("max_stage") = 3);

  m.def("block_certificate", [](int n, std::size_t length, int max_stage) {
    return certificate(block_lower_certificate(build_corrected_prefix(length, max_stage), n));
  }, py::arg("n"), py::arg("length") = 10000, py::arg("max_stage") = 3);

  m.def("frequency_certificate", [](int n, std::size_t L) {
    auto seq = ohno_seq(2 * L, 3, static_cast<std::int64_t>(2 * L));
    return certificate(frequency_lower_certificate(EmpiricalMeasure(seq, 0, L), n));
  }, py::arg("n"), py::arg("L") = 100000);

  m.def("expected_ohno_roof", [](std::size_t L) {
    auto seq = ohno_seq(2 * L, 3, static_cast<std::int64_t>(2 * L));
    return to_wire(expected_roof(EmpiricalMeasure(seq, 0, L), RoofFunction::ohno(), 0).mean);
  }, py::arg("L"));

  m.def("omega_stats", [](int n) {
    auto st = word_stats(build_A(n).A(n));
    py::dict d;
    d["length"] = to_wire(st.length);
    d["ones"] = to_wire(st.ones);
    d["density"] = to_wire(st.density);
    return d;
  }, py::arg("n"));

  m.def("omega_odag", [](int n) { return write_odag(build_A(n).A(n)); }, py::arg("n"));

  m.def("suspend", [](const std::string& roof, const std::string& k, const std::string& u, const std::string& t,
                      std::int64_t radius) {
    auto seq = ohno_seq(static_cast<std::size_t>(radius), 3, radius);
    auto p = SuspensionPoint::base(floor_of(parse_rational(k)), parse_rational(u));
    auto r = flow(p, parse_rational(t), RoofFunction::parse(roof), *seq);
    py::dict d = point(r.point);
    d["crossings"] = r.crossings;
    return d;
  }, py::arg("roof"), py::arg("k"), py::arg("u"), py::arg("t"), py::arg("radius") = 5000);

  m.def("verify_conjugacy", [](const std::string& speed, std::size_t samples, std::uint64_t seed) {
    auto a = SpeedFunction::parse(speed);
    auto seq = ohno_seq(4000, 3, 4000);
    auto rep = verify_conjugacy(sample_conjugacy_inputs(a, *seq, 0, 1000, samples, seed), a, *seq);
    auto coc = check_cocycle(a, *seq, 0, 1000, samples, seed);
    py::dict d;
    d["samples"] = rep.samples;
    d["mismatches"] = rep.mismatches.size();
    d["cocycle_ok"] = coc.ok();
    return d;
  }, py::arg("speed"), py::arg("samples") = 100, py::arg("seed") = 0);

  m.def("abramov", [](const std::string& h, const std::string& speed, std::size_t L) {
    auto seq = ohno_seq(2 * L, 3, static_cast<std::int64_t>(2 * L));
    auto r = abramov_entropy(parse_rational(h), EmpiricalMeasure(seq, 0, L), SpeedFunction::parse(speed));
    py::dict d;
    d["h_base"] = to_wire(r.h_base);
    d["expected_theta"] = to_wire(r.expected_theta);
    d["value"] = to_wire(r.value);
    return d;
  }, py::arg("h"), py::arg("speed"), py::arg("L") = 10000);

  m.def("bowen", [](const std::string& system, const std::string& roof, const std::string& epsilon,
                    const std::string& horizon, std::size_t samples, std::int64_t radius, std::uint64_t seed) {
    if (system != "ohno" && system != "omega") throw DomainError("system must be ohno or omega");
    BowenParams p;
    p.epsilon = parse_rational(epsilon);
    p.horizon = parse_rational(horizon);
    p.samples = samples;
    p.radius = radius;
    p.seed = seed;
    auto e = bowen_estimate(system == "ohno" ? SystemKind::ohno : SystemKind::omega, RoofFunction::parse(roof), p);
    py::dict d;
    d["value"] = e.value;
    d["initial"] = e.initial;
    d["separated"] = e.separated;
    d["t_star"] = to_wire(e.t_star);
    d["warning"] = e.warning;
    return d;
  }, py::arg("system") = "ohno", py::arg("roof") = "unit", py::arg("epsilon") = "1/64", py::arg("horizon") = "64",
     py::arg("samples") = 500, py::arg("radius") = 8, py::arg("seed") = 0);

  m.def("theorem", [](const std::string& target_b, const std::string& mode, double h, std::size_t samples) {
    if (mode != "A" && mode != "B") throw DomainError("mode must be A or B");
    auto seq = ohno_seq(20000, 3, 20000);
    auto r = theorem_runner(parse_rational(target_b), mode == "A" ? TheoremMode::A : TheoremMode::B, h,
                            EmpiricalMeasure(seq, 0, 10000), samples, 0);
    py::dict d;
    d["speed"] = r.speed.describe();
    d["abramov"] = to_wire(r.abramov.value);
    d["mismatches"] = r.conjugacy.mismatches.size();
    d["achieved"] = r.achieved();
    return d;
  }, py::arg("target_b"), py::arg("mode") = "B", py::arg("h") = 0.192540883489, py::arg("samples") = 100);
}
