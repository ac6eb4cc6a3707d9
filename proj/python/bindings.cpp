#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "gapsieve/census.hpp"
#include "gapsieve/cycle.hpp"
#include "gapsieve/cycle_io.hpp"
#include "gapsieve/dynamics.hpp"
#include "gapsieve/errors.hpp"
#include "gapsieve/polignac.hpp"
#include "gapsieve/primes_bridge.hpp"
#include "gapsieve/report.hpp"
#include "gapsieve/verify.hpp"

namespace py = pybind11;
using namespace gapsieve;

namespace {

py::object py_int(const BigInt& v) {
  const std::string s = v.str();
  return py::reinterpret_steal<py::object>(PyLong_FromString(s.c_str(), nullptr, 10));
}

BigInt to_bigint(const py::handle& h) { return BigInt(py::str(h).cast<std::string>()); }

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py_int(numerator(r)), py_int(denominator(r)));
}

// Accepts ints, Fractions or anything with numerator/denominator.
Rational to_rational(const py::handle& h) {
  if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator")) {
    return Rational(to_bigint(h.attr("numerator")), to_bigint(h.attr("denominator")));
  }
  throw py::type_error("expected an int or a Fraction");
}

py::list fractions(const std::vector<Rational>& v) {
  py::list out;
  for (const auto& r : v) out.append(fraction(r));
  return out;
}

RatioVector ratio_from(const py::sequence& w, Gap g) {
  RatioVector r;
  r.g = g;
  for (auto item : w) r.entries.push_back(to_rational(item));
  return r;
}

std::vector<Gap> gaps_of(const GapCycle& c) { return {c.gaps().begin(), c.gaps().end()}; }

}  // namespace

PYBIND11_MODULE(_gapsieve, m) {
  m.doc() = "Cycles of gaps in Eratosthenes sieve";
  m.attr("__version__") = GAPSIEVE_VERSION;

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<GapCycle>(m, "GapCycle")
      .def(py::init<std::uint64_t, std::vector<Gap>>(), py::arg("modulus"), py::arg("gaps"))
      .def_static("seed", &GapCycle::seed)
      .def_property_readonly("modulus", &GapCycle::modulus)
      .def_property_readonly("gaps", &gaps_of)
      .def_property_readonly("sieve_stage", &GapCycle::sieve_stage)
      .def("generator", &GapCycle::generator)
      .def("__len__", &GapCycle::size)
      .def("__getitem__",
           [](const GapCycle& c, std::size_t i) {
             if (i >= c.size()) throw py::index_error();
             return c[i];
           })
      .def("__eq__", [](const GapCycle& a, const GapCycle& b) { return a == b; })
      .def("__repr__", [](const GapCycle& c) {
        return "<GapCycle N=" + std::to_string(c.modulus()) + " gaps=" + std::to_string(c.size()) + ">";
      });

  m.def("primorial_cycle", &primorial_cycle, py::arg("p"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("extend_general", &extend_general, py::arg("cycle"), py::arg("q"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("extend_by_next_prime", &extend_by_next_prime, py::arg("cycle"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("next_prime", &next_prime);
  m.def("save_cycle", &save_cycle);
  m.def("load_cycle", &load_cycle);

  py::class_<CensusTable>(m, "CensusTable")
      .def_property_readonly("modulus", &CensusTable::modulus)
      .def_property_readonly("g_max", &CensusTable::g_max)
      .def_property_readonly("j_max", &CensusTable::j_max)
      .def_property_readonly("n2", [](const CensusTable& t) { return py_int(t.n2()); })
      .def("count", [](const CensusTable& t, Gap g, std::uint32_t j) { return py_int(t.count(g, j)); })
      .def("row_total", [](const CensusTable& t, Gap g) { return py_int(t.row_total(g)); })
      .def("to_dict",
           [](const CensusTable& t) {
             py::dict d;
             for (const auto& [key, v] : t.counts()) d[py::make_tuple(key.first, key.second)] = py_int(v);
             return d;
           })
      .def("csv", [](const CensusTable& t) { return census_csv(t); })
      .def("__eq__", [](const CensusTable& a, const CensusTable& b) { return a == b; });

  m.def(
      "census",
      [](const GapCycle& c, Gap g_max, std::uint32_t j_max, unsigned workers, bool periodic) {
        py::gil_scoped_release release;
        return driving_term_census(c, g_max, j_max, {workers, periodic});
      },
      py::arg("cycle"), py::arg("g_max"), py::arg("j_max"), py::arg("workers") = 1, py::arg("periodic") = false);
  m.def("count_constellation",
        [](const GapCycle& c, std::vector<Gap> s) { return count_constellation(c, Constellation(std::move(s))); });
  m.def("count_driving_terms", &count_driving_terms);
  m.def(
      "ratio_vector",
      [](const CensusTable& t, Gap g, std::uint32_t J) { return fractions(ratio_vector(t, g, J).entries); },
      py::arg("table"), py::arg("g"), py::arg("J"));

  m.def("eigenvalue", [](std::uint32_t j, std::uint64_t p) { return fraction(eigenvalue(j, p)); });
  m.def(
      "iterate_model",
      [](const py::sequence& w, std::uint64_t p0, std::uint64_t pk, std::uint32_t J) {
        return fractions(iterate_model(ratio_from(w, 0), p0, pk, J).entries);
      },
      py::arg("w0"), py::arg("p0"), py::arg("pk"), py::arg("J"));
  m.def(
      "iterate_model_direct",
      [](const py::sequence& w, std::uint64_t p0, std::uint64_t pk, std::uint32_t J) {
        return fractions(iterate_model_direct(ratio_from(w, 0), p0, pk, J).entries);
      },
      py::arg("w0"), py::arg("p0"), py::arg("pk"), py::arg("J"));
  m.def(
      "eigenvalue_products",
      [](std::uint64_t p0, std::uint64_t pk, std::uint32_t J, const std::string& mode, unsigned workers) {
        if (mode != "exact" && mode != "float") throw InvalidInput("mode must be 'exact' or 'float'");
        ProductOptions opt;
        opt.workers = workers;
        EigenvalueProducts r;
        {
          py::gil_scoped_release release;
          r = eigenvalue_products(p0, pk, J, mode == "exact" ? ArithmeticMode::exact : ArithmeticMode::floating, opt);
        }
        py::dict d;
        for (std::uint32_t j = 2; j <= J; ++j) {
          d[py::int_(j)] = mode == "exact" ? fraction(r.exact[j - 2]) : py::float_(static_cast<double>(r.value(j)));
        }
        return d;
      },
      py::arg("p0"), py::arg("pk"), py::arg("J"), py::arg("mode") = "float", py::arg("workers") = 1);
  m.def(
      "evolve_with_products",
      [](const py::sequence& w, const std::vector<double>& ajk) {
        std::vector<long double> a(ajk.begin(), ajk.end());
        std::vector<double> out;
        for (auto v : evolve_with_products(ratio_from(w, 0), a)) out.push_back(static_cast<double>(v));
        return out;
      },
      py::arg("w0"), py::arg("ajk"));
  m.def(
      "estimate_primorial_crossover",
      [](const py::sequence& wa, const py::sequence& wb, std::optional<std::vector<double>> ajk) {
        const auto a = ratio_from(wa, 0), b = ratio_from(wb, 0);
        CrossoverEstimate e;
        if (ajk) {
          e = estimate_primorial_crossover(a, b, std::vector<long double>(ajk->begin(), ajk->end()));
        } else {
          e = estimate_primorial_crossover(a, b);
        }
        py::dict d;
        d["found"] = e.found;
        d["threshold"] = static_cast<double>(e.threshold);
        d["note"] = e.note;
        return d;
      },
      py::arg("w_a"), py::arg("w_b"), py::arg("ajk") = py::none());

  m.def("hl_asymptotic_ratio", [](std::uint64_t g) { return fraction(hl_asymptotic_ratio(g)); });
  m.def("ratio_sum_at", [](std::uint64_t g, std::uint64_t p) { return fraction(ratio_sum_at(g, p)); });
  m.def("driving_term_total", [](std::uint64_t g) { return py_int(driving_term_total(g)); });
  m.def("radical", [](std::uint64_t g) {
    const auto r = radical(g);
    py::dict d;
    d["g"] = r.g;
    d["Q"] = r.Q;
    d["qbar"] = r.qbar;
    d["n1"] = r.n1;
    d["primes"] = r.primes;
    d["degenerate"] = r.degenerate();
    return d;
  });

  m.def("survivors", [](const GapCycle& c) {
    const auto s = survivors(c);
    py::dict d;
    d["next_prime"] = s.next_prime;
    d["last_value"] = s.last_value;
    d["gaps"] = s.gaps;
    d["all_matched"] = s.all_matched();
    return d;
  });
  m.def("prime_gap_oracle", [](std::uint64_t limit) { return prime_gap_oracle(limit); });
  m.def("closure_trace_json", [](const GapCycle& c, std::uint64_t up_to) {
    return render_trace_json(closure_trace(c, up_to));
  });
  m.def(
      "run_invariant_suite",
      [](std::uint64_t max_prime, unsigned workers) {
        std::vector<CheckResult> r;
        {
          py::gil_scoped_release release;
          r = run_invariant_suite({max_prime, workers});
        }
        py::list out;
        for (const auto& c : r) out.append(py::make_tuple(c.name, c.passed, c.detail));
        return out;
      },
      py::arg("max_prime") = 13, py::arg("workers") = 1);
}
