// _dtlab: python bindings for the main laboratory operations. Rich reports
// cross the boundary as JSON strings; the dtlab package wrapper decodes them.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dtlab/bounds.hpp"
#include "dtlab/hypothesis.hpp"
#include "dtlab/measure_io.hpp"
#include "dtlab/report_io.hpp"
#include "dtlab/rng.hpp"
#include "dtlab/subspaces.hpp"

namespace py = pybind11;
using namespace dtlab;

namespace {

AtomicMeasure measure_from_arg(const py::object& spec) {
    if (py::isinstance<AtomicMeasure>(spec)) return spec.cast<AtomicMeasure>();
    return parse_measure_spec(spec.cast<std::string>());
}

py::dict bound_to_dict(const AngleBound& b) {
    py::dict d;
    d["cos_lower"] = b.cos_lower;
    d["angle_upper"] = b.angle_upper;
    d["log_cos"] = b.log_cos;
    d["provenance"] = to_string(b.provenance);
    return d;
}

} // namespace

PYBIND11_MODULE(_dtlab, m) {
    m.doc() = "DT(mu,c) random-matrix laboratory: angle bounds, measure "
              "classification, subspace experiments";

    py::class_<AtomicMeasure>(m, "AtomicMeasure")
        .def_property_readonly("n_atoms",
                               [](const AtomicMeasure& mu) { return mu.atoms.size(); })
        .def("atom", [](const AtomicMeasure& mu, std::size_t i) {
            if (i >= mu.atoms.size()) throw py::index_error();
            return py::make_tuple(mu.atoms[i].location, mu.atoms[i].mass);
        })
        .def_property_readonly("tail_mass", [](const AtomicMeasure& mu) {
            return mu.truncation ? mu.truncation->tail_mass : 0.0;
        })
        .def("__repr__", [](const AtomicMeasure& mu) {
            return "<AtomicMeasure " + measure_to_json(mu) + ">";
        });

    m.def("make_family",
          [](const std::string& name, int n_max, double p) {
              if (name == "example1") return make_family(FamilyTag::example1, n_max, p);
              if (name == "example2") return make_family(FamilyTag::example2, n_max);
              if (name == "example3") return make_family(FamilyTag::example3, n_max);
              throw std::invalid_argument("unknown family '" + name + "'");
          },
          py::arg("name"), py::arg("n_max"), py::arg("p") = 0.0);

    m.def("parse_measure", &parse_measure_spec, py::arg("json_text"));

    m.def("nearest_support_gap", &nearest_support_gap, py::arg("measure"), py::arg("n"));

    m.def("mass_in_ball",
          [](const AtomicMeasure& mu, std::complex<double> center, double radius) {
              const auto v = mass_in(mu, RegionSpec::punctured_ball(center, radius));
              return py::make_tuple(v.lo, v.hi);
          },
          py::arg("measure"), py::arg("center"), py::arg("radius"),
          "mass of the punctured ball 0 < |z-center| <= radius as (lo, hi)");

    m.def("lemma1_cos_lower",
          [](double s, double c, double t) { return bound_to_dict(lemma1_cos_lower(s, c, t)); });
    m.def("lemma1_cos_weak",
          [](double s, double c) { return bound_to_dict(lemma1_cos_weak(s, c)); });
    m.def("unza_chain_cos", [](double d, double c, double m_, double t) {
        return bound_to_dict(unza_chain_cos(d, c, m_, t));
    });
    m.def("nza_chain_cos",
          [](double d, double c, double t) { return bound_to_dict(nza_chain_cos(d, c, t)); });

    m.def("classify_json",
          [](const py::object& measure, double c) {
              return report_to_json(classify(measure_from_arg(measure), c));
          },
          py::arg("measure"), py::arg("c") = 1.0,
          "full hypothesis report as a JSON string");

    m.def("example3_min_bound",
          [](int n) {
              const auto a = example3_min_bound(n);
              py::dict d;
              d["n"] = a.n;
              d["k_star"] = a.k_star;
              d["min_bound"] = a.min_bound;
              d["log_min_bound"] = a.log_min_bound;
              d["r_n"] = a.r_n ? py::object(py::float_(*a.r_n)) : py::none();
              d["s_n"] = a.s_n ? py::object(py::float_(*a.s_n)) : py::none();
              d["value_at_x1"] = a.value_at_x1;
              d["value_at_rn"] =
                  a.value_at_rn ? py::object(py::float_(*a.value_at_rn)) : py::none();
              return d;
          },
          py::arg("n"));

    m.def("lemma1_experiment_json",
          [](double t, double s_prime, double s, double c, int n, int trials,
             std::uint64_t seed, bool both_orientations) {
              Lemma1Config cfg;
              cfg.t = t;
              cfg.s_prime = s_prime;
              cfg.s = s;
              cfg.c = c;
              cfg.N = n;
              cfg.trials = trials;
              cfg.seed = seed;
              cfg.both_orientations = both_orientations;
              return lemma1_summary_to_json(lemma1_experiment(cfg));
          },
          py::arg("t") = 0.5, py::arg("s_prime") = 0.9, py::arg("s") = 1.0, py::arg("c") = 1.0,
          py::arg("N") = 256, py::arg("trials") = 50, py::arg("seed") = 1000003,
          py::arg("both_orientations") = true,
          "summary JSON of one lemma1 angle experiment");

    m.def("philox_block", [](std::uint64_t c0, std::uint64_t c1, std::uint64_t k) {
        const auto out = Philox::block(
            {static_cast<std::uint32_t>(c0), static_cast<std::uint32_t>(c0 >> 32),
             static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c1 >> 32)},
            {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)});
        return py::make_tuple(out[0], out[1], out[2], out[3]);
    });

    m.attr("__version__") = "0.1.0";
}
