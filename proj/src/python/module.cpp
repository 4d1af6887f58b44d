// Python bindings for the table-pair construction and its checks.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bbl/construction.hpp"
#include "bbl/dynamics.hpp"
#include "bbl/errors.hpp"
#include "bbl/invariants.hpp"
#include "bbl/lazutkin.hpp"
#include "bbl/serialize.hpp"
#include "bbl/table.hpp"
#include "bbl/version.hpp"

namespace py = pybind11;

namespace {

py::dict orbit_dict(const bbl::Orbit& o) {
    py::dict d;
    d["period"] = o.period;
    d["perimeter"] = o.perimeter;
    d["closed"] = o.closed;
    d["closure_residual"] = o.closure_residual;
    py::list states;
    for (const bbl::PhaseState& st : o.states) states.append(py::make_tuple(st.s, st.phi));
    d["states"] = states;
    return d;
}

py::dict report_dict(const bbl::InvariantReport& r) {
    py::dict d;
    d["ell0"] = r.ell0;
    d["ell1_quad"] = r.ell1_quad;
    d["ell2_quad"] = r.ell2_quad;
    d["ell0_fit"] = r.ell0_fit;
    d["fit_c"] = r.fit_c;
    d["fit_residual"] = r.fit_residual;
    return d;
}

}  // namespace

PYBIND11_MODULE(bblpy, m) {
    m.doc() = "strictly convex billiard tables glued from symmetric blocks";
    m.attr("__version__") = bbl::kToolVersion;

    py::register_exception<bbl::Error>(m, "BblError");

    py::class_<bbl::BilliardTable>(m, "Table")
        .def_property_readonly("length", &bbl::BilliardTable::length)
        .def_property_readonly("block_count", &bbl::BilliardTable::block_count)
        .def_property_readonly("joints",
                               [](const bbl::BilliardTable& t) { return t.joints(); })
        .def("point",
             [](const bbl::BilliardTable& t, double s) {
                 bbl::Vec2 p = t.point(s);
                 return py::make_tuple(p.x, p.y);
             })
        .def("kappa", &bbl::BilliardTable::kappa)
        .def("__repr__", [](const bbl::BilliardTable& t) {
            return "<Table blocks=" + std::to_string(t.block_count()) +
                   " length=" + bbl::fmt_g17(t.length()) + ">";
        });

    m.def(
        "circle_table",
        [](int n) { return bbl::close_table(bbl::init_circle_blocks(n)); }, py::arg("n") = 4,
        "unit circle assembled from n equal arcs");

    m.def("parse_table", [](const std::string& text) { return bbl::parse_table(text); },
          py::arg("text"));
    m.def("serialize_table", [](const bbl::BilliardTable& t) { return bbl::serialize_table(t); },
          py::arg("table"));

    m.def(
        "mm_invariants",
        [](const bbl::BilliardTable& t) {
            bbl::MMInvariants mm = bbl::mm_quadrature(t);
            return py::make_tuple(mm.ell0, mm.ell1, mm.ell2);
        },
        py::arg("table"), "quadrature values (ell0, ell1, ell2)");

    m.def("congruence_distance", &bbl::congruence_distance, py::arg("table_a"),
          py::arg("table_b"));

    m.def(
        "max_perimeter_ngon",
        [](const bbl::BilliardTable& t, int n) { return orbit_dict(bbl::max_perimeter_ngon(t, n)); },
        py::arg("table"), py::arg("n"));

    m.def(
        "closed_orbit",
        [](const bbl::BilliardTable& t, double theta) {
            return orbit_dict(bbl::closed_orbit_from_match(t, theta));
        },
        py::arg("table"), py::arg("theta"));

    m.def(
        "compare_tables",
        [](const bbl::BilliardTable& a, const bbl::BilliardTable& b, std::vector<int> n_grid,
           int degree) {
            if (n_grid.empty()) n_grid = bbl::default_n_grid();
            bbl::ComparisonReport rep = bbl::compare_tables(a, b, n_grid, degree);
            py::dict d;
            d["table_a"] = report_dict(rep.a);
            d["table_b"] = report_dict(rep.b);
            d["congruence_distance"] = rep.congruence_dist;
            d["n_grid"] = rep.n_grid;
            py::list diffs;
            for (const bbl::DiffEntry& e : rep.a.counterpart_diffs)
                diffs.append(py::make_tuple(e.name, e.abs_diff, e.rel_diff));
            d["diffs"] = diffs;
            return d;
        },
        py::arg("table_a"), py::arg("table_b"), py::arg("n_grid") = std::vector<int>{},
        py::arg("degree") = bbl::kDefaultFitDegree);

    m.def(
        "glancing_report",
        [](const bbl::BilliardTable& t, const std::vector<double>& y0_list) {
            bbl::GlancingReport rep = bbl::verify_glancing_estimates(t, y0_list);
            py::dict d;
            d["e_y"] = rep.e_y;
            d["e_x"] = rep.e_x;
            py::list rows;
            for (const bbl::GlancingRow& r : rep.rows)
                rows.append(py::make_tuple(r.y0, r.n, r.d_y, r.d_x));
            d["rows"] = rows;
            return d;
        },
        py::arg("table"), py::arg("y0_list"));

    m.def(
        "run_scheme",
        [](int n, std::vector<int> permutation, int rounds, double epsilon, double theta_seed,
           std::uint64_t seed) {
            bbl::SchemeConfig cfg;
            cfg.n = n;
            if (!permutation.empty()) cfg.permutation = std::move(permutation);
            cfg.rounds = rounds;
            cfg.epsilon = epsilon;
            cfg.theta_seed = theta_seed;
            cfg.seed = seed;
            bbl::SchemeResult res = bbl::run_scheme(cfg);
            py::dict d;
            d["table_a"] = res.table_a;
            d["table_b"] = res.table_b;
            py::list certs;
            for (const bbl::MatchCertificate& c : res.certificates) {
                py::dict cd;
                cd["round"] = c.round;
                cd["block"] = c.block_index;
                cd["theta"] = c.theta;
                cd["delta_star"] = c.delta_star;
                cd["p"] = c.p;
                cd["residual"] = c.residual;
                certs.append(cd);
            }
            d["certificates"] = certs;
            py::dict rep;
            rep["thetas"] = res.report.thetas;
            rep["congruence_distance"] = res.report.congruence_dist;
            rep["reverify_max_residual"] = res.report.reverify_max_residual;
            rep["invariant_sum_rel_diff"] = res.report.invariant_sum_rel_diff;
            d["report"] = rep;
            return d;
        },
        py::arg("n") = 4, py::arg("permutation") = std::vector<int>{},
        py::arg("rounds") = 3, py::arg("epsilon") = 0.02, py::arg("theta_seed") = 0.1,
        py::arg("seed") = 20260819ULL, "build a matched, non-congruent table pair");
}
