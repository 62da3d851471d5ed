#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubesum/error.hpp"
#include "cubesum/lseries.hpp"
#include "cubesum/points.hpp"
#include "cubesum/verify.hpp"

namespace py = pybind11;
using namespace cubesum;

namespace {

py::int_ to_py(const Int& n) { return py::int_(py::str(n.get_str())); }
Int from_py(const py::int_& n) { return Int(py::str(n).cast<std::string>()); }

py::dict cert_dict(const CubeSumCertificate& c) {
    py::dict d;
    d["a"] = to_py(c.a);
    d["b"] = to_py(c.b);
    d["c"] = to_py(c.c);
    d["n"] = to_py(c.n);
    return d;
}

py::object loads(const std::string& s) { return py::module_::import("json").attr("loads")(s); }

}  // namespace

PYBIND11_MODULE(cubesum, m) {
    m.doc() = "Cube-sum twists: certificates, local data, L-values and verification reports";

    static py::exception<Error> exc(m, "CubesumError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = exc;
            PyErr_SetObject(err.ptr(), py::make_tuple(to_string(e.kind()), e.what()).ptr());
        }
    });

    m.def(
        "search_cubesum",
        [](const py::int_& n, std::uint64_t budget) {
            SearchResult r = search_cubesum(from_py(n), budget, 1);
            py::dict d = cert_dict(r.certificate);
            d["point"] = py::make_tuple(to_string(r.point.x), to_string(r.point.y));
            d["candidates"] = r.stats.candidates;
            return d;
        },
        py::arg("n"), py::arg("budget") = 10'000'000);
    m.def(
        "verify_certificate",
        [](const py::int_& a, const py::int_& b, const py::int_& c, const py::int_& n) {
            return CubeSumCertificate{from_py(n), from_py(a), from_py(b), from_py(c)}.verify();
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("n"));
    m.def(
        "point_to_certificate",
        [](const std::string& line, const py::int_& n) {
            CurveModel E = CurveModel::E(from_py(n));
            return cert_dict(point_to_cubesum(parse_point(line), E));
        },
        py::arg("point"), py::arg("n"));
    m.def(
        "conductor", [](const py::int_& n) { return to_py(conductor(CurveModel::E(from_py(n)))); }, py::arg("n"));
    m.def(
        "tamagawa",
        [](const py::int_& n) {
            py::dict d;
            for (const LocalData& ld : local_data(CurveModel::E(from_py(n)))) d[to_py(ld.prime)] = ld.tamagawa;
            return d;
        },
        py::arg("n"));
    m.def(
        "ap",
        [](const py::int_& n, long q) {
            CurveModel E = CurveModel::E(from_py(n));
            return py::make_tuple(ap_cm(E, q), ap_pointcount(E, q));
        },
        py::arg("n"), py::arg("q"));
    m.def(
        "root_number", [](const py::int_& n, unsigned bits) { return root_number(CurveModel::E(from_py(n)), bits).epsilon; },
        py::arg("n"), py::arg("bits") = 128);
    m.def(
        "leading_value",
        [](const py::int_& n, unsigned bits) {
            CurveModel E = CurveModel::E(from_py(n));
            int eps = root_number(E, bits).epsilon;
            LValue v = l_value(E, eps == 1 ? 0 : 1, bits);
            PrecisionGuard g(bits + kGuardBits);
            py::dict d;
            d["order"] = v.derivative_order;
            d["value"] = fmt(v.value, static_cast<int>(bits * 0.3));
            d["tail_bound"] = to_double(v.tail_bound);
            return d;
        },
        py::arg("n"), py::arg("bits") = 128);
    m.def(
        "report",
        [](long p, const std::vector<std::string>& sections, const std::string& points, bool deterministic) {
            Config cfg;
            cfg.points_file = points;
            cfg.deterministic = deterministic;
            VerificationReport r = run_report(p, cfg, sections);
            py::dict d = loads(r.to_json().dump());
            d["exit_code"] = r.exit_code();
            return d;
        },
        py::arg("p"), py::arg("sections") = std::vector<std::string>{}, py::arg("points") = "",
        py::arg("deterministic") = true);
}
