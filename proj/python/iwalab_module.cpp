#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iwalab/workbench.hpp"

namespace py = pybind11;
using namespace iwalab;

namespace {

mpz_class to_mpz(const py::handle& h) { return mpz_class(py::str(h).cast<std::string>()); }

py::object to_py(const mpz_class& x) {
    return py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

IntPoly to_poly(const py::sequence& s) {
    IntPoly out;
    for (const auto& c : s) out.push_back(to_mpz(c));
    if (out.empty()) out.emplace_back(0);
    return out;
}

std::vector<IntPoly> to_entries(const py::sequence& rows, std::size_t d) {
    if (py::len(rows) != d) throw Error(Errc::InvalidArgument, "expected " + std::to_string(d) + " rows");
    std::vector<IntPoly> out;
    for (const auto& row : rows) {
        auto r = row.cast<py::sequence>();
        if (py::len(r) != d) throw Error(Errc::InvalidArgument, "each row must hold " + std::to_string(d) + " series");
        for (const auto& e : r) out.push_back(to_poly(e.cast<py::sequence>()));
    }
    return out;
}

py::list balanced(const PowerSeries& s) {
    py::list out;
    for (const auto& r : s.residues()) out.append(to_py(s.context().balanced(r)));
    return out;
}

py::object valuation_py(const Valuation& v) { return v.is_finite() ? py::object(py::int_(v.value())) : py::none(); }

py::dict euler_dict(const EulerResult& r) {
    py::dict d;
    d["status"] = to_string(r.status);
    d["chi_exponent"] = r.exists() ? py::object(py::int_(r.chi_exponent)) : py::none();
    d["h0_exponent"] = r.exists() ? py::object(py::int_(r.h0_exponent)) : py::none();
    d["h1_exponent"] = r.exists() ? py::object(py::int_(r.h1_exponent)) : py::none();
    d["precision"] = r.precision;
    return d;
}

CrossedModule crossed(const py::handle& p, int N, std::size_t d, const py::handle& kappa, const py::sequence& a) {
    return CrossedModule::from_integers(PadicContext(to_mpz(p), N), d, to_mpz(kappa), to_entries(a, d));
}

GammaModule gamma(const py::handle& p, int N, std::size_t d, const py::sequence& f) {
    return GammaModule::from_integers(PadicContext(to_mpz(p), N), d, to_entries(f, d));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Iwasawa-module Euler characteristics over Z/p^N";
    m.attr("__version__") = kToolVersion;

    static auto* error = new py::exception<Error>(m, "Error");
    py::register_exception_translator([](std::exception_ptr ep) {
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error->ptr())(e.what());
            exc.attr("code") = to_string(e.code());
            PyErr_SetObject(error->ptr(), exc.ptr());
        }
    });

    m.def(
        "valuation",
        [](py::int_ p, int N, py::int_ a) { return valuation_py(valuation(PadicInt(PadicContext(to_mpz(p), N), to_mpz(a)))); },
        py::arg("p"), py::arg("N"), py::arg("a"), "p-adic valuation of a mod p^N; None means at least N.");
    m.def(
        "unit_inverse",
        [](py::int_ p, int N, py::int_ a) {
            return to_py(unit_inverse(PadicInt(PadicContext(to_mpz(p), N), to_mpz(a))).residue());
        },
        py::arg("p"), py::arg("N"), py::arg("a"));
    m.def(
        "smith_exponents",
        [](py::int_ p, int N, const py::sequence& rows) {
            PadicContext ctx(to_mpz(p), N);
            std::vector<mpz_class> flat;
            std::size_t r = 0, c = 0;
            for (const auto& row : rows) {
                auto seq = row.cast<py::sequence>();
                c = py::len(seq);
                for (const auto& x : seq) flat.push_back(to_mpz(x));
                ++r;
            }
            if (r == 0 || flat.size() != r * c) throw Error(Errc::InvalidArgument, "ragged or empty matrix");
            py::list out;
            for (const auto& v : smith_form(PadicMatrix::from_integers(ctx, r, c, flat)).exponents)
                out.append(valuation_py(v));
            return out;
        },
        py::arg("p"), py::arg("N"), py::arg("matrix"), "Elementary divisor exponents; None marks AtLeastN.");
    m.def(
        "weierstrass_prepare",
        [](py::int_ p, int N, const py::sequence& f) {
            WeierstrassData w = weierstrass_prepare(PowerSeries::polynomial(PadicContext(to_mpz(p), N), to_poly(f)));
            py::dict d;
            d["mu"] = w.mu;
            d["lambda"] = w.lambda();
            d["distinguished"] = balanced(w.distinguished);
            d["unit"] = balanced(w.unit);
            return d;
        },
        py::arg("p"), py::arg("N"), py::arg("coefficients"));
    m.def(
        "lambda_mu",
        [](py::int_ p, int N, const py::sequence& f) {
            LambdaMu lm = lambda_mu(PowerSeries::polynomial(PadicContext(to_mpz(p), N), to_poly(f)));
            return py::make_tuple(lm.lambda, lm.mu);
        },
        py::arg("p"), py::arg("N"), py::arg("coefficients"));
    m.def(
        "twist",
        [](py::int_ p, int N, const py::sequence& f, py::int_ u, bool inverse) {
            PadicContext ctx(to_mpz(p), N);
            return balanced(twist_series(PowerSeries::polynomial(ctx, to_poly(f)), Character::from_integer(ctx, to_mpz(u)),
                                         inverse ? Direction::Inverse : Direction::Forward));
        },
        py::arg("p"), py::arg("N"), py::arg("coefficients"), py::arg("u"), py::arg("inverse") = false);
    m.def(
        "det_mult_mod_omega",
        [](py::int_ p, int N, const py::sequence& f, int n) {
            PadicContext ctx(to_mpz(p), N);
            return to_py(det_mult_mod_omega(PowerSeries::polynomial(ctx, to_poly(f)), n).balanced());
        },
        py::arg("p"), py::arg("N"), py::arg("coefficients"), py::arg("n"));
    m.def(
        "euler_gamma",
        [](py::int_ p, int N, std::size_t d, const py::sequence& f, py::int_ u, int n, const std::string& route) {
            GammaModule g = gamma(p, N, d, f);
            Character rho = Character::from_integer(g.context(), to_mpz(u));
            if (route == "direct") return euler_dict(euler_characteristic_direct(g, rho, n));
            if (route == "analytic") return euler_dict(euler_characteristic_analytic(g, rho, n));
            throw Error(Errc::InvalidArgument, "route is direct or analytic");
        },
        py::arg("p"), py::arg("N"), py::arg("d"), py::arg("F"), py::arg("u"), py::arg("n"), py::arg("route") = "direct");
    m.def(
        "euler_crossed",
        [](py::int_ p, int N, std::size_t d, py::int_ kappa, const py::sequence& a, py::int_ u, std::pair<int, int> lv,
           const std::string& route) {
            CrossedModule x = crossed(p, N, d, kappa, a);
            const Level l = x.level(lv.first, lv.second);
            Character rho = Character::from_integer(x.context(), to_mpz(u));
            if (route == "reduced") return euler_dict(euler_characteristic_crossed(x, rho, l));
            if (route == "akashi") return euler_dict(euler_via_akashi(x, rho, l));
            if (route == "group_ring") return euler_dict(group_ring_oracle(x, rho, l));
            throw Error(Errc::InvalidArgument, "route is reduced, akashi or group_ring");
        },
        py::arg("p"), py::arg("N"), py::arg("d"), py::arg("kappa"), py::arg("A"), py::arg("u"), py::arg("level"),
        py::arg("route") = "reduced");
    m.def(
        "akashi",
        [](py::int_ p, int N, std::size_t d, py::int_ kappa, const py::sequence& a, std::pair<int, int> lv) {
            CrossedModule x = crossed(p, N, d, kappa, a);
            AkashiPoly ak = akashi_series(x, x.level(lv.first, lv.second));
            if (!ak.integer) return balanced(ak.poly);
            py::list out;
            for (const auto& c : *ak.integer) out.append(to_py(c));
            return out;
        },
        py::arg("p"), py::arg("N"), py::arg("d"), py::arg("kappa"), py::arg("A"), py::arg("level"));
    m.def(
        "find_twist_gamma",
        [](py::int_ p, int N, std::size_t d, const py::sequence& f, int n_max, int budget, bool include_trivial) {
            TwistSearchOptions o;
            o.budget = budget;
            o.include_trivial = include_trivial;
            return to_py(find_twist(gamma(p, N, d, f), n_max, o).u().residue());
        },
        py::arg("p"), py::arg("N"), py::arg("d"), py::arg("F"), py::arg("n_max"), py::arg("budget") = 25,
        py::arg("include_trivial") = false);
    m.def(
        "find_twist_crossed",
        [](py::int_ p, int N, std::size_t d, py::int_ kappa, const py::sequence& a,
           const std::vector<std::pair<int, int>>& levels, int budget, bool include_trivial) {
            CrossedModule x = crossed(p, N, d, kappa, a);
            std::vector<Level> ls;
            for (auto [n, mm] : levels) ls.push_back(x.level(n, mm));
            TwistSearchOptions o = crossed_search_defaults();
            o.budget = budget;
            o.include_trivial = include_trivial;
            return to_py(find_twist_crossed(x, ls, o).u().residue());
        },
        py::arg("p"), py::arg("N"), py::arg("d"), py::arg("kappa"), py::arg("A"), py::arg("levels"),
        py::arg("budget") = 25, py::arg("include_trivial") = true);
    m.def(
        "run",
        [](const std::string& text, const std::string& command, std::optional<int> precision) {
            auto cmd = parse_command(command);
            if (!cmd) throw Error(Errc::InvalidArgument, "unknown command " + command);
            RunOptions o;
            o.precision = precision;
            RunReport r;
            {
                py::gil_scoped_release release;
                r = *cmd == Command::Selftest ? run_selftest(o) : run(parse_problem(text), *cmd, o, text);
            }
            return py::make_tuple(r.json, r.table, r.exit_code);
        },
        py::arg("problem_text"), py::arg("command"), py::arg("precision") = py::none(),
        "Runs a workbench command; returns (report_json, table, exit_code).");
}
