#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polydeq/io.hpp"
#include "polydeq/verify.hpp"

namespace py = pybind11;
using namespace polydeq;

namespace {

py::object bigint_to_py(const BigInt& value) {
    const std::string digits = value.get_str();
    return py::reinterpret_steal<py::object>(
        PyLong_FromString(digits.c_str(), nullptr, 10));
}

py::object scalar_part(const Scalar& s, bool real) {
    if (s.is_exact()) {
        const auto& e = s.exact_value();
        return py::str(rational_to_string(real ? e.re : e.im));
    }
    const auto z = s.float_value();
    return py::float_(real ? z.real() : z.imag());
}

Scalar scalar_exact_from_str(const std::string& re, const std::string& im) {
    return Scalar::exact(rational_from_string(re), rational_from_string(im));
}

std::map<int, MultiIndex> designated_from_dict(
    const std::map<int, std::vector<int>>& designated) {
    std::map<int, MultiIndex> out;
    for (const auto& [equation, exponents] : designated) {
        out[equation] = MultiIndex(exponents);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Explicitly solvable systems of first-order difference "
              "equations with homogeneous polynomial right-hand sides";

    const auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<RegimeError>(m, "RegimeError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<OverflowError>(m, "FloatOverflowError", error.ptr());
    py::register_exception<SizeBudgetError>(m, "SizeBudgetError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<SingularJacobianError>(m, "SingularJacobianError",
                                                  error.ptr());

    py::enum_<Regime>(m, "Regime")
        .value("EXACT", Regime::Exact)
        .value("FLOAT", Regime::Float);
    py::enum_<SolveMode>(m, "SolveMode")
        .value("COEFFICIENTS", SolveMode::Coefficients)
        .value("Z_PIVOT", SolveMode::ZPivot)
        .value("NEWTON_RATIOS", SolveMode::NewtonRatios);
    py::enum_<Verdict>(m, "Verdict")
        .value("EXACT_MATCH", Verdict::ExactMatch)
        .value("WITHIN_TOLERANCE", Verdict::WithinTolerance)
        .value("MISMATCH", Verdict::Mismatch)
        .value("TRUNCATED", Verdict::Truncated);

    py::class_<Scalar>(m, "Scalar")
        .def_static("exact", &scalar_exact_from_str, py::arg("re"),
                    py::arg("im") = "0",
                    "Exact scalar from rational strings \"p\" or \"p/q\"")
        .def_static(
            "floating",
            [](std::complex<double> z) { return Scalar::floating(z); },
            py::arg("value"))
        .def_property_readonly("regime", &Scalar::regime)
        .def_property_readonly("re", [](const Scalar& s) { return scalar_part(s, true); })
        .def_property_readonly("im", [](const Scalar& s) { return scalar_part(s, false); })
        .def_property_readonly(
            "complex",
            [](const Scalar& s) { return to_float(s).float_value(); },
            "Value as a Python complex (rounding exact scalars)")
        .def("is_zero", &Scalar::is_zero)
        .def("to_float", [](const Scalar& s) { return to_float(s); })
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def("__repr__",
             [](const Scalar& s) { return "Scalar(" + to_string(s) + ")"; });

    py::class_<StateVector>(m, "StateVector")
        .def(py::init([](std::vector<Scalar> z, int step) {
                 StateVector s;
                 s.z = std::move(z);
                 s.step = step;
                 return s;
             }),
             py::arg("z"), py::arg("step") = 0)
        .def_readwrite("z", &StateVector::z)
        .def_readwrite("step", &StateVector::step);

    py::class_<RatioVector>(m, "RatioVector")
        .def_readonly("r", &RatioVector::r);

    py::class_<HomogeneousSystem>(m, "HomogeneousSystem")
        .def(py::init<int, int, Regime>(), py::arg("n_vars"), py::arg("degree"),
             py::arg("regime"))
        .def_property_readonly("n_vars", &HomogeneousSystem::n_vars)
        .def_property_readonly("degree", &HomogeneousSystem::degree)
        .def_property_readonly("regime", &HomogeneousSystem::regime)
        .def("set_coefficient",
             [](HomogeneousSystem& sys, int equation, std::vector<int> exponents,
                const Scalar& value) {
                 sys.set_coefficient(equation, MultiIndex(std::move(exponents)),
                                     value);
             },
             py::arg("equation"), py::arg("exponents"), py::arg("value"),
             "Store one coefficient; equations are 0-based here")
        .def("coefficient",
             [](const HomogeneousSystem& sys, int equation,
                std::vector<int> exponents) {
                 return sys.coefficient(equation, MultiIndex(std::move(exponents)));
             },
             py::arg("equation"), py::arg("exponents"))
        .def("term_count", &HomogeneousSystem::term_count)
        .def("to_float", &HomogeneousSystem::to_float)
        .def("validate",
             [](const HomogeneousSystem& sys) {
                 std::vector<std::string> out;
                 for (const Violation& v : validate_system(sys)) {
                     out.push_back(to_string(v));
                 }
                 return out;
             })
        .def("to_json", [](const HomogeneousSystem& sys) {
            return system_to_json(sys).dump(2);
        })
        .def_static("from_json", [](const std::string& text) {
            return system_from_json(Json::parse(text));
        });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states)
        .def_property_readonly("truncated_at",
                               [](const Trajectory& t) -> py::object {
                                   if (t.truncated_at) return py::int_(*t.truncated_at);
                                   return py::none();
                               })
        .def("to_csv",
             [](const Trajectory& t, int digits, bool rational) {
                 return trajectory_to_csv(t, CsvOptions{digits, rational});
             },
             py::arg("digits") = 17, py::arg("rational") = false);

    py::class_<Certificate>(m, "Certificate")
        .def_readonly("max_residual", &Certificate::max_residual)
        .def_readonly("mode", &Certificate::mode);

    py::class_<SolvableInstance>(m, "SolvableInstance")
        .def_readonly("system", &SolvableInstance::system)
        .def_readonly("z0", &SolvableInstance::z0)
        .def_readonly("Z", &SolvableInstance::Z)
        .def_readonly("certificate", &SolvableInstance::certificate)
        .def("to_float", &instance_to_float)
        .def("to_json", [](const SolvableInstance& inst) {
            return instance_to_json(inst).dump(2);
        })
        .def_static("from_json", [](const std::string& text) {
            return instance_from_json(Json::parse(text));
        });

    py::class_<NewtonResult>(m, "NewtonResult")
        .def_readonly("Z", &NewtonResult::Z)
        .def_readonly("ratios", &NewtonResult::ratios)
        .def_readonly("iterations", &NewtonResult::iterations)
        .def_readonly("residual_norm", &NewtonResult::residual_norm)
        .def_readonly("converged", &NewtonResult::converged);

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("horizon_requested", &VerificationReport::horizon_requested)
        .def_readonly("horizon_achieved", &VerificationReport::horizon_achieved)
        .def_readonly("regime", &VerificationReport::regime)
        .def_readonly("verdict", &VerificationReport::verdict)
        .def_readonly("degenerate", &VerificationReport::degenerate)
        .def_property_readonly("truncated_at",
                               [](const VerificationReport& r) -> py::object {
                                   if (r.truncated_at) return py::int_(*r.truncated_at);
                                   return py::none();
                               })
        .def_property_readonly(
            "first_mismatch",
            [](const VerificationReport& r) -> py::object {
                if (r.first_mismatch) {
                    return py::make_tuple(r.first_mismatch->first,
                                          r.first_mismatch->second);
                }
                return py::none();
            })
        .def_property_readonly("deviations",
                               [](const VerificationReport& r) {
                                   py::list out;
                                   for (const StepDeviation& d : r.deviations) {
                                       out.append(py::make_tuple(d.step, d.max_abs,
                                                                 d.max_rel));
                                   }
                                   return out;
                               })
        .def("format", [](const VerificationReport& r) {
            return format_report(r, false);
        });

    py::class_<ExampleResult>(m, "ExampleResult")
        .def_readonly("coefficients_instance", &ExampleResult::coefficients_instance)
        .def_readonly("coefficients_report", &ExampleResult::coefficients_report)
        .def_readonly("zpivot_instance", &ExampleResult::zpivot_instance)
        .def_readonly("zpivot_report", &ExampleResult::zpivot_report);

    m.def("enumerate_multi_indices",
          [](int n_vars, int degree) {
              py::list out;
              for (const MultiIndex& mi : enumerate_multi_indices(n_vars, degree)) {
                  out.append(py::tuple(py::cast(mi.exponents)));
              }
              return out;
          },
          py::arg("n_vars"), py::arg("degree"),
          "Degree-M exponent vectors in descending lexicographic order");
    m.def("multi_index_count", &multi_index_count, py::arg("n_vars"),
          py::arg("degree"));
    m.def("monomial_eval",
          [](std::vector<int> exponents, const std::vector<Scalar>& z) {
              return monomial_eval(MultiIndex(std::move(exponents)), z);
          },
          py::arg("exponents"), py::arg("z"));

    m.def("eval_rhs", &eval_rhs, py::arg("system"), py::arg("state"));
    m.def("iterate",
          [](const HomogeneousSystem& sys, const StateVector& z0, int horizon,
             std::size_t max_bits) {
              return iterate(sys, z0, horizon, EvalBudget{max_bits});
          },
          py::arg("system"), py::arg("z0"), py::arg("horizon"),
          py::arg("max_bits") = EvalBudget{}.max_bits);
    m.def("geometric_exponent",
          [](int degree, int step) {
              return bigint_to_py(geometric_exponent(degree, step));
          },
          py::arg("degree"), py::arg("step"),
          "(M^s - 1)/(M - 1) as a Python int");
    m.def("closed_form_state",
          [](const StateVector& z0, const Scalar& Z, int degree, int step,
             std::size_t max_bits) {
              return closed_form_state(z0, Z, degree, step, EvalBudget{max_bits});
          },
          py::arg("z0"), py::arg("Z"), py::arg("degree"), py::arg("step"),
          py::arg("max_bits") = EvalBudget{}.max_bits);

    m.def("ratios_from_init", &ratios_from_init, py::arg("z0"));
    m.def("ratios_from_free", &ratios_from_free, py::arg("free_ratios"),
          py::arg("regime"));
    m.def("constraint_residuals", &constraint_residuals, py::arg("system"),
          py::arg("Z"), py::arg("ratios"));
    m.def("max_residual_magnitude", &max_residual_magnitude,
          py::arg("residuals"));

    m.def("solve_designated_coefficients",
          [](const HomogeneousSystem& sys, const Scalar& Z,
             const RatioVector& ratios,
             const std::map<int, std::vector<int>>& designated) {
              SolveSpec spec;
              spec.mode = SolveMode::Coefficients;
              spec.designated = designated_from_dict(designated);
              return solve_designated_coefficients(sys, Z, ratios, spec);
          },
          py::arg("system"), py::arg("Z"), py::arg("ratios"),
          py::arg("designated"),
          "designated maps 0-based equation -> exponent tuple");
    m.def("solve_z_pivot",
          [](const HomogeneousSystem& sys, const RatioVector& ratios,
             int pivot_equation,
             const std::map<int, std::vector<int>>& designated) {
              SolveSpec spec;
              spec.mode = SolveMode::ZPivot;
              spec.pivot_equation = pivot_equation;
              spec.designated = designated_from_dict(designated);
              return solve_z_pivot(sys, ratios, spec);
          },
          py::arg("system"), py::arg("ratios"), py::arg("pivot_equation"),
          py::arg("designated"));
    m.def("newton_solve",
          [](const HomogeneousSystem& sys, std::complex<double> z_guess,
             const std::vector<std::complex<double>>& ratio_guess, double tol,
             int max_iter, int max_halvings) {
              SolveSpec spec;
              spec.mode = SolveMode::NewtonRatios;
              spec.Z = Scalar::floating(z_guess);
              std::vector<Scalar> free;
              for (const auto& r : ratio_guess) free.push_back(Scalar::floating(r));
              spec.free_ratios = std::move(free);
              spec.tol = tol;
              spec.max_iter = max_iter;
              spec.max_halvings = max_halvings;
              return newton_solve(sys, spec);
          },
          py::arg("system"), py::arg("z_guess"), py::arg("ratio_guess"),
          py::arg("tol") = 1e-12, py::arg("max_iter") = 50,
          py::arg("max_halvings") = 30);

    m.def("random_solvable_instance", &random_solvable_instance,
          py::arg("n_vars"), py::arg("degree"), py::arg("seed"),
          py::arg("mode") = SolveMode::Coefficients, py::arg("density") = 0.5,
          py::arg("regime") = Regime::Exact);
    m.def("verify_instance",
          [](const SolvableInstance& inst, int horizon, double tol,
             std::size_t max_bits) {
              return verify_instance(inst, horizon, tol, EvalBudget{max_bits});
          },
          py::arg("instance"), py::arg("horizon") = 5, py::arg("tol") = 1e-9,
          py::arg("max_bits") = EvalBudget{}.max_bits);
    m.def("run_example", &run_example, py::arg("seed") = kDefaultExampleSeed);

#ifdef POLYDEQ_VERSION
#define POLYDEQ_STR_INNER(x) #x
#define POLYDEQ_STR(x) POLYDEQ_STR_INNER(x)
    m.attr("__version__") = POLYDEQ_STR(POLYDEQ_VERSION);
#else
    m.attr("__version__") = "dev";
#endif
}
