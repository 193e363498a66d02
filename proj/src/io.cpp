#include "polydeq/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace polydeq {

namespace {

void require_object(const Json& j, const char* what) {
    if (!j.is_object()) {
        throw ParseError(std::string(what) + ": expected a JSON object");
    }
}

void reject_unknown_fields(const Json& j, const std::set<std::string>& known,
                           const char* what) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) {
            throw ParseError(std::string(what) + ": unknown field \"" + key +
                             "\"");
        }
    }
}

const Json& require_field(const Json& j, const char* key, const char* what) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
    }
    return *it;
}

int require_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) {
        throw ParseError(std::string(what) + ": expected an integer");
    }
    return j.get<int>();
}

Rational rational_part(const Json& j, const char* what) {
    if (!j.is_string()) {
        throw ParseError(std::string(what) +
                         ": exact parts must be strings like \"p\" or \"p/q\"");
    }
    try {
        return rational_from_string(j.get<std::string>());
    } catch (const DomainError& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

double double_part(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw ParseError(std::string(what) + ": float parts must be numbers");
    }
    return j.get<double>();
}

Regime regime_from_json(const Json& j, const char* what) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "exact") return Regime::Exact;
        if (name == "float") return Regime::Float;
    }
    throw ParseError(std::string(what) +
                     ": regime must be \"exact\" or \"float\"");
}

MultiIndex exponents_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw ParseError(std::string(what) + ": exponents must be an array");
    }
    MultiIndex mi;
    for (const Json& entry : j) {
        mi.exponents.push_back(require_int(entry, what));
    }
    return mi;
}

Json exponents_to_json(const MultiIndex& mi) {
    return Json(mi.exponents);
}

SolveMode mode_from_json(const Json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "coefficients") return SolveMode::Coefficients;
        if (name == "z-pivot") return SolveMode::ZPivot;
        if (name == "newton") return SolveMode::NewtonRatios;
    }
    throw ParseError("mode must be \"coefficients\", \"z-pivot\" or \"newton\"");
}

}  // namespace

Json scalar_to_json(const Scalar& value) {
    Json j;
    if (value.is_exact()) {
        const auto& e = value.exact_value();
        j["re"] = rational_to_string(e.re);
        j["im"] = rational_to_string(e.im);
    } else {
        const auto z = value.float_value();
        j["re"] = z.real();
        j["im"] = z.imag();
    }
    return j;
}

Scalar scalar_from_json(const Json& j, Regime regime) {
    require_object(j, "scalar");
    reject_unknown_fields(j, {"re", "im"}, "scalar");
    const Json& re = require_field(j, "re", "scalar");
    const Json& im = require_field(j, "im", "scalar");
    if (regime == Regime::Exact) {
        return Scalar::exact(rational_part(re, "scalar"),
                             rational_part(im, "scalar"));
    }
    return Scalar::floating(double_part(re, "scalar"), double_part(im, "scalar"));
}

Json system_to_json(const HomogeneousSystem& sys) {
    Json coefficients = Json::array();
    for (int n = 0; n < sys.n_vars(); ++n) {
        for (const auto& [index, value] : sys.terms(n)) {
            Json entry;
            entry["equation"] = n + 1;
            entry["exponents"] = exponents_to_json(index);
            if (value.is_exact()) {
                const auto& e = value.exact_value();
                entry["re"] = rational_to_string(e.re);
                entry["im"] = rational_to_string(e.im);
            } else {
                const auto z = value.float_value();
                entry["re"] = z.real();
                entry["im"] = z.imag();
            }
            coefficients.push_back(std::move(entry));
        }
    }
    Json j;
    j["n_vars"] = sys.n_vars();
    j["degree"] = sys.degree();
    j["regime"] = regime_name(sys.regime());
    j["coefficients"] = std::move(coefficients);
    return j;
}

HomogeneousSystem system_from_json(const Json& j) {
    require_object(j, "system");
    reject_unknown_fields(j, {"n_vars", "degree", "regime", "coefficients"},
                          "system");
    const int n_vars = require_int(require_field(j, "n_vars", "system"), "n_vars");
    const int degree = require_int(require_field(j, "degree", "system"), "degree");
    const Regime regime =
        regime_from_json(require_field(j, "regime", "system"), "system");
    const Json& coefficients = require_field(j, "coefficients", "system");
    if (!coefficients.is_array()) {
        throw ParseError("system: coefficients must be an array");
    }
    if (n_vars < 1) throw ParseError("system: n_vars must be >= 1");
    if (degree < 0) throw ParseError("system: degree must be >= 0");

    HomogeneousSystem sys(n_vars, degree, regime);
    for (const Json& entry : coefficients) {
        require_object(entry, "coefficient");
        reject_unknown_fields(entry, {"equation", "exponents", "re", "im"},
                              "coefficient");
        const int equation =
            require_int(require_field(entry, "equation", "coefficient"),
                        "coefficient equation");
        if (equation < 1 || equation > n_vars) {
            throw ParseError("coefficient: equation " + std::to_string(equation) +
                             " outside 1.." + std::to_string(n_vars));
        }
        MultiIndex index = exponents_from_json(
            require_field(entry, "exponents", "coefficient"), "coefficient");
        Scalar value = [&] {
            const Json& re = require_field(entry, "re", "coefficient");
            const Json& im = require_field(entry, "im", "coefficient");
            if (regime == Regime::Exact) {
                return Scalar::exact(rational_part(re, "coefficient"),
                                     rational_part(im, "coefficient"));
            }
            return Scalar::floating(double_part(re, "coefficient"),
                                    double_part(im, "coefficient"));
        }();
        if (sys.find_coefficient(equation - 1, index)) {
            throw ParseError("coefficient: duplicate key equation " +
                             std::to_string(equation) + ", exponents " +
                             to_string(index));
        }
        sys.set_coefficient(equation - 1, std::move(index), std::move(value));
    }
    return sys;
}

Json state_to_json(const StateVector& state) {
    Json j = Json::array();
    for (const Scalar& c : state.z) j.push_back(scalar_to_json(c));
    return j;
}

StateVector state_from_json(const Json& j, Regime regime) {
    if (!j.is_array() || j.empty()) {
        throw ParseError("state: expected a nonempty array of scalars");
    }
    StateVector state;
    for (const Json& entry : j) state.z.push_back(scalar_from_json(entry, regime));
    return state;
}

Json instance_to_json(const SolvableInstance& inst) {
    Json j;
    j["system"] = system_to_json(inst.system);
    j["z0"] = state_to_json(inst.z0);
    j["Z"] = scalar_to_json(inst.Z);
    j["certificate"] = Json{{"max_residual", inst.certificate.max_residual},
                            {"mode", solve_mode_name(inst.certificate.mode)}};
    return j;
}

SolvableInstance instance_from_json(const Json& j) {
    require_object(j, "instance");
    reject_unknown_fields(j, {"system", "z0", "Z", "certificate"}, "instance");
    HomogeneousSystem sys = system_from_json(require_field(j, "system", "instance"));
    StateVector z0 =
        state_from_json(require_field(j, "z0", "instance"), sys.regime());
    if (static_cast<int>(z0.z.size()) != sys.n_vars()) {
        throw ParseError("instance: z0 length " + std::to_string(z0.z.size()) +
                         " does not match n_vars " + std::to_string(sys.n_vars()));
    }
    Scalar Z = scalar_from_json(require_field(j, "Z", "instance"), sys.regime());

    const Json& cert = require_field(j, "certificate", "instance");
    require_object(cert, "certificate");
    reject_unknown_fields(cert, {"max_residual", "mode"}, "certificate");
    Certificate certificate;
    certificate.max_residual =
        double_part(require_field(cert, "max_residual", "certificate"),
                    "certificate max_residual");
    certificate.mode = mode_from_json(require_field(cert, "mode", "certificate"));
    return SolvableInstance{std::move(sys), std::move(z0), std::move(Z),
                            certificate};
}

Json solve_spec_to_json(const SolveSpec& spec) {
    Json j;
    j["mode"] = solve_mode_name(spec.mode);
    if (!spec.designated.empty()) {
        Json designated = Json::array();
        for (const auto& [equation, index] : spec.designated) {
            designated.push_back(Json{{"equation", equation + 1},
                                      {"exponents", exponents_to_json(index)}});
        }
        j["designated"] = std::move(designated);
    }
    if (spec.pivot_equation >= 0) j["pivot_equation"] = spec.pivot_equation + 1;
    if (spec.Z || spec.free_ratios) {
        Json guess;
        if (spec.Z) guess["Z"] = scalar_to_json(*spec.Z);
        if (spec.free_ratios) {
            Json ratios = Json::array();
            for (const Scalar& r : *spec.free_ratios) {
                ratios.push_back(scalar_to_json(r));
            }
            guess["ratios"] = std::move(ratios);
        }
        j["guess"] = std::move(guess);
    }
    j["tol"] = spec.tol;
    j["max_iter"] = spec.max_iter;
    j["max_halvings"] = spec.max_halvings;
    return j;
}

SolveSpec solve_spec_from_json(const Json& j, int n_vars, Regime system_regime) {
    require_object(j, "solve spec");
    reject_unknown_fields(j,
                          {"mode", "designated", "pivot_equation", "guess", "tol",
                           "max_iter", "max_halvings"},
                          "solve spec");
    SolveSpec spec;
    spec.mode = mode_from_json(require_field(j, "mode", "solve spec"));
    // Newton works in the float regime regardless of how the system's own
    // document is typed; the linear modes take data in the system's regime.
    const Regime data_regime =
        spec.mode == SolveMode::NewtonRatios ? Regime::Float : system_regime;

    if (const auto it = j.find("designated"); it != j.end()) {
        if (!it->is_array()) {
            throw ParseError("solve spec: designated must be an array");
        }
        for (const Json& entry : *it) {
            require_object(entry, "designated entry");
            reject_unknown_fields(entry, {"equation", "exponents"},
                                  "designated entry");
            const int equation =
                require_int(require_field(entry, "equation", "designated entry"),
                            "designated equation");
            if (equation < 1 || equation > n_vars) {
                throw ParseError("designated entry: equation " +
                                 std::to_string(equation) + " outside 1.." +
                                 std::to_string(n_vars));
            }
            if (spec.designated.count(equation - 1)) {
                throw ParseError("designated entry: duplicate equation " +
                                 std::to_string(equation));
            }
            spec.designated[equation - 1] = exponents_from_json(
                require_field(entry, "exponents", "designated entry"),
                "designated entry");
        }
    }
    if (const auto it = j.find("pivot_equation"); it != j.end()) {
        const int pivot = require_int(*it, "pivot_equation");
        if (pivot < 1 || pivot > n_vars) {
            throw ParseError("solve spec: pivot_equation " +
                             std::to_string(pivot) + " outside 1.." +
                             std::to_string(n_vars));
        }
        spec.pivot_equation = pivot - 1;
    }
    if (const auto it = j.find("guess"); it != j.end()) {
        require_object(*it, "guess");
        reject_unknown_fields(*it, {"Z", "ratios"}, "guess");
        if (const auto z = it->find("Z"); z != it->end()) {
            spec.Z = scalar_from_json(*z, data_regime);
        }
        if (const auto ratios = it->find("ratios"); ratios != it->end()) {
            if (!ratios->is_array()) {
                throw ParseError("guess: ratios must be an array");
            }
            std::vector<Scalar> free;
            for (const Json& entry : *ratios) {
                free.push_back(scalar_from_json(entry, data_regime));
            }
            if (static_cast<int>(free.size()) != n_vars - 1) {
                throw ParseError("guess: expected " + std::to_string(n_vars - 1) +
                                 " free ratios, got " +
                                 std::to_string(free.size()));
            }
            spec.free_ratios = std::move(free);
        }
    }
    if (n_vars == 1 && !spec.free_ratios) {
        spec.free_ratios = std::vector<Scalar>{};  // no free ratios when N = 1
    }
    if (const auto it = j.find("tol"); it != j.end()) {
        if (!it->is_number()) throw ParseError("solve spec: tol must be a number");
        spec.tol = it->get<double>();
    }
    if (const auto it = j.find("max_iter"); it != j.end()) {
        spec.max_iter = require_int(*it, "max_iter");
    }
    if (const auto it = j.find("max_halvings"); it != j.end()) {
        spec.max_halvings = require_int(*it, "max_halvings");
    }
    return spec;
}

namespace {

std::string csv_part(const Scalar& value, bool real_part,
                     const CsvOptions& options) {
    if (value.is_exact()) {
        const Rational& q =
            real_part ? value.exact_value().re : value.exact_value().im;
        return options.rational ? rational_to_string(q)
                                : rational_to_decimal(q, options.digits);
    }
    const auto z = value.float_value();
    const double part = real_part ? z.real() : z.imag();
    if (options.digits >= 17) {
        // Shortest representation that round-trips.
        char buf[32];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), part);
        (void)ec;
        return std::string(buf, end);
    }
    std::ostringstream out;
    out.precision(options.digits);
    out << part;
    return out.str();
}

}  // namespace

std::string trajectory_to_csv(const Trajectory& traj, const CsvOptions& options) {
    std::ostringstream out;
    out << "step";
    if (!traj.states.empty()) {
        for (std::size_t n = 1; n <= traj.states.front().z.size(); ++n) {
            out << ",re_z" << n << ",im_z" << n;
        }
    }
    out << "\n";
    for (const StateVector& state : traj.states) {
        out << state.step;
        for (const Scalar& c : state.z) {
            out << "," << csv_part(c, true, options)
                << "," << csv_part(c, false, options);
        }
        out << "\n";
    }
    return out.str();
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("failed writing " + path);
}

}  // namespace polydeq
