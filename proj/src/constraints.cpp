#include "polydeq/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "dyadic_draws.hpp"

namespace polydeq {

const char* solve_mode_name(SolveMode mode) {
    switch (mode) {
        case SolveMode::Coefficients: return "coefficients";
        case SolveMode::ZPivot: return "z-pivot";
        case SolveMode::NewtonRatios: return "newton";
    }
    return "?";
}

RatioVector ratios_from_init(const StateVector& z0) {
    const Regime regime = state_regime(z0);
    const Scalar& last = z0.z.back();
    if (last.is_zero()) {
        throw DomainError("z_N(0) must be nonzero to form the ratios");
    }
    RatioVector out;
    out.r.reserve(z0.z.size());
    for (std::size_t n = 0; n + 1 < z0.z.size(); ++n) {
        out.r.push_back(z0.z[n] / last);
    }
    out.r.push_back(Scalar::one(regime));  // r_N = 1 exactly
    return out;
}

RatioVector ratios_from_free(std::vector<Scalar> free_ratios, Regime regime) {
    for (const Scalar& r : free_ratios) {
        if (r.regime() != regime) {
            throw RegimeError("ratio regime does not match the system");
        }
    }
    RatioVector out;
    out.r = std::move(free_ratios);
    out.r.push_back(Scalar::one(regime));
    return out;
}

namespace {

void check_ratio_shape(const HomogeneousSystem& sys, const RatioVector& ratios) {
    if (ratios.size() != sys.n_vars()) {
        throw DomainError("ratio vector length " + std::to_string(ratios.size()) +
                          " does not match n_vars " +
                          std::to_string(sys.n_vars()));
    }
    for (const Scalar& r : ratios.r) {
        if (r.regime() != sys.regime()) {
            throw RegimeError("ratio regime does not match the system");
        }
    }
    if (ratios.r.back() != Scalar::one(sys.regime())) {
        throw DomainError("ratio vector must end with r_N = 1");
    }
}

// sum of c * monomial over one equation's stored terms, optionally skipping
// one index.
Scalar equation_sum(const HomogeneousSystem& sys, int equation,
                    const RatioVector& ratios, const MultiIndex* skip) {
    Scalar sum = Scalar::zero(sys.regime());
    for (const auto& [index, coeff] : sys.terms(equation)) {
        if (skip && index == *skip) continue;
        sum += coeff * monomial_eval(index, ratios.r);
    }
    return sum;
}

void check_designated_index(const HomogeneousSystem& sys, int equation,
                            const MultiIndex& index) {
    if (index.size() != sys.n_vars() || index.degree() != sys.degree()) {
        throw DomainError("designated index " + to_string(index) +
                          " for equation " + std::to_string(equation + 1) +
                          " is not a degree-" + std::to_string(sys.degree()) +
                          " index over " + std::to_string(sys.n_vars()) +
                          " variables");
    }
    for (int m : index.exponents) {
        if (m < 0) {
            throw DomainError("designated index " + to_string(index) +
                              " has a negative exponent");
        }
    }
}

// Zeroes equation n's residual by construction:
// c_designated = (Z*r_n - sum_other) / monomial(designated).
void solve_one_equation(HomogeneousSystem& sys, int equation,
                        const MultiIndex& designated, const Scalar& Z,
                        const RatioVector& ratios) {
    check_designated_index(sys, equation, designated);
    const Scalar mono = monomial_eval(designated, ratios.r);
    if (mono.is_zero()) {
        throw DomainError("designated monomial vanishes: equation " +
                          std::to_string(equation + 1) + ", index " +
                          to_string(designated) +
                          " (a ratio with positive exponent is zero)");
    }
    const Scalar other = equation_sum(sys, equation, ratios, &designated);
    const Scalar target = Z * ratios.r[static_cast<std::size_t>(equation)];
    sys.set_coefficient(equation, designated, (target - other) / mono);
}

}  // namespace

std::vector<Scalar> constraint_residuals(const HomogeneousSystem& sys,
                                         const Scalar& Z,
                                         const RatioVector& ratios) {
    check_ratio_shape(sys, ratios);
    if (Z.regime() != sys.regime()) {
        throw RegimeError("Z regime does not match the system");
    }
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(sys.n_vars()));
    for (int n = 0; n < sys.n_vars(); ++n) {
        out.push_back(Z * ratios.r[static_cast<std::size_t>(n)] -
                      equation_sum(sys, n, ratios, nullptr));
    }
    return out;
}

double max_residual_magnitude(const std::vector<Scalar>& residuals) {
    double worst = 0.0;
    for (const Scalar& res : residuals) {
        worst = std::max(worst, magnitude(res));
    }
    return worst;
}

HomogeneousSystem solve_designated_coefficients(const HomogeneousSystem& sys,
                                                const Scalar& Z,
                                                const RatioVector& ratios,
                                                const SolveSpec& spec) {
    check_ratio_shape(sys, ratios);
    if (Z.regime() != sys.regime()) {
        throw RegimeError("Z regime does not match the system");
    }
    if (static_cast<int>(spec.designated.size()) != sys.n_vars()) {
        throw DomainError("coefficients mode needs exactly one designated "
                          "index per equation");
    }
    HomogeneousSystem out = sys;
    for (int n = 0; n < sys.n_vars(); ++n) {
        const auto it = spec.designated.find(n);
        if (it == spec.designated.end()) {
            throw DomainError("no designated index for equation " +
                              std::to_string(n + 1));
        }
        solve_one_equation(out, n, it->second, Z, ratios);
    }
    return out;
}

std::pair<Scalar, HomogeneousSystem> solve_z_pivot(const HomogeneousSystem& sys,
                                                   const RatioVector& ratios,
                                                   const SolveSpec& spec) {
    check_ratio_shape(sys, ratios);
    const int pivot = spec.pivot_equation;
    if (pivot < 0 || pivot >= sys.n_vars()) {
        throw DomainError("pivot equation " + std::to_string(pivot + 1) +
                          " outside 1.." + std::to_string(sys.n_vars()));
    }
    if (spec.designated.count(pivot) != 0) {
        throw DomainError("pivot equation " + std::to_string(pivot + 1) +
                          " must not carry a designated coefficient");
    }
    if (static_cast<int>(spec.designated.size()) != sys.n_vars() - 1) {
        throw DomainError("z-pivot mode needs one designated index per "
                          "non-pivot equation");
    }
    const Scalar& r_pivot = ratios.r[static_cast<std::size_t>(pivot)];
    if (r_pivot.is_zero()) {
        throw DomainError("pivot ratio r_" + std::to_string(pivot + 1) +
                          " is zero; Z cannot be read off equation " +
                          std::to_string(pivot + 1));
    }
    const Scalar Z = equation_sum(sys, pivot, ratios, nullptr) / r_pivot;

    HomogeneousSystem out = sys;
    for (int n = 0; n < sys.n_vars(); ++n) {
        if (n == pivot) continue;
        const auto it = spec.designated.find(n);
        if (it == spec.designated.end()) {
            throw DomainError("no designated index for equation " +
                              std::to_string(n + 1));
        }
        solve_one_equation(out, n, it->second, Z, ratios);
    }
    return {Z, out};
}

namespace {

using Complex = std::complex<double>;

Complex powi(Complex base, int e) {
    Complex result(1.0, 0.0);
    for (int i = 0; i < e; ++i) result *= base;
    return result;
}

Complex monomial_c(const MultiIndex& mi, const std::vector<Complex>& r) {
    Complex value(1.0, 0.0);
    for (std::size_t l = 0; l < r.size(); ++l) {
        const int m = mi.exponents[l];
        if (m > 0) value *= powi(r[l], m);
    }
    return value;
}

// d(monomial)/d(r_j): m_j * r_j^{m_j-1} * prod_{l != j} r_l^{m_l}.
Complex monomial_partial_c(const MultiIndex& mi, const std::vector<Complex>& r,
                           std::size_t j) {
    const int mj = mi.exponents[j];
    if (mj == 0) return Complex(0.0, 0.0);
    Complex value(static_cast<double>(mj), 0.0);
    value *= powi(r[j], mj - 1);
    for (std::size_t l = 0; l < r.size(); ++l) {
        if (l == j) continue;
        const int m = mi.exponents[l];
        if (m > 0) value *= powi(r[l], m);
    }
    return value;
}

std::vector<Complex> residuals_c(const HomogeneousSystem& sys, Complex Z,
                                 const std::vector<Complex>& r) {
    std::vector<Complex> out(static_cast<std::size_t>(sys.n_vars()));
    for (int n = 0; n < sys.n_vars(); ++n) {
        Complex sum(0.0, 0.0);
        for (const auto& [index, coeff] : sys.terms(n)) {
            sum += coeff.float_value() * monomial_c(index, r);
        }
        out[static_cast<std::size_t>(n)] = Z * r[static_cast<std::size_t>(n)] - sum;
    }
    return out;
}

double inf_norm(const std::vector<Complex>& v) {
    double worst = 0.0;
    for (const Complex& c : v) worst = std::max(worst, std::abs(c));
    return worst;
}

std::vector<std::vector<Complex>> jacobian_c(const HomogeneousSystem& sys,
                                             Complex Z,
                                             const std::vector<Complex>& r) {
    const auto n_vars = static_cast<std::size_t>(sys.n_vars());
    std::vector<std::vector<Complex>> jac(
        n_vars, std::vector<Complex>(n_vars, Complex(0.0, 0.0)));
    for (std::size_t n = 0; n < n_vars; ++n) {
        jac[n][0] = r[n];  // d res_n / dZ
        for (std::size_t k = 0; k + 1 < n_vars; ++k) {
            Complex entry = (n == k) ? Z : Complex(0.0, 0.0);
            for (const auto& [index, coeff] : sys.terms(static_cast<int>(n))) {
                entry -= coeff.float_value() * monomial_partial_c(index, r, k);
            }
            jac[n][k + 1] = entry;
        }
    }
    return jac;
}

std::vector<Complex> ratios_complex(const RatioVector& ratios) {
    std::vector<Complex> out;
    out.reserve(ratios.r.size());
    for (const Scalar& r : ratios.r) out.push_back(r.float_value());
    return out;
}

}  // namespace

std::vector<std::vector<Complex>> residual_jacobian(const HomogeneousSystem& sys,
                                                    const Scalar& Z,
                                                    const RatioVector& ratios) {
    check_ratio_shape(sys, ratios);
    if (sys.regime() != Regime::Float) {
        throw RegimeError("residual_jacobian requires a float-regime system");
    }
    return jacobian_c(sys, Z.float_value(), ratios_complex(ratios));
}

NewtonResult newton_solve(const HomogeneousSystem& sys, const SolveSpec& spec) {
    if (sys.regime() != Regime::Float) {
        throw RegimeError("newton_solve requires a float-regime system "
                          "(exact roots are generally irrational)");
    }
    if (!spec.Z || !spec.free_ratios) {
        throw DomainError("newton mode needs a starting guess for Z and the "
                          "free ratios");
    }
    const auto n_vars = static_cast<std::size_t>(sys.n_vars());
    if (spec.free_ratios->size() + 1 != n_vars) {
        throw DomainError("newton guess has " +
                          std::to_string(spec.free_ratios->size()) +
                          " free ratios, expected " + std::to_string(n_vars - 1));
    }

    // Unknown vector x = (Z, r_1..r_{N-1}); r_N stays pinned at 1.
    std::vector<Complex> x(n_vars);
    x[0] = spec.Z->float_value();
    for (std::size_t k = 0; k + 1 < n_vars; ++k) {
        x[k + 1] = (*spec.free_ratios)[k].float_value();
    }

    auto ratios_of = [&](const std::vector<Complex>& vars) {
        std::vector<Complex> r(n_vars);
        for (std::size_t k = 0; k + 1 < n_vars; ++k) r[k] = vars[k + 1];
        r[n_vars - 1] = Complex(1.0, 0.0);
        return r;
    };
    auto norm_at = [&](const std::vector<Complex>& vars) {
        return inf_norm(residuals_c(sys, vars[0], ratios_of(vars)));
    };
    auto tolerance_at = [&](const std::vector<Complex>& vars) {
        return spec.tol * (1.0 + std::abs(vars[0]));
    };
    auto pack_result = [&](const std::vector<Complex>& vars, int iterations,
                           double norm, bool converged) {
        NewtonResult res;
        res.Z = Scalar::floating(vars[0]);
        std::vector<Scalar> free;
        for (std::size_t k = 0; k + 1 < n_vars; ++k) {
            free.push_back(Scalar::floating(vars[k + 1]));
        }
        res.ratios = ratios_from_free(std::move(free), Regime::Float);
        res.iterations = iterations;
        res.residual_norm = norm;
        res.converged = converged;
        return res;
    };

    double norm = norm_at(x);
    std::vector<Complex> best = x;
    double best_norm = norm;

    const auto dim = static_cast<Eigen::Index>(2 * n_vars);
    for (int iter = 0; iter <= spec.max_iter; ++iter) {
        if (norm <= tolerance_at(x)) {
            return pack_result(x, iter, norm, true);
        }
        if (iter == spec.max_iter) break;

        const auto jac = jacobian_c(sys, x[0], ratios_of(x));
        const auto res = residuals_c(sys, x[0], ratios_of(x));

        // Real and imaginary parts stacked into a real 2N x 2N system.
        Eigen::MatrixXd A(dim, dim);
        Eigen::VectorXd b(dim);
        for (std::size_t n = 0; n < n_vars; ++n) {
            for (std::size_t k = 0; k < n_vars; ++k) {
                const Complex j = jac[n][k];
                A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = j.real();
                A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_vars + k)) = -j.imag();
                A(static_cast<Eigen::Index>(n_vars + n), static_cast<Eigen::Index>(k)) = j.imag();
                A(static_cast<Eigen::Index>(n_vars + n), static_cast<Eigen::Index>(n_vars + k)) = j.real();
            }
            b(static_cast<Eigen::Index>(n)) = -res[n].real();
            b(static_cast<Eigen::Index>(n_vars + n)) = -res[n].imag();
        }

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(dim - 1);
        if (!(smax > 0.0) || !std::isfinite(smax) || smin <= smax * 1e-15) {
            const double cond =
                smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
            throw SingularJacobianError(
                "singular Jacobian at iteration " + std::to_string(iter) +
                    " (condition estimate " + std::to_string(cond) + ")",
                cond);
        }
        const Eigen::VectorXd delta = svd.solve(b);

        double alpha = 1.0;
        bool accepted = false;
        std::vector<Complex> trial(n_vars);
        for (int h = 0; h <= spec.max_halvings; ++h) {
            for (std::size_t k = 0; k < n_vars; ++k) {
                trial[k] = x[k] + alpha * Complex(delta(static_cast<Eigen::Index>(k)),
                                                  delta(static_cast<Eigen::Index>(n_vars + k)));
            }
            const double trial_norm = norm_at(trial);
            if (trial_norm < norm) {
                x = trial;
                norm = trial_norm;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // Stagnated: no step length reduced the residual.
            return pack_result(best, iter, best_norm, false);
        }
        if (norm < best_norm) {
            best = x;
            best_norm = norm;
        }
    }
    return pack_result(best, spec.max_iter, best_norm, false);
}

SolvableInstance instance_to_float(const SolvableInstance& inst) {
    SolvableInstance out{inst.system.to_float(), to_float(inst.z0),
                         to_float(inst.Z), inst.certificate};
    const auto residuals = constraint_residuals(out.system, out.Z,
                                                ratios_from_init(out.z0));
    out.certificate.max_residual = max_residual_magnitude(residuals);
    return out;
}

SolvableInstance random_solvable_instance(int n_vars, int degree,
                                          std::uint64_t seed, SolveMode mode,
                                          double density, Regime regime) {
    if (n_vars < 1) throw DomainError("generator: n_vars must be >= 1");
    if (degree < 2) throw DomainError("generator: degree must be >= 2");
    if (!(density > 0.0) || density > 1.0) {
        throw DomainError("generator: density must lie in (0, 1]");
    }
    if (mode == SolveMode::NewtonRatios) {
        throw DomainError("generator: construction mode must be coefficients "
                          "or z-pivot");
    }

    detail::DyadicDraws draws(seed);
    HomogeneousSystem sys(n_vars, degree, regime);
    for (int n = 0; n < n_vars; ++n) {
        for (const MultiIndex& index : enumerate_multi_indices(n_vars, degree)) {
            if (draws.bernoulli(density)) {
                sys.set_coefficient(n, index, draws.scalar(regime));
            }
        }
    }

    std::vector<Scalar> free_ratios;
    for (int k = 0; k + 1 < n_vars; ++k) {
        free_ratios.push_back(draws.nonzero_scalar(regime));
    }
    const RatioVector ratios = ratios_from_free(free_ratios, regime);

    // The pure z_N^M index: monomial value r_N^M = 1, always solvable.
    MultiIndex safe_index(std::vector<int>(static_cast<std::size_t>(n_vars), 0));
    safe_index.exponents.back() = degree;

    SolveSpec spec;
    spec.mode = mode;
    Scalar Z = Scalar::zero(regime);
    HomogeneousSystem solved = sys;
    if (mode == SolveMode::Coefficients) {
        Z = draws.nonzero_scalar(regime);
        for (int n = 0; n < n_vars; ++n) spec.designated[n] = safe_index;
        solved = solve_designated_coefficients(sys, Z, ratios, spec);
    } else {
        spec.pivot_equation = n_vars - 1;
        for (int n = 0; n + 1 < n_vars; ++n) spec.designated[n] = safe_index;
        std::tie(Z, solved) = solve_z_pivot(sys, ratios, spec);
    }

    const Scalar scale = draws.nonzero_scalar(regime);
    StateVector z0;
    z0.z = ratios.r;
    z0 = scale_state(z0, scale);

    const auto residuals = constraint_residuals(solved, Z, ratios);
    Certificate cert{max_residual_magnitude(residuals), mode};
    return SolvableInstance{std::move(solved), std::move(z0), Z, cert};
}

}  // namespace polydeq
