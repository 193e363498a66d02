#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "polydeq/constraints.hpp"

using namespace polydeq;

namespace {

SolveSpec guess_spec(const Scalar& Z, const RatioVector& ratios) {
    SolveSpec spec;
    spec.mode = SolveMode::NewtonRatios;
    spec.Z = Z;
    spec.free_ratios =
        std::vector<Scalar>(ratios.r.begin(), ratios.r.end() - 1);
    return spec;
}

Scalar perturb(const Scalar& s, double eps, std::mt19937_64& rng) {
    const double theta =
        2.0 * M_PI * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto z = s.float_value() + eps * std::polar(1.0, theta);
    return Scalar::floating(z);
}

std::vector<std::complex<double>> residuals_at(
    const HomogeneousSystem& sys, std::complex<double> Z,
    std::vector<std::complex<double>> unknown_ratios) {
    std::vector<Scalar> free;
    free.reserve(unknown_ratios.size());
    for (const auto& r : unknown_ratios) free.push_back(Scalar::floating(r));
    const RatioVector ratios = ratios_from_free(std::move(free), Regime::Float);
    std::vector<std::complex<double>> out;
    for (const Scalar& res :
         constraint_residuals(sys, Scalar::floating(Z), ratios)) {
        out.push_back(res.float_value());
    }
    return out;
}

// Independent oracle: central finite differences along the real axis of each
// unknown. The residuals are polynomial in (Z, r), so the complex derivative
// is the same along every direction.
std::vector<std::vector<std::complex<double>>> fd_jacobian(
    const HomogeneousSystem& sys, std::complex<double> Z,
    const std::vector<std::complex<double>>& free_ratios, double h) {
    const std::size_t n_vars = free_ratios.size() + 1;
    std::vector<std::vector<std::complex<double>>> jac(
        n_vars, std::vector<std::complex<double>>(n_vars));
    for (std::size_t k = 0; k < n_vars; ++k) {
        auto plus_Z = Z;
        auto minus_Z = Z;
        auto plus_r = free_ratios;
        auto minus_r = free_ratios;
        if (k == 0) {
            plus_Z += h;
            minus_Z -= h;
        } else {
            plus_r[k - 1] += h;
            minus_r[k - 1] -= h;
        }
        const auto f_plus = residuals_at(sys, plus_Z, plus_r);
        const auto f_minus = residuals_at(sys, minus_Z, minus_r);
        for (std::size_t n = 0; n < n_vars; ++n) {
            jac[n][k] = (f_plus[n] - f_minus[n]) / (2.0 * h);
        }
    }
    return jac;
}

}  // namespace

TEST_CASE("newton converges in zero iterations at an exact solution") {
    const auto inst = random_solvable_instance(3, 3, 17, SolveMode::Coefficients,
                                               0.6, Regime::Float);
    const RatioVector truth = ratios_from_init(inst.z0);
    const NewtonResult result =
        newton_solve(inst.system, guess_spec(inst.Z, truth));
    CHECK(result.converged);
    CHECK(result.iterations == 0);
    CHECK(result.residual_norm <=
          1e-12 * (1.0 + std::abs(inst.Z.float_value())));
}

TEST_CASE("newton recovers a perturbed solution") {
    std::mt19937_64 rng(61);
    int converged = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_solvable_instance(
            2 + static_cast<int>(seed % 3), 2 + static_cast<int>(seed % 2),
            1000 + seed, SolveMode::Coefficients, 0.7, Regime::Float);
        const RatioVector truth = ratios_from_init(inst.z0);
        SolveSpec spec;
        spec.mode = SolveMode::NewtonRatios;
        spec.Z = perturb(inst.Z, 1e-3, rng);
        std::vector<Scalar> free;
        for (std::size_t k = 0; k + 1 < truth.r.size(); ++k) {
            free.push_back(perturb(truth.r[k], 1e-3, rng));
        }
        spec.free_ratios = std::move(free);
        const NewtonResult result = newton_solve(inst.system, spec);
        if (result.converged && result.iterations <= 25) ++converged;
    }
    CHECK(converged >= 18);
}

TEST_CASE("analytic Jacobian matches central finite differences") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_solvable_instance(
            1 + static_cast<int>(seed % 4), 2 + static_cast<int>(seed % 3),
            2000 + seed, SolveMode::Coefficients, 0.7, Regime::Float);
        const RatioVector ratios = ratios_from_init(inst.z0);
        const auto analytic = residual_jacobian(inst.system, inst.Z, ratios);

        std::vector<std::complex<double>> free;
        for (std::size_t k = 0; k + 1 < ratios.r.size(); ++k) {
            free.push_back(ratios.r[k].float_value());
        }
        const auto fd =
            fd_jacobian(inst.system, inst.Z.float_value(), free, 1e-6);

        double max_entry = 0.0;
        double max_err = 0.0;
        for (std::size_t n = 0; n < analytic.size(); ++n) {
            for (std::size_t k = 0; k < analytic[n].size(); ++k) {
                max_entry = std::max(max_entry, std::abs(analytic[n][k]));
                max_err = std::max(max_err, std::abs(analytic[n][k] - fd[n][k]));
            }
        }
        CHECK(max_err <= 1e-5 * std::max(1.0, max_entry));
    }
}

TEST_CASE("identical equations with Z = 0 give a singular Jacobian") {
    HomogeneousSystem sys(2, 2, Regime::Float);
    for (const MultiIndex& mi : enumerate_multi_indices(2, 2)) {
        sys.set_coefficient(0, mi, Scalar::floating(0.5));
        sys.set_coefficient(1, mi, Scalar::floating(0.5));
    }
    SolveSpec spec;
    spec.mode = SolveMode::NewtonRatios;
    spec.Z = Scalar::floating(0.0);
    spec.free_ratios = std::vector<Scalar>{Scalar::floating(1.0)};
    try {
        newton_solve(sys, spec);
        FAIL("expected SingularJacobianError");
    } catch (const SingularJacobianError& e) {
        CHECK(e.condition > 1e15);
    }
}

TEST_CASE("newton flags non-convergence when max_iter is exhausted") {
    const auto inst = random_solvable_instance(3, 3, 5, SolveMode::Coefficients,
                                               0.7, Regime::Float);
    const RatioVector truth = ratios_from_init(inst.z0);
    std::mt19937_64 rng(71);
    SolveSpec spec;
    spec.mode = SolveMode::NewtonRatios;
    spec.Z = perturb(inst.Z, 0.5, rng);
    std::vector<Scalar> free;
    for (std::size_t k = 0; k + 1 < truth.r.size(); ++k) {
        free.push_back(perturb(truth.r[k], 0.5, rng));
    }
    spec.free_ratios = std::move(free);
    spec.max_iter = 0;
    const NewtonResult result = newton_solve(inst.system, spec);
    CHECK(!result.converged);
    CHECK(result.iterations == 0);
}

TEST_CASE("newton input validation") {
    const auto inst = random_solvable_instance(2, 2, 3, SolveMode::Coefficients,
                                               0.7, Regime::Exact);
    SolveSpec spec;
    spec.mode = SolveMode::NewtonRatios;
    spec.Z = Scalar::floating(1.0);
    spec.free_ratios = std::vector<Scalar>{Scalar::floating(1.0)};
    CHECK_THROWS_AS(newton_solve(inst.system, spec), RegimeError);

    const auto finst = instance_to_float(inst);
    SolveSpec no_guess;
    no_guess.mode = SolveMode::NewtonRatios;
    CHECK_THROWS_AS(newton_solve(finst.system, no_guess), DomainError);
}

TEST_CASE("newton solves the single-equation system in one step") {
    HomogeneousSystem sys(1, 4, Regime::Float);
    sys.set_coefficient(0, MultiIndex({4}), Scalar::floating(2.5, -1.0));
    SolveSpec spec;
    spec.mode = SolveMode::NewtonRatios;
    spec.Z = Scalar::floating(1.0, 0.0);
    spec.free_ratios = std::vector<Scalar>{};
    const NewtonResult result = newton_solve(sys, spec);
    CHECK(result.converged);
    CHECK(result.iterations <= 1);
    CHECK(std::abs(result.Z.float_value() - std::complex<double>(2.5, -1.0)) <=
          1e-12);
}
