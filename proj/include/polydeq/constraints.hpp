#ifndef POLYDEQ_CONSTRAINTS_HPP
#define POLYDEQ_CONSTRAINTS_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "polydeq/model.hpp"

namespace polydeq {

// Initial-data ratios r_n = z_n(0)/z_N(0). Only these enter the constraints,
// never the initial data themselves. r_N = 1 by construction.
struct RatioVector {
    std::vector<Scalar> r;

    int size() const { return static_cast<int>(r.size()); }
};

// Builds the ratio vector from full state, or from the N-1 free ratios.
RatioVector ratios_from_init(const StateVector& z0);
RatioVector ratios_from_free(std::vector<Scalar> free_ratios, Regime regime);

enum class SolveMode { Coefficients, ZPivot, NewtonRatios };

const char* solve_mode_name(SolveMode mode);

// Which elements of the data set (Z, coefficients, ratios) are unknown and
// how to determine them from the N constraints:
//   Coefficients — one designated coefficient per equation, linear solve.
//   ZPivot       — Z from one fully known pivot equation, plus one designated
//                  coefficient in each remaining equation, linear solve.
//   NewtonRatios — coefficients fixed, (Z, r_1..r_{N-1}) by damped Newton.
struct SolveSpec {
    SolveMode mode = SolveMode::Coefficients;

    // equation (0-based) -> designated unknown coefficient.
    std::map<int, MultiIndex> designated;

    // ZPivot: 0-based equation supplying Z.
    int pivot_equation = -1;

    // Given data for the linear modes, starting point for Newton.
    std::optional<Scalar> Z;
    std::optional<std::vector<Scalar>> free_ratios;  // r_1..r_{N-1}

    double tol = 1e-12;
    int max_iter = 50;
    int max_halvings = 30;
};

// Residuals of the N algebraic constraints, multiplied through by r_n so they
// stay polynomial:  res_n = Z*r_n - sum^{(M)} c_{n,m} prod_l r_l^{m_l}.
// All residuals vanish exactly on the constraint manifold.
std::vector<Scalar> constraint_residuals(const HomogeneousSystem& sys,
                                         const Scalar& Z,
                                         const RatioVector& ratios);

double max_residual_magnitude(const std::vector<Scalar>& residuals);

// Replaces each designated coefficient by the unique value that zeroes its
// equation's residual:  c = (Z*r_n - sum_other) / monomial(designated).
// Throws DomainError when a designated monomial vanishes at the ratios
// (naming the equation and index).
HomogeneousSystem solve_designated_coefficients(const HomogeneousSystem& sys,
                                                const Scalar& Z,
                                                const RatioVector& ratios,
                                                const SolveSpec& spec);

// Determines Z from the pivot equation (all of whose coefficients are known),
// then solves the remaining N-1 equations as in Coefficients mode.
std::pair<Scalar, HomogeneousSystem> solve_z_pivot(const HomogeneousSystem& sys,
                                                   const RatioVector& ratios,
                                                   const SolveSpec& spec);

// Jacobian of the constraint residuals at (Z, r): column 0 is d/dZ, columns
// 1..N-1 are d/dr_k. Exposed for the finite-difference cross-check.
std::vector<std::vector<std::complex<double>>> residual_jacobian(
    const HomogeneousSystem& sys, const Scalar& Z, const RatioVector& ratios);

class SingularJacobianError : public Error {
public:
    SingularJacobianError(const std::string& msg, double condition)
        : Error(msg), condition(condition) {}
    double condition;
};

struct NewtonResult {
    Scalar Z;
    RatioVector ratios;
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

// Damped Newton on F(Z, r) = constraint_residuals with the analytic Jacobian,
// real and imaginary parts stacked into a real system of dimension 2N. Step
// halving up to max_halvings when the residual inf-norm does not decrease;
// success when it drops to tol*(1 + |Z|). Float regime only. On max_iter the
// best iterate is returned flagged non-converged; a singular Jacobian throws.
NewtonResult newton_solve(const HomogeneousSystem& sys, const SolveSpec& spec);

// How a solvable instance was closed: max residual magnitude observed at
// construction (exactly 0 in the exact regime) plus the mode that closed it.
struct Certificate {
    double max_residual = 0.0;
    SolveMode mode = SolveMode::Coefficients;
};

// A system together with initial data and Z certified to satisfy the
// constraints, hence with known explicit evolution.
struct SolvableInstance {
    HomogeneousSystem system;
    StateVector z0;
    Scalar Z;
    Certificate certificate;
};

SolvableInstance instance_to_float(const SolvableInstance& inst);

// Deterministic random instance: coefficients drawn per (equation, index)
// with probability `density`, rational re/im in [-1,1] with dyadic
// denominators; ratios and Z (Coefficients mode) nonzero from the same pool.
// The pure z_N^M coefficient is designated per equation, whose monomial value
// is 1, so the linear solve never hits a zero monomial. In ZPivot mode the
// last equation is left fully drawn and supplies Z instead.
SolvableInstance random_solvable_instance(int n_vars, int degree,
                                          std::uint64_t seed, SolveMode mode,
                                          double density, Regime regime);

}  // namespace polydeq

#endif  // POLYDEQ_CONSTRAINTS_HPP
