#include "polydeq/dynamics.hpp"

#include <string>

namespace polydeq {

namespace {

std::size_t state_bits(const StateVector& state) {
    std::size_t bits = 0;
    for (const Scalar& c : state.z) bits = std::max(bits, bit_size(c));
    return bits;
}

}  // namespace

StateVector eval_rhs(const HomogeneousSystem& sys, const StateVector& z) {
    if (static_cast<int>(z.z.size()) != sys.n_vars()) {
        throw DomainError("eval_rhs: state length " + std::to_string(z.z.size()) +
                          " does not match n_vars " +
                          std::to_string(sys.n_vars()));
    }
    if (state_regime(z) != sys.regime()) {
        throw RegimeError("eval_rhs: state regime does not match the system");
    }
    StateVector out;
    out.step = z.step + 1;
    out.z.reserve(z.z.size());
    for (int n = 0; n < sys.n_vars(); ++n) {
        Scalar sum = Scalar::zero(sys.regime());
        for (const auto& [index, coeff] : sys.terms(n)) {
            sum += coeff * monomial_eval(index, z.z);
        }
        out.z.push_back(std::move(sum));
    }
    return out;
}

Trajectory iterate(const HomogeneousSystem& sys, const StateVector& z0,
                   int horizon, const EvalBudget& budget) {
    if (horizon < 0) throw DomainError("iterate: negative horizon");
    Trajectory traj;
    traj.states.push_back(z0);
    traj.states.back().step = 0;
    for (int s = 0; s < horizon; ++s) {
        if (sys.regime() == Regime::Exact) {
            // Next step multiplies bit sizes by about M; refuse to compute a
            // state that would blow through the budget.
            const std::size_t bits = state_bits(traj.states.back());
            const auto degree = static_cast<std::size_t>(std::max(1, sys.degree()));
            if (bits > 0 && bits * degree + 64 > budget.max_bits) {
                traj.truncated_at = s + 1;
                break;
            }
        }
        StateVector next;
        try {
            next = eval_rhs(sys, traj.states.back());
        } catch (const OverflowError&) {
            traj.truncated_at = s + 1;
            break;
        }
        if (sys.regime() == Regime::Exact && state_bits(next) > budget.max_bits) {
            traj.truncated_at = s + 1;
            break;
        }
        traj.states.push_back(std::move(next));
    }
    return traj;
}

BigExponent geometric_exponent(int degree, int step) {
    if (degree < 2) {
        throw DomainError("geometric_exponent: degree must be >= 2, got " +
                          std::to_string(degree));
    }
    if (step < 0) throw DomainError("geometric_exponent: negative step");
    BigInt power;  // M^s
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(degree),
                  static_cast<unsigned long>(step));
    BigInt numerator = power - 1;
    BigInt result;
    mpz_divexact_ui(result.get_mpz_t(), numerator.get_mpz_t(),
                    static_cast<unsigned long>(degree - 1));
    return result;
}

StateVector closed_form_state(const StateVector& z0, const Scalar& Z,
                              int degree, int step, const EvalBudget& budget) {
    if (degree < 2) {
        throw DomainError("closed_form_state: degree must be >= 2, got " +
                          std::to_string(degree));
    }
    if (step < 0) throw DomainError("closed_form_state: negative step");
    const Regime regime = state_regime(z0);
    if (Z.regime() != regime) {
        throw RegimeError("closed_form_state: Z regime does not match z0");
    }

    BigInt power;  // M^s
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(degree),
                  static_cast<unsigned long>(step));
    const BigExponent last_exp = power - 1;                    // M^s - 1
    const BigExponent z_exp = geometric_exponent(degree, step);  // (M^s-1)/(M-1)

    const std::optional<std::size_t> bits =
        regime == Regime::Exact ? std::optional<std::size_t>(budget.max_bits)
                                : std::nullopt;
    const Scalar last_pow = pow_int(z0.z.back(), last_exp, bits);
    const Scalar z_pow = pow_int(Z, z_exp, bits);
    const Scalar common = last_pow * z_pow;

    StateVector out;
    out.step = step;
    out.z.reserve(z0.z.size());
    for (const Scalar& zn0 : z0.z) {
        Scalar value = zn0 * common;
        if (bits && bit_size(value) > *bits) {
            throw SizeBudgetError("closed_form_state: component of " +
                                      std::to_string(bit_size(value)) +
                                      " bits exceeds budget " +
                                      std::to_string(*bits),
                                  bit_size(value), *bits);
        }
        out.z.push_back(std::move(value));
    }
    return out;
}

}  // namespace polydeq
