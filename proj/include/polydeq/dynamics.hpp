#ifndef POLYDEQ_DYNAMICS_HPP
#define POLYDEQ_DYNAMICS_HPP

#include <optional>
#include <vector>

#include "polydeq/model.hpp"

namespace polydeq {

// Iterated states for s = 0..horizon. When iteration stops early (float
// overflow or exact size budget), truncated_at holds the first step that was
// not computed and states ends just before it.
struct Trajectory {
    std::vector<StateVector> states;
    std::optional<int> truncated_at;

    int achieved_horizon() const {
        return static_cast<int>(states.size()) - 1;
    }
};

// Exact-regime growth cap. Magnitudes grow doubly exponentially in s, so a
// runaway horizon would stall on numbers with billions of bits; anything past
// max_bits truncates instead.
struct EvalBudget {
    std::size_t max_bits = 1'000'000;
};

// One application of the map: component n is the coefficient-weighted sum of
// the stored monomials of equation n. The step label advances by one.
// Float regime throws OverflowError past the guard.
StateVector eval_rhs(const HomogeneousSystem& sys, const StateVector& z);

// Repeated eval_rhs from z0. Overflow and budget exhaustion truncate in-band
// (truncated_at) rather than erroring, so reports stay comparable.
Trajectory iterate(const HomogeneousSystem& sys, const StateVector& z0,
                   int horizon, const EvalBudget& budget = {});

// 1 + M + ... + M^{s-1} = (M^s - 1)/(M - 1), exactly, as a big integer.
BigExponent geometric_exponent(int degree, int step);

// The explicit solution z_n(s) = z_n(0) * z_N(0)^{M^s - 1} * Z^{(M^s-1)/(M-1)}.
// At s = 0 both exponents vanish and the result is z0 itself (0^0 = 1 covers
// Z = 0 and z_N(0) = 0 there). Exact regime throws SizeBudgetError past the
// budget; float regime throws OverflowError past the guard.
StateVector closed_form_state(const StateVector& z0, const Scalar& Z,
                              int degree, int step,
                              const EvalBudget& budget = {});

}  // namespace polydeq

#endif  // POLYDEQ_DYNAMICS_HPP
