#include "polydeq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic_draws.hpp"

namespace polydeq {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ExactMatch: return "ExactMatch";
        case Verdict::WithinTolerance: return "WithinTolerance";
        case Verdict::Mismatch: return "Mismatch";
        case Verdict::Truncated: return "Truncated";
    }
    return "?";
}

namespace {

double relative_deviation(double abs_dev, double mag_a, double mag_b) {
    return abs_dev / std::max({1.0, mag_a, mag_b});
}

}  // namespace

VerificationReport verify_instance(const SolvableInstance& inst, int horizon,
                                   double tol, const EvalBudget& budget) {
    if (horizon < 0) throw DomainError("verify_instance: negative horizon");
    VerificationReport report;
    report.horizon_requested = horizon;
    report.regime = inst.system.regime();
    report.tol = tol;
    report.degenerate = inst.Z.is_zero();

    const Trajectory traj = iterate(inst.system, inst.z0, horizon, budget);

    int achieved = -1;
    for (int s = 0; s <= traj.achieved_horizon(); ++s) {
        StateVector expected;
        try {
            expected =
                closed_form_state(inst.z0, inst.Z, inst.system.degree(), s, budget);
        } catch (const SizeBudgetError&) {
            report.truncated_at = s;
            report.truncation = TruncationReason::SizeBudget;
            break;
        } catch (const OverflowError&) {
            report.truncated_at = s;
            report.truncation = TruncationReason::FloatOverflow;
            break;
        }

        const StateVector& actual = traj.states[static_cast<std::size_t>(s)];
        StepDeviation dev;
        dev.step = s;
        for (std::size_t n = 0; n < actual.z.size(); ++n) {
            const Scalar& a = actual.z[n];
            const Scalar& b = expected.z[n];
            double abs_dev = 0.0;
            bool matches = true;
            if (report.regime == Regime::Exact) {
                matches = (a == b);
                if (!matches) abs_dev = magnitude(a - b);
            } else {
                abs_dev = std::abs(a.float_value() - b.float_value());
                matches = relative_deviation(abs_dev, magnitude(a),
                                             magnitude(b)) <= tol;
            }
            dev.max_abs = std::max(dev.max_abs, abs_dev);
            dev.max_rel = std::max(
                dev.max_rel, relative_deviation(abs_dev, magnitude(a), magnitude(b)));
            if (!matches && !report.first_mismatch) {
                report.first_mismatch = {s, static_cast<int>(n) + 1};
            }
        }
        report.deviations.push_back(dev);
        achieved = s;
        if (report.first_mismatch) break;
    }

    report.horizon_achieved = std::max(achieved, 0);
    if (traj.truncated_at &&
        (!report.truncated_at || *traj.truncated_at < *report.truncated_at)) {
        report.truncated_at = traj.truncated_at;
        report.truncation = report.regime == Regime::Float
                                ? TruncationReason::FloatOverflow
                                : TruncationReason::SizeBudget;
    }

    if (report.first_mismatch) {
        report.verdict = Verdict::Mismatch;
    } else if (report.horizon_achieved < horizon || report.deviations.empty()) {
        report.verdict = Verdict::Truncated;
    } else {
        report.verdict = report.regime == Regime::Exact
                             ? Verdict::ExactMatch
                             : Verdict::WithinTolerance;
    }
    return report;
}

std::string format_report(const VerificationReport& report, bool color) {
    const char* green = color ? "\033[32m" : "";
    const char* red = color ? "\033[31m" : "";
    const char* yellow = color ? "\033[33m" : "";
    const char* reset = color ? "\033[0m" : "";

    std::ostringstream out;
    const char* tint = report.verdict == Verdict::Mismatch
                           ? red
                           : (report.verdict == Verdict::Truncated ? yellow : green);
    out << "verdict: " << tint << verdict_name(report.verdict) << reset << "\n";
    out << "regime: " << regime_name(report.regime) << "\n";
    out << "horizon: requested " << report.horizon_requested << ", achieved "
        << report.horizon_achieved << "\n";
    if (report.regime == Regime::Float) {
        out << "tolerance: " << report.tol << "\n";
    }
    if (report.truncated_at) {
        out << "truncated at step " << *report.truncated_at << " ("
            << (report.truncation == TruncationReason::FloatOverflow
                    ? "float overflow"
                    : "size budget")
            << ")\n";
    }
    if (report.degenerate) {
        out << "degenerate: Z = 0, trajectory collapses to zero from s = 1\n";
    }
    for (const StepDeviation& dev : report.deviations) {
        out << "  s=" << dev.step << "  max|dz|=" << dev.max_abs
            << "  max rel=" << dev.max_rel << "\n";
    }
    if (report.first_mismatch) {
        out << "first mismatch: step " << report.first_mismatch->first
            << ", component " << report.first_mismatch->second << "\n";
    }
    return out.str();
}

ExampleResult run_example(std::uint64_t seed) {
    const int n_vars = 2;
    const int degree = 4;
    const Regime regime = Regime::Exact;

    // Nine seeded coefficients: four in equation 1, all five in equation 2.
    // Equation 1's (2,2) slot stays open for the linear solve in both legs.
    detail::DyadicDraws draws(seed);
    const std::vector<MultiIndex> indices = enumerate_multi_indices(n_vars, degree);
    const MultiIndex open_slot(std::vector<int>{2, 2});
    const MultiIndex last_slot(std::vector<int>{0, 4});

    HomogeneousSystem nine(n_vars, degree, regime);
    for (const MultiIndex& index : indices) {
        if (index == open_slot) continue;
        nine.set_coefficient(0, index, draws.nonzero_scalar(regime));
    }
    for (const MultiIndex& index : indices) {
        nine.set_coefficient(1, index, draws.nonzero_scalar(regime));
    }

    const Scalar r = draws.nonzero_scalar(regime);
    const Scalar Z = draws.nonzero_scalar(regime);
    const Scalar scale = draws.nonzero_scalar(regime);
    const RatioVector ratios = ratios_from_free({r}, regime);
    StateVector z0;
    z0.z = ratios.r;
    z0 = scale_state(z0, scale);

    ExampleResult result{
        SolvableInstance{nine, z0, Z, {}},
        {},
        SolvableInstance{nine, z0, Z, {}},
        {},
    };

    // Coefficients leg: eight known, two solved (equation 1 at (2,2),
    // equation 2 at (0,4)).
    {
        SolveSpec spec;
        spec.mode = SolveMode::Coefficients;
        spec.designated[0] = open_slot;
        spec.designated[1] = last_slot;
        // Drop equation 2's (0,4) so exactly eight coefficients are given.
        HomogeneousSystem base(n_vars, degree, regime);
        for (int n = 0; n < n_vars; ++n) {
            for (const auto& [index, value] : nine.terms(n)) {
                if (n == 1 && index == last_slot) continue;
                base.set_coefficient(n, index, value);
            }
        }
        HomogeneousSystem solved = solve_designated_coefficients(base, Z, ratios, spec);
        const auto residuals = constraint_residuals(solved, Z, ratios);
        result.coefficients_instance =
            SolvableInstance{std::move(solved), z0, Z,
                             {max_residual_magnitude(residuals),
                              SolveMode::Coefficients}};
        result.coefficients_report =
            verify_instance(result.coefficients_instance, kExampleHorizon, 0.0);
    }

    // Z-pivot leg: all nine known, equation 2 is the pivot, Z plus equation
    // 1's (2,2) solved.
    {
        SolveSpec spec;
        spec.mode = SolveMode::ZPivot;
        spec.pivot_equation = 1;
        spec.designated[0] = open_slot;
        auto [pivot_z, solved] = solve_z_pivot(nine, ratios, spec);
        const auto residuals = constraint_residuals(solved, pivot_z, ratios);
        result.zpivot_instance =
            SolvableInstance{std::move(solved), z0, pivot_z,
                             {max_residual_magnitude(residuals), SolveMode::ZPivot}};
        result.zpivot_report =
            verify_instance(result.zpivot_instance, kExampleHorizon, 0.0);
    }
    return result;
}

}  // namespace polydeq
