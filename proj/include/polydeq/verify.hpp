#ifndef POLYDEQ_VERIFY_HPP
#define POLYDEQ_VERIFY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polydeq/constraints.hpp"
#include "polydeq/dynamics.hpp"

namespace polydeq {

enum class Verdict { ExactMatch, WithinTolerance, Mismatch, Truncated };

const char* verdict_name(Verdict v);

enum class TruncationReason { None, FloatOverflow, SizeBudget };

struct StepDeviation {
    int step = 0;
    double max_abs = 0.0;
    double max_rel = 0.0;
};

// Step-by-step comparison of the iterated map against the closed form.
// ExactMatch requires the exact regime and zero deviation at every achieved
// step; Mismatch pinpoints the first offending (step, component).
struct VerificationReport {
    int horizon_requested = 0;
    int horizon_achieved = 0;
    Regime regime = Regime::Exact;
    double tol = 0.0;
    std::vector<StepDeviation> deviations;
    std::optional<int> truncated_at;
    TruncationReason truncation = TruncationReason::None;
    Verdict verdict = Verdict::ExactMatch;
    // (step, component), both 1-based component for display.
    std::optional<std::pair<int, int>> first_mismatch;
    bool degenerate = false;  // Z = 0: trajectory collapses to zero from s = 1
};

// Iterates the instance's system from z0 and compares every achieved step
// against closed_form_state. Exact regime demands equality; float regime
// demands relative deviation <= tol per component, where relative deviation
// is |a-b| / max(1, |a|, |b|). Never throws on overflow or budget exhaustion;
// those truncate the report.
VerificationReport verify_instance(const SolvableInstance& inst, int horizon,
                                   double tol, const EvalBudget& budget = {});

std::string format_report(const VerificationReport& report, bool color = false);

// The built-in N = 2, M = 4 demonstration: nine seeded coefficients, seeded
// ratio and Z. The coefficients leg fixes eight of the ten coefficients and
// solves the other two; the z-pivot leg fixes nine and solves Z plus the
// remaining one. Both legs are verified in the exact regime.
struct ExampleResult {
    SolvableInstance coefficients_instance;
    VerificationReport coefficients_report;
    SolvableInstance zpivot_instance;
    VerificationReport zpivot_report;
};

inline constexpr std::uint64_t kDefaultExampleSeed = 2021;
inline constexpr int kExampleHorizon = 4;

ExampleResult run_example(std::uint64_t seed = kDefaultExampleSeed);

}  // namespace polydeq

#endif  // POLYDEQ_VERIFY_HPP
