// polydeq CLI: constructs, solves, iterates and verifies explicitly solvable
// systems of first-order difference equations with homogeneous polynomial
// right-hand sides.
//
// Exit codes: 0 ok / ExactMatch / WithinTolerance, 1 Mismatch,
//             2 input error, 3 solver failure.

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "polydeq/io.hpp"
#include "polydeq/verify.hpp"

namespace {

using namespace polydeq;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

bool use_color() {
    return isatty(fileno(stdout)) && std::getenv("NO_COLOR") == nullptr;
}

void emit(const std::optional<std::string>& out_path, const std::string& text) {
    if (out_path) {
        write_text_file(*out_path, text);
    } else {
        std::cout << text;
    }
}

// Loads and validates a system document; validation violations are input
// errors.
HomogeneousSystem load_system(const std::string& path) {
    const HomogeneousSystem sys = system_from_json(read_json_file(path));
    const auto violations = validate_system(sys);
    if (!violations.empty()) {
        std::string msg = path + ": invalid system";
        for (const Violation& v : violations) msg += "\n  " + to_string(v);
        throw ParseError(msg);
    }
    return sys;
}

Regime parse_regime(const std::string& name) {
    if (name == "exact") return Regime::Exact;
    if (name == "float") return Regime::Float;
    throw ParseError("regime must be \"exact\" or \"float\", got \"" + name +
                     "\"");
}

SolveMode parse_generator_mode(const std::string& name) {
    if (name == "coefficients") return SolveMode::Coefficients;
    if (name == "z-pivot") return SolveMode::ZPivot;
    throw ParseError("generator mode must be \"coefficients\" or \"z-pivot\", "
                     "got \"" + name + "\"");
}

int verdict_exit(Verdict verdict) {
    return verdict == Verdict::Mismatch ? kExitMismatch : kExitOk;
}

struct SolveOutput {
    SolvableInstance instance;
    std::string note;
};

SolveOutput run_solve(const HomogeneousSystem& sys, const SolveSpec& spec) {
    if (spec.mode == SolveMode::NewtonRatios) {
        const HomogeneousSystem fsys =
            sys.regime() == Regime::Float ? sys : sys.to_float();
        const NewtonResult result = newton_solve(fsys, spec);
        if (!result.converged) {
            std::ostringstream msg;
            msg << "newton did not converge: residual inf-norm "
                << std::scientific << std::setprecision(3)
                << result.residual_norm << " after " << result.iterations
                << " iterations";
            throw Error(msg.str());
        }
        StateVector z0;
        z0.z = result.ratios.r;
        SolvableInstance inst{fsys, z0, result.Z,
                              {result.residual_norm, SolveMode::NewtonRatios}};
        std::ostringstream note;
        note << "newton converged in " << result.iterations
             << " iterations, residual inf-norm " << std::scientific
             << std::setprecision(3) << result.residual_norm;
        return {std::move(inst), note.str()};
    }

    if (!spec.free_ratios) {
        throw ParseError("solve spec: guess.ratios is required in the linear "
                         "modes (the given initial-data ratios)");
    }
    const RatioVector ratios = ratios_from_free(*spec.free_ratios, sys.regime());
    Scalar Z = Scalar::zero(sys.regime());
    HomogeneousSystem solved(1, 2, sys.regime());
    if (spec.mode == SolveMode::Coefficients) {
        if (!spec.Z) {
            throw ParseError("solve spec: guess.Z is required in coefficients "
                             "mode (the given Z)");
        }
        Z = *spec.Z;
        solved = solve_designated_coefficients(sys, Z, ratios, spec);
    } else {
        if (spec.pivot_equation < 0) {
            throw ParseError("solve spec: pivot_equation is required in "
                             "z-pivot mode");
        }
        std::tie(Z, solved) = solve_z_pivot(sys, ratios, spec);
    }
    StateVector z0;
    z0.z = ratios.r;
    const auto residuals = constraint_residuals(solved, Z, ratios);
    SolvableInstance inst{std::move(solved), std::move(z0), Z,
                          {max_residual_magnitude(residuals), spec.mode}};
    std::ostringstream note;
    note << "max residual magnitude " << std::scientific << std::setprecision(3)
         << inst.certificate.max_residual;
    return {std::move(inst), note.str()};
}

int run(int argc, char** argv) {
    CLI::App app{
        "Explicitly solvable systems of first-order difference equations "
        "with homogeneous polynomial right-hand sides"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string regime_flag = "exact";
    app.add_option("--regime", regime_flag,
                   "numeric regime for generate/closed-form: exact | float")
        ->capture_default_str();

    // enumerate
    auto* enumerate_cmd =
        app.add_subcommand("enumerate", "List the degree-M multi-indices over "
                                        "N variables in canonical order");
    int enum_n = 0;
    int enum_m = 0;
    enumerate_cmd->add_option("N", enum_n, "number of variables")->required();
    enumerate_cmd->add_option("M", enum_m, "degree")->required();

    // generate
    auto* generate_cmd = app.add_subcommand(
        "generate", "Generate a seeded random solvable instance");
    int gen_n = 0;
    int gen_m = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_mode = "coefficients";
    double gen_density = 0.5;
    std::optional<std::string> gen_out;
    generate_cmd->add_option("--n", gen_n, "number of variables")->required();
    generate_cmd->add_option("--m", gen_m, "degree (>= 2)")->required();
    generate_cmd->add_option("--seed", gen_seed, "RNG seed");
    generate_cmd->add_option("--mode", gen_mode,
                             "construction mode: coefficients | z-pivot");
    generate_cmd->add_option("--density", gen_density,
                             "coefficient draw probability in (0,1]");
    generate_cmd->add_option("--out", gen_out, "output instance JSON path");

    // solve
    auto* solve_cmd = app.add_subcommand(
        "solve", "Close the constraints per a solve-spec document");
    std::string solve_system_path;
    std::string solve_spec_path;
    std::optional<std::string> solve_out;
    solve_cmd->add_option("--system", solve_system_path, "system JSON")
        ->required();
    solve_cmd->add_option("--spec", solve_spec_path, "solve-spec JSON")
        ->required();
    solve_cmd->add_option("--out", solve_out, "output instance JSON path");

    // iterate
    auto* iterate_cmd =
        app.add_subcommand("iterate", "Iterate the map and emit trajectory CSV");
    std::string iter_system_path;
    std::string iter_init_path;
    int iter_steps = 0;
    std::optional<std::string> iter_out;
    CsvOptions iter_csv;
    std::size_t iter_max_bits = EvalBudget{}.max_bits;
    iterate_cmd->add_option("--system", iter_system_path, "system JSON")
        ->required();
    iterate_cmd->add_option("--init", iter_init_path,
                            "initial state JSON (array of {re, im})")
        ->required();
    iterate_cmd->add_option("--steps", iter_steps, "horizon s_max")->required();
    iterate_cmd->add_option("--out", iter_out, "output CSV path");
    iterate_cmd->add_option("--digits", iter_csv.digits,
                            "significant digits (>= 17 round-trips)");
    iterate_cmd->add_flag("--rational", iter_csv.rational,
                          "emit exact values as p/q");
    iterate_cmd->add_option("--max-bits", iter_max_bits,
                            "exact-regime size budget in bits");

    // closed-form
    auto* closed_cmd = app.add_subcommand(
        "closed-form", "Evaluate the explicit solution and emit CSV");
    std::string cf_init_path;
    std::string cf_z_text;
    int cf_m = 0;
    int cf_steps = 0;
    std::optional<std::string> cf_out;
    CsvOptions cf_csv;
    std::size_t cf_max_bits = EvalBudget{}.max_bits;
    closed_cmd->add_option("--init", cf_init_path, "initial state JSON")
        ->required();
    closed_cmd
        ->add_option("--z", cf_z_text, "Z as inline JSON, e.g. "
                                       "'{\"re\": \"3/2\", \"im\": \"0\"}'")
        ->required();
    closed_cmd->add_option("--m", cf_m, "degree (>= 2)")->required();
    closed_cmd->add_option("--steps", cf_steps, "horizon s_max")->required();
    closed_cmd->add_option("--out", cf_out, "output CSV path");
    closed_cmd->add_option("--digits", cf_csv.digits, "significant digits");
    closed_cmd->add_flag("--rational", cf_csv.rational,
                         "emit exact values as p/q");
    closed_cmd->add_option("--max-bits", cf_max_bits,
                           "exact-regime size budget in bits");

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "Check an instance: iteration against the closed form");
    std::string verify_instance_path;
    int verify_horizon = 5;
    double verify_tol = 1e-9;
    std::size_t verify_max_bits = EvalBudget{}.max_bits;
    verify_cmd->add_option("--instance", verify_instance_path, "instance JSON")
        ->required();
    verify_cmd->add_option("--horizon", verify_horizon, "steps to compare");
    verify_cmd->add_option("--tol", verify_tol,
                           "relative tolerance (float regime)");
    verify_cmd->add_option("--max-bits", verify_max_bits,
                           "exact-regime size budget in bits");

    // example
    auto* example_cmd = app.add_subcommand(
        "example", "Run the built-in N=2, M=4 demonstration");
    std::uint64_t example_seed = kDefaultExampleSeed;
    example_cmd->add_option("--seed", example_seed, "seed for the drawn data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*enumerate_cmd) {
            for (const MultiIndex& mi : enumerate_multi_indices(enum_n, enum_m)) {
                std::string line;
                for (int i = 0; i < mi.size(); ++i) {
                    if (i) line += " ";
                    line += std::to_string(mi.exponents[i]);
                }
                std::cout << line << "\n";
            }
            return kExitOk;
        }

        if (*generate_cmd) {
            const SolvableInstance inst = random_solvable_instance(
                gen_n, gen_m, gen_seed, parse_generator_mode(gen_mode),
                gen_density, parse_regime(regime_flag));
            emit(gen_out, instance_to_json(inst).dump(2) + "\n");
            return kExitOk;
        }

        if (*solve_cmd) {
            const HomogeneousSystem sys = load_system(solve_system_path);
            const SolveSpec spec = solve_spec_from_json(
                read_json_file(solve_spec_path), sys.n_vars(), sys.regime());
            try {
                SolveOutput output = run_solve(sys, spec);
                std::cerr << output.note << "\n";
                emit(solve_out, instance_to_json(output.instance).dump(2) + "\n");
                return kExitOk;
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return kExitSolver;
            }
        }

        if (*iterate_cmd) {
            const HomogeneousSystem sys = load_system(iter_system_path);
            StateVector z0 =
                state_from_json(read_json_file(iter_init_path), sys.regime());
            if (static_cast<int>(z0.z.size()) != sys.n_vars()) {
                throw ParseError("initial state length does not match n_vars");
            }
            const Trajectory traj =
                iterate(sys, z0, iter_steps, EvalBudget{iter_max_bits});
            if (traj.truncated_at) {
                std::cerr << "trajectory truncated at step " << *traj.truncated_at
                          << "\n";
            }
            emit(iter_out, trajectory_to_csv(traj, iter_csv));
            return kExitOk;
        }

        if (*closed_cmd) {
            const Regime regime = parse_regime(regime_flag);
            StateVector z0 =
                state_from_json(read_json_file(cf_init_path), regime);
            const Json z_doc = Json::parse(cf_z_text, nullptr, false);
            if (z_doc.is_discarded()) {
                throw ParseError("--z is not valid JSON: " + cf_z_text);
            }
            const Scalar Z = scalar_from_json(z_doc, regime);
            Trajectory traj;
            for (int s = 0; s <= cf_steps; ++s) {
                try {
                    traj.states.push_back(
                        closed_form_state(z0, Z, cf_m, s, EvalBudget{cf_max_bits}));
                } catch (const SizeBudgetError&) {
                    traj.truncated_at = s;
                    break;
                } catch (const OverflowError&) {
                    traj.truncated_at = s;
                    break;
                }
            }
            if (traj.truncated_at) {
                std::cerr << "closed form truncated at step "
                          << *traj.truncated_at << "\n";
            }
            emit(cf_out, trajectory_to_csv(traj, cf_csv));
            return kExitOk;
        }

        if (*verify_cmd) {
            const SolvableInstance inst =
                instance_from_json(read_json_file(verify_instance_path));
            const VerificationReport report = verify_instance(
                inst, verify_horizon, verify_tol, EvalBudget{verify_max_bits});
            std::cout << format_report(report, use_color());
            return verdict_exit(report.verdict);
        }

        if (*example_cmd) {
            const ExampleResult ex = run_example(example_seed);
            std::cout << "coefficients mode: 8 of 10 coefficients given, 2 "
                         "solved\n";
            std::cout << format_report(ex.coefficients_report, use_color());
            std::cout << "\nz-pivot mode: 9 of 10 coefficients given, Z and 1 "
                         "solved (Z = "
                      << to_string(ex.zpivot_instance.Z) << ")\n";
            std::cout << format_report(ex.zpivot_report, use_color());
            const bool ok =
                ex.coefficients_report.verdict == Verdict::ExactMatch &&
                ex.zpivot_report.verdict == Verdict::ExactMatch;
            return ok ? kExitOk : kExitMismatch;
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const SingularJacobianError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
