#ifndef POLYDEQ_IO_HPP
#define POLYDEQ_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "polydeq/constraints.hpp"
#include "polydeq/dynamics.hpp"

namespace polydeq {

// Malformed or schema-violating document. All loaders here are strict:
// unknown fields, wrong types, out-of-range equations and duplicate
// (equation, exponents) keys are rejected with a message naming the field.
class ParseError : public Error {
public:
    using Error::Error;
};

using Json = nlohmann::json;

// Scalars: exact parts as strings "p" or "p/q", float parts as JSON numbers.
Json scalar_to_json(const Scalar& value);
Scalar scalar_from_json(const Json& j, Regime regime);

// System document:
// { "n_vars": N, "degree": M, "regime": "exact"|"float",
//   "coefficients": [ { "equation": n, "exponents": [m_1..m_N],
//                       "re": ..., "im": ... } ] }
// Equations are 1-based on this surface.
Json system_to_json(const HomogeneousSystem& sys);
HomogeneousSystem system_from_json(const Json& j);

Json state_to_json(const StateVector& state);
StateVector state_from_json(const Json& j, Regime regime);

// Instance bundle: { "system": ..., "z0": [...], "Z": ...,
//                    "certificate": { "max_residual": ..., "mode": ... } }
Json instance_to_json(const SolvableInstance& inst);
SolvableInstance instance_from_json(const Json& j);

// Solve request:
// { "mode": "coefficients"|"z-pivot"|"newton",
//   "designated": [ { "equation": n, "exponents": [...] } ],
//   "pivot_equation": n,
//   "guess": { "Z": ..., "ratios": [...] },
//   "tol": ..., "max_iter": ..., "max_halvings": ... }
// The guess block carries the given (Z, ratios) data in the linear modes and
// the starting point in newton mode (parsed as float regime there).
Json solve_spec_to_json(const SolveSpec& spec);
SolveSpec solve_spec_from_json(const Json& j, int n_vars, Regime system_regime);

struct CsvOptions {
    int digits = 17;       // significant digits for decimal rendering
    bool rational = false; // exact regime: emit "p/q" instead of decimals
};

// Header `step,re_z1,im_z1,...,re_zN,im_zN`, one row per achieved step.
std::string trajectory_to_csv(const Trajectory& traj, const CsvOptions& options = {});

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace polydeq

#endif  // POLYDEQ_IO_HPP
