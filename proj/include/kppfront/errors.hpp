// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace kppfront {

/// Machine-parsable error codes. The CLI prints `errc_name(code)` on exit.
enum class errc {
    bad_grid,
    hypothesis_violation,
    negative_temperature,
    config_not_found,
    config_parse,
    unknown_key,
    eigen_no_convergence,
    sign_ambiguity,
    precondition_mu0,
    bracket_not_found,
    speed_below_minimal,
    upper_bracket_not_found,
    degenerate_mu_zero,
    degenerate_boundary,
    cfl_violation,
    bound_invariant_broken,
    front_touched_boundary,
    sandwich_infeasible,
    no_crossing,
    too_few_samples,
    region_outside_grid,
    underflow_region,
    front_in_strip,
    not_converged,
    speed_not_admissible,
    parameter_search_failed,
    linear_solve_failed,
    condition42_fails,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::bad_grid: return "BAD_GRID";
    case errc::hypothesis_violation: return "HYPOTHESIS_VIOLATION";
    case errc::negative_temperature: return "NEGATIVE_TEMPERATURE";
    case errc::config_not_found: return "CONFIG_NOT_FOUND";
    case errc::config_parse: return "CONFIG_PARSE";
    case errc::unknown_key: return "UNKNOWN_KEY";
    case errc::eigen_no_convergence: return "EIGEN_NO_CONVERGENCE";
    case errc::sign_ambiguity: return "SIGN_AMBIGUITY";
    case errc::precondition_mu0: return "PRECONDITION_MU0";
    case errc::bracket_not_found: return "BRACKET_NOT_FOUND";
    case errc::speed_below_minimal: return "SPEED_BELOW_MINIMAL";
    case errc::upper_bracket_not_found: return "UPPER_BRACKET_NOT_FOUND";
    case errc::degenerate_mu_zero: return "DEGENERATE_MU_ZERO";
    case errc::degenerate_boundary: return "DEGENERATE_BOUNDARY";
    case errc::cfl_violation: return "CFL_VIOLATION";
    case errc::bound_invariant_broken: return "BOUND_INVARIANT_BROKEN";
    case errc::front_touched_boundary: return "FRONT_TOUCHED_BOUNDARY";
    case errc::sandwich_infeasible: return "SANDWICH_INFEASIBLE";
    case errc::no_crossing: return "NO_CROSSING";
    case errc::too_few_samples: return "TOO_FEW_SAMPLES";
    case errc::region_outside_grid: return "REGION_OUTSIDE_GRID";
    case errc::underflow_region: return "UNDERFLOW_REGION";
    case errc::front_in_strip: return "FRONT_IN_STRIP";
    case errc::not_converged: return "NOT_CONVERGED";
    case errc::speed_not_admissible: return "SPEED_NOT_ADMISSIBLE";
    case errc::parameter_search_failed: return "PARAMETER_SEARCH_FAILED";
    case errc::linear_solve_failed: return "LINEAR_SOLVE_FAILED";
    case errc::condition42_fails: return "CONDITION42_FAILS";
    case errc::io_error: return "IO_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace kppfront
