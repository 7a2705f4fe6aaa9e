#pragma once

#include <map>
#include <string>

#include "lppl/fitter.hpp"

namespace lppl {

/// Parses a flat key=value file ('#' comments and blank lines allowed).
/// Throws ParseError on lines without '=' or duplicate keys.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> parse_key_value_file(const std::string& path);

/// Applies recognized fitter keys onto cfg. Unknown keys or unparsable
/// values raise ParseError. Recognized keys:
///   tc_grid_lo_days, tc_grid_hi_days, tc_grid_step_days,
///   m_grid_lo, m_grid_hi, m_grid_step,
///   omega_grid_lo, omega_grid_hi, omega_grid_step,
///   refine_top_k, min_observations,
///   simplex_max_iterations, simplex_x_tolerance, simplex_f_tolerance,
///   bound_tc_lo_days, bound_tc_hi_days, bound_m_lo, bound_m_hi,
///   bound_omega_lo, bound_omega_hi
void apply_fit_config(FitConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace lppl
