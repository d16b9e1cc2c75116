#pragma once

#include <map>
#include <string>

#include "kppwaves/problem.hpp"

namespace kppwaves {

/// Sectioned key-value configuration:
///
///   [diffusion]
///   kind = power            # or: expr
///   # expr = r^(-1/2) form: expr = 1/sqrt(r)
///   [reaction]
///   kind = expr
///   expr = r*(1-r)
///   [exponents]
///   gamma0 = 1
///   delta0 = 0
///   gamma1 = 1
///   delta1 = 0
///   [coefficients]
///   g0 = 1
///   g1 = 1
///   d0 = 1
///   d1 = 1
///
/// `kind = power` builds the pure power-law family from the exponents and
/// coefficients; `kind = expr` requires an `expr` key in the small
/// arithmetic grammar (variable r; +, -, *, /, ^, sqrt, exp, log).
/// Parse errors report line and column.
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string source_path;
};

ConfigFile parse_config(const std::string& text, const std::string& path = "<string>");
ConfigFile load_config(const std::string& path);

ProblemSpec problem_from_config(const ConfigFile& config);

/// Convenience: load + build in one call.
ProblemSpec load_problem(const std::string& path);

}  // namespace kppwaves
