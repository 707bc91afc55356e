#pragma once

// Plain-text linear model files for the CLI.  Format (see README for the
// exact grammar): a `dof N` line, the three matrices M, C, K as N rows of N
// numbers each introduced by their name, and one load line
//   load zero | load sin <a> | load exp
// followed, for sin and exp, by `amp` with N per-DOF amplitudes.  Values are
// parsed with strtod semantics; `#` starts a comment.

#include <iosfwd>
#include <string>

#include "substep/linear.hpp"

namespace substep {

LinearModel read_linear_model(std::istream& in);
LinearModel read_linear_model_file(const std::string& path);

}  // namespace substep
