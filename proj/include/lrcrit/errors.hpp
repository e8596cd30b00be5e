#pragma once

#include <stdexcept>
#include <string>

namespace lrcrit {

// Caller handed us something outside a documented domain. Messages name the
// offending key so CLI config errors point at the right line.
struct invalid_params : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct step_size_error : invalid_params {
    using invalid_params::invalid_params;
};

struct grid_mismatch_error : invalid_params {
    using invalid_params::invalid_params;
};

struct insufficient_points : invalid_params {
    using invalid_params::invalid_params;
};

// A computation failed at runtime on admissible inputs.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_mode_error : numeric_error {
    using numeric_error::numeric_error;
};

struct quadrature_error : numeric_error {
    using numeric_error::numeric_error;
};

struct no_peak_error : numeric_error {
    using numeric_error::numeric_error;
};

struct no_bracket_error : numeric_error {
    using numeric_error::numeric_error;
};

}
