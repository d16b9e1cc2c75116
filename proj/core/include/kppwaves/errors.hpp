#pragma once

#include <stdexcept>
#include <string>

namespace kppwaves {

// Input / specification problems (CLI exit code 1).
struct SpecViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExponentMismatch : SpecViolation {
    using SpecViolation::SpecViolation;
};
struct OutOfDomain : SpecViolation {
    using SpecViolation::SpecViolation;
};
struct InvalidExponent : SpecViolation {
    using SpecViolation::SpecViolation;
};
struct SpeedBelowCritical : SpecViolation {
    SpeedBelowCritical(const std::string& msg, double c_star_)
        : SpecViolation(msg), c_star(c_star_) {}
    double c_star;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) +
                             ", column " + std::to_string(column_)),
          line(line_), column(column_) {}
    int line;
    int column;
};

// Declared nonexistence (CLI exit code 2).
struct NoTravellingWave : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures (CLI exit code 3).
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepFailure : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct NonpositiveSpeed : SpecViolation {
    using SpecViolation::SpecViolation;
};
struct BracketFailure : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct NotASolution : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct QuadratureDivergenceUndetermined : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct InsufficientSupport : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct InsufficientSamples : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct CFLViolation : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct BlowUp : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};
struct FrontLost : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

}  // namespace kppwaves
