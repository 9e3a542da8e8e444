#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace zmharvest {

// Numerical-contract violations thrown by the evaluation pipeline. Callers
// (notably the sweep driver) catch these per point and record them instead
// of aborting a whole run.

struct CutoffTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MaxSubdivisionsExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AccuracyDomainExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpecialFunctionOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AsymmetricDetectors : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenSolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested state is outside the Gaussian family the closed forms cover.
struct UnsupportedState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Oscillator-sector evaluation is implemented for one spatial dimension only.
struct UnsupportedDimension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested matrix element has no finite value (UV-divergent time-ordered
// integral of the derivative-coupled kernel at coincident detector positions).
struct DivergentElement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace zmharvest
