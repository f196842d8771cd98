#pragma once

#include <stdexcept>
#include <string>

namespace tsq {

// Base class for all library errors so callers can catch everything at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-supplied values (non-positive omega, price, tau, ...).
struct InvalidInput : Error {
    using Error::Error;
};

// Drift/omega pair fails hypothesis (A); stationary density does not exist.
struct HypothesisAViolated : Error {
    using Error::Error;
};

// Adaptive quadrature exhausted its interval budget without meeting tolerance.
struct QuadratureNonConvergence : Error {
    using Error::Error;
};

// Richardson error estimate of a PDE solve exceeds the requested tolerance.
struct GridTooCoarse : Error {
    using Error::Error;
};

struct NegativeVariance : Error {
    using Error::Error;
};

// Adaptive time step in the transient Fokker-Planck solver fell below 1e-12.
struct StepSizeUnderflow : Error {
    using Error::Error;
};

// Evaluation point outside the solved grid.
struct OutOfGrid : Error {
    using Error::Error;
};

// Surface/density grids do not span each other where required.
struct DomainMismatch : Error {
    using Error::Error;
};

// The symbolic Taylor oracle only handles polynomial drift functions.
struct NonPolynomialDrift : Error {
    using Error::Error;
};

// Configuration / input-file parse failure (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace tsq
