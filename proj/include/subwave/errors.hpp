#pragma once

#include <stdexcept>
#include <string>

namespace subwave {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature could not reach the requested tolerance within the subdivision budget.
struct NonConvergent : Error {
    using Error::Error;
};

struct InvalidInterval : Error {
    using Error::Error;
};

struct NonFiniteIntegrand : Error {
    using Error::Error;
};

// g = 0: f2 vanishes and xi = |f1/f2|^2 is undefined.
struct DegenerateGain : Error {
    using Error::Error;
};

// A scan does not bracket the abscissae an estimator needs.
struct InsufficientSpan : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace subwave
