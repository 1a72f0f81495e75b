#pragma once

#include <stdexcept>
#include <string>

namespace ppsim {

// Base class for every error the library throws on its own behalf.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Construction-time violation of a type invariant (negative rate, unsorted
// pattern, non-finite input, ...).
struct InvalidParams : Error {
    using Error::Error;
};

// Reproduction mass K >= 1: no stationary model exists.
struct MassNotSubcritical : Error {
    using Error::Error;
};

// The grid sum K^(Delta) >= 1: the chosen Delta is too coarse for the kernel.
struct DiscretizationSupercritical : Error {
    using Error::Error;
};

// The kernel tail cannot be truncated to tolerance within the coefficient cap.
struct TailTooHeavy : Error {
    using Error::Error;
};

// Bernoulli/probability parameter outside [0, 1].
struct InvalidProbability : Error {
    using Error::Error;
};

struct SeriesTooShort : Error {
    using Error::Error;
};

// Argument outside the supported domain (e.g. positive MGF arguments).
struct UnsupportedArgument : Error {
    using Error::Error;
};

// Window endpoints do not sit on the Delta-grid.
struct MisalignedWindow : Error {
    using Error::Error;
};

struct EmptySamples : Error {
    using Error::Error;
};

// Least-squares design matrix is rank deficient (e.g. constant series).
struct SingularDesign : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace ppsim
