#pragma once

#include <stdexcept>
#include <string>

namespace mmheat {

// Base for all domain-specific failures. Subcommands map these to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct FeatureTooFine : Error {
    using Error::Error;
};
struct DisconnectedDomain : Error {
    using Error::Error;
};
struct UnsupportedShape : Error {
    using Error::Error;
};
struct LinearSolveFailure : Error {
    LinearSolveFailure(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};
struct CollarTooThin : Error {
    using Error::Error;
};
struct GridMisaligned : Error {
    using Error::Error;
};
struct EmptyCompactSet : Error {
    using Error::Error;
};
struct RadiiTooFine : Error {
    using Error::Error;
};
struct CutoffUnsupported : Error {
    using Error::Error;
};
struct OnCutLocus : Error {
    using Error::Error;
};
struct MigcViolated : Error {
    using Error::Error;
};
struct WindowTooNarrow : Error {
    using Error::Error;
};
struct ResidualBelowNoise : Error {
    using Error::Error;
};
struct QuadratureFailure : Error {
    QuadratureFailure(const std::string& msg, double achieved)
        : Error(msg), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace mmheat
