#pragma once

#include <stdexcept>
#include <string>

namespace lfd {

struct ConfigurationError : std::runtime_error {
    explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : ConfigurationError {
    using ConfigurationError::ConfigurationError;
};

/// Carries the key path of the offending configuration entry.
struct ValidationError : ConfigurationError {
    std::string key;
    ValidationError(std::string k, const std::string& what)
        : ConfigurationError(k + ": " + what), key(std::move(k)) {}
};

struct NotAdmissible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    double last_residual;
    NoConvergence(const std::string& what, double res)
        : std::runtime_error(what), last_residual(res) {}
};

struct SingularKernel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldGridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EpsilonMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowNotCovered : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateDistribution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizationViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Saturated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MomentCorrectionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lfd
