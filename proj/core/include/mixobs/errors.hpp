#pragma once

#include <stdexcept>
#include <string>

namespace mixobs {

/// Bad user-supplied configuration: model files, design parameters,
/// size caps. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Model degeneracy: zero-variance output laws where a density is needed,
/// or indistinguishable hypotheses (exponent 0). CLI maps this to exit code 3.
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mixobs
