#pragma once

#include "mixobs/model.hpp"

#include <iosfwd>
#include <string>

namespace mixobs {

/// Parses the plain-text key=value model format:
///
///   n=102
///   k=1
///   common=normal(8,1)
///   anomalous=normal(0,1)
///
/// Distribution literals are normal(mean,variance) and dirac(mean).
/// Blank lines and lines starting with '#' are ignored.
/// Throws ConfigError on any malformed or missing key.
AnomalyModel parse_model_config(std::istream& in);
AnomalyModel parse_model_config_string(const std::string& text);
AnomalyModel load_model_config(const std::string& path);

/// Parses a distribution literal on its own: "normal(0,1)" or "dirac(8)".
Gaussian1D parse_distribution_literal(const std::string& text);

} // namespace mixobs
