#pragma once

#include <stdexcept>
#include <string>

namespace ctxrec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files, referential-integrity failures, unknown ids.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration that fails validation. Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training or scoring failures (divergence, index out of range, bad shapes).
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxrec
