#pragma once

#include <stdexcept>
#include <string>

namespace rolegraph {

// Base of every error raised by the library. The CLI maps ConfigError to
// exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (hyperparameters, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents: bad magic, truncated payload, unparsable lines.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Payload length disagrees with the length its header implies.
class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};

// A label string outside the 13-category taxonomy.
class TaxonomyError : public Error {
 public:
  using Error::Error;
};

class DuplicateKeyError : public Error {
 public:
  using Error::Error;
};

// Structural problems in a corpus or partition: non-contiguous sentence
// indices, unknown documents, missing supervision, ordering violations.
class CorpusError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf, zero-norm vectors and similar numerical failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rolegraph
