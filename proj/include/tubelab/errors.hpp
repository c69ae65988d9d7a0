#pragma once

#include <stdexcept>
#include <string>

namespace tubelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested scale is finer than the data resolution, or outside [0, kMaxScale].
class ScaleError : public Error {
 public:
  using Error::Error;
};

// Exact arithmetic overflow or a coordinate outside the supported box.
class RangeError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A theorem hypothesis failed. `witness` is a JSON document describing it.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string hypothesis, std::string witness)
      : Error("hypothesis violated: " + hypothesis),
        hypothesis_(std::move(hypothesis)),
        witness_(std::move(witness)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string hypothesis_;
  std::string witness_;
};

}  // namespace tubelab
