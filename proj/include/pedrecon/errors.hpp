#pragma once

#include <stdexcept>
#include <string>

namespace pedrecon {

// No state with finite posterior density was found within the attempt cap;
// the evidence contradicts every configuration the priors allow.
struct InitializationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every grid cell has zero likelihood.
struct ZeroMassPosterior : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Within-chain variance is zero; the scale reduction factor is undefined.
struct DegenerateVariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSkidEvidence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoRealRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Case-file problems. ParseError: the file is not valid JSON / not the
// expected shape. ValidationError: a case violates its invariants.
struct CaseFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : CaseFileError {
  using CaseFileError::CaseFileError;
};

struct ValidationError : CaseFileError {
  using CaseFileError::CaseFileError;
};

}  // namespace pedrecon
