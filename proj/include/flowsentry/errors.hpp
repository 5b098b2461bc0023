#pragma once

#include <stdexcept>
#include <string>

namespace flowsentry {

// Base class for every error the library raises on a named contract
// violation. Callers that only care about "did it fail" can catch this.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pcap-ingest
struct BadMagic : Error {
  using Error::Error;
};
struct UnsupportedLinkType : Error {
  using Error::Error;
};
struct Truncated : Error {
  using Error::Error;
};
struct MalformedHeader : Error {
  using Error::Error;
};
struct UnorderedInput : Error {
  using Error::Error;
};

// scan-sim
struct Unreachable : Error {
  using Error::Error;
};
struct InvalidAction : Error {
  using Error::Error;
};

// feature-pipeline
struct EmptyTrainingSet : Error {
  using Error::Error;
};
struct EmptyInput : Error {
  using Error::Error;
};

// neuralnet
struct ShapeMismatch : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct EmptyDataset : Error {
  using Error::Error;
};

// baselines / eval-metrics
struct SingleClassTraining : Error {
  using Error::Error;
};
struct SingleClassLabels : Error {
  using Error::Error;
};

// cli / artifacts
struct ConfigError : Error {
  using Error::Error;
};
struct IoFailure : Error {
  using Error::Error;
};
struct MissingArtifact : Error {
  using Error::Error;
};

}  // namespace flowsentry
