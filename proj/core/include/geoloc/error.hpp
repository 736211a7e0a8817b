#pragma once

#include <stdexcept>
#include <string>

namespace geoloc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: lexicon files, corpora, configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A trainer could not produce a model (bad data, divergence, no convergence).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// A model was applied to rows it cannot score (missing features, bad file).
class PredictionError : public Error {
 public:
  using Error::Error;
};

/// A cross-validation run failed; the message carries the fold context.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace geoloc
