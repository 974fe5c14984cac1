// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_ERRORS_HPP
#define SEQDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seqde {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix dimensions do not agree with the object they are used with.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// Covariance (or node covariance) matrix is not numerically positive definite.
class FactorizationFailure : public Error {
public:
  using Error::Error;
};

// A point coincides with an existing design point within tolerance.
class DuplicatePoint : public Error {
public:
  using Error::Error;
};

// Two density estimates share no bins above their support floors.
class NoOverlap : public Error {
public:
  using Error::Error;
};

// A map expected to be monotone increasing decreases beyond tolerance.
class NotMonotone : public Error {
public:
  using Error::Error;
};

// More than half of the objective evaluations in one optimizer iteration failed.
class ObjectiveFailure : public Error {
public:
  using Error::Error;
};

// Requested tensor grid exceeds the node cap.
class ResolutionTooLarge : public Error {
public:
  using Error::Error;
};

// An eigenvalue that must be positive is not.
class NonPositiveEigenvalue : public Error {
public:
  using Error::Error;
};

// The forward map threw or returned a non-finite value.
class MapEvaluationFailure : public Error {
public:
  using Error::Error;
};

// Checkpoint file missing, unreadable, or from an incompatible version.
class CorruptCheckpoint : public Error {
public:
  using Error::Error;
};

// Tabulated CSV data is not a complete row-major tensor grid.
class MalformedTable : public Error {
public:
  using Error::Error;
};

// ODE state left the finite range (step too large or parameters unstable).
class NonFiniteState : public Error {
public:
  using Error::Error;
};

// Experiment configuration is invalid (unknown key, missing field, bad value).
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace seqde

#endif // SEQDE_ERRORS_HPP
