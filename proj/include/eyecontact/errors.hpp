#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eyecontact {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- geometry ---

class InvalidIntrinsicsError : public Error {
public:
    using Error::Error;
};

class DegenerateModelError : public Error {
public:
    using Error::Error;
};

// A model point landed on or behind the camera plane (Z <= 0).
class ProjectionDegenerateError : public Error {
public:
    using Error::Error;
};

class InsufficientCorrespondencesError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, int iterations, double residual)
        : Error(msg + " (iterations=" + std::to_string(iterations) +
                ", residual=" + std::to_string(residual) + ")"),
          iterations(iterations),
          residual(residual) {}

    int iterations;
    double residual;
};

// Gaze ray points away from the camera plane and never crosses z = 0.
class NoIntersectionError : public Error {
public:
    using Error::Error;
};

// --- normalization ---

class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

class RollUndefinedError : public Error {
public:
    using Error::Error;
};

// --- pipeline ---

class InsufficientLandmarksError : public Error {
public:
    using Error::Error;
};

class MissingInputError : public Error {
public:
    using Error::Error;
};

class NoClusterError : public Error {
public:
    using Error::Error;
};

// --- classifier ---

class DegenerateTrainingError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

// --- evaluation / io ---

class InvalidConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + msg), line(line) {}

    std::size_t line;
};

class VersionMismatchError : public DataError {
public:
    using DataError::DataError;
};

class EmptyDatasetError : public DataError {
public:
    using DataError::DataError;
};

class FileError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace eyecontact
