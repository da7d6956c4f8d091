// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

// Error taxonomy. ValidationError covers precondition and input-shape
// failures (CLI exit code 2); NumericalError covers solver and
// convergence failures on well-formed input (CLI exit code 3).

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : ValidationError {
    explicit DimensionMismatch(const std::string& what) : ValidationError(what) {}
};

struct EnumerationCapExceeded : ValidationError {
    explicit EnumerationCapExceeded(const std::string& what) : ValidationError(what) {}
};

struct ProportionalityViolated : ValidationError {
    explicit ProportionalityViolated(const std::string& what) : ValidationError(what) {}
};

struct RegularityViolated : ValidationError {
    explicit RegularityViolated(const std::string& what) : ValidationError(what) {}
};

struct NotProper : ValidationError {
    explicit NotProper(const std::string& what) : ValidationError(what) {}
};

struct InvalidOptions : ValidationError {
    explicit InvalidOptions(const std::string& what) : ValidationError(what) {}
};

struct GridMismatch : ValidationError {
    explicit GridMismatch(const std::string& what) : ValidationError(what) {}
};

struct NonMeanZeroData : ValidationError {
    explicit NonMeanZeroData(const std::string& what) : ValidationError(what) {}
};

struct NotOnLevelSet : ValidationError {
    explicit NotOnLevelSet(const std::string& what) : ValidationError(what) {}
};

struct ProjectionDiverged : NumericalError {
    explicit ProjectionDiverged(const std::string& what) : NumericalError(what) {}
};

struct LinearSolveFailure : NumericalError {
    explicit LinearSolveFailure(const std::string& what) : NumericalError(what) {}
};

struct IntegratorFailure : NumericalError {
    explicit IntegratorFailure(const std::string& what) : NumericalError(what) {}
};

} // namespace vortex
