#pragma once

#include <stdexcept>
#include <string>

#include "pcskel/graph.hpp"

namespace pcskel {

/// Malformed or unparsable input (files, matrices of the wrong shape).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Data that is well formed but statistically unusable, e.g. a constant column.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerically singular correlation submatrix for a partial-correlation query.
class DegenerateQueryError : public std::runtime_error {
public:
    DegenerateQueryError(const std::string& what, VertexSet vertices)
        : std::runtime_error(what), vertices_(std::move(vertices)) {}

    /// {i, j} followed by the conditioning set, 0-indexed.
    const VertexSet& vertices() const noexcept { return vertices_; }

private:
    VertexSet vertices_;
};

/// The sample test is undefined because n - |k| - 3 < 1.
class ConditioningSetTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range tuning parameter (alpha, m_max, s, p, replicates...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace pcskel
