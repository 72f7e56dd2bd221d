#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace octaframe {

/// Base for all library errors. Callers that only care about success can catch this.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameters (bad p, epsilon out of range, malformed constraint file).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error
{
public:
    using Error::Error;
};

/// Mesh failed validation. `items` lists the offending faces/edges/lines, when known.
class MeshError : public Error
{
public:
    enum class Kind { Parse, DegenerateFace, NonManifoldEdge, Orientation, IndexRange, Geometry };

    MeshError(Kind kind, std::string message, std::vector<std::string> items = {})
        : Error(std::move(message))
        , kind_(kind)
        , items_(std::move(items))
    {}

    Kind kind() const { return kind_; }
    const std::vector<std::string>& items() const { return items_; }

private:
    Kind kind_;
    std::vector<std::string> items_;
};

/// Numerical failure in a solver backend (singular system, infeasible prescription).
class SolverError : public Error
{
public:
    using Error::Error;
};

/// Raised when a frame has (numerically) no tangential part, so no cross can be read from it.
class DegenerateFrameError : public Error
{
public:
    using Error::Error;
};

} // namespace octaframe
