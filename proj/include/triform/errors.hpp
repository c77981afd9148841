#pragma once

#include <stdexcept>
#include <string>

namespace triform {

/// Result would exceed the precision of the widest integer type used.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Checkpoint file is malformed or does not match the requested run.
class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace triform
