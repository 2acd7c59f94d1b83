#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace raylf {

// Base for everything this library throws on bad input or bad data.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid in-memory objects: dimension mismatches, out-of-range
// parameters, inconsistent grids.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Filesystem / stream level failures.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed or truncated bitstream. Carries the byte offset at which the
// decoder gave up.
class DecodeError : public Error {
public:
    DecodeError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}

    std::size_t offset;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw StructuralError(msg);
}

} // namespace raylf
