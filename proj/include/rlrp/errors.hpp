#ifndef RLRP_ERRORS_HPP
#define RLRP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rlrp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver configuration violates one of its preconditions.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Two operands (images, masks, kernels) have incompatible dimensions.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// An iterate became non-finite.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SvdFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroReference : public Error {
public:
    using Error::Error;
};

/// Image too small for a windowed metric.
class TooSmall : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents; carries the byte offset where parsing stopped.
class FormatError : public IoError {
public:
    FormatError(const std::string& what, std::size_t offset)
        : IoError(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace rlrp

#endif  // RLRP_ERRORS_HPP
