#pragma once

#include <stdexcept>
#include <string>

namespace flarespot {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class EmptyWindowError : public Error {
public:
    explicit EmptyWindowError(const std::string& msg) : Error(msg) {}
};

class OutOfBoundsError : public Error {
public:
    explicit OutOfBoundsError(const std::string& msg) : Error(msg) {}
};

class OutOfWindowError : public Error {
public:
    explicit OutOfWindowError(const std::string& msg) : Error(msg) {}
};

class ImageTooSmallError : public Error {
public:
    explicit ImageTooSmallError(const std::string& msg) : Error(msg) {}
};

class HoleTooLargeError : public Error {
public:
    explicit HoleTooLargeError(const std::string& msg) : Error(msg) {}
};

class BothEmptyError : public Error {
public:
    explicit BothEmptyError(const std::string& msg) : Error(msg) {}
};

class OutOfGamutError : public Error {
public:
    explicit OutOfGamutError(const std::string& msg) : Error(msg) {}
};

class ManifestError : public Error {
public:
    explicit ManifestError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace flarespot
