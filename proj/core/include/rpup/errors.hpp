#pragma once

#include <stdexcept>
#include <string>

namespace rpup {

// Bad dimensions, bad configuration, failed validation. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// File and format problems. CLI exit code 2.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rpup
