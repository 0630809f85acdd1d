#pragma once

#include <stdexcept>
#include <string>

namespace shortdot {

// Bad parameters or malformed input. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A solve or integral whose result cannot be trusted. Maps to CLI exit
// code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// File system and parse failures. Maps to CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shortdot
