#pragma once

/// @file errors.hpp
/// @brief Exception types shared across the library.
///
/// Two failure classes cross module boundaries: input that violates a
/// documented precondition (validation_error) and filesystem trouble
/// (io_error).  The CLI maps them to exit codes 1 and 2 respectively.

#include <stdexcept>
#include <string>

namespace hiam {

/// Invalid parameters, malformed configuration, or violated preconditions.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable/unwritable files and other filesystem failures.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hiam
