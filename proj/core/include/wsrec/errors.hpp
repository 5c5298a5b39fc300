#pragma once

#include <stdexcept>
#include <string>

namespace wsrec {

/// Invalid or inconsistent input data (files, formats, id maps, shapes).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Embedding training failed (divergence, non-finite values).
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration or command-line usage.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wsrec
