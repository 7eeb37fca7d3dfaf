#pragma once

#include <stdexcept>
#include <string>

namespace drcount {

/// Base for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or unreadable configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable asset (mesh, image, library index).
class AssetError : public Error {
 public:
  using Error::Error;
};

}  // namespace drcount
