#pragma once

#include <stdexcept>
#include <string>

namespace shamap {

// Malformed or inconsistent input data (bad file bytes, ragged CSV rows,
// shape mismatches between paired inputs).
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// An algorithmic precondition does not hold for otherwise well-formed data:
// disconnected neighbor graph, degenerate reference point, non-positive
// eigenvalue selected for embedding, duplicate points fed to Sammon.
class PreconditionError : public std::runtime_error {
public:
  explicit PreconditionError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace shamap
