#pragma once

#include <stdexcept>
#include <string>

namespace bcsbm {

// Malformed or inconsistent input data (files, ids, attribute indices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model quantity left its valid domain: zero rate on an observed entry,
// responsibility mass on a zero-weight node, and so on.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bcsbm
