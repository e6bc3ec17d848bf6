#pragma once

#include <stdexcept>
#include <string>

namespace trickle {

/// Base for failures raised by the numerical and simulation engines.
class engine_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class non_termination : public engine_error {
 public:
  using engine_error::engine_error;
};

class truncation_insufficient : public engine_error {
 public:
  using engine_error::engine_error;
};

class singular_matrix : public engine_error {
 public:
  using engine_error::engine_error;
};

class degenerate_input : public engine_error {
 public:
  using engine_error::engine_error;
};

}  // namespace trickle
