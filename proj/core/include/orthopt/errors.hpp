#pragma once

#include <stdexcept>
#include <string>

namespace orthopt {

/// Shape mismatch between matrix operands.
class dimension_error : public std::invalid_argument {
public:
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerically rank-deficient input where full column rank is required.
class rank_error : public std::runtime_error {
public:
  explicit rank_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-supplied parameter (tolerances, sigma bounds, ...).
class parameter_error : public std::invalid_argument {
public:
  explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Problem generation failed (e.g. singular operator matrix).
class generation_error : public std::runtime_error {
public:
  explicit generation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Objective or gradient evaluation produced a non-finite value.
class evaluation_error : public std::runtime_error {
public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterate became non-finite; carries the penalty/proximal parameters in play.
class divergence_error : public std::runtime_error {
public:
  divergence_error(const std::string& what, double beta, double eta)
      : std::runtime_error(what), beta(beta), eta(eta) {}
  double beta;
  double eta;
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orthopt
