// Copyright 2026 The specbound Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECBOUND_ERRORS_HPP
#define SPECBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace specbound {

// Numerical failure: quadrature non-convergence, pole proximity,
// eigensolver breakdown, division by a vanishing gap.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// A theorem inequality that must hold under its gap condition was violated.
// Mapped to exit code 2 by the CLI.
class invariant_violation : public std::runtime_error {
 public:
  explicit invariant_violation(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace specbound

#endif  // SPECBOUND_ERRORS_HPP
