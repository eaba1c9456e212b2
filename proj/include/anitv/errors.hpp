#pragma once
// Exception hierarchy.  Everything the library throws derives from
// anitv::error so callers can catch a single base type; the concrete
// subclasses map onto the CLI exit codes.

#include <stdexcept>
#include <string>

namespace anitv {

class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-supplied parameter (sizes, ranges, enum values).
class parameter_error : public error {
public:
  using error::error;
};

// Argument outside a function's mathematical domain (e.g. phi at t < 0).
class domain_error : public error {
public:
  using error::error;
};

// Mismatched grid dimensions between images / operators.
class shape_error : public error {
public:
  using error::error;
};

// File reading/writing problems.
class io_error : public error {
public:
  using error::error;
};

// The inner solver produced non-finite values.
class divergence_error : public error {
public:
  using error::error;
};

// A frequency-domain solve hit a zero denominator.
class singularity_error : public error {
public:
  using error::error;
};

// A run violated an inequality the convergence theory guarantees;
// indicates an implementation bug, not a user mistake.
class theory_violation_error : public error {
public:
  using error::error;
};

// Clustering asked for more phases than the data supports.
class degenerate_cluster_error : public error {
public:
  using error::error;
};

}  // namespace anitv
