#pragma once

#include <stdexcept>
#include <string>

namespace oscicell {

// Bad or inconsistent user-supplied parameters / configuration.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Interaction neighborhood does not fit the periodic domain (rho >= L/2).
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explicit step exceeds the CFL bound.
struct StepSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cell dropped below -1e-12 after an update; carries the offending cell.
struct PositivityFault : std::runtime_error {
  int ix;
  int itheta;
  double value;
  PositivityFault(int i, int j, double v)
      : std::runtime_error("positivity fault at cell (" + std::to_string(i) + "," +
                           std::to_string(j) + "): value " + std::to_string(v)),
        ix(i), itheta(j), value(v) {}
};

// Growth rate sits on a classification boundary (|lambda| below tolerance).
struct MarginalCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested value lies outside the range covered by a parametrized curve.
struct BoundaryRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field with zero total mass handed to diagnostics.
struct DegenerateField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mode integration produced a non-finite coefficient.
struct BlowupError : std::runtime_error {
  double t_last;
  explicit BlowupError(double t)
      : std::runtime_error("mode integration blew up near t = " + std::to_string(t)),
        t_last(t) {}
};

// Two trajectories sampled on incompatible time grids.
struct AlignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace oscicell
