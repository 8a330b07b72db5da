#pragma once

// Smallest eigenvalue of a sparse symmetric matrix by shift-invert Lanczos
// with full reorthogonalization and explicit restarts. The shift is chosen
// below the spectrum, which is confirmed from the inertia of the LDL^T factor
// of A - sigma I, so the dominant eigenvalue of the inverse is the one sought.

#include <cstdint>
#include <vector>

#include "dnstrip/parallel.hpp"

namespace dnstrip {

struct LanczosOptions {
  double tol = 1e-10;        // on ||A x - mu x|| / (scale * ||x||)
  double scale = 1.0;        // energy scale for tol and for the shift ladder
  double shift_hint = 0.9;   // first shift tried, in units of scale
  int krylov_dim = 60;
  int max_restarts = 40;
  std::uint64_t seed = 20070701;
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct SparseEigenResult {
  double value = 0.0;
  double residual = 0.0;  // ||A x - value x|| for the returned unit vector
  int iterations = 0;     // Lanczos steps over all restarts
  int restarts = 0;
  double shift = 0.0;
  std::vector<double> vector;
};

// Throws ConvergenceError when the residual target is not met.
SparseEigenResult smallest_eigenpair(const RowMatrix& a, const LanczosOptions& opts = {});

}  // namespace dnstrip
