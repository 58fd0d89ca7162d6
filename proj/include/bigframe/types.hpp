#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace bigframe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Inner product <x, y>, linear in the first argument.
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

/// Relative tolerances controlling rank decisions, Hermiticity checks and
/// PSD clamping. rel_rank_tol left unset resolves to max(rows,cols)*eps*64.
struct SpectralTolerance {
  std::optional<double> rel_rank_tol{};
  double rel_sym_tol = 1e-10;
  double rel_psd_tol = 1e-10;

  double rank_tol(Eigen::Index rows, Eigen::Index cols) const {
    if (rel_rank_tol) return *rel_rank_tol;
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon() * 64.0;
  }
};

/// Valid lower/upper frame bound pair, 0 < lower <= upper.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct FrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSquare : FrameError {
  using FrameError::FrameError;
};
struct NotHermitian : FrameError {
  using FrameError::FrameError;
};
struct NotPSD : FrameError {
  using FrameError::FrameError;
};
struct NotPositive : FrameError {
  using FrameError::FrameError;
};
struct RangeNotIncluded : FrameError {
  using FrameError::FrameError;
};
struct DimensionMismatch : FrameError {
  using FrameError::FrameError;
};
struct ShapeMismatch : FrameError {
  using FrameError::FrameError;
};
struct IndexOutOfRange : FrameError {
  using FrameError::FrameError;
};
struct EmptyInput : FrameError {
  using FrameError::FrameError;
};
struct NonPositiveBound : FrameError {
  using FrameError::FrameError;
};
struct ZeroTailNorm : FrameError {
  using FrameError::FrameError;
};
struct NormBelowOne : FrameError {
  using FrameError::FrameError;
};
struct CommutatorTooLarge : FrameError {
  using FrameError::FrameError;
};
struct NotTight : FrameError {
  using FrameError::FrameError;
};
struct KStarNotSurjective : FrameError {
  using FrameError::FrameError;
};
struct ParamsInvalid : FrameError {
  using FrameError::FrameError;
};
struct SpecInvalid : FrameError {
  using FrameError::FrameError;
};

/// Parse failure for the bigframe text format; carries the 1-based line.
struct ParseError : FrameError {
  int line;
  ParseError(int line_, const std::string& reason)
      : FrameError("parse: line " + std::to_string(line_) + ": " + reason),
        line(line_) {}
};

inline double frobenius(const Matrix& m) { return m.norm(); }

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace bigframe
