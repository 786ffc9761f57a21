#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "linalg.hpp"

namespace framelab {

inline constexpr double kDefaultTol = 1e-10;

enum class FrameKind { NotFrame, Frame, TightFrame, ParsevalFrame };

inline const char* frame_kind_name(FrameKind k) {
  switch (k) {
    case FrameKind::NotFrame: return "not_frame";
    case FrameKind::Frame: return "frame";
    case FrameKind::TightFrame: return "tight_frame";
    case FrameKind::ParsevalFrame: return "parseval_frame";
  }
  return "?";
}

// Outcome of classifying a positive operator presented as Hermitian blocks.
// `lower`/`upper` are the extreme eigenvalues across all blocks (the optimal
// frame bounds when the family is a frame); `margin` is lower/upper.
struct FrameClassification {
  FrameKind kind = FrameKind::NotFrame;
  double lower = 0.0;
  double upper = 0.0;
  double margin = 0.0;
  double tight_constant = 0.0;  // meaningful only for (near-)tight kinds
  double tight_deviation = 0.0; // Frobenius distance to tight_constant * identity

  bool is_frame() const { return kind != FrameKind::NotFrame; }
  bool is_tight() const {
    return kind == FrameKind::TightFrame || kind == FrameKind::ParsevalFrame;
  }
};

// Floor used when testing the smallest eigenvalue against tol.  `Unit`
// compares against tol * max(1, upper), so families of tiny overall scale are
// still rejected; `Spectral` compares against tol * upper, purely relative.
enum class ScaleFloor { Unit, Spectral };

inline double unit_floor(double upper) { return std::max(1.0, upper); }

// Classify the positive operator given by `blocks` (each Hermitian PSD up to
// roundoff).  Frame iff the smallest eigenvalue clears tol times the chosen
// floor; tight iff the whole operator is within tol (relative) of a scalar
// multiple of the identity; Parseval iff that scalar is 1 within tol.
template <class T>
FrameClassification classify_blocks(const std::vector<Mat<T>>& blocks, double tol,
                                    ScaleFloor floor) {
  if (blocks.empty()) throw dimension_error("classify_blocks: no blocks");
  FrameClassification out;
  out.lower = std::numeric_limits<double>::infinity();
  out.upper = -std::numeric_limits<double>::infinity();
  double trace_sum = 0.0;
  long dim_sum = 0;
  for (const Mat<T>& b : blocks) {
    SpectralBounds sb = hermitian_eigen_bounds<T>(b);
    out.lower = std::min(out.lower, sb.min);
    out.upper = std::max(out.upper, sb.max);
    for (Eigen::Index i = 0; i < b.rows(); ++i) trace_sum += real_part(b(i, i));
    dim_sum += b.rows();
  }
  out.margin = out.upper > 0.0 ? out.lower / out.upper : 0.0;

  double floor_value = floor == ScaleFloor::Unit ? unit_floor(out.upper) : out.upper;
  if (!(out.lower > tol * floor_value)) {
    out.kind = FrameKind::NotFrame;
    return out;
  }

  double a = trace_sum / static_cast<double>(dim_sum);
  // ||b - a I||_F^2 accumulated entrywise: the expanded form
  // ||b||^2 - 2a tr(b) + a^2 n cancels catastrophically near b = a I and
  // cannot resolve deviations below sqrt(eps) * a.
  double dev_sq = 0.0;
  for (const Mat<T>& b : blocks) {
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        dev_sq += abs2(b(i, j) - (i == j ? T(a) : T(0)));
  }
  out.tight_constant = a;
  out.tight_deviation = std::sqrt(std::max(0.0, dev_sq));
  if (out.tight_deviation <= tol * a) {
    out.kind = std::abs(a - 1.0) <= tol ? FrameKind::ParsevalFrame : FrameKind::TightFrame;
  } else {
    out.kind = FrameKind::Frame;
  }
  return out;
}

}  // namespace framelab
