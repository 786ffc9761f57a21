#pragma once

#include <string>
#include <utility>
#include <vector>

#include "classification.hpp"
#include "measure.hpp"

namespace framelab {

// A measurable family of vectors in F^n over a finite measure space: one
// vector per point, stored as the rows of an N x n matrix.
template <class T>
class VectorFamily {
 public:
  using scalar_type = T;
  static constexpr ScaleFloor kScaleFloor = ScaleFloor::Unit;

  VectorFamily(DiscreteMeasureSpace space, Mat<T> vectors)
      : space_(std::move(space)), vectors_(std::move(vectors)) {
    if (vectors_.rows() != space_.size())
      throw dimension_error("VectorFamily: " + std::to_string(vectors_.rows()) +
                            " vectors for " + std::to_string(space_.size()) +
                            " points");
    if (vectors_.cols() < 1)
      throw dimension_error("VectorFamily: dimension must be at least 1");
    if (!finite_matrix<T>(vectors_))
      throw contract_error("VectorFamily: non-finite entry");
  }

  int points() const { return static_cast<int>(vectors_.rows()); }
  int dim() const { return static_cast<int>(vectors_.cols()); }
  const DiscreteMeasureSpace& space() const { return space_; }
  const Mat<T>& vectors() const { return vectors_; }

  // k-th coordinate function of the family, a vector of length N.
  Vec<T> coordinate(int k) const {
    if (k < 0 || k >= dim())
      throw dimension_error("VectorFamily::coordinate: index " + std::to_string(k));
    return vectors_.col(k);
  }

  static bool same_shape(const VectorFamily& a, const VectorFamily& b) {
    return a.dim() == b.dim() && a.space() == b.space();
  }

  // *this += c * other, entrywise over the shared space.
  void add_scaled(const VectorFamily& other, T c) {
    if (!same_shape(*this, other))
      throw dimension_error("VectorFamily::add_scaled: shape mismatch");
    vectors_ += c * other.vectors_;
  }

  std::vector<int> block_dims() const { return {dim()}; }

  // Frame operator S with S(k,l) = sum_i w_i u_i^k conj(u_i^l), assembled
  // from rank-one updates.
  void frame_blocks_into(std::vector<Mat<T>>& out) const {
    out.resize(1);
    Mat<T>& s = out[0];
    s.resize(dim(), dim());
    s.setZero();
    for (int i = 0; i < points(); ++i)
      s.noalias() += T(space_.weight(i)) *
                     (vectors_.row(i).transpose() * vectors_.row(i).conjugate());
  }

  // Same operator computed the other way: entrywise inner products of the
  // coordinate functions.  Kept as a genuinely separate code path.
  void gram_blocks_into(std::vector<Mat<T>>& out) const {
    out.resize(1);
    Mat<T>& g = out[0];
    g.resize(dim(), dim());
    for (int k = 0; k < dim(); ++k)
      for (int l = 0; l < dim(); ++l) {
        T acc = T(0);
        for (int i = 0; i < points(); ++i)
          acc += T(space_.weight(i)) * vectors_(i, k) * conj_val(vectors_(i, l));
        g(k, l) = acc;
      }
  }

 private:
  DiscreteMeasureSpace space_;
  Mat<T> vectors_;
};

// Analysis operator: v in F^n -> the function i -> <v, u_i>.
template <class T>
Vec<T> analysis(const VectorFamily<T>& fam, const Vec<T>& v) {
  if (v.size() != fam.dim())
    throw dimension_error("analysis: vector has length " + std::to_string(v.size()) +
                          ", family dimension is " + std::to_string(fam.dim()));
  return fam.vectors().conjugate() * v;
}

// Synthesis operator: coefficients c -> sum_i w_i c_i u_i, the adjoint of
// analysis with respect to the weighted l2 product.
template <class T>
Vec<T> synthesis(const VectorFamily<T>& fam, const Vec<T>& c) {
  if (c.size() != fam.points())
    throw dimension_error("synthesis: " + std::to_string(c.size()) +
                          " coefficients for " + std::to_string(fam.points()) +
                          " points");
  Vec<T> wc(fam.points());
  for (int i = 0; i < fam.points(); ++i) wc[i] = T(fam.space().weight(i)) * c[i];
  return fam.vectors().transpose() * wc;
}

template <class T>
Mat<T> frame_operator(const VectorFamily<T>& fam) {
  std::vector<Mat<T>> blocks;
  fam.frame_blocks_into(blocks);
  return std::move(blocks[0]);
}

// Gram matrix of the coordinate functions; equals the frame operator.
template <class T>
Mat<T> gram_columns(const VectorFamily<T>& fam) {
  std::vector<Mat<T>> blocks;
  fam.gram_blocks_into(blocks);
  return std::move(blocks[0]);
}

// Generic classification entry point shared by every family type.
template <class Fam>
FrameClassification classify_any(const Fam& fam, double tol = kDefaultTol) {
  std::vector<Mat<typename Fam::scalar_type>> blocks;
  fam.frame_blocks_into(blocks);
  return classify_blocks<typename Fam::scalar_type>(blocks, tol, Fam::kScaleFloor);
}

template <class T>
FrameClassification classify_family(const VectorFamily<T>& fam, double tol = kDefaultTol) {
  return classify_any(fam, tol);
}

// Family of iid Gaussian vectors: always Bessel (finitely many points), a
// frame only by luck of the draw.
template <class T>
VectorFamily<T> random_bessel(std::uint64_t seed, const DiscreteMeasureSpace& space, int n) {
  if (n < 1) throw dimension_error("random_bessel: dimension must be at least 1");
  SplitMix64 g = substream(seed, 0x62657373656cULL);
  Mat<T> v(space.size(), n);
  for (int i = 0; i < space.size(); ++i)
    for (int k = 0; k < n; ++k) v(i, k) = gaussian<T>(g);
  return VectorFamily<T>(space, std::move(v));
}

template <class T>
VectorFamily<T> random_bessel(std::uint64_t seed, int points, int n) {
  return random_bessel<T>(seed, DiscreteMeasureSpace::counting(points), n);
}

// Rejection-sample Gaussian families until one classifies as a frame with
// margin above `min_margin`.  Needs at least n points to be satisfiable.
template <class T>
VectorFamily<T> random_frame(std::uint64_t seed, const DiscreteMeasureSpace& space, int n,
                             double tol = kDefaultTol, double min_margin = 1e-6,
                             int max_tries = 100) {
  if (space.size() < n)
    throw infeasible_error("random_frame: " + std::to_string(space.size()) +
                           " points cannot span dimension " + std::to_string(n));
  for (int t = 0; t < max_tries; ++t) {
    VectorFamily<T> fam = random_bessel<T>(child_seed(seed, t), space, n);
    FrameClassification cls = classify_family(fam, tol);
    if (cls.is_frame() && cls.lower > min_margin * cls.upper) return fam;
  }
  throw generation_error("random_frame: retry budget exhausted");
}

template <class T>
VectorFamily<T> random_frame(std::uint64_t seed, int points, int n,
                             double tol = kDefaultTol, double min_margin = 1e-6,
                             int max_tries = 100) {
  return random_frame<T>(seed, DiscreteMeasureSpace::counting(points), n, tol,
                         min_margin, max_tries);
}

// Tight frame with frame constant `a`: orthonormalize the coordinate
// functions in the weighted l2 product (modified Gram-Schmidt with one
// reorthogonalization pass), then scale each to norm sqrt(a).
template <class T>
VectorFamily<T> random_tight_frame(std::uint64_t seed, const DiscreteMeasureSpace& space,
                                   int n, double a, int max_tries = 100) {
  if (space.size() < n)
    throw infeasible_error("random_tight_frame: " + std::to_string(space.size()) +
                           " points cannot span dimension " + std::to_string(n));
  if (!(a > 0.0) || !finite_scalar(a))
    throw contract_error("random_tight_frame: frame constant must be positive");
  const int N = space.size();
  for (int t = 0; t < max_tries; ++t) {
    SplitMix64 g = substream(child_seed(seed, t), 0x7469676874ULL);
    Mat<T> v(N, n);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < n; ++k) v(i, k) = gaussian<T>(g);
    bool ok = true;
    for (int pass = 0; pass < 2 && ok; ++pass) {
      for (int k = 0; k < n && ok; ++k) {
        Vec<T> col = v.col(k);
        for (int l = 0; l < k; ++l) {
          Vec<T> prev = v.col(l);
          col -= l2_inner<T>(col, prev, space) * prev;
        }
        double norm = std::sqrt(l2_norm_sq<T>(col, space));
        if (norm < 1e-8) {
          ok = false;
          break;
        }
        v.col(k) = col / T(norm);
      }
    }
    if (!ok) continue;
    v *= T(std::sqrt(a));
    return VectorFamily<T>(space, std::move(v));
  }
  throw generation_error("random_tight_frame: retry budget exhausted");
}

template <class T>
VectorFamily<T> random_tight_frame(std::uint64_t seed, int points, int n, double a,
                                   int max_tries = 100) {
  return random_tight_frame<T>(seed, DiscreteMeasureSpace::counting(points), n, a,
                               max_tries);
}

}  // namespace framelab
