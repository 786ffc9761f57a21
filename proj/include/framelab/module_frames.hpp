#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "classification.hpp"
#include "cstar_frames.hpp"
#include "measure.hpp"

namespace framelab {

// Shape of a direct sum of rectangular summands F^(m_j) (x) F^(k_j): the
// algebra block M_(m_j) acts on the left of each m_j x k_j block.
class ModuleSignature {
 public:
  explicit ModuleSignature(std::vector<std::pair<int, int>> summands)
      : summands_(std::move(summands)) {
    if (summands_.empty()) throw dimension_error("ModuleSignature: no summands");
    for (auto [m, k] : summands_)
      if (m < 1 || k < 1)
        throw dimension_error("ModuleSignature: summand sizes must be >= 1");
  }

  int summands() const { return static_cast<int>(summands_.size()); }
  int rows(int j) const { return summands_.at(j).first; }   // m_j
  int cols(int j) const { return summands_.at(j).second; }  // k_j
  const std::vector<std::pair<int, int>>& pairs() const { return summands_; }

  // Signature of the acting algebra: (m_1, ..., m_s).
  AlgebraSignature algebra() const {
    std::vector<int> sizes;
    sizes.reserve(summands_.size());
    for (auto [m, k] : summands_) sizes.push_back(m);
    return AlgebraSignature(std::move(sizes));
  }

  friend bool operator==(const ModuleSignature&, const ModuleSignature&) = default;

 private:
  std::vector<std::pair<int, int>> summands_;
};

// Module element: one m_j x k_j block per summand.
template <class T>
class ModuleElement {
 public:
  using scalar_type = T;

  ModuleElement(ModuleSignature sig, std::vector<Mat<T>> blocks)
      : sig_(std::move(sig)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != sig_.summands())
      throw dimension_error("ModuleElement: expected " +
                            std::to_string(sig_.summands()) + " blocks, got " +
                            std::to_string(blocks_.size()));
    for (int j = 0; j < sig_.summands(); ++j) {
      if (blocks_[j].rows() != sig_.rows(j) || blocks_[j].cols() != sig_.cols(j))
        throw dimension_error("ModuleElement: block " + std::to_string(j) +
                              " has the wrong shape");
      if (!finite_matrix<T>(blocks_[j]))
        throw contract_error("ModuleElement: non-finite entry in block " +
                             std::to_string(j));
    }
  }

  static ModuleElement zero(const ModuleSignature& sig) {
    std::vector<Mat<T>> b;
    for (int j = 0; j < sig.summands(); ++j)
      b.push_back(Mat<T>::Zero(sig.rows(j), sig.cols(j)));
    return ModuleElement(sig, std::move(b));
  }

  const ModuleSignature& signature() const { return sig_; }
  const Mat<T>& block(int j) const { return blocks_.at(j); }
  const std::vector<Mat<T>>& blocks() const { return blocks_; }

  void add_scaled(const ModuleElement& other, T c) {
    if (!(sig_ == other.sig_))
      throw dimension_error("ModuleElement::add_scaled: signature mismatch");
    for (int j = 0; j < sig_.summands(); ++j) blocks_[j] += c * other.blocks_[j];
  }

 private:
  ModuleSignature sig_;
  std::vector<Mat<T>> blocks_;
};

// Algebra-valued inner product, linear in the first argument:
// block j of <u, v> is u_j v_j^*.
template <class T>
AlgebraElement<T> inner_module(const ModuleElement<T>& u, const ModuleElement<T>& v) {
  if (!(u.signature() == v.signature()))
    throw dimension_error("inner_module: signature mismatch");
  std::vector<Mat<T>> out;
  for (int j = 0; j < u.signature().summands(); ++j)
    out.push_back(u.block(j) * v.block(j).adjoint());
  return AlgebraElement<T>(u.signature().algebra(), std::move(out));
}

// Left action of the algebra: block j of a.u is a_j u_j.
template <class T>
ModuleElement<T> left_action(const AlgebraElement<T>& a, const ModuleElement<T>& u) {
  if (!(a.signature() == u.signature().algebra()))
    throw dimension_error("left_action: signature mismatch");
  std::vector<Mat<T>> out;
  for (int j = 0; j < u.signature().summands(); ++j)
    out.push_back(a.block(j) * u.block(j));
  return ModuleElement<T>(u.signature(), std::move(out));
}

// Measurable family of module elements.
template <class T>
class ModuleFamily {
 public:
  using scalar_type = T;
  static constexpr ScaleFloor kScaleFloor = ScaleFloor::Spectral;

  ModuleFamily(DiscreteMeasureSpace space, ModuleSignature sig,
               std::vector<ModuleElement<T>> elements)
      : space_(std::move(space)), sig_(std::move(sig)), elements_(std::move(elements)) {
    if (static_cast<int>(elements_.size()) != space_.size())
      throw dimension_error("ModuleFamily: " + std::to_string(elements_.size()) +
                            " elements for " + std::to_string(space_.size()) +
                            " points");
    for (const auto& e : elements_)
      if (!(e.signature() == sig_))
        throw dimension_error("ModuleFamily: element signature mismatch");
  }

  int points() const { return static_cast<int>(elements_.size()); }
  const ModuleSignature& signature() const { return sig_; }
  const DiscreteMeasureSpace& space() const { return space_; }
  const ModuleElement<T>& element(int i) const { return elements_.at(i); }

  static bool same_shape(const ModuleFamily& a, const ModuleFamily& b) {
    return a.sig_ == b.sig_ && a.space() == b.space();
  }

  void add_scaled(const ModuleFamily& other, T c) {
    if (!same_shape(*this, other))
      throw dimension_error("ModuleFamily::add_scaled: shape mismatch");
    for (int i = 0; i < points(); ++i) elements_[i].add_scaled(other.elements_[i], c);
  }

  std::vector<int> block_dims() const {
    std::vector<int> dims;
    dims.reserve(sig_.summands());
    for (int j = 0; j < sig_.summands(); ++j) dims.push_back(sig_.cols(j));
    return dims;
  }

  // Frame operator block j: S_j = sum_i w_i phi_i(j)^* phi_i(j), a k_j x k_j
  // Hermitian matrix acting on the right factor.
  void frame_blocks_into(std::vector<Mat<T>>& out) const {
    out.resize(sig_.summands());
    for (int j = 0; j < sig_.summands(); ++j) {
      Mat<T>& s = out[j];
      s.resize(sig_.cols(j), sig_.cols(j));
      s.setZero();
      for (int i = 0; i < points(); ++i) {
        const Mat<T>& b = elements_[i].block(j);
        s.noalias() += T(space_.weight(i)) * (b.adjoint() * b);
      }
    }
  }

  void gram_blocks_into(std::vector<Mat<T>>& out) const { frame_blocks_into(out); }

 private:
  DiscreteMeasureSpace space_;
  ModuleSignature sig_;
  std::vector<ModuleElement<T>> elements_;
};

template <class T>
std::vector<Mat<T>> frame_operator_module(const ModuleFamily<T>& fam) {
  std::vector<Mat<T>> blocks;
  fam.frame_blocks_into(blocks);
  return blocks;
}

template <class T>
FrameClassification classify_module_blockwise(const ModuleFamily<T>& fam,
                                              double tol = kDefaultTol) {
  std::vector<Mat<T>> blocks;
  fam.frame_blocks_into(blocks);
  return classify_blocks<T>(blocks, tol, ScaleFloor::Spectral);
}

template <class T>
ModuleElement<T> random_module_element(std::uint64_t seed, const ModuleSignature& sig) {
  SplitMix64 g = substream(seed, 0x6d6f64756c65ULL);
  std::vector<Mat<T>> blocks;
  for (int j = 0; j < sig.summands(); ++j) {
    Mat<T> b(sig.rows(j), sig.cols(j));
    for (int r = 0; r < sig.rows(j); ++r)
      for (int c = 0; c < sig.cols(j); ++c) b(r, c) = gaussian<T>(g);
    blocks.push_back(std::move(b));
  }
  return ModuleElement<T>(sig, std::move(blocks));
}

template <class T>
ModuleFamily<T> random_module_family(std::uint64_t seed, const DiscreteMeasureSpace& space,
                                     const ModuleSignature& sig) {
  std::vector<ModuleElement<T>> elems;
  elems.reserve(space.size());
  for (int i = 0; i < space.size(); ++i)
    elems.push_back(random_module_element<T>(child_seed(seed, i), sig));
  return ModuleFamily<T>(space, sig, std::move(elems));
}

template <class T>
ModuleFamily<T> random_module_family(std::uint64_t seed, int points,
                                     const ModuleSignature& sig) {
  return random_module_family<T>(seed, DiscreteMeasureSpace::counting(points), sig);
}

template <class T>
ModuleFamily<T> random_module_frame(std::uint64_t seed, const DiscreteMeasureSpace& space,
                                    const ModuleSignature& sig, double tol = kDefaultTol,
                                    double min_margin = 1e-6, int max_tries = 100) {
  for (int j = 0; j < sig.summands(); ++j) {
    // S_j has rank at most N * m_j, so it needs N * m_j >= k_j to be invertible.
    if (space.size() * sig.rows(j) < sig.cols(j))
      throw infeasible_error("random_module_frame: summand " + std::to_string(j) +
                             " cannot reach full rank with " +
                             std::to_string(space.size()) + " points");
  }
  for (int t = 0; t < max_tries; ++t) {
    ModuleFamily<T> fam =
        random_module_family<T>(child_seed(seed, t ^ 0x6672616d65ULL), space, sig);
    FrameClassification cls = classify_module_blockwise(fam, tol);
    if (cls.is_frame() && cls.lower > min_margin * cls.upper) return fam;
  }
  throw generation_error("random_module_frame: retry budget exhausted");
}

template <class T>
ModuleFamily<T> random_module_frame(std::uint64_t seed, int points,
                                    const ModuleSignature& sig, double tol = kDefaultTol,
                                    double min_margin = 1e-6, int max_tries = 100) {
  return random_module_frame<T>(seed, DiscreteMeasureSpace::counting(points), sig, tol,
                                min_margin, max_tries);
}

// Result of probing the module frame inequalities A<v,v> <= <v,S v> <= B<v,v>
// (as positive algebra elements) on sample elements.  This is empirical
// evidence, not a proof: the verdict reflects only the probes taken.
struct ModuleSampledReport {
  int probes = 0;
  int violations = 0;
  double bound_lower = 0.0;  // A actually tested against
  double bound_upper = 0.0;  // B actually tested against
  double est_lower = std::numeric_limits<double>::infinity();
  double est_upper = 0.0;
  double worst_lower_slack = std::numeric_limits<double>::infinity();
  double worst_upper_slack = std::numeric_limits<double>::infinity();
  bool frame_verdict = false;
  FrameKind blockwise_kind = FrameKind::NotFrame;

  bool agrees_blockwise() const {
    return frame_verdict == (blockwise_kind != FrameKind::NotFrame);
  }
};

namespace detail {

// Spectrum of the compression of S to the row space of probe block v:
// with v = P Sigma Q^* (thin SVD, numerical rank rho), the eigenvalues of
// Q^* S Q bound <x v, S (x v)> / <x v, x v> over row vectors x.
template <class T>
void probe_block_spectrum(const Mat<T>& v, const Mat<T>& s, double& lo, double& hi,
                          bool& nonzero) {
  Eigen::JacobiSVD<Mat<T>> svd(v, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) {
    nonzero = false;
    return;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-12 * sv(0)) ++rank;
  Mat<T> q = svd.matrixV().leftCols(rank);
  Mat<T> compressed = q.adjoint() * s * q;
  SpectralBounds sb = hermitian_eigen_bounds<T>(compressed);
  lo = std::min(lo, sb.min);
  hi = std::max(hi, sb.max);
  nonzero = true;
}

}  // namespace detail

// Probe-based frame test.  Random probes are augmented with directed probes
// built from eigenvectors of the frame operator blocks, so rank deficits that
// random full-rank probes cannot see are still exercised.  Pass bound_lower /
// bound_upper to test externally claimed frame bounds; by default the
// blockwise bounds are probed against themselves.
template <class T>
ModuleSampledReport classify_module_sampled(const ModuleFamily<T>& fam, int probes,
                                            std::uint64_t seed, double tol = kDefaultTol,
                                            double bound_lower = -1.0,
                                            double bound_upper = -1.0) {
  if (probes < 1) throw dimension_error("classify_module_sampled: need at least one probe");
  const ModuleSignature& sig = fam.signature();
  std::vector<Mat<T>> s_blocks;
  fam.frame_blocks_into(s_blocks);
  FrameClassification blockwise = classify_blocks<T>(s_blocks, tol, ScaleFloor::Spectral);

  ModuleSampledReport report;
  report.blockwise_kind = blockwise.kind;
  report.bound_lower = bound_lower >= 0.0 ? bound_lower : blockwise.lower;
  report.bound_upper = bound_upper >= 0.0 ? bound_upper : blockwise.upper;

  std::vector<ModuleElement<T>> probe_set;
  probe_set.reserve(probes + sig.summands() * 4);
  for (int p = 0; p < probes; ++p)
    probe_set.push_back(random_module_element<T>(child_seed(seed, p), sig));

  // Directed probes: for each eigenvector q of S_j, the element supported on
  // summand j with single row q^*.  Its compression sees exactly that
  // eigenvalue, so kernel directions of S_j are guaranteed to be probed.
  for (int j = 0; j < sig.summands(); ++j) {
    Eigen::SelfAdjointEigenSolver<Mat<T>> solver(s_blocks[j]);
    if (solver.info() != Eigen::Success) continue;
    for (Eigen::Index c = 0; c < solver.eigenvectors().cols(); ++c) {
      ModuleElement<T> e = ModuleElement<T>::zero(sig);
      std::vector<Mat<T>> blocks = e.blocks();
      blocks[j].row(0) = solver.eigenvectors().col(c).adjoint();
      probe_set.push_back(ModuleElement<T>(sig, std::move(blocks)));
    }
  }

  for (const ModuleElement<T>& v : probe_set) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any_nonzero = false;
    for (int j = 0; j < sig.summands(); ++j) {
      bool nz = false;
      detail::probe_block_spectrum<T>(v.block(j), s_blocks[j], lo, hi, nz);
      any_nonzero = any_nonzero || nz;
    }
    if (!any_nonzero) continue;
    ++report.probes;
    report.est_lower = std::min(report.est_lower, lo);
    report.est_upper = std::max(report.est_upper, hi);
    double scale = unit_floor(report.bound_upper);
    double lower_slack = (lo - report.bound_lower) / scale;
    double upper_slack = (report.bound_upper - hi) / scale;
    report.worst_lower_slack = std::min(report.worst_lower_slack, lower_slack);
    report.worst_upper_slack = std::min(report.worst_upper_slack, upper_slack);
    if (lower_slack < -tol || upper_slack < -tol) ++report.violations;
  }

  report.frame_verdict = report.violations == 0 && report.probes > 0 &&
                         report.est_lower > tol * report.est_upper;
  return report;
}

}  // namespace framelab
