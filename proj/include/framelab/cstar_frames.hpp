#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "classification.hpp"
#include "measure.hpp"

namespace framelab {

// Shape of a finite direct sum of full matrix algebras: block sizes
// (n_1, ..., n_r).
class AlgebraSignature {
 public:
  explicit AlgebraSignature(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw dimension_error("AlgebraSignature: no blocks");
    for (int n : sizes_)
      if (n < 1) throw dimension_error("AlgebraSignature: block size must be >= 1");
  }

  int blocks() const { return static_cast<int>(sizes_.size()); }
  int size(int j) const { return sizes_.at(j); }
  const std::vector<int>& sizes() const { return sizes_; }
  int dim_sum() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

  friend bool operator==(const AlgebraSignature&, const AlgebraSignature&) = default;

 private:
  std::vector<int> sizes_;
};

// Element of the direct sum: one n_j x n_j matrix per block.
template <class T>
class AlgebraElement {
 public:
  using scalar_type = T;

  AlgebraElement(AlgebraSignature sig, std::vector<Mat<T>> blocks)
      : sig_(std::move(sig)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != sig_.blocks())
      throw dimension_error("AlgebraElement: expected " +
                            std::to_string(sig_.blocks()) + " blocks, got " +
                            std::to_string(blocks_.size()));
    for (int j = 0; j < sig_.blocks(); ++j) {
      if (blocks_[j].rows() != sig_.size(j) || blocks_[j].cols() != sig_.size(j))
        throw dimension_error("AlgebraElement: block " + std::to_string(j) +
                              " has the wrong shape");
      if (!finite_matrix<T>(blocks_[j]))
        throw contract_error("AlgebraElement: non-finite entry in block " +
                             std::to_string(j));
    }
  }

  static AlgebraElement zero(const AlgebraSignature& sig) {
    std::vector<Mat<T>> b;
    for (int j = 0; j < sig.blocks(); ++j)
      b.push_back(Mat<T>::Zero(sig.size(j), sig.size(j)));
    return AlgebraElement(sig, std::move(b));
  }

  static AlgebraElement identity(const AlgebraSignature& sig) {
    std::vector<Mat<T>> b;
    for (int j = 0; j < sig.blocks(); ++j)
      b.push_back(Mat<T>::Identity(sig.size(j), sig.size(j)));
    return AlgebraElement(sig, std::move(b));
  }

  const AlgebraSignature& signature() const { return sig_; }
  const Mat<T>& block(int j) const { return blocks_.at(j); }
  const std::vector<Mat<T>>& blocks() const { return blocks_; }

  void add_scaled(const AlgebraElement& other, T c) {
    if (!(sig_ == other.sig_))
      throw dimension_error("AlgebraElement::add_scaled: signature mismatch");
    for (int j = 0; j < sig_.blocks(); ++j) blocks_[j] += c * other.blocks_[j];
  }

 private:
  AlgebraSignature sig_;
  std::vector<Mat<T>> blocks_;
};

// Blockwise product and adjoint, so the algebra structure is explicit.
template <class T>
AlgebraElement<T> multiply(const AlgebraElement<T>& a, const AlgebraElement<T>& b) {
  if (!(a.signature() == b.signature()))
    throw dimension_error("multiply: signature mismatch");
  std::vector<Mat<T>> out;
  for (int j = 0; j < a.signature().blocks(); ++j)
    out.push_back(a.block(j) * b.block(j));
  return AlgebraElement<T>(a.signature(), std::move(out));
}

template <class T>
AlgebraElement<T> adjoint(const AlgebraElement<T>& a) {
  std::vector<Mat<T>> out;
  for (int j = 0; j < a.signature().blocks(); ++j)
    out.push_back(a.block(j).adjoint());
  return AlgebraElement<T>(a.signature(), std::move(out));
}

// Measurable family of algebra elements over a finite measure space.
template <class T>
class AlgebraFamily {
 public:
  using scalar_type = T;
  static constexpr ScaleFloor kScaleFloor = ScaleFloor::Spectral;

  AlgebraFamily(DiscreteMeasureSpace space, AlgebraSignature sig,
                std::vector<AlgebraElement<T>> elements)
      : space_(std::move(space)), sig_(std::move(sig)), elements_(std::move(elements)) {
    if (static_cast<int>(elements_.size()) != space_.size())
      throw dimension_error("AlgebraFamily: " + std::to_string(elements_.size()) +
                            " elements for " + std::to_string(space_.size()) +
                            " points");
    for (const auto& e : elements_)
      if (!(e.signature() == sig_))
        throw dimension_error("AlgebraFamily: element signature mismatch");
  }

  int points() const { return static_cast<int>(elements_.size()); }
  const AlgebraSignature& signature() const { return sig_; }
  const DiscreteMeasureSpace& space() const { return space_; }
  const AlgebraElement<T>& element(int i) const { return elements_.at(i); }
  const std::vector<AlgebraElement<T>>& elements() const { return elements_; }

  static bool same_shape(const AlgebraFamily& a, const AlgebraFamily& b) {
    return a.sig_ == b.sig_ && a.space() == b.space();
  }

  void add_scaled(const AlgebraFamily& other, T c) {
    if (!same_shape(*this, other))
      throw dimension_error("AlgebraFamily::add_scaled: shape mismatch");
    for (int i = 0; i < points(); ++i) elements_[i].add_scaled(other.elements_[i], c);
  }

  std::vector<int> block_dims() const { return sig_.sizes(); }

  // Frame operator block j: S_j = sum_i w_i u_i(j)^* u_i(j).
  void frame_blocks_into(std::vector<Mat<T>>& out) const {
    out.resize(sig_.blocks());
    for (int j = 0; j < sig_.blocks(); ++j) {
      Mat<T>& s = out[j];
      s.resize(sig_.size(j), sig_.size(j));
      s.setZero();
      for (int i = 0; i < points(); ++i) {
        const Mat<T>& b = elements_[i].block(j);
        s.noalias() += T(space_.weight(i)) * (b.adjoint() * b);
      }
    }
  }

  // The algebra-valued inner product of the family with itself is the frame
  // operator; there is no second route at this level, so both block accessors
  // agree by definition.
  void gram_blocks_into(std::vector<Mat<T>>& out) const { frame_blocks_into(out); }

 private:
  DiscreteMeasureSpace space_;
  AlgebraSignature sig_;
  std::vector<AlgebraElement<T>> elements_;
};

template <class T>
AlgebraElement<T> frame_operator_cstar(const AlgebraFamily<T>& fam) {
  std::vector<Mat<T>> blocks;
  fam.frame_blocks_into(blocks);
  return AlgebraElement<T>(fam.signature(), std::move(blocks));
}

// Componentwise determinants of an algebra element.
template <class T>
std::vector<double> block_dets(const AlgebraElement<T>& a) {
  std::vector<double> out;
  out.reserve(a.signature().blocks());
  for (int j = 0; j < a.signature().blocks(); ++j)
    out.push_back(det_psd<T>(a.block(j)));
  return out;
}

template <class T>
FrameClassification classify_cstar(const AlgebraFamily<T>& fam, double tol = kDefaultTol) {
  std::vector<Mat<T>> blocks;
  fam.frame_blocks_into(blocks);
  return classify_blocks<T>(blocks, tol, ScaleFloor::Spectral);
}

template <class T>
AlgebraElement<T> random_algebra_element(std::uint64_t seed, const AlgebraSignature& sig) {
  SplitMix64 g = substream(seed, 0x616c6765627261ULL);
  std::vector<Mat<T>> blocks;
  for (int j = 0; j < sig.blocks(); ++j) {
    Mat<T> b(sig.size(j), sig.size(j));
    for (int r = 0; r < sig.size(j); ++r)
      for (int c = 0; c < sig.size(j); ++c) b(r, c) = gaussian<T>(g);
    blocks.push_back(std::move(b));
  }
  return AlgebraElement<T>(sig, std::move(blocks));
}

template <class T>
AlgebraFamily<T> random_cstar_family(std::uint64_t seed, const DiscreteMeasureSpace& space,
                                     const AlgebraSignature& sig) {
  std::vector<AlgebraElement<T>> elems;
  elems.reserve(space.size());
  for (int i = 0; i < space.size(); ++i)
    elems.push_back(random_algebra_element<T>(child_seed(seed, i), sig));
  return AlgebraFamily<T>(space, sig, std::move(elems));
}

template <class T>
AlgebraFamily<T> random_cstar_family(std::uint64_t seed, int points,
                                     const AlgebraSignature& sig) {
  return random_cstar_family<T>(seed, DiscreteMeasureSpace::counting(points), sig);
}

template <class T>
AlgebraFamily<T> random_cstar_frame(std::uint64_t seed, const DiscreteMeasureSpace& space,
                                    const AlgebraSignature& sig, double tol = kDefaultTol,
                                    double min_margin = 1e-6, int max_tries = 100) {
  for (int t = 0; t < max_tries; ++t) {
    AlgebraFamily<T> fam =
        random_cstar_family<T>(child_seed(seed, t ^ 0x66726d65ULL), space, sig);
    FrameClassification cls = classify_cstar(fam, tol);
    if (cls.is_frame() && cls.lower > min_margin * cls.upper) return fam;
  }
  throw generation_error("random_cstar_frame: retry budget exhausted");
}

template <class T>
AlgebraFamily<T> random_cstar_frame(std::uint64_t seed, int points,
                                    const AlgebraSignature& sig, double tol = kDefaultTol,
                                    double min_margin = 1e-6, int max_tries = 100) {
  return random_cstar_frame<T>(seed, DiscreteMeasureSpace::counting(points), sig, tol,
                               min_margin, max_tries);
}

}  // namespace framelab
