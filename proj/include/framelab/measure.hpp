#pragma once

#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace framelab {

// Finite measure space: an indexed point set with strictly positive weights.
// Integrals over it are weighted sums, which is the resolution the whole
// toolkit works at.
class DiscreteMeasureSpace {
 public:
  explicit DiscreteMeasureSpace(VecR weights) : weights_(std::move(weights)) {
    if (weights_.size() == 0)
      throw dimension_error("DiscreteMeasureSpace: no points");
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (!finite_scalar(weights_[i]) || weights_[i] <= 0.0)
        throw contract_error("DiscreteMeasureSpace: weight " + std::to_string(i) +
                             " is not strictly positive and finite");
    }
  }

  // Counting measure on `points` points.
  static DiscreteMeasureSpace counting(int points) {
    if (points < 1) throw dimension_error("DiscreteMeasureSpace: no points");
    return DiscreteMeasureSpace(VecR::Ones(points));
  }

  // Random weights uniform in [0.1, 2): keeps every point visibly present
  // while exercising the non-uniform code paths.
  static DiscreteMeasureSpace random(std::uint64_t seed, int points) {
    if (points < 1) throw dimension_error("DiscreteMeasureSpace: no points");
    SplitMix64 g = substream(seed, 0x6d65617375726531ULL);
    VecR w(points);
    for (int i = 0; i < points; ++i) w[i] = g.uniform(0.1, 2.0);
    return DiscreteMeasureSpace(std::move(w));
  }

  int size() const { return static_cast<int>(weights_.size()); }
  double weight(int i) const { return weights_[i]; }
  const VecR& weights() const { return weights_; }
  double total() const { return weights_.sum(); }

  bool is_counting() const {
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
      if (weights_[i] != 1.0) return false;
    return true;
  }

  friend bool operator==(const DiscreteMeasureSpace& a, const DiscreteMeasureSpace& b) {
    return a.weights_.size() == b.weights_.size() && a.weights_ == b.weights_;
  }

 private:
  VecR weights_;
};

// Weighted l2 inner product, linear in the first argument:
//   <f, g> = sum_i w_i f_i conj(g_i).
template <class T>
T l2_inner(const Vec<T>& f, const Vec<T>& g, const DiscreteMeasureSpace& space) {
  if (f.size() != g.size() || f.size() != space.size())
    throw dimension_error("l2_inner: lengths " + std::to_string(f.size()) + ", " +
                          std::to_string(g.size()) + " vs " +
                          std::to_string(space.size()) + " points");
  T acc = T(0);
  for (int i = 0; i < space.size(); ++i)
    acc += T(space.weight(i)) * f[i] * conj_val(g[i]);
  return acc;
}

template <class T>
double l2_norm_sq(const Vec<T>& f, const DiscreteMeasureSpace& space) {
  if (f.size() != space.size())
    throw dimension_error("l2_norm_sq: length mismatch");
  double acc = 0.0;
  for (int i = 0; i < space.size(); ++i) acc += space.weight(i) * abs2(f[i]);
  return acc;
}

}  // namespace framelab
