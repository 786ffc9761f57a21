#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "classification.hpp"
#include "cstar_frames.hpp"
#include "hilbert_frames.hpp"
#include "module_frames.hpp"
#include "polynomial.hpp"

namespace framelab {

// Half-width of the numerical indifference zone around the frame threshold.
// Samples whose classification margin or normalized block determinants fall
// inside the band are reported as excluded rather than compared.
inline constexpr double kDefaultBand = 1e-9;

// An intersection-of-translates problem: l translate families U(i) and l
// frame families A(i) of identical shape.  The object of study is, for each
// index e, the combined family
//     U(e) + sum_i c_i (A(i) - U(i))
// as the coefficient tuple c ranges over F^l, and the hypersurface of tuples
// where it fails to be a frame.
template <class Fam>
class TranslateInstance {
 public:
  using family_type = Fam;
  using scalar_type = typename Fam::scalar_type;

  TranslateInstance(std::vector<Fam> translates, std::vector<Fam> frames,
                    double tol = kDefaultTol)
      : translates_(std::move(translates)), frames_(std::move(frames)) {
    if (translates_.empty() || translates_.size() != frames_.size())
      throw dimension_error("TranslateInstance: need equally many translate and frame families");
    for (const Fam& f : translates_)
      if (!Fam::same_shape(f, translates_[0]))
        throw dimension_error("TranslateInstance: translate family shape mismatch");
    for (const Fam& f : frames_)
      if (!Fam::same_shape(f, translates_[0]))
        throw dimension_error("TranslateInstance: frame family shape mismatch");
    for (std::size_t i = 0; i < frames_.size(); ++i) {
      if (!classify_any(frames_[i], tol).is_frame())
        throw contract_error("TranslateInstance: family A(" + std::to_string(i + 1) +
                             ") is not a frame");
    }
    directions_.reserve(frames_.size());
    for (std::size_t i = 0; i < frames_.size(); ++i) {
      Fam d = frames_[i];
      d.add_scaled(translates_[i], scalar_type(-1));
      directions_.push_back(std::move(d));
    }
  }

  int count() const { return static_cast<int>(translates_.size()); }
  const Fam& translate(int i) const { return translates_.at(i); }
  const Fam& frame(int i) const { return frames_.at(i); }
  const Fam& direction(int i) const { return directions_.at(i); }
  std::vector<int> block_dims() const { return translates_[0].block_dims(); }

  void check_index(int e) const {
    if (e < 0 || e >= count())
      throw dimension_error("TranslateInstance: index " + std::to_string(e) +
                            " outside [0, " + std::to_string(count()) + ")");
  }

  void check_tuple(std::span<const scalar_type> c) const {
    if (static_cast<int>(c.size()) != count())
      throw dimension_error("TranslateInstance: tuple has " + std::to_string(c.size()) +
                            " coefficients, expected " + std::to_string(count()));
    for (const scalar_type& x : c)
      if (!finite_scalar(x)) throw contract_error("TranslateInstance: non-finite coefficient");
  }

 private:
  std::vector<Fam> translates_;
  std::vector<Fam> frames_;
  std::vector<Fam> directions_;
};

namespace detail {

// Scratch-buffer evaluator for one instance: assembles combined families and
// derives classification, margins and block determinants without reallocating
// between samples.  Result spans point into evaluator storage and are valid
// until the next eval call.
template <class Fam>
class TranslateEvaluator {
 public:
  using T = typename Fam::scalar_type;

  struct Result {
    FrameClassification cls;
    std::span<const double> dets;
    double margin_eff = 0.0;  // lower / max(1, upper)
    bool det_positive = false;
    bool near_zero_margin = false;
    bool near_zero_union = false;  // some block det inside the band
    bool near_zero_all = false;    // every block det inside the band
    bool excluded = false;
  };

  explicit TranslateEvaluator(const TranslateInstance<Fam>& inst)
      : inst_(&inst), scratch_(inst.translate(0)), dims_(inst.block_dims()) {}

  const Fam& assemble(int e, std::span<const T> c) {
    inst_->check_index(e);
    inst_->check_tuple(c);
    scratch_ = inst_->translate(e);
    for (int i = 0; i < inst_->count(); ++i)
      scratch_.add_scaled(inst_->direction(i), c[i]);
    return scratch_;
  }

  Result eval(int e, std::span<const T> c, double tol, double band, bool want_dets) {
    assemble(e, c);
    scratch_.frame_blocks_into(blocks_);
    Result r;
    r.cls = classify_blocks<T>(blocks_, tol, Fam::kScaleFloor);
    double floor = unit_floor(r.cls.upper);
    r.margin_eff = r.cls.lower / floor;
    r.near_zero_margin = r.margin_eff <= band;
    if (want_dets) {
      dets_.resize(blocks_.size());
      r.det_positive = true;
      bool all_small = true;
      bool any_small = false;
      for (std::size_t j = 0; j < blocks_.size(); ++j) {
        dets_[j] = det_psd<T>(blocks_[j]);
        if (!(dets_[j] > 0.0)) r.det_positive = false;
        double thresh = std::pow(band, dims_[j]) * std::pow(floor, dims_[j]);
        bool small = std::abs(dets_[j]) <= thresh;
        any_small = any_small || small;
        all_small = all_small && small;
      }
      r.dets = dets_;
      r.near_zero_union = any_small;
      r.near_zero_all = all_small;
      r.excluded = r.near_zero_margin || any_small;
    } else {
      r.excluded = r.near_zero_margin;
    }
    return r;
  }

 private:
  const TranslateInstance<Fam>* inst_;
  Fam scratch_;
  std::vector<int> dims_;
  std::vector<Mat<T>> blocks_;
  std::vector<double> dets_;
};

}  // namespace detail

// The tuple with 1 at position e and 0 elsewhere.
template <class T>
std::vector<T> unit_tuple(int l, int e) {
  std::vector<T> c(l, T(0));
  c.at(e) = T(1);
  return c;
}

template <class Fam>
Fam combined_family(const TranslateInstance<Fam>& inst, int e,
                    std::span<const typename Fam::scalar_type> c) {
  detail::TranslateEvaluator<Fam> ev(inst);
  return ev.assemble(e, c);
}

// Values of the per-block determinants of the combined family's frame
// operator: the defining polynomials of the non-frame hypersurface, evaluated
// at c.
template <class Fam>
std::vector<double> pe_eval(const TranslateInstance<Fam>& inst, int e,
                            std::span<const typename Fam::scalar_type> c) {
  detail::TranslateEvaluator<Fam> ev(inst);
  auto r = ev.eval(e, c, kDefaultTol, kDefaultBand, true);
  return std::vector<double>(r.dets.begin(), r.dets.end());
}

struct MembershipVerdict {
  bool is_member = false;
  double margin = 0.0;  // lower / upper of the combined frame operator
  FrameClassification classification;
  std::vector<double> dets;
};

// Does c avoid the hypersurface of index e, i.e. is the combined family a
// frame?
template <class Fam>
MembershipVerdict membership(const TranslateInstance<Fam>& inst, int e,
                             std::span<const typename Fam::scalar_type> c,
                             double tol = kDefaultTol) {
  detail::TranslateEvaluator<Fam> ev(inst);
  auto r = ev.eval(e, c, tol, kDefaultBand, true);
  MembershipVerdict v;
  v.is_member = r.cls.is_frame();
  v.margin = r.cls.margin;
  v.classification = r.cls;
  v.dets.assign(r.dets.begin(), r.dets.end());
  return v;
}

struct MembershipEntry {
  bool is_member = false;
  double margin = 0.0;
  std::vector<double> dets;
};

struct MembershipReport {
  bool is_member = false;  // c avoids every hypersurface
  std::vector<MembershipEntry> per_index;
};

template <class Fam>
MembershipReport intersection_membership(const TranslateInstance<Fam>& inst,
                                         std::span<const typename Fam::scalar_type> c,
                                         double tol = kDefaultTol) {
  detail::TranslateEvaluator<Fam> ev(inst);
  MembershipReport report;
  report.is_member = true;
  for (int e = 0; e < inst.count(); ++e) {
    auto r = ev.eval(e, c, tol, kDefaultBand, true);
    MembershipEntry entry;
    entry.is_member = r.cls.is_frame();
    entry.margin = r.cls.margin;
    entry.dets.assign(r.dets.begin(), r.dets.end());
    report.is_member = report.is_member && entry.is_member;
    report.per_index.push_back(std::move(entry));
  }
  return report;
}

// How coefficient tuples are sampled: uniform on the centered box of the
// given half-width, or standard Gaussian when `gaussian` is set.
struct SamplerSpec {
  std::uint64_t seed = 0;
  double radius = 2.0;
  bool gaussian = false;
};

template <class T>
std::vector<T> draw_tuple(const SamplerSpec& spec, std::uint64_t index, int l) {
  SplitMix64 g = substream(spec.seed, index);
  std::vector<T> c(l);
  for (int i = 0; i < l; ++i)
    c[i] = spec.gaussian ? gaussian<T>(g) : box_uniform<T>(g, spec.radius);
  return c;
}

inline void flatten_tuple(const std::vector<double>& c, std::vector<double>& out) {
  out = c;
}

inline void flatten_tuple(const std::vector<cplx>& c, std::vector<double>& out) {
  out.clear();
  for (const cplx& x : c) {
    out.push_back(x.real());
    out.push_back(x.imag());
  }
}

struct BiconditionalCounterexample {
  long long sample_index = 0;
  int e = 0;
  std::vector<double> tuple;  // real coordinates; complex tuples interleave re, im
  bool frame_by_margin = false;
  bool positive_by_dets = false;
  double margin_eff = 0.0;
  double min_det = 0.0;
};

// Outcome of sampling the equivalence "combined family is a frame iff every
// block determinant is positive" at random tuples.
struct BiconditionalReport {
  long long samples = 0;
  long long excluded = 0;       // samples inside the numerical band at some index
  long long agreements = 0;
  long long disagreements = 0;
  long long near_zero_union = 0;         // (sample, index) pairs: some det in band
  long long near_zero_simultaneous = 0;  // (sample, index) pairs: all dets in band
  std::vector<BiconditionalCounterexample> counterexamples;

  bool all_agree() const { return disagreements == 0; }
};

inline constexpr int kMaxRecordedCounterexamples = 20;

template <class Fam>
BiconditionalReport verify_biconditional(const TranslateInstance<Fam>& inst,
                                         const SamplerSpec& sampler, long long samples,
                                         double tol = kDefaultTol,
                                         double band = kDefaultBand) {
  using T = typename Fam::scalar_type;
  if (samples < 1) throw dimension_error("verify_biconditional: need at least one sample");
  detail::TranslateEvaluator<Fam> ev(inst);
  BiconditionalReport report;
  report.samples = samples;
  for (long long k = 0; k < samples; ++k) {
    std::vector<T> c = draw_tuple<T>(sampler, static_cast<std::uint64_t>(k), inst.count());
    bool excluded = false;
    bool mismatch = false;
    for (int e = 0; e < inst.count(); ++e) {
      auto r = ev.eval(e, c, tol, band, true);
      if (r.near_zero_union) ++report.near_zero_union;
      if (r.near_zero_all) ++report.near_zero_simultaneous;
      if (r.excluded) {
        excluded = true;
        continue;
      }
      bool by_margin = r.cls.is_frame();
      if (by_margin != r.det_positive) {
        mismatch = true;
        if (static_cast<int>(report.counterexamples.size()) < kMaxRecordedCounterexamples) {
          BiconditionalCounterexample ce;
          ce.sample_index = k;
          ce.e = e;
          flatten_tuple(c, ce.tuple);
          ce.frame_by_margin = by_margin;
          ce.positive_by_dets = r.det_positive;
          ce.margin_eff = r.margin_eff;
          ce.min_det = r.dets.empty() ? 0.0
                                      : *std::min_element(r.dets.begin(), r.dets.end());
          report.counterexamples.push_back(std::move(ce));
        }
      }
    }
    if (mismatch)
      ++report.disagreements;
    else if (excluded)
      ++report.excluded;
    else
      ++report.agreements;
  }
  return report;
}

// Wilson score interval for a binomial proportion at the given z quantile.
inline std::pair<double, double> wilson_interval(long long hits, long long n,
                                                 double z = 1.959963984540054) {
  if (n < 1) throw dimension_error("wilson_interval: need at least one trial");
  double p = static_cast<double>(hits) / static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / static_cast<double>(n);
  double center = (p + z2 / (2.0 * static_cast<double>(n))) / denom;
  double half = z *
                std::sqrt(p * (1.0 - p) / static_cast<double>(n) +
                          z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n))) /
                denom;
  // At the boundary counts the corresponding endpoint is exactly the observed
  // proportion; the general formula only reproduces that up to roundoff.
  double lo = hits == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = hits == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

struct MeasureEstimate {
  long long samples = 0;
  long long failures = 0;
  double fraction = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of the fraction of the sampling box where some
// combined family fails to be a frame.  For instances built from frames this
// set is a finite union of hypersurface slices, so the estimate should be
// statistically indistinguishable from zero.
template <class Fam>
MeasureEstimate failure_measure(const TranslateInstance<Fam>& inst, double radius,
                                long long samples, std::uint64_t seed,
                                double tol = kDefaultTol) {
  using T = typename Fam::scalar_type;
  if (samples < 1) throw dimension_error("failure_measure: need at least one sample");
  if (!(radius > 0.0)) throw contract_error("failure_measure: radius must be positive");
  detail::TranslateEvaluator<Fam> ev(inst);
  SamplerSpec sampler{seed, radius, false};
  MeasureEstimate est;
  est.samples = samples;
  est.radius = radius;
  est.seed = seed;
  for (long long k = 0; k < samples; ++k) {
    std::vector<T> c = draw_tuple<T>(sampler, static_cast<std::uint64_t>(k), inst.count());
    for (int e = 0; e < inst.count(); ++e) {
      auto r = ev.eval(e, c, tol, kDefaultBand, false);
      if (!r.cls.is_frame()) {
        ++est.failures;
        break;
      }
    }
  }
  est.fraction = static_cast<double>(est.failures) / static_cast<double>(est.samples);
  auto [lo, hi] = wilson_interval(est.failures, est.samples);
  est.wilson_low = lo;
  est.wilson_high = hi;
  return est;
}

// Instance with A(i) = 2 U(i) for frame families U(i): the directions
// A(i) - U(i) then equal U(i) exactly, so the combined family at c is
// U(e) + sum_i c_i U(i) with no rounding in the direction computation.
template <class Fam>
TranslateInstance<Fam> doubled_translate_instance(std::vector<Fam> translates,
                                               double tol = kDefaultTol) {
  using T = typename Fam::scalar_type;
  for (std::size_t i = 0; i < translates.size(); ++i)
    if (!classify_any(translates[i], tol).is_frame())
      throw contract_error("doubled_translate_instance: family U(" + std::to_string(i + 1) +
                           ") is not a frame");
  std::vector<Fam> frames;
  frames.reserve(translates.size());
  for (const Fam& u : translates) {
    Fam a = u;
    a.add_scaled(u, T(1));  // 2 U(i)
    frames.push_back(std::move(a));
  }
  return TranslateInstance<Fam>(std::move(translates), std::move(frames), tol);
}

struct InterpOptions {
  int degree = 0;  // 0: per-block default of 2 * block dimension
  double oversample = 2.0;
  int validation_points = 50;
  double radius = 2.0;
  std::uint64_t seed = 0x696e74657270ULL;
  long long monomial_cap = 5000;
};

struct InterpolatedBlock {
  Polynomial poly;
  int block_dim = 0;
  int degree = 0;
  double validation_error = 0.0;  // max abs residual / max(1, value scale)
};

// Recover the block determinant polynomials of index e by least-squares
// interpolation on random real tuples, then validate on fresh points.  Only
// real instances are supported: over the complex field the determinants are
// polynomials in twice as many real variables and are out of scope here.
template <class Fam>
std::vector<InterpolatedBlock> interpolate_pe(const TranslateInstance<Fam>& inst, int e,
                                              const InterpOptions& opts = {}) {
  using T = typename Fam::scalar_type;
  if constexpr (is_complex_v<T>) {
    throw unsupported_error("interpolate_pe: complex instances are not supported");
  } else {
    inst.check_index(e);
    const int l = inst.count();
    std::vector<int> dims = inst.block_dims();
    std::vector<int> degrees(dims.size());
    int max_degree = 0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      degrees[j] = opts.degree > 0 ? opts.degree : 2 * dims[j];
      max_degree = std::max(max_degree, degrees[j]);
    }
    long long terms = monomial_count(l, max_degree);
    if (terms > opts.monomial_cap)
      throw unsupported_error("interpolate_pe: basis of " + std::to_string(terms) +
                              " monomials exceeds the cap of " +
                              std::to_string(opts.monomial_cap));
    const long long m =
        static_cast<long long>(std::ceil(opts.oversample * static_cast<double>(terms)));

    detail::TranslateEvaluator<Fam> ev(inst);
    SamplerSpec sampler{opts.seed, opts.radius, false};
    MatR points(m, l);
    MatR values(m, static_cast<Eigen::Index>(dims.size()));
    std::vector<T> c(l);
    for (long long k = 0; k < m; ++k) {
      c = draw_tuple<T>(sampler, static_cast<std::uint64_t>(k), l);
      for (int i = 0; i < l; ++i) points(k, i) = c[i];
      auto r = ev.eval(e, c, kDefaultTol, kDefaultBand, true);
      for (std::size_t j = 0; j < dims.size(); ++j) values(k, static_cast<Eigen::Index>(j)) = r.dets[j];
    }

    std::vector<InterpolatedBlock> out;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      InterpolatedBlock blk{
          fit_monomials(points, values.col(static_cast<Eigen::Index>(j)), degrees[j],
                        opts.radius),
          dims[j], degrees[j], 0.0};
      out.push_back(std::move(blk));
    }

    const std::uint64_t validation_offset = 0x76616c6964ULL;
    std::vector<double> point(l);
    std::vector<double> max_err(dims.size(), 0.0);
    std::vector<double> scale(dims.size(), 0.0);
    for (int k = 0; k < opts.validation_points; ++k) {
      c = draw_tuple<T>(sampler, validation_offset + static_cast<std::uint64_t>(k), l);
      for (int i = 0; i < l; ++i) point[i] = c[i];
      auto r = ev.eval(e, c, kDefaultTol, kDefaultBand, true);
      for (std::size_t j = 0; j < dims.size(); ++j) {
        double predicted = out[j].poly.eval(point);
        max_err[j] = std::max(max_err[j], std::abs(predicted - r.dets[j]));
        scale[j] = std::max(scale[j], std::abs(r.dets[j]));
      }
    }
    for (std::size_t j = 0; j < dims.size(); ++j)
      out[j].validation_error = max_err[j] / std::max(1.0, scale[j]);
    return out;
  }
}

struct GridSpec {
  int ni = 21;
  int nj = 21;
  double i_min = -2.0;
  double i_max = 2.0;
  double j_min = -2.0;
  double j_max = 2.0;
};

struct SliceCell {
  double ci = 0.0;
  double cj = 0.0;
  double min_det = 0.0;
  bool is_member = false;
};

struct SliceGridResult {
  int axis_i = 0;
  int axis_j = 0;
  GridSpec grid;
  std::vector<SliceCell> cells;  // row-major: ci varies slowest
};

// Evaluate membership and the smallest block determinant on a 2D coordinate
// slice through the tuple space, holding the remaining coordinates at `base`.
template <class Fam>
SliceGridResult slice_grid(const TranslateInstance<Fam>& inst, int axis_i, int axis_j,
                           const GridSpec& grid,
                           std::vector<typename Fam::scalar_type> base = {},
                           double tol = kDefaultTol) {
  using T = typename Fam::scalar_type;
  inst.check_index(axis_i);
  inst.check_index(axis_j);
  if (axis_i >= axis_j)
    throw dimension_error("slice_grid: axes must satisfy i < j");
  if (grid.ni < 2 || grid.nj < 2)
    throw dimension_error("slice_grid: need at least a 2x2 grid");
  if (base.empty()) base.assign(inst.count(), T(0));
  inst.check_tuple(base);

  detail::TranslateEvaluator<Fam> ev(inst);
  SliceGridResult result;
  result.axis_i = axis_i;
  result.axis_j = axis_j;
  result.grid = grid;
  result.cells.reserve(static_cast<std::size_t>(grid.ni) * grid.nj);
  std::vector<T> c = base;
  for (int ii = 0; ii < grid.ni; ++ii) {
    double x = grid.i_min + (grid.i_max - grid.i_min) * ii / (grid.ni - 1);
    for (int jj = 0; jj < grid.nj; ++jj) {
      double y = grid.j_min + (grid.j_max - grid.j_min) * jj / (grid.nj - 1);
      c = base;
      c[axis_i] = T(x);
      c[axis_j] = T(y);
      SliceCell cell;
      cell.ci = x;
      cell.cj = y;
      cell.min_det = std::numeric_limits<double>::infinity();
      cell.is_member = true;
      for (int e = 0; e < inst.count(); ++e) {
        auto r = ev.eval(e, c, tol, kDefaultBand, true);
        cell.is_member = cell.is_member && r.cls.is_frame();
        for (double d : r.dets) cell.min_det = std::min(cell.min_det, d);
      }
      result.cells.push_back(cell);
    }
  }
  return result;
}

// Random instance generators: translate families are Gaussian (Bessel only),
// frame families are rejection-sampled with the requested margin.

template <class T>
TranslateInstance<VectorFamily<T>> random_hilbert_instance(std::uint64_t seed, int l,
                                                           const DiscreteMeasureSpace& space,
                                                           int n,
                                                           double frame_margin = 1e-6) {
  std::vector<VectorFamily<T>> u, a;
  for (int i = 0; i < l; ++i) {
    u.push_back(random_bessel<T>(child_seed(seed, 1000 + i), space, n));
    a.push_back(random_frame<T>(child_seed(seed, 2000 + i), space, n, kDefaultTol,
                                frame_margin));
  }
  return TranslateInstance<VectorFamily<T>>(std::move(u), std::move(a));
}

template <class T>
TranslateInstance<AlgebraFamily<T>> random_cstar_instance(std::uint64_t seed, int l,
                                                          const DiscreteMeasureSpace& space,
                                                          const AlgebraSignature& sig,
                                                          double frame_margin = 1e-6) {
  std::vector<AlgebraFamily<T>> u, a;
  for (int i = 0; i < l; ++i) {
    u.push_back(random_cstar_family<T>(child_seed(seed, 1000 + i), space, sig));
    a.push_back(random_cstar_frame<T>(child_seed(seed, 2000 + i), space, sig, kDefaultTol,
                                      frame_margin));
  }
  return TranslateInstance<AlgebraFamily<T>>(std::move(u), std::move(a));
}

template <class T>
TranslateInstance<ModuleFamily<T>> random_module_instance(std::uint64_t seed, int l,
                                                          const DiscreteMeasureSpace& space,
                                                          const ModuleSignature& sig,
                                                          double frame_margin = 1e-6) {
  std::vector<ModuleFamily<T>> u, a;
  for (int i = 0; i < l; ++i) {
    u.push_back(random_module_family<T>(child_seed(seed, 1000 + i), space, sig));
    a.push_back(random_module_frame<T>(child_seed(seed, 2000 + i), space, sig, kDefaultTol,
                                       frame_margin));
  }
  return TranslateInstance<ModuleFamily<T>>(std::move(u), std::move(a));
}

}  // namespace framelab
