#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace framelab {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatR = Mat<double>;
using MatC = Mat<cplx>;
using VecR = Vec<double>;
using VecC = Vec<cplx>;

namespace detail {

template <class T>
void require_square(const Mat<T>& m, const char* who) {
  if (m.rows() != m.cols())
    throw dimension_error(std::string(who) + ": matrix is " +
                          std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  if (m.rows() == 0)
    throw dimension_error(std::string(who) + ": empty matrix");
}

template <class T>
void require_hermitian(const Mat<T>& m, const char* who) {
  require_square<T>(m, who);
  double dev = (m - m.adjoint()).norm();
  if (dev > 1e-10 * std::max(1.0, m.norm()))
    throw contract_error(std::string(who) + ": matrix is not Hermitian (dev=" +
                         std::to_string(dev) + ")");
}

}  // namespace detail

// Determinant through a pivoted LU factorization.
template <class T>
T det(const Mat<T>& m) {
  detail::require_square<T>(m, "det");
  return m.partialPivLu().determinant();
}

// Determinant of a Hermitian positive semidefinite matrix, reported as the
// real number it must be.  The imaginary residue of the factorization is
// checked rather than silently dropped.
template <class T>
double det_psd(const Mat<T>& m) {
  T d = det<T>(m);
  double re = real_part(d);
  if constexpr (is_complex_v<T>) {
    double im = imag_part(d);
    if (std::abs(im) > 1e-8 * std::max(1.0, std::abs(re)))
      throw contract_error("det_psd: determinant has a non-negligible imaginary part");
  }
  return re;
}

// Leibniz-formula determinant for dimensions up to 4: a slow, independent
// cross-check for the factorization path.  Larger inputs are refused.
template <class T>
T det_bruteforce(const Mat<T>& m) {
  detail::require_square<T>(m, "det_bruteforce");
  const int n = static_cast<int>(m.rows());
  if (n > 4)
    throw unsupported_error("det_bruteforce: dimension " + std::to_string(n) +
                            " exceeds the supported maximum of 4");
  std::array<int, 4> p{};
  std::iota(p.begin(), p.begin() + n, 0);
  T sum = T(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inversions;
    T prod = (inversions % 2 == 0) ? T(1) : T(-1);
    for (int i = 0; i < n; ++i) prod *= m(i, p[i]);
    sum += prod;
  } while (std::next_permutation(p.begin(), p.begin() + n));
  return sum;
}

// All eigenvalues of a Hermitian matrix, ascending.  Rejects inputs whose
// Hermitian deviation exceeds 1e-10 relative to their norm.
template <class T>
VecR hermitian_eigenvalues(const Mat<T>& m) {
  detail::require_hermitian<T>(m, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Mat<T>> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw contract_error("hermitian_eigenvalues: eigenvalue iteration failed");
  return solver.eigenvalues();
}

struct SpectralBounds {
  double min = 0.0;
  double max = 0.0;
};

// Extreme eigenvalues of a Hermitian matrix.  Dimensions 1 and 2 use the
// closed-form spectrum; larger blocks fall back to the full solver.  The
// input is trusted to be Hermitian (this sits inside sampling loops); callers
// that ingest external data validate first.
template <class T>
SpectralBounds hermitian_eigen_bounds(const Mat<T>& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) {
    double a = real_part(m(0, 0));
    return {a, a};
  }
  if (n == 2) {
    double a = real_part(m(0, 0));
    double c = real_part(m(1, 1));
    double mean = 0.5 * (a + c);
    double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + abs2(m(0, 1))));
    return {mean - disc, mean + disc};
  }
  Eigen::SelfAdjointEigenSolver<Mat<T>> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw contract_error("hermitian_eigen_bounds: eigenvalue iteration failed");
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(n - 1)};
}

template <class T>
bool finite_matrix(const Mat<T>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!finite_scalar(m(i, j))) return false;
  return true;
}

}  // namespace framelab
