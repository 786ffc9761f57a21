#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace framelab {

// Number of monomials in `vars` variables of total degree <= degree, i.e.
// C(degree + vars, vars), clamped so oversized requests stay comparable.
inline long long monomial_count(int vars, int degree) {
  long long count = 1;
  for (int i = 1; i <= vars; ++i) {
    count = count * (degree + i) / i;  // exact: product of i consecutive integers
    if (count > (1LL << 40)) return 1LL << 40;
  }
  return count;
}

// All exponent vectors with total degree <= degree, in a fixed deterministic
// order (lexicographic in the exponents, first variable slowest).
inline std::vector<std::vector<int>> monomials_up_to(int vars, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(vars, 0);
  // Depth-first over positions; `budget` is the remaining total degree.
  auto rec = [&](auto&& self, int pos, int budget) -> void {
    if (pos == vars) {
      out.push_back(current);
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      current[pos] = e;
      self(self, pos + 1, budget - e);
    }
    current[pos] = 0;
  };
  rec(rec, 0, degree);
  return out;
}

// Real multivariate polynomial in a fixed monomial basis.
class Polynomial {
 public:
  Polynomial(int vars, std::vector<std::vector<int>> exponents, VecR coefficients)
      : vars_(vars), exponents_(std::move(exponents)), coefficients_(std::move(coefficients)) {
    if (static_cast<Eigen::Index>(exponents_.size()) != coefficients_.size())
      throw dimension_error("Polynomial: terms and coefficients disagree");
    for (const auto& alpha : exponents_)
      if (static_cast<int>(alpha.size()) != vars_)
        throw dimension_error("Polynomial: exponent arity mismatch");
  }

  int vars() const { return vars_; }
  int terms() const { return static_cast<int>(exponents_.size()); }
  const std::vector<int>& exponent(int t) const { return exponents_.at(t); }
  double coefficient(int t) const { return coefficients_[t]; }

  int total_degree() const {
    int deg = 0;
    for (int t = 0; t < terms(); ++t) {
      if (coefficients_[t] == 0.0) continue;
      int d = 0;
      for (int e : exponents_[t]) d += e;
      deg = std::max(deg, d);
    }
    return deg;
  }

  double eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != vars_)
      throw dimension_error("Polynomial::eval: wrong number of variables");
    double acc = 0.0;
    for (int t = 0; t < terms(); ++t) {
      double term = coefficients_[t];
      for (int v = 0; v < vars_; ++v)
        for (int e = 0; e < exponents_[t][v]; ++e) term *= point[v];
      acc += term;
    }
    return acc;
  }

  // Coefficient of a specific exponent vector (0 if absent from the basis).
  double coefficient_of(const std::vector<int>& alpha) const {
    for (int t = 0; t < terms(); ++t)
      if (exponents_[t] == alpha) return coefficients_[t];
    return 0.0;
  }

  // Largest |coefficient| among terms of total degree strictly above `degree`.
  double max_abs_coefficient_above(int degree) const {
    double worst = 0.0;
    for (int t = 0; t < terms(); ++t) {
      int d = 0;
      for (int e : exponents_[t]) d += e;
      if (d > degree) worst = std::max(worst, std::abs(coefficients_[t]));
    }
    return worst;
  }

 private:
  int vars_;
  std::vector<std::vector<int>> exponents_;
  VecR coefficients_;
};

// Least-squares fit of sampled values in the monomial basis of total degree
// <= degree.  The normal system is solved in box-scaled coordinates t = x/R
// for conditioning; returned coefficients are in the original coordinates.
inline Polynomial fit_monomials(const MatR& points, const VecR& values, int degree,
                                double box_radius) {
  if (points.rows() != values.size())
    throw dimension_error("fit_monomials: points and values disagree");
  if (points.rows() == 0) throw dimension_error("fit_monomials: no samples");
  if (!(box_radius > 0.0))
    throw contract_error("fit_monomials: box radius must be positive");
  const int vars = static_cast<int>(points.cols());
  std::vector<std::vector<int>> basis = monomials_up_to(vars, degree);
  const int terms = static_cast<int>(basis.size());
  if (points.rows() < terms)
    throw dimension_error("fit_monomials: " + std::to_string(points.rows()) +
                          " samples cannot determine " + std::to_string(terms) +
                          " coefficients");

  MatR design(points.rows(), terms);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (int t = 0; t < terms; ++t) {
      double m = 1.0;
      for (int v = 0; v < vars; ++v) {
        double tv = points(i, v) / box_radius;
        for (int e = 0; e < basis[t][v]; ++e) m *= tv;
      }
      design(i, t) = m;
    }
  }
  VecR scaled = design.colPivHouseholderQr().solve(values);
  VecR coefficients(terms);
  for (int t = 0; t < terms; ++t) {
    int total = 0;
    for (int e : basis[t]) total += e;
    coefficients[t] = scaled[t] / std::pow(box_radius, total);
  }
  return Polynomial(vars, std::move(basis), std::move(coefficients));
}

}  // namespace framelab
