#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "errors.hpp"

namespace framelab {

using cplx = std::complex<double>;

enum class Field { Real, Complex };

template <class T>
inline constexpr bool is_complex_v = std::is_same_v<T, cplx>;

template <class T>
inline constexpr Field field_of_v = is_complex_v<T> ? Field::Complex : Field::Real;

inline const char* field_name(Field f) {
  return f == Field::Real ? "R" : "C";
}

inline Field parse_field(const std::string& s) {
  if (s == "R" || s == "r" || s == "real") return Field::Real;
  if (s == "C" || s == "c" || s == "complex") return Field::Complex;
  throw parse_error("unknown field '" + s + "' (expected R or C)");
}

inline double conj_val(double x) { return x; }
inline cplx conj_val(const cplx& x) { return std::conj(x); }

inline double real_part(double x) { return x; }
inline double real_part(const cplx& x) { return x.real(); }

inline double imag_part(double) { return 0.0; }
inline double imag_part(const cplx& x) { return x.imag(); }

// |x|^2 without the square root.
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return std::norm(x); }

inline bool finite_scalar(double x) { return std::isfinite(x); }
inline bool finite_scalar(const cplx& x) {
  return std::isfinite(x.real()) && std::isfinite(x.imag());
}

}  // namespace framelab
