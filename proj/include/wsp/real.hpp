#pragma once

#include <complex>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

namespace wsp {

/// Working precision of the integration pipeline (IEEE binary128).
///
/// Error terms of high-order expansions fall far below double precision at
/// moderate phase scales (T^-4 at T = 2^18 is ~2e-22), so every quantity that
/// feeds a comparison between an expansion and direct quadrature is carried in
/// quad precision.
using real = boost::multiprecision::float128;
using complex = std::complex<real>;

inline const real &pi() {
  static const real value = boost::math::constants::pi<real>();
  return value;
}

/// e(t) = exp(2 pi i t). The argument is reduced modulo 1 first, so integer
/// arguments map to exactly 1.
complex unit_phase(const real &t);

inline double to_double(const real &v) { return static_cast<double>(v); }

inline std::complex<double> to_double(const complex &v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

} // namespace wsp
