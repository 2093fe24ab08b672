#pragma once

// Truncated Taylor series ("jets") of a single variable.
//
// A Jet of degree D at base point x0 holds c_0..c_D with c_k = h^(k)(x0)/k!.
// All arithmetic is exact up to order D; coefficients past D are never formed.

#include <bit>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace wsp {

namespace detail {

template <class T> struct real_of {
  using type = T;
};
template <class T> struct real_of<std::complex<T>> {
  using type = T;
};

template <class T> struct is_complex : std::false_type {};
template <class T> struct is_complex<std::complex<T>> : std::true_type {};

// True when v lies on the closed non-positive real half-axis, where log, sqrt
// and fractional powers have no Taylor expansion.
template <class T> bool on_branch_cut(const T &v) {
  if constexpr (is_complex<T>::value)
    return v.imag() == 0 && v.real() <= 0;
  else
    return v <= 0;
}

} // namespace detail

template <class T> class Jet {
public:
  using value_type = T;
  using real_type = typename detail::real_of<T>::type;

  Jet() : Jet(real_type(0), std::vector<T>{T(0)}) {}

  Jet(real_type base_point, std::vector<T> coeffs)
      : base_(std::move(base_point)), c_(std::move(coeffs)) {
    if (c_.empty())
      throw std::invalid_argument("jet needs at least one coefficient");
  }

  static Jet constant(const T &value, int degree,
                      real_type base_point = real_type(0)) {
    check_degree(degree);
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    c[0] = value;
    return Jet(std::move(base_point), std::move(c));
  }

  /// The identity function x -> x expanded at x0.
  static Jet variable(const real_type &x0, int degree) {
    if (degree < 1)
      throw std::invalid_argument("jet variable needs degree >= 1");
    Jet j = constant(T(x0), degree, x0);
    j.c_[1] = T(1);
    return j;
  }

  const real_type &base_point() const { return base_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::span<const T> coeffs() const { return c_; }
  const T &operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  T &operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  /// k-th derivative at the base point, k! * c_k.
  T derivative(int k) const {
    if (k < 0 || k > degree())
      throw std::out_of_range("derivative order " + std::to_string(k) +
                              " outside jet degree " +
                              std::to_string(degree()));
    T v = c_[static_cast<std::size_t>(k)];
    for (int i = 2; i <= k; ++i)
      v *= T(i);
    return v;
  }

  Jet truncated(int degree) const {
    check_degree(degree);
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    for (int k = 0; k <= std::min(degree, this->degree()); ++k)
      c[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)];
    return Jet(base_, std::move(c));
  }

  Jet &operator+=(const Jet &b) {
    check_compatible(b);
    for (std::size_t k = 0; k < c_.size(); ++k)
      c_[k] += b.c_[k];
    return *this;
  }
  Jet &operator-=(const Jet &b) {
    check_compatible(b);
    for (std::size_t k = 0; k < c_.size(); ++k)
      c_[k] -= b.c_[k];
    return *this;
  }
  Jet &operator*=(const Jet &b) { return *this = *this * b; }
  Jet &operator/=(const Jet &b) { return *this = *this / b; }

  Jet &operator+=(const T &s) {
    c_[0] += s;
    return *this;
  }
  Jet &operator-=(const T &s) {
    c_[0] -= s;
    return *this;
  }
  Jet &operator*=(const T &s) {
    for (auto &v : c_)
      v *= s;
    return *this;
  }
  Jet &operator/=(const T &s) {
    if (s == T(0))
      throw std::domain_error("jet division by zero scalar");
    for (auto &v : c_)
      v /= s;
    return *this;
  }

  friend Jet operator-(Jet a) {
    for (auto &v : a.c_)
      v = -v;
    return a;
  }
  friend Jet operator+(Jet a, const Jet &b) { return a += b; }
  friend Jet operator-(Jet a, const Jet &b) { return a -= b; }
  friend Jet operator+(Jet a, const T &s) { return a += s; }
  friend Jet operator+(const T &s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const T &s) { return a -= s; }
  friend Jet operator-(const T &s, Jet a) { return (-a) += s; }
  friend Jet operator*(Jet a, const T &s) { return a *= s; }
  friend Jet operator*(const T &s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const T &s) { return a /= s; }
  friend Jet operator/(const T &s, const Jet &b) {
    return Jet::constant(s, b.degree(), b.base_point()) / b;
  }

  friend Jet operator*(const Jet &a, const Jet &b) {
    a.check_compatible(b);
    const int d = a.degree();
    std::vector<T> c(a.c_.size(), T(0));
    for (int i = 0; i <= d; ++i) {
      if (a[i] == T(0))
        continue;
      for (int j = 0; i + j <= d; ++j)
        c[static_cast<std::size_t>(i + j)] += a[i] * b[j];
    }
    return Jet(a.base_, std::move(c));
  }

  // Formal long division; requires a nonzero constant term in the divisor.
  friend Jet operator/(const Jet &a, const Jet &b) {
    a.check_compatible(b);
    if (b[0] == T(0))
      throw std::domain_error("jet division by series with zero constant term");
    const int d = a.degree();
    std::vector<T> q(a.c_.size(), T(0));
    for (int k = 0; k <= d; ++k) {
      T s = a[k];
      for (int j = 1; j <= k; ++j)
        s -= b[j] * q[static_cast<std::size_t>(k - j)];
      q[static_cast<std::size_t>(k)] = s / b[0];
    }
    return Jet(a.base_, std::move(q));
  }

private:
  static void check_degree(int degree) {
    if (degree < 0)
      throw std::invalid_argument("negative jet degree");
  }

  void check_compatible(const Jet &b) const {
    if (degree() != b.degree())
      throw std::invalid_argument("jet degree mismatch: " +
                                  std::to_string(degree()) + " vs " +
                                  std::to_string(b.degree()));
    if (!(base_ == b.base_))
      throw std::invalid_argument("jet base point mismatch");
  }

  real_type base_;
  std::vector<T> c_;
};

/// Derivative of the represented function; the degree drops by one.
template <class T> Jet<T> differentiate(const Jet<T> &a) {
  if (a.degree() < 1)
    throw std::invalid_argument("cannot differentiate a degree-0 jet");
  std::vector<T> c(static_cast<std::size_t>(a.degree()), T(0));
  for (int k = 0; k < a.degree(); ++k)
    c[static_cast<std::size_t>(k)] = T(k + 1) * a[k + 1];
  return Jet<T>(a.base_point(), std::move(c));
}

template <class T> Jet<T> exp(const Jet<T> &a) {
  using std::exp;
  Jet<T> e = Jet<T>::constant(exp(a[0]), a.degree(), a.base_point());
  for (int k = 1; k <= a.degree(); ++k) {
    T s(0);
    for (int j = 1; j <= k; ++j)
      s += T(j) * a[j] * e[k - j];
    e[k] = s / T(k);
  }
  return e;
}

template <class T> Jet<T> log(const Jet<T> &a) {
  using std::log;
  if (detail::on_branch_cut(a[0]))
    throw std::domain_error("log of jet with non-positive constant term");
  Jet<T> l = Jet<T>::constant(log(a[0]), a.degree(), a.base_point());
  for (int k = 1; k <= a.degree(); ++k) {
    T s = T(k) * a[k];
    for (int j = 1; j < k; ++j)
      s -= a[j] * T(k - j) * l[k - j];
    l[k] = s / (T(k) * a[0]);
  }
  return l;
}

/// sin and cos of a jet, computed together by their coupled recurrence.
template <class T> std::pair<Jet<T>, Jet<T>> sincos(const Jet<T> &a) {
  using std::cos;
  using std::sin;
  Jet<T> s = Jet<T>::constant(sin(a[0]), a.degree(), a.base_point());
  Jet<T> c = Jet<T>::constant(cos(a[0]), a.degree(), a.base_point());
  for (int k = 1; k <= a.degree(); ++k) {
    T ss(0), cs(0);
    for (int j = 1; j <= k; ++j) {
      ss += T(j) * a[j] * c[k - j];
      cs -= T(j) * a[j] * s[k - j];
    }
    s[k] = ss / T(k);
    c[k] = cs / T(k);
  }
  return {std::move(s), std::move(c)};
}

template <class T> Jet<T> sin(const Jet<T> &a) { return sincos(a).first; }
template <class T> Jet<T> cos(const Jet<T> &a) { return sincos(a).second; }

template <class T> Jet<T> sqrt(const Jet<T> &a) {
  using std::sqrt;
  if (detail::on_branch_cut(a[0]))
    throw std::domain_error("sqrt of jet with non-positive constant term");
  Jet<T> s = Jet<T>::constant(sqrt(a[0]), a.degree(), a.base_point());
  const T two_s0 = T(2) * s[0];
  for (int k = 1; k <= a.degree(); ++k) {
    T v = a[k];
    for (int j = 1; j < k; ++j)
      v -= s[j] * s[k - j];
    s[k] = v / two_s0;
  }
  return s;
}

/// Integer power by binary exponentiation; defined for any constant term
/// (a negative exponent needs a nonzero one).
template <class T> Jet<T> ipow(const Jet<T> &a, long long p) {
  if (p < 0) {
    if (a[0] == T(0))
      throw std::domain_error("negative power of jet with zero constant term");
    return T(1) / ipow(a, -p);
  }
  Jet<T> result = Jet<T>::constant(T(1), a.degree(), a.base_point());
  Jet<T> base = a;
  bool first = true;
  while (p > 0) {
    if (p & 1) {
      result = first ? base : result * base;
      first = false;
    }
    p >>= 1;
    if (p > 0)
      base = base * base;
  }
  return result;
}

/// Real power a^p. Integral p goes through ipow; otherwise the constant term
/// must lie off the non-positive real axis.
template <class T>
Jet<T> pow(const Jet<T> &a, const typename Jet<T>::real_type &p) {
  using std::pow;
  using std::round;
  const auto rounded = round(p);
  if (rounded == p && std::abs(static_cast<double>(p)) < 1e15)
    return ipow(a, static_cast<long long>(rounded));
  if (detail::on_branch_cut(a[0]))
    throw std::domain_error(
        "fractional power of jet with non-positive constant term");
  Jet<T> r = Jet<T>::constant(pow(a[0], T(p)), a.degree(), a.base_point());
  for (int k = 1; k <= a.degree(); ++k) {
    T s(0);
    for (int j = 1; j <= k; ++j)
      s += (T(p) * T(j) - T(k - j)) * a[j] * r[k - j];
    r[k] = s / (T(k) * a[0]);
  }
  return r;
}

template <class T> Jet<T> atan(const Jet<T> &a) {
  using std::atan;
  Jet<T> r = Jet<T>::constant(atan(a[0]), a.degree(), a.base_point());
  if (a.degree() == 0)
    return r;
  const Jet<T> lower = a.truncated(a.degree() - 1);
  const Jet<T> q = differentiate(a) / (T(1) + lower * lower);
  for (int k = 1; k <= a.degree(); ++k)
    r[k] = q[k - 1] / T(k);
  return r;
}

/// |a| for real jets; undefined at a zero constant term (the kink).
template <class T> Jet<T> abs(const Jet<T> &a) {
  static_assert(!detail::is_complex<T>::value, "abs is not analytic");
  if (a[0] == T(0))
    throw std::domain_error("abs of jet with zero constant term");
  return a[0] < T(0) ? -a : a;
}

/// outer(inner(t)) truncated at the common degree. inner must vanish at t = 0.
template <class T> Jet<T> compose(const Jet<T> &outer, const Jet<T> &inner) {
  if (outer.degree() != inner.degree())
    throw std::invalid_argument("jet compose needs equal degrees");
  if (inner[0] != T(0))
    throw std::domain_error("jet compose needs inner series without constant term");
  const int d = outer.degree();
  Jet<T> r = Jet<T>::constant(outer[d], d, inner.base_point());
  for (int k = d - 1; k >= 0; --k) {
    r = r * inner;
    r[0] += outer[k];
  }
  return r;
}

/// Compositional inverse b of a (a(b(y)) = y), by Newton iteration on formal
/// series; each step doubles the number of correct coefficients.
template <class T> Jet<T> revert(const Jet<T> &a) {
  if (a[0] != T(0))
    throw std::domain_error("series reversion needs zero constant term");
  if (a.degree() < 1 || a[1] == T(0))
    throw std::domain_error("series reversion needs nonzero linear term");
  using R = typename Jet<T>::real_type;
  const int d = a.degree();
  Jet<T> a_local(R(0), std::vector<T>(a.coeffs().begin(), a.coeffs().end()));
  const Jet<T> id = Jet<T>::variable(R(0), d);
  const Jet<T> slope = differentiate(a_local).truncated(d);

  Jet<T> b = id / a[1];
  const int steps = std::bit_width(static_cast<unsigned>(d)) + 1;
  for (int it = 0; it < steps; ++it) {
    const Jet<T> residual = compose(a_local, b) - id;
    b -= residual / compose(slope, b);
    b[0] = T(0);
  }
  return b;
}

} // namespace wsp
