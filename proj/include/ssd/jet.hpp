#pragma once
/**
 * @file jet.hpp
 * @brief Truncated Taylor arithmetic ("jets") over real or complex scalars.
 *
 * A jet stores the normalized Taylor coefficients c[k] = f^(k)(x)/k! of a
 * function at a point, up to a runtime order. Arithmetic and elementary
 * functions propagate the coefficients exactly (up to rounding), which is
 * how closed-form profiles obtain analytic derivatives.
 */
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace ssd {

using cplx = std::complex<double>;

inline constexpr int kJetCapacity = 6;

template <class T>
struct Jet {
  std::array<T, kJetCapacity> c{};
  int order = 0;

  Jet() = default;
  Jet(T value, int ord) : order(ord) { c[0] = value; }

  /// Independent variable at x: x + 1*dx.
  static Jet variable(T x, int ord) {
    Jet j(x, ord);
    if (ord >= 1) j.c[1] = T(1);
    return j;
  }
  static Jet constant(T v, int ord) { return Jet(v, ord); }

  T value() const { return c[0]; }

  /// k-th derivative (k! * c[k]).
  T derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  /// Jet of the derivative; loses one order.
  Jet differentiated() const {
    Jet d;
    d.order = std::max(order - 1, 0);
    for (int k = 0; k + 1 <= order; ++k) d.c[k] = c[k + 1] * double(k + 1);
    if (order == 0) d.c[0] = T(0);
    return d;
  }

  Jet truncated(int ord) const {
    Jet r = *this;
    r.order = std::min(order, ord);
    for (int k = r.order + 1; k < kJetCapacity; ++k) r.c[k] = T(0);
    return r;
  }

  template <class U>
  Jet<U> cast() const {
    Jet<U> r;
    r.order = order;
    for (int k = 0; k <= order; ++k) r.c[k] = U(c[k]);
    return r;
  }
};

template <class T>
Jet<std::complex<T>> to_complex(const Jet<T>& a) {
  return a.template cast<std::complex<T>>();
}

namespace detail {
template <class T>
int common_order(const Jet<T>& a, const Jet<T>& b) {
  return std::min(a.order, b.order);
}
}  // namespace detail

template <class T>
Jet<T> operator-(const Jet<T>& a) {
  Jet<T> r = a;
  for (int k = 0; k <= r.order; ++k) r.c[k] = -r.c[k];
  return r;
}

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.order = detail::common_order(a, b);
  for (int k = 0; k <= r.order; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.order = detail::common_order(a, b);
  for (int k = 0; k <= r.order; ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.order = detail::common_order(a, b);
  for (int k = 0; k <= r.order; ++k) {
    T s(0);
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.order = detail::common_order(a, b);
  const T inv = T(1) / b.c[0];
  for (int k = 0; k <= r.order; ++k) {
    T s = a.c[k];
    for (int i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
    r.c[k] = s * inv;
  }
  return r;
}

// Scalar mixing. The scalar type must convert to T.
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator+(const Jet<T>& a, S s) {
  Jet<T> r = a;
  r.c[0] += T(s);
  return r;
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator+(S s, const Jet<T>& a) {
  return a + s;
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator-(const Jet<T>& a, S s) {
  Jet<T> r = a;
  r.c[0] -= T(s);
  return r;
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator-(S s, const Jet<T>& a) {
  Jet<T> r = -a;
  r.c[0] += T(s);
  return r;
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator*(const Jet<T>& a, S s) {
  Jet<T> r = a;
  const T t(s);
  for (int k = 0; k <= r.order; ++k) r.c[k] *= t;
  return r;
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator*(S s, const Jet<T>& a) {
  return a * s;
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator/(const Jet<T>& a, S s) {
  return a * (T(1) / T(s));
}
template <class T, class S, class = std::enable_if_t<std::is_convertible_v<S, T>>>
Jet<T> operator/(S s, const Jet<T>& a) {
  return Jet<T>::constant(T(s), a.order) / a;
}

// ---------------------------------------------------------------------------
// Scalar hyperbolics that stay finite for large |Re z|.

inline double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

inline cplx tanh_stable(cplx z) {
  if (z.real() >= 0.0) {
    const cplx e = std::exp(-2.0 * z);
    return (1.0 - e) / (1.0 + e);
  }
  const cplx e = std::exp(2.0 * z);
  return (e - 1.0) / (e + 1.0);
}

inline double tanh_stable(double x) { return std::tanh(x); }

inline cplx sech(cplx z) {
  const cplx s = z.real() >= 0.0 ? z : -z;
  const cplx e = std::exp(-s);
  return 2.0 * e / (1.0 + e * e);
}

// ---------------------------------------------------------------------------
// Elementary functions on jets.

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  Jet<T> e;
  e.order = a.order;
  e.c[0] = exp(a.c[0]);
  for (int k = 1; k <= a.order; ++k) {
    T s(0);
    for (int j = 1; j <= k; ++j) s += double(j) * a.c[j] * e.c[k - j];
    e.c[k] = s / double(k);
  }
  return e;
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  Jet<T> s;
  s.order = a.order;
  s.c[0] = sqrt(a.c[0]);
  const T inv2 = T(1) / (T(2) * s.c[0]);
  for (int k = 1; k <= a.order; ++k) {
    T acc = a.c[k];
    for (int i = 1; i <= k - 1; ++i) acc -= s.c[i] * s.c[k - i];
    s.c[k] = acc * inv2;
  }
  return s;
}

/// tanh via t' = (1 - t^2) a'.
template <class T>
Jet<T> tanh(const Jet<T>& a) {
  Jet<T> t;
  t.order = a.order;
  std::array<T, kJetCapacity> u{};  // 1 - t^2
  t.c[0] = tanh_stable(a.c[0]);
  u[0] = T(1) - t.c[0] * t.c[0];
  for (int k = 1; k <= a.order; ++k) {
    T s(0);
    for (int j = 1; j <= k; ++j) s += double(j) * a.c[j] * u[k - j];
    t.c[k] = s / double(k);
    T sq(0);
    for (int i = 0; i <= k; ++i) sq += t.c[i] * t.c[k - i];
    u[k] = -sq;
  }
  return t;
}

/// sech via h' = -h tanh(a) a'.
template <class T>
Jet<T> sech(const Jet<T>& a) {
  const Jet<T> t = tanh(a);
  Jet<T> h;
  h.order = a.order;
  std::array<T, kJetCapacity> v{};  // h * t
  h.c[0] = sech(a.c[0]);
  v[0] = h.c[0] * t.c[0];
  for (int k = 1; k <= a.order; ++k) {
    T s(0);
    for (int j = 1; j <= k; ++j) s += double(j) * a.c[j] * v[k - j];
    h.c[k] = -s / double(k);
    T hv(0);
    for (int i = 0; i <= k; ++i) hv += h.c[i] * t.c[k - i];
    v[k] = hv;
  }
  return h;
}

template <class T>
Jet<T> square(const Jet<T>& a) {
  return a * a;
}

template <class T>
Jet<T> conj(const Jet<T>& a) {
  if constexpr (std::is_arithmetic_v<T>) {
    return a;
  } else {
    Jet<T> r = a;
    for (int k = 0; k <= r.order; ++k) r.c[k] = std::conj(r.c[k]);
    return r;
  }
}

}  // namespace ssd
