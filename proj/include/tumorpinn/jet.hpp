#pragma once

// Second-order input jets over (t, x, y).
//
// A Jet carries a value, its gradient with respect to (t, x, y) and the two
// pure spatial second derivatives (xx, yy). That is exactly the set of input
// derivatives the porous-medium residual needs, and it is closed under the
// supported primitives: for a unary f,
//
//   f(u)_k  = f'(u) u_k
//   f(u)_kk = f'(u) u_kk + f''(u) u_k^2
//
// The scalar type is a template parameter so the same algebra runs on plain
// doubles and on reverse-mode tape variables.

#include <array>
#include <cmath>
#include <cstddef>

namespace tumorpinn {

enum InputAxis : std::size_t { kAxisT = 0, kAxisX = 1, kAxisY = 2 };

template <class T>
struct Jet {
  T value{};
  std::array<T, 3> grad{};       // d/dt, d/dx, d/dy
  std::array<T, 2> hess_diag{};  // d2/dx2, d2/dy2

  Jet() = default;
  explicit Jet(T v) : value(v), grad{T(0), T(0), T(0)}, hess_diag{T(0), T(0)} {}

  /// Independent variable along `axis` with value v.
  static Jet variable(T v, std::size_t axis) {
    Jet j(v);
    j.grad[axis] = T(1);
    return j;
  }

  T laplacian() const { return hess_diag[0] + hess_diag[1]; }
  T grad_norm2() const { return grad[kAxisX] * grad[kAxisX] + grad[kAxisY] * grad[kAxisY]; }
};

using Jet2 = Jet<double>;

namespace jet_detail {

// Chain rule for a unary map given f(a), f'(a), f''(a).
template <class T>
Jet<T> chain(const Jet<T>& a, T f0, T f1, T f2) {
  Jet<T> r;
  r.value = f0;
  for (std::size_t i = 0; i < 3; ++i) r.grad[i] = f1 * a.grad[i];
  for (std::size_t k = 0; k < 2; ++k) {
    const T& ak = a.grad[k + 1];
    r.hess_diag[k] = f1 * a.hess_diag[k] + f2 * ak * ak;
  }
  return r;
}

}  // namespace jet_detail

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.value = a.value + b.value;
  for (std::size_t i = 0; i < 3; ++i) r.grad[i] = a.grad[i] + b.grad[i];
  for (std::size_t k = 0; k < 2; ++k) r.hess_diag[k] = a.hess_diag[k] + b.hess_diag[k];
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
  Jet<T> r;
  r.value = -a.value;
  for (std::size_t i = 0; i < 3; ++i) r.grad[i] = -a.grad[i];
  for (std::size_t k = 0; k < 2; ++k) r.hess_diag[k] = -a.hess_diag[k];
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.value = a.value - b.value;
  for (std::size_t i = 0; i < 3; ++i) r.grad[i] = a.grad[i] - b.grad[i];
  for (std::size_t k = 0; k < 2; ++k) r.hess_diag[k] = a.hess_diag[k] - b.hess_diag[k];
  return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r;
  r.value = a.value * b.value;
  for (std::size_t i = 0; i < 3; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  for (std::size_t k = 0; k < 2; ++k) {
    r.hess_diag[k] = a.hess_diag[k] * b.value + T(2) * a.grad[k + 1] * b.grad[k + 1] +
                     a.value * b.hess_diag[k];
  }
  return r;
}

template <class T>
Jet<T> operator+(const Jet<T>& a, const T& c) {
  Jet<T> r = a;
  r.value = a.value + c;
  return r;
}
template <class T>
Jet<T> operator+(const T& c, const Jet<T>& a) {
  return a + c;
}
template <class T>
Jet<T> operator-(const Jet<T>& a, const T& c) {
  Jet<T> r = a;
  r.value = a.value - c;
  return r;
}
template <class T>
Jet<T> operator-(const T& c, const Jet<T>& a) {
  return -a + c;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const T& c) {
  Jet<T> r;
  r.value = a.value * c;
  for (std::size_t i = 0; i < 3; ++i) r.grad[i] = a.grad[i] * c;
  for (std::size_t k = 0; k < 2; ++k) r.hess_diag[k] = a.hess_diag[k] * c;
  return r;
}
template <class T>
Jet<T> operator*(const T& c, const Jet<T>& a) {
  return a * c;
}

template <class T>
Jet<T> reciprocal(const Jet<T>& a) {
  const T inv = T(1) / a.value;
  return jet_detail::chain(a, inv, -inv * inv, T(2) * inv * inv * inv);
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  return a * reciprocal(b);
}
template <class T>
Jet<T> operator/(const Jet<T>& a, const T& c) {
  return a * (T(1) / c);
}

template <class T>
Jet<T> tanh(const Jet<T>& a) {
  using std::tanh;
  const T z = tanh(a.value);
  const T d1 = T(1) - z * z;
  return jet_detail::chain(a, z, d1, T(-2) * z * d1);
}

/// |a| with the subderivative at 0 fixed to +1.
template <class T>
Jet<T> abs(const Jet<T>& a) {
  return a.value < T(0) ? -a : a;
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.value);
  return jet_detail::chain(a, s, cos(a.value), -s);
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.value);
  const T d1 = T(0.5) / s;
  return jet_detail::chain(a, s, d1, T(-0.5) * d1 / a.value);
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::log;
  const T inv = T(1) / a.value;
  return jet_detail::chain(a, log(a.value), inv, -inv * inv);
}

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  const T e = exp(a.value);
  return jet_detail::chain(a, e, e, e);
}

/// Integer power by repeated multiplication of the value; n may be negative.
template <class T>
Jet<T> pow(const Jet<T>& a, int n) {
  if (n == 0) return Jet<T>(T(1));
  if (n < 0) return reciprocal(pow(a, -n));
  T p2(1);  // a^(n-2)
  for (int i = 0; i < n - 2; ++i) p2 = p2 * a.value;
  T p1 = n >= 2 ? p2 * a.value : T(1);  // a^(n-1)
  T p0 = p1 * a.value;                  // a^n
  const T fn = T(static_cast<double>(n));
  const T f2 = n >= 2 ? fn * T(static_cast<double>(n - 1)) * p2 : T(0);
  return jet_detail::chain(a, p0, fn * p1, f2);
}

}  // namespace tumorpinn
