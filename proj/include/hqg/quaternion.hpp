#pragma once

#include <array>

#include "hqg/chart.hpp"
#include "hqg/jet.hpp"

namespace hqg {

// q = q[0] + q[1] i + q[2] j + q[3] k, generic over double or Jet.
template <class T>
using Quat = std::array<T, 4>;

template <class T>
Quat<T> qmul(const Quat<T>& a, const Quat<T>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

template <class T>
Quat<T> qconj(const Quat<T>& a) {
  return {a[0], -a[1], -a[2], -a[3]};
}

template <class T>
T qnorm2(const Quat<T>& a) {
  return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
}

inline Quat<double> qinv(const Quat<double>& a) {
  const double n = qnorm2(a);
  auto c = qconj(a);
  return {c[0] / n, c[1] / n, c[2] / n, c[3] / n};
}

inline Quat<Jet> qinv(const Quat<Jet>& a) {
  Jet r = recip(qnorm2(a));
  auto c = qconj(a);
  return {c[0] * r, c[1] * r, c[2] * r, c[3] * r};
}

// unit i_a for a = 0..3 (i_0 = 1)
inline Quat<double> qunit(int a) {
  Quat<double> q{0, 0, 0, 0};
  q[a] = 1.0;
  return q;
}

template <class T>
Quat<T> qunit_as(int a) {
  Quat<T> q{T(0.0), T(0.0), T(0.0), T(0.0)};
  q[a] = T(1.0);
  return q;
}

// Matrix of Ad_q on Im H in the basis (i, j, k), columns are images:
// M(a, b) = i_{a+1}-component of q i_{b+1} q^{-1}.
template <class T>
std::array<std::array<T, 3>, 3> ad_matrix(const Quat<T>& q) {
  const T r = T(1.0) / qnorm2(q);
  std::array<std::array<T, 3>, 3> M;
  for (int b = 0; b < 3; ++b) {
    auto c = qmul(qmul(q, qunit_as<T>(b + 1)), qconj(q));
    for (int a = 0; a < 3; ++a) M[a][b] = c[a + 1] * r;
  }
  return M;
}

// 4x4 matrix of left multiplication x -> q x and right multiplication x -> x q
Mat left_mult(const Quat<double>& q);
Mat right_mult(const Quat<double>& q);

// Ad_z on Im H in the basis (i, j, k), as ad_matrix; rejects z = 0.
Mat ad_so3(const Quat<double>& z);
Quat<double> qexp_imag(double t, int axis);

}  // namespace hqg
