#include "hqg/quaternion.hpp"

#include <cmath>
#include <stdexcept>

namespace hqg {

Mat left_mult(const Quat<double>& q) {
  Mat M(4, 4);
  for (int a = 0; a < 4; ++a) {
    auto c = qmul(q, qunit(a));
    for (int b = 0; b < 4; ++b) M(b, a) = c[b];
  }
  return M;
}

Mat right_mult(const Quat<double>& q) {
  Mat M(4, 4);
  for (int a = 0; a < 4; ++a) {
    auto c = qmul(qunit(a), q);
    for (int b = 0; b < 4; ++b) M(b, a) = c[b];
  }
  return M;
}

Mat ad_so3(const Quat<double>& z) {
  if (qnorm2(z) == 0.0) throw std::invalid_argument("ad_so3 of the zero quaternion");
  auto M = ad_matrix(z);
  Mat A(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) A(a, b) = M[a][b];
  return A;
}

Quat<double> qexp_imag(double t, int axis) {
  Quat<double> q{std::cos(t), 0, 0, 0};
  q[axis] = std::sin(t);
  return q;
}

}  // namespace hqg
