#include "hqg/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace hqg {

Mat Tensor3::slot(int i) const {
  Mat m(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) m(k, j) = (*this)(k, i, j);
  return m;
}

double Tensor3::max_abs() const {
  double r = 0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

Mat Tensor4::endo(int i, int j) const {
  Mat m(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) m(k, l) = (*this)(k, l, i, j);
  return m;
}

Vec Tensor4::apply(const Vec& X, const Vec& Y, const Vec& Z) const {
  Vec out = Vec::Zero(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double xy = X[i] * Y[j];
      if (xy == 0.0) continue;
      out += xy * (endo(i, j) * Z);
    }
  return out;
}

double Tensor4::max_abs() const {
  double r = 0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

Tensor3 tensor3_of(const std::vector<Jet>& js, int d, int offset) {
  Tensor3 t(d);
  for (int m = 0; m < d * d * d; ++m) t.v[m] = js[offset + m].value();
  return t;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Vec lie_bracket(const std::vector<Jet>& X, const std::vector<Jet>& Y) {
  const int d = static_cast<int>(X.size());
  Vec r = Vec::Zero(d);
  for (int k = 0; k < d; ++k) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += X[i].value() * Y[k].d(i) - Y[i].value() * X[k].d(i);
    r[k] = s;
  }
  return r;
}

Tensor3 nijenhuis_tensor(const std::vector<Jet>& J, int d) {
  Tensor3 N(d);
  auto Jv = [&](int k, int j) { return J[ei(d, k, j)].value(); };
  auto dJ = [&](int m, int k, int j) { return J[ei(d, k, j)].d(m); };
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int m = 0; m < d; ++m) {
          s += Jv(m, i) * dJ(m, k, j) - Jv(m, j) * dJ(m, k, i);
          s += Jv(k, m) * dJ(j, m, i) - Jv(k, m) * dJ(i, m, j);
        }
        N(k, i, j) = s;
      }
  return N;
}

Vec nijenhuis(const std::vector<Jet>& J, int d, const Vec& X, const Vec& Y) {
  Tensor3 N = nijenhuis_tensor(J, d);
  Vec r = Vec::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r[k] += N(k, i, j) * X[i] * Y[j];
  return r;
}

Tensor3 torsion(const std::vector<Jet>& G, int d) {
  Tensor3 T(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) T(k, i, j) = G[ci(d, k, i, j)].value() - G[ci(d, k, j, i)].value();
  return T;
}

Tensor4 curvature(const std::vector<Jet>& G, int d) {
  Tensor4 R(d);
  Tensor3 g = tensor3_of(G, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = G[ci(d, k, j, l)].d(i) - G[ci(d, k, i, l)].d(j);
          for (int m = 0; m < d; ++m) s += g(m, j, l) * g(k, i, m) - g(m, i, l) * g(k, j, m);
          R(k, l, i, j) = s;
        }
  return R;
}

Mat ricci(const Tensor4& R) {
  const int d = R.d;
  Mat Ric = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l)
      for (int k = 0; k < d; ++k) Ric(j, l) += R(k, l, k, j);
  return Ric;
}

Mat ricci(const std::vector<Jet>& G, int d) {
  // contracted directly, avoiding the d^4 tensor
  Tensor3 g = tensor3_of(G, d);
  Mat Ric = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) {
      double s = 0;
      for (int k = 0; k < d; ++k) {
        s += G[ci(d, k, j, l)].d(k) - G[ci(d, k, k, l)].d(j);
        for (int m = 0; m < d; ++m) s += g(m, j, l) * g(k, k, m) - g(m, k, l) * g(k, j, m);
      }
      Ric(j, l) = s;
    }
  return Ric;
}

Mat cov_deriv_vector(const std::vector<Jet>& G, const std::vector<Jet>& X, int d) {
  Mat r(d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      double s = X[k].d(i);
      for (int j = 0; j < d; ++j) s += G[ci(d, k, i, j)].value() * X[j].value();
      r(k, i) = s;
    }
  return r;
}

Tensor3 cov_deriv_endo(const std::vector<Jet>& G, const std::vector<Jet>& T, int d) {
  Tensor3 r(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = T[ei(d, k, j)].d(i);
        for (int m = 0; m < d; ++m)
          s += G[ci(d, k, i, m)].value() * T[ei(d, m, j)].value() -
               G[ci(d, m, i, j)].value() * T[ei(d, k, m)].value();
        r(k, i, j) = s;
      }
  return r;
}

Tensor3 cov_deriv_bilinear(const std::vector<Jet>& G, const std::vector<Jet>& b, int d) {
  Tensor3 r(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        double s = b[ei(d, j, l)].d(i);
        for (int m = 0; m < d; ++m)
          s -= G[ci(d, m, i, j)].value() * b[ei(d, m, l)].value() +
               G[ci(d, m, i, l)].value() * b[ei(d, j, m)].value();
        r(i, j, l) = s;
      }
  return r;
}

std::vector<Jet> jet_cov_deriv_endo(const std::vector<Jet>& G, const std::vector<Jet>& T, int d) {
  std::vector<Jet> r(d * d * d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet s = derivative(T[ei(d, k, j)], i);
        for (int m = 0; m < d; ++m) {
          const Jet& a = T[ei(d, m, j)];
          const Jet& b = T[ei(d, k, m)];
          if (!(a.is_constant() && a.value() == 0.0)) s += G[ci(d, k, i, m)] * a;
          if (!(b.is_constant() && b.value() == 0.0)) s -= G[ci(d, m, i, j)] * b;
        }
        r[ci(d, k, i, j)] = s;
      }
  return r;
}

std::vector<Mat> second_cov_deriv_endo(const std::vector<Jet>& G, const std::vector<Jet>& A, int d) {
  Tensor3 g = tensor3_of(G, d);
  Tensor3 a = tensor3_of(A, d);
  std::vector<Mat> H(d * d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat& h = H[i * d + j];
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = A[ci(d, k, j, l)].d(i);
          for (int m = 0; m < d; ++m)
            s += g(k, i, m) * a(m, j, l) - g(m, i, j) * a(k, m, l) - g(m, i, l) * a(k, j, m);
          h(k, l) = s;
        }
    }
  return H;
}

Mat lie_derivative_endo(const std::vector<Jet>& X, const std::vector<Jet>& T, int d) {
  Mat r(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      double s = 0;
      for (int m = 0; m < d; ++m)
        s += X[m].value() * T[ei(d, k, j)].d(m) - T[ei(d, m, j)].value() * X[k].d(m) +
             T[ei(d, k, m)].value() * X[m].d(j);
      r(k, j) = s;
    }
  return r;
}

Tensor3 lie_derivative_connection(const std::vector<Jet>& X, const std::vector<Jet>& G, int d) {
  Tensor3 r(d);
  Tensor3 g = tensor3_of(G, d);
  std::vector<int> a(d, 0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        std::fill(a.begin(), a.end(), 0);
        a[i] += 1;
        a[j] += 1;
        double s = extract_partial(X[k], a);
        for (int m = 0; m < d; ++m)
          s += X[m].value() * G[ci(d, k, i, j)].d(m) - g(m, i, j) * X[k].d(m) +
               g(k, m, j) * X[m].d(i) + g(k, i, m) * X[m].d(j);
        r(k, i, j) = s;
      }
  return r;
}

Tensor3 lie_derivative_tensor12(const std::vector<Jet>& X, const std::vector<Jet>& T, int d) {
  Tensor3 r(d);
  Tensor3 t = tensor3_of(T, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0;
        for (int m = 0; m < d; ++m)
          s += X[m].value() * T[ci(d, k, i, j)].d(m) - t(m, i, j) * X[k].d(m) +
               t(k, m, j) * X[m].d(i) + t(k, i, m) * X[m].d(j);
        r(k, i, j) = s;
      }
  return r;
}

Vec lie_derivative_oneform(const std::vector<Jet>& X, const std::vector<Jet>& w, int d) {
  Vec r(d);
  for (int i = 0; i < d; ++i) {
    double s = 0;
    for (int m = 0; m < d; ++m) s += X[m].value() * w[i].d(m) + w[m].value() * X[m].d(i);
    r[i] = s;
  }
  return r;
}

Mat lie_derivative_bilinear(const std::vector<Jet>& X, const std::vector<Jet>& b, int d) {
  Mat r(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0;
      for (int m = 0; m < d; ++m)
        s += X[m].value() * b[ei(d, i, j)].d(m) + b[ei(d, m, j)].value() * X[m].d(i) +
             b[ei(d, i, m)].value() * X[m].d(j);
      r(i, j) = s;
    }
  return r;
}

Mat exterior_derivative(const std::vector<Jet>& w, int d) {
  Mat r(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r(i, j) = w[j].d(i) - w[i].d(j);
  return r;
}

JMat jmat_of(const std::vector<Jet>& js, int d, int offset) {
  JMat m(d, d);
  for (int i = 0; i < d * d; ++i) m.a[i] = js[offset + i];
  return m;
}

std::vector<Jet> flatten(const JMat& m) { return m.a; }

std::vector<Jet> pushforward_connection(const JMat& Dpsi, const std::vector<Jet>& Hpsi,
                                        const std::vector<Jet>& Gsrc, int d) {
  JMat rhs(d, d * d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet s = Hpsi[ci(d, a, i, j)];
        if (!Gsrc.empty()) {
          for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
              const Jet& g = Gsrc[ci(d, a, b, c)];
              if (g.is_constant() && g.value() == 0.0) continue;
              s += g * Dpsi(b, i) * Dpsi(c, j);
            }
        }
        rhs(a, i * d + j) = s;
      }
  JMat sol;
  try {
    sol = jet_linear_solve(Dpsi, rhs);
  } catch (const DegeneratePointError& e) {
    throw DegeneratePointError("chart degenerate: non-invertible Jacobian", e.rcond());
  }
  std::vector<Jet> out(d * d * d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[ci(d, k, i, j)] = sol(k, i * d + j);
  return out;
}

ObataResult obata_solve(const std::vector<Jet>& I1, const std::vector<Jet>& I2, int d,
                        int out_order, double max_residual) {
  std::vector<int> idx(d * d * d);
  int nu = 0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        idx[ci(d, k, i, j)] = nu;
        idx[ci(d, k, j, i)] = nu;
        ++nu;
      }
  JetSystem sys;
  sys.unknowns = nu;
  sys.rows.reserve(2 * d * d * d);
  for (const auto* I : {&I1, &I2}) {
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
          std::vector<JetSystem::Entry> row;
          for (int m = 0; m < d; ++m) {
            const Jet& a = (*I)[ei(d, m, j)];
            if (!(a.is_constant() && a.value() == 0.0)) row.push_back({idx[ci(d, k, i, m)], a});
            const Jet& b = (*I)[ei(d, k, m)];
            if (!(b.is_constant() && b.value() == 0.0)) row.push_back({idx[ci(d, m, i, j)], -b});
          }
          sys.add_row(std::move(row), -derivative((*I)[ei(d, k, j)], i));
        }
  }
  LstsqResult ls;
  try {
    ls = jet_lstsq(sys, out_order, max_residual);
  } catch (const InconsistentSystemError& e) {
    throw InconsistentSystemError("not hypercomplex at point", e.residual());
  }
  ObataResult r;
  r.residual = ls.residual;
  r.rcond = ls.rcond;
  r.gamma.resize(d * d * d);
  for (int m = 0; m < d * d * d; ++m) r.gamma[m] = ls.x[idx[m]];
  return r;
}

double parallel_residual(const std::vector<Jet>& G, const std::vector<Jet>& I, int d) {
  return cov_deriv_endo(G, I, d).max_abs();
}

double quaternionic_residual(const Mat& I1, const Mat& I2, const Mat& I3) {
  const Mat Id = Mat::Identity(I1.rows(), I1.cols());
  double r = 0;
  r = std::max(r, max_abs(Mat(I1 * I1 + Id)));
  r = std::max(r, max_abs(Mat(I2 * I2 + Id)));
  r = std::max(r, max_abs(Mat(I3 * I3 + Id)));
  r = std::max(r, max_abs(Mat(I1 * I2 - I3)));
  r = std::max(r, max_abs(Mat(I1 * I2 + I2 * I1)));
  return r;
}

namespace {

Mat basis_columns(const std::array<Mat, 3>& B) {
  const int n = static_cast<int>(B[0].size());
  Mat M(n, 3);
  for (int a = 0; a < 3; ++a) M.col(a) = Eigen::Map<const Vec>(B[a].data(), n);
  return M;
}

Mat orthonormal(const Mat& M) {
  Eigen::HouseholderQR<Mat> qr(M);
  return qr.householderQ() * Mat::Identity(M.rows(), M.cols());
}

}  // namespace

double span_residual(const Mat& M, const std::array<Mat, 3>& B) {
  Mat Q = orthonormal(basis_columns(B));
  Vec v = Eigen::Map<const Vec>(M.data(), M.size());
  Vec rem = v - Q * (Q.transpose() * v);
  return max_abs(rem);
}

double max_principal_angle(const std::array<Mat, 3>& A, const std::array<Mat, 3>& B) {
  Mat Qa = orthonormal(basis_columns(A));
  Mat Qb = orthonormal(basis_columns(B));
  Mat rem = Qa - Qb * (Qb.transpose() * Qa);
  Eigen::JacobiSVD<Mat> svd(rem);
  const double s = std::min(1.0, svd.singularValues().maxCoeff());
  return std::asin(s);
}

}  // namespace hqg
