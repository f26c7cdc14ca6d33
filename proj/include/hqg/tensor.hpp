#pragma once

#include <array>
#include <vector>

#include "hqg/chart.hpp"
#include "hqg/jet_linalg.hpp"

namespace hqg {

// Dense (1,2)-tensor T^k_ij with the Christoffel layout.
struct Tensor3 {
  int d = 0;
  std::vector<double> v;
  Tensor3() = default;
  explicit Tensor3(int d_) : d(d_), v(d_ * d_ * d_, 0.0) {}
  double& operator()(int k, int i, int j) { return v[(k * d + i) * d + j]; }
  double operator()(int k, int i, int j) const { return v[(k * d + i) * d + j]; }
  // endomorphism Y -> T(e_i, Y)
  Mat slot(int i) const;
  double max_abs() const;
};

// Curvature-type tensor: R(e_i, e_j) e_l has component k at (k, l, i, j).
struct Tensor4 {
  int d = 0;
  std::vector<double> v;
  Tensor4() = default;
  explicit Tensor4(int d_) : d(d_), v(static_cast<std::size_t>(d_) * d_ * d_ * d_, 0.0) {}
  double& operator()(int k, int l, int i, int j) { return v[((k * d + l) * d + i) * d + j]; }
  double operator()(int k, int l, int i, int j) const { return v[((k * d + l) * d + i) * d + j]; }
  // endomorphism R(e_i, e_j)
  Mat endo(int i, int j) const;
  Vec apply(const Vec& X, const Vec& Y, const Vec& Z) const;
  double max_abs() const;
};

Tensor3 tensor3_of(const std::vector<Jet>& js, int d, int offset = 0);
double max_abs(const Mat& m);
double max_abs(const Vec& v);

// ----- pointwise operations; jets must carry enough order for the derivatives used

Vec lie_bracket(const std::vector<Jet>& X, const std::vector<Jet>& Y);
// N^k_ij for N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]
Tensor3 nijenhuis_tensor(const std::vector<Jet>& J, int d);
Vec nijenhuis(const std::vector<Jet>& J, int d, const Vec& X, const Vec& Y);
Tensor3 torsion(const std::vector<Jet>& G, int d);
Tensor4 curvature(const std::vector<Jet>& G, int d);
Mat ricci(const Tensor4& R);
Mat ricci(const std::vector<Jet>& G, int d);

// (nabla_i X)^k stored as matrix (k, i)
Mat cov_deriv_vector(const std::vector<Jet>& G, const std::vector<Jet>& X, int d);
// (nabla_i T)^k_j stored as Tensor3 (k, i, j)
Tensor3 cov_deriv_endo(const std::vector<Jet>& G, const std::vector<Jet>& T, int d);
// (nabla_i b)_jl stored as Tensor3 (i, j, l)
Tensor3 cov_deriv_bilinear(const std::vector<Jet>& G, const std::vector<Jet>& b, int d);
// jet-valued (nabla_i T)^k_j in Christoffel layout (k, i, j); loses one order
std::vector<Jet> jet_cov_deriv_endo(const std::vector<Jet>& G, const std::vector<Jet>& T, int d);
// H_{i,j} T = nabla_i (nabla T)(e_j) - (nabla T)(nabla_i e_j); result[i*d+j] is an endomorphism.
// A is jet_cov_deriv_endo output (order >= 1).
std::vector<Mat> second_cov_deriv_endo(const std::vector<Jet>& G, const std::vector<Jet>& A, int d);

Mat lie_derivative_endo(const std::vector<Jet>& X, const std::vector<Jet>& T, int d);
Tensor3 lie_derivative_connection(const std::vector<Jet>& X, const std::vector<Jet>& G, int d);
// Lie derivative of a (1,2)-tensor field in Christoffel layout (no second-derivative term)
Tensor3 lie_derivative_tensor12(const std::vector<Jet>& X, const std::vector<Jet>& T, int d);
Vec lie_derivative_oneform(const std::vector<Jet>& X, const std::vector<Jet>& w, int d);
Mat lie_derivative_bilinear(const std::vector<Jet>& X, const std::vector<Jet>& b, int d);
// (d w)_ij = d_i w_j - d_j w_i
Mat exterior_derivative(const std::vector<Jet>& w, int d);

// ----- jet-valued helpers used to build fields

JMat jmat_of(const std::vector<Jet>& js, int d, int offset = 0);
std::vector<Jet> flatten(const JMat& m);
// Gamma_work = Dpsi^{-1} (Hpsi + Gamma_src(Dpsi, Dpsi)); Dpsi(a, i) = d_i psi^a,
// Hpsi in Christoffel layout (a, i, j), Gamma_src may be empty for a flat source.
std::vector<Jet> pushforward_connection(const JMat& Dpsi, const std::vector<Jet>& Hpsi,
                                        const std::vector<Jet>& Gsrc, int d);

// Obata connection: torsion-free Gamma with nabla I1 = nabla I2 = 0.
struct ObataResult {
  std::vector<Jet> gamma;  // Christoffel layout
  double residual = 0.0;   // degree-0 least-squares residual
  double rcond = 0.0;
};
// I1, I2 jets of order K >= 1; out_order <= K - 1.
ObataResult obata_solve(const std::vector<Jet>& I1, const std::vector<Jet>& I2, int d,
                        int out_order, double max_residual = 1e-6);
// Pointwise residual of nabla I = 0 for a given Gamma (values only).
double parallel_residual(const std::vector<Jet>& G, const std::vector<Jet>& I, int d);

// ----- quaternionic algebra and spans

double quaternionic_residual(const Mat& I1, const Mat& I2, const Mat& I3);
// distance of M from span{B1, B2, B3} in Frobenius norm (max-abs of the remainder)
double span_residual(const Mat& M, const std::array<Mat, 3>& B);
// largest principal angle (radians) between two 3-planes of endomorphisms
double max_principal_angle(const std::array<Mat, 3>& A, const std::array<Mat, 3>& B);

}  // namespace hqg
