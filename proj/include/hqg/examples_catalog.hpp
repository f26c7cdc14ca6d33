#pragma once

#include <complex>
#include <string>

#include "hqg/chart.hpp"
#include "hqg/conification.hpp"
#include "hqg/quaternion.hpp"
#include "hqg/report.hpp"
#include "hqg/rigid_cmap.hpp"
#include "hqg/special_complex.hpp"

namespace hqg {

struct ExampleSpec {
  std::string name = "l_family";  // trivial_flat | l_family | su3_lie | hopf_linear
  int n = 1;
  int l = 2;
  double c = 1.0;
};

// Throws std::invalid_argument on bad parameters.
void validate(const ExampleSpec& spec);

// alpha = -i sum_i z_i dz_i
HolomorphicData trivial_data(int n);
// alpha = g dz_0 - i sum_{i>=1} z_i dz_i with g = -i z_1^l / z_0^(l-1)
HolomorphicData l_family_data(int n, int l);

// Builds the special complex chart for trivial_flat or l_family, with psi registered.
SpecialComplexChart make_special(const ExampleSpec& spec);

// Everything the conification and H/Q pipeline consumes for one example.
// data.M is the TN chart with Z = Z^M registered; Theta = -pi^* psi, f = -2 pi^* mu + c,
// beta = pi^*(sum_{i>=1} u_i dv_i).
struct Pipeline {
  ExampleSpec spec;
  SpecialComplexChart special;
  TangentChart tn;
  ConificationData data;
};
Pipeline make_pipeline(const ExampleSpec& spec);

// Conical flat input on TN with Theta = 0, f = 1, beta = 0 (f1 = 1).
ConificationData zero_form_data(const TangentChart& tn);

// Flat hyperkaehler input (trivial_flat TN, constant I_a, Euclidean metric g):
// Theta = g(I1 ., .), f = c + quadratic with df = -iota_Z Theta, beta a linear
// potential of the (constant) required curvature. Here d eta(I_a ., I_a .) = d eta,
// so the conified structure is integrable with Theta, beta and f1 all non-trivial.
ConificationData flat_kahler_data(const TangentChart& tn, double c = 1.0);

// True where every point-dependent closed form below is finite with margin.
bool l_family_in_domain(int n, int l, const Vec& p, double margin = 1e-4);

// su(3) in the basis f0 = V = s diag(i, i, -2i), f1..f3 the su(2) block images of i, j, k,
// f4..f7 the complement g1 = {[[0, v], [-v^*, 0]]}, v in C^2.
// C^k_ij: [f_i, f_j] = C^k_ij f_k (Christoffel layout). I_a: R_i, R_j, -R_k on g0 = H and
// -ad_{I_a V} on g1.
struct LieAlgebraData {
  double v_scale = 1.0;
  std::vector<double> C;
  std::array<Mat, 3> I;
  double basis_fit = 0;  // residual of expanding brackets in the basis
};
LieAlgebraData su3_data(double v_scale = 1.0);

// Left-invariant torsion-free connection with I1, I2 parallel, nabla_{f_i} f_j = G^k_ij f_k.
struct LieObata {
  std::vector<double> G;
  double residual = 0;
  int rank = 0;
};
LieObata solve_lie_obata(const LieAlgebraData& L);

VerificationReport su3_verify(double v_scale = 1.0);

// Flat H^n \ {0}: standard triple (R_i, R_j, -R_k), its Obata connection, and the rotating
// field of the right U_q(1) action in the frame (R_u, R_v, R_u R_v), u = Im q / |Im q|.
VerificationReport hopf_linear_verify(int n, const Quat<double>& q, int points = 10, std::uint64_t seed = 42);

// Literal closed forms of the l-family, written with std::complex arithmetic only.
namespace oracle {

using cd = std::complex<double>;

cd w_of(const Vec& p);
cd dw(const Vec& p, const Vec& X);
// g_i = dg/dz_i
cd g_i(int l, int i, const Vec& p);
// d Re g_0 (X) and d Im g_0 (X) as displayed (l-dependent factors (-l+1) l)
double dRe_g0(int l, const Vec& p, const Vec& X);
double dIm_g0(int l, const Vec& p, const Vec& X);
double dRe_g1(int l, const Vec& p, const Vec& X);
double dIm_g1(int l, const Vec& p, const Vec& X);
double dRe_g(int l, int i, const Vec& p, const Vec& X);
double dIm_g(int l, int i, const Vec& p, const Vec& X);

// Jacobian of (x_0..x_n, y_0..y_n) in (u_0..u_n, v_0..v_n) order.
Mat jacobian(int n, int l, const Vec& p);
// S_X = Gamma(X, .) in working-chart order
Mat S_matrix(int n, int l, const Vec& p, const Vec& X);
// A_X in working-chart order (top block row (1/Im g_0)(A_0 .. A_n))
Mat A_matrix(int n, int l, const Vec& p, const Vec& X);
// R^{nabla'}(X, Y) from the closed curvature display
Mat R_cl(int n, int l, const Vec& p, const Vec& X, const Vec& Y);
// Tr A_X A_Y from the closed trace display
double TrA2(int n, int l, const Vec& p, const Vec& X, const Vec& Y);
// Tr A_X A_Y from the Im g_0 form 2/(Im g_0)^2 (dRe g_0 dRe g_0 + dIm g_0 dIm g_0)
double TrA2_via_g0(int n, int l, const Vec& p, const Vec& X, const Vec& Y);
// pulled-back abar on kappa-horizontal vectors: -(1/sum_{i>=1}|z_i|^2) sum (du du + dv dv)
double abar(int n, const Vec& p, const Vec& X, const Vec& Y);
// mu = 1/2 sum_{i>=1} (u_i^2 + v_i^2)
double mu(int n, const Vec& p);

}  // namespace oracle

}  // namespace hqg
