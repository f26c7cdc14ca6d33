#pragma once

#include <string>
#include <vector>

#include "hqg/conification.hpp"
#include "hqg/special_complex.hpp"

namespace hqg {

// Principal C*-connection eta = eta1 + i eta2 on a conical special chart, as two real
// one-form programs over the working chart. Admissible: eta(xi) = 1, eta(J xi) = i,
// C*-invariant and of type (1,0), i.e. eta2 = -eta1 o J.
struct ConnectionForm {
  std::string name;
  Program eta1, eta2;
};

// eta = alpha - i (alpha o J)
ConnectionForm connection_from_real(const SpecialComplexChart& sc, std::string name, Program alpha);
// alpha = Re(dz_0 / z_0): horizontal space Ker dz_0
ConnectionForm trivialization_connection(const SpecialComplexChart& sc);
// alpha = d mu / (2 mu), so that eta2 = kappa = -(1/2s) d mu o J on {mu = s}
ConnectionForm kappa_connection(const SpecialComplexChart& sc);

struct ConnectionFormChecks {
  double normalization = 0;  // |eta(xi) - 1| and |eta(J xi) - i|
  double type_10 = 0;        // eta2 + eta1 o J
  double invariance = 0;     // L_xi eta, L_{J xi} eta
};
ConnectionFormChecks connection_form_checks(const SpecialComplexChart& sc, const ConnectionForm& eta,
                                            const Vec& p);

// Base of N -> N/C* realized on the slice {z_0 = 1}, coordinates (u_1, v_1, ..., u_n, v_n)
// (the trivialization z_0 = r e^{i theta}; the slice is r = 1, theta = 0).
// Registered fields:
//   J            : standard complex structure
//   Gamma_prime  : p_*(nabla'_{X^h} Y^h) along eta-horizontal lifts
//   abar, bbar   : A_{X^h} Y^h = abar(X, Y) xi + bbar(X, Y) J xi
//   B            : p_*(A_{X^h} Y^h), the theta = 0 value of e^{2 theta J} A (Christoffel layout)
//   gamma1/2     : eta1, eta2 pulled back to the slice
struct BaseQuotientChart {
  SpecialComplexChart special;
  ConnectionForm eta;
  int n = 1;    // complex dimension of the base
  int dim = 2;  // real dimension of the base
  ChartGeometry chart;
};

// Embedding of the slice point w into the working chart of N.
Vec slice_embed(const Vec& w);

// Verifies admissibility of eta at sampled points first and throws ConstructionError naming
// "connection_normalization", "type_10" or "cstar_invariance".
BaseQuotientChart base_quotient(const SpecialComplexChart& sc, const ConnectionForm& eta, int samples = 6,
                                std::uint64_t seed = 17, double tol = 1e-9);

// Values of (Gamma_prime, abar, bbar, B) at an arbitrary point of N rather than on the slice;
// C*-invariance of these is what makes the slice a faithful model of the base.
std::vector<double> induced_data_at(const BaseQuotientChart& bq, const Vec& p);

// Christoffel values of B from the trivialization with theta shifted by the constant c.
Tensor3 bbar_shifted(const BaseQuotientChart& bq, const Vec& w, double c);

// (a ^ K)_{X,Y} Z = a(X,Z) K Y - a(Y,Z) K X
Tensor4 wedge(const Mat& a, const Mat& K);
// a^a (x) K : (X, Y) -> 1/2 (a(X,Y) - a(Y,X)) K
Tensor4 alt_tensor(const Mat& a, const Mat& K);
// [B, B]_{X,Y} = B_X B_Y - B_Y B_X
Tensor4 bracket_square(const Tensor3& B);
// max |W(J X, J Y) - W(X, Y)|
double type11_residual(const Tensor4& W, const Mat& J);
// (B_cal)_ij = Tr B_i B_j
Mat trace_square(const Tensor3& B);

// P = 1/(m+1) (Ric + 1/(m-1) (Ric^s - Ric^s(J., J.))), 2m = dim >= 4.
Mat rho_from_ricci(const Mat& Ric, const Mat& J);
Mat rho_tensor(const Program& Gamma, const Mat& J, const Vec& p);

// R + P^a (x) Id - (P_J)^a (x) J + 1/2 P ^ Id - 1/2 P_J ^ J
Tensor4 cproj_weyl_from(const Tensor4& R, const Mat& P, const Mat& J);
Tensor4 cproj_weyl(const Program& Gamma, const Mat& J, const Vec& p);

// -1/4 [B,B] - 1/(4(n+1)) B_J (x) J + 1/(8(n+1)) (B_cal ^ Id - B_J ^ J), B_cal = Tr B B.
Tensor4 weyl_closed_form(const Tensor3& B, const Mat& J);

// Difference Gamma1 - Gamma2 = theta(X) Y + theta(Y) X - theta(JX) JY - theta(JY) JX.
Tensor3 cproj_difference(const Vec& theta, const Mat& J);
// Gamma + the change above for a one-form field theta (program over the same chart).
Program cproj_shift(Program Gamma, Program theta, Mat J);

struct CprojChange {
  Vec theta;
  double residual = 0;  // max deviation from the full identity
  bool related = false;
};
// theta(Y) = (sum_k D^k_{kY}) / (dim + 2); then the full identity is checked against tol.
CprojChange cproj_change_oneform(const Tensor3& G1, const Tensor3& G2, const Mat& J, double tol = 1e-7);

struct FundamentalChecks {
  double nabla_J = 0;          // Gamma_prime J-bar
  double torsion = 0;
  double b_eq = 0;             // bbar + abar_J
  double calB_symmetric = 0;
  double calB_hermitian = 0;
  double A_xi = 0;             // A_{X^h} xi - X^h
  double A_Jxi = 0;            // A_{X^h} J xi - J X^h
  double T_vanish = 0;         // T_E F on vertical E
  double dgamma1 = 0;          // d gamma1 + 2 abar^a
  double dgamma2 = 0;          // d gamma2 - 2 (abar_J)^a
  double curvature = 0;        // R against -1/4[B,B] + 2 abar^a Id - 2 (abar_J)^a J + abar ^ Id - abar_J ^ J
  double ricci_identity = 0;   // Ric against 1/4 B_cal - (2n+1) abar + abar^T - abar(J,J) - abar(J,J)^T
  double rho_identity = kNaN;  // (n+1) P - 1/4 B_cal + 2 (n+1) abar   (dim >= 4)
  double bar_a = kNaN;         // abar - B_cal / (8(n+1)) + 1/2 P   (dim >= 4)
  double weyl_closed = kNaN;   // W against the closed form (dim >= 4)
  double weyl_type11 = kNaN;
  double square_B_gauge = 0;   // B^2 from a shifted theta gauge minus B^2
  double B_gauge_change = 0;   // |B shifted - B|, expected non-zero when A != 0
  double invariance = 0;       // induced data at lambda * slice point minus slice value
  double ricci_min_eig = 0;    // smallest eigenvalue of Ric^s
  double ricci_asym = 0;
};
FundamentalChecks fundamental_checks(const BaseQuotientChart& bq, const Vec& w);

}  // namespace hqg
