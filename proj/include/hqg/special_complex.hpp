#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hqg/chart.hpp"
#include "hqg/tensor.hpp"

namespace hqg {

// Holomorphic one-form alpha = sum F_i dz_i on an open set of C^{n+1}.
struct HolomorphicData {
  std::string name;
  int n = 1;
  // F_0..F_n as functions of z_0..z_n
  std::function<std::vector<CJet>(const std::vector<CJet>&)> F;
  bool conical = true;
};

// Working chart (u_0, v_0, u_1, v_1, ...) with z_i = u_i + i v_i.
// Registered fields:
//   J (endo), Gamma (flat special connection), A = nabla J (Christoffel layout,
//   A^k_ij = (A_{e_i})^k_j), Gamma_prime, xi, Jxi, and after register_two_form psi, mu.
// Gamma_dGamma (Gamma followed by d_l Gamma^k_ij at d^3 + ((k*d+i)*d+j)*d+l) is kept
// as a plain program since its component count is not a standard valence.
struct SpecialComplexChart {
  HolomorphicData data;
  int n = 1;
  int dim = 4;
  ChartGeometry chart;
  Program gamma_dgamma;
};

SpecialComplexChart build_special_chart(const HolomorphicData& data,
                                        ChartGeometry::Predicate domain,
                                        ChartGeometry::Sampler sampler,
                                        ChartGeometry::Predicate sampling_region = nullptr);

// Constant complex structure of the working chart.
Mat standard_J(int dim);
std::vector<Jet> standard_J_jets(int dim);

// Jet-level builders from Gamma (Christoffel layout) for the constant standard J.
std::vector<Jet> nabla_J_from(const std::vector<Jet>& G, int d);
std::vector<Jet> nabla_prime_from(const std::vector<Jet>& G, int d);
// (J T)^k_ij = J^k_m T^m_ij
std::vector<Jet> J_times(const std::vector<Jet>& T, int d);
std::vector<Jet> nabla_t_from(const std::vector<Jet>& G, int d, double t);

Program nabla_t(const SpecialComplexChart& sc, double t);

// Jacobian of Re phi = (Re z, Re F) with rows ordered (x_0..x_n, y_0..y_n) and columns
// in working-chart order.
Mat phi_jacobian(const SpecialComplexChart& sc, const Vec& p);

// Residuals of the holomorphic data at p: Cauchy-Riemann and Euler homogeneity.
struct HolomorphicResiduals {
  double cauchy_riemann = 0;
  double euler = 0;
};
HolomorphicResiduals holomorphic_residuals(const HolomorphicData& data, const Vec& p);

// psi = sum_{i>=1} du_i ^ dv_i  (du ^ dv = du (x) dv - dv (x) du)
std::vector<Jet> standard_psi(int dim);
Program standard_psi_program(int dim);

struct TwoFormResiduals {
  double hermitian = 0;
  double parallel = 0;
  double moment = 0;  // d mu + iota_{J xi} psi
};
// Checks psi (bilinear field) is J-hermitian and nabla-parallel and that
// mu = 1/2 psi(xi, J xi) satisfies d mu = -iota_{J xi} psi.
TwoFormResiduals two_form_residuals(const SpecialComplexChart& sc, const Program& psi,
                                    const Vec& p);
Program moment_map(const SpecialComplexChart& sc, const Program& psi);
// Verifies the hermitian and parallel conditions at sampled points (tolerance tol), then
// registers psi and mu. Throws std::invalid_argument naming the failed condition.
void register_two_form(SpecialComplexChart& sc, Program psi, int samples = 8,
                       std::uint64_t seed = 7, double tol = 1e-9);

// Pointwise residuals of the conical special complex axioms and of the nabla' laws.
struct SpecialAxioms {
  double flat = 0;
  double torsion = 0;
  double A_symmetric = 0;
  double nabla_xi = 0;
  double lie_xi_J = 0;
  double A_xi = 0;
  double A_Jxi = 0;
  double lie_Jxi_J = 0;
  double AJ_anticommute = 0;
  double prime_J_parallel = 0;
  double prime_torsion = 0;
  double prime_xi = 0;
  double prime_curvature_law = 0;  // R' + 1/4 [A, A]
  double prime_curv_Jxi = 0;       // R'(J xi, .) = 0
  double lie_xi_prime = 0;
  double lie_Jxi_prime = 0;
  double lie_Jxi_nabla_is_A = 0;
  double lie_Jxi_A = 0;   // L_{J xi} A + 2 J A
  double lie_Jxi_JA = 0;  // L_{J xi} (J A) - 2 A
  double hessian_symmetry = 0;
  double trace_identity = 0;  // Tr J H_{X,Y}J + Tr A_X A_Y
};
SpecialAxioms special_axioms(const SpecialComplexChart& sc, const Vec& p);

// Axiom residuals for an arbitrary connection in the family (flatness, torsion, A symmetric,
// nabla xi = id, A_xi, A_Jxi) together with parallelism of psi.
struct FamilyAxioms {
  double flat = 0, torsion = 0, A_symmetric = 0, nabla_xi = 0, A_xi = 0, A_Jxi = 0;
  double psi_parallel = 0;
};
FamilyAxioms family_axioms(const SpecialComplexChart& sc, double t, const Vec& p);

}  // namespace hqg
