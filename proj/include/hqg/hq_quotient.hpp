#pragma once

#include <array>
#include <vector>

#include "hqg/conification.hpp"

namespace hqg {

// theta'_0 = theta0, theta'_a = theta0 o I^_a (a = 1..3) on the slice; the H-valued form
// theta' = sum_r theta'_r i_r. Returned as four one-form jets.
std::array<std::vector<Jet>, 4> theta_prime(const SliceChart& sc, const std::vector<Jet>& s);

// D = span{V, I^_a V} on the slice: columns V, IV1, IV2, IV3 (values).
Mat vertical_frame(const SliceChart& sc, const Vec& s);

struct ThetaPrimeChecks {
  double theta0_V = 0;       // theta0(V) - 1
  double decomposition = 0;  // theta'(V) - 1, theta'(I_a V) + i_a; zero means T = D + H^
  double h_invariant = 0;    // theta'(I_a h) for h in H^ = Ker theta'
  double lie_V = 0;          // L_V theta'
  double lie_IV = 0;         // L_{I_a V} theta' - 2 (theta0 o I_b) i_c + 2 (theta0 o I_c) i_b
  double closed_theta0 = 0;  // d theta0
};
ThetaPrimeChecks theta_prime_checks(const SliceChart& sc, const Vec& s);

// The second quotient realized on the sub-slice {q = section, t = 0}, which is transversal
// to D (D is spanned by the q-directions), so the bar chart reuses the coordinates y of M.
// Registered fields:
//   I1..I3    : projection of I^_a restricted to the sub-slice (slice route)
//   Id1..Id3  : C I'_a C^-1 built on M directly, I'_a = sum_b Ad(section)_ab I_b and
//               C(W) = W + beta(W) Z / (f1 - beta(Z))
//   X         : projection of the slice field XP
//   Gamma     : projection of the slice Obata connection along theta'-horizontal lifts;
//               raises InconsistentSystemError where I^ has no Obata connection
struct BarChart {
  SliceChart slice;
  Quat<double> section{1, 0, 0, 0};
  int dim = 0;
  ChartGeometry chart;
};

BarChart bar_chart(const SliceChart& sc, const Quat<double>& section = {1, 0, 0, 0});

// Quaternionic structure triple at y from an arbitrary section value (slice route).
std::array<Mat, 3> qbar_at(const SliceChart& sc, const Quat<double>& section, const Vec& y);
// Same from the direct formula on M.
std::array<Mat, 3> qbar_direct_at(const ConificationData& data, const Quat<double>& section, const Vec& y);

// Fields that need Gamma stay NaN when the slice has no Obata connection.
struct BarChecks {
  double quaternionic = 0;
  double routes_agree = 0;       // max |I_a - Id_a|
  double section_angle = 0;      // max principal angle against the other sections
  double lie_X_Q = 0;            // L_X I_a modulo span{I}
  bool nabla_exists = false;
  double obata_defect = 0;
  double torsion = kNaN;
  double q_preserved = kNaN;     // (nabla_Y I_a) modulo span{I}
  double lie_X_nabla = kNaN;
  double nabla_section = kNaN;   // Gamma from another section minus Gamma
};
BarChecks bar_checks(const BarChart& bc, const Vec& y, const std::vector<Quat<double>>& other_sections);

// Frobenius residual of L = vertical + <xi^h, Z^h> on a TN chart (fields xi_h and ZM):
// max over basis pairs of the bracket's distance to the span.
double leaf_foliation_residual(const ChartGeometry& tn_chart, const Vec& y);

}  // namespace hqg
