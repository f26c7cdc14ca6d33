#pragma once

#include "hqg/chart.hpp"
#include "hqg/special_complex.hpp"
#include "hqg/tensor.hpp"

namespace hqg {

// M = TN in coordinates (x, w): x the base working chart, w = w^a d_a the fiber
// coefficients in the coordinate frame. D = 2d.
// Registered fields: I1, I2, I3 (endo), Gamma_obata (explicit lift formulas),
// Gamma_obata_solver (generic least-squares Obata solve), ZM = 2 (J xi)^h, xi_h.
struct TangentChart {
  SpecialComplexChart base;
  int d = 0;
  int dim = 0;
  ChartGeometry chart;
};

TangentChart tangent_chart(const SpecialComplexChart& base);

// Lifts of a base vector field program (base coords -> d components) to TN programs.
// X^h = (X, -Gamma(X, w)), Y^v = (0, Y).
Program horizontal_lift(const TangentChart& tc, Program X);
Program vertical_lift(const TangentChart& tc, Program Y);
// Pointwise lifts of tangent vectors at p = (x, w).
Vec horizontal_lift_at(const TangentChart& tc, const Vec& p, const Vec& X);
Vec vertical_lift_at(const TangentChart& tc, const Vec& X);

struct RigidCmapChecks {
  double quaternionic = 0;
  double lift_action = 0;  // I_alpha on lifts vs their defining formulas
  double nijenhuis = 0;
  double torsion = 0;
  double obata_parallel = 0;     // explicit Gamma, nabla I_alpha
  double explicit_vs_solver = 0;
  double solver_parallel = 0;
  double ricci = 0;
  double curvature_blocks = 0;
  double leaves_geodesic = 0;  // nabla_{X^h} Y^h - (nabla'_X Y)^h
  double euler_h = 0;          // nabla_{X^h} xi^h - X^h
  double euler_v = 0;          // nabla_{X^v} xi^h
  double rot_I1 = 0, rot_I2 = 0, rot_I3 = 0;
  double bracket_hh = 0, bracket_hv = 0, bracket_vv = 0;
};

// Evaluates every rigid c-map identity at p; `fields_seed` picks the affine base vector
// fields used in the bracket identities.
RigidCmapChecks rigid_cmap_checks(const TangentChart& tc, const Vec& p,
                                  std::uint64_t fields_seed = 99);

}  // namespace hqg
