#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "hqg/chart.hpp"
#include "hqg/quaternion.hpp"
#include "hqg/tensor.hpp"

namespace hqg {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A construction precondition failed; axiom() names it.
class ConstructionError : public std::invalid_argument {
 public:
  ConstructionError(const std::string& axiom, double residual)
      : std::invalid_argument("precondition " + axiom + " failed (residual " +
                              std::to_string(residual) + ")"),
        axiom_(axiom),
        residual_(residual) {}
  const std::string& axiom() const { return axiom_; }
  double residual() const { return residual_; }

 private:
  std::string axiom_;
  double residual_;
};

// Hypercomplex chart M with fields I1, I2, I3 (endo) and Z (vector), plus the
// conification data. P is the trivial bundle M x R_t with eta = beta + dt.
struct ConificationData {
  ChartGeometry M;
  Program Theta;  // bilinear, skew
  Program f;      // scalar
  Program beta;   // one-form potential
};

// f1 = f - 1/2 Theta(Z, I1 Z)
Program f1_program(const ConificationData& data);
// Theta - 1/2 d((iota_Z Theta) o I1) as a bilinear (skew) field; needs order >= 1 input.
Program required_curvature(const ConificationData& data);

struct TildePreconditions {
  double rot_I1 = 0;       // L_Z I1
  double rot_I2 = 0;       // L_Z I2 + 2 I3
  double closed_Theta = 0;
  double lie_Z_Theta = 0;
  double df_iota = 0;      // df + iota_Z Theta
  double curvature = 0;    // d beta - required curvature
  double f1_abs = 0;       // |f1|, must stay away from 0
  // max_a |d eta(I_a., I_a.) - d eta|. Not a precondition: the conified structure is
  // integrable only where this vanishes (N(X^h, Y^h) has an X_P part built from it).
  double curvature_type = 0;
};
TildePreconditions tilde_preconditions(const ConificationData& data, const Vec& y);

// Quaternionic frames on H^* in coordinates q = (q0..q3): e^R_a(q) = i_a q, e^L_a(q) = q i_a.
template <class T>
Quat<T> right_frame(int a, const Quat<T>& q) {
  return qmul(qunit_as<T>(a), q);
}
template <class T>
Quat<T> left_frame(int a, const Quat<T>& q) {
  return qmul(q, qunit_as<T>(a));
}

// Coordinates (q0..q3, y_0..y_{m-1}, t); dim = m + 5.
// Registered fields: I1, I2, I3 (the degenerate structures with kernel V1), V1, Z1, XP,
// eR0..eR3, eL0..eL3, eta, theta0 (phi_0 = Re(dq q^-1)), f1.
struct TildeChart {
  ConificationData data;
  int m = 0;
  int dim = 0;
  ChartGeometry chart;
};

// Verifies the preconditions at `samples` points of M (tolerance tol, |f1| >= f1_margin)
// and throws ConstructionError naming the first failure.
TildeChart build_tilde(const ConificationData& data, int samples = 8, std::uint64_t seed = 11,
                       double tol = 1e-9, double f1_margin = 1e-4);

// Slice {t = 0} of the tilde chart, coordinates (q, y), dim m + 4, with tensors projected
// along V1. Registered fields: I1, I2, I3, V (= e0R), IV1..IV3, XP (projection of XP),
// theta0, Gamma (Obata connection via the generic solver).
struct SliceChart {
  TildeChart tilde;
  int dim = 0;
  ChartGeometry chart;
};

SliceChart conification_slice(const TildeChart& tc, double transversal_margin = 1e-4);
// t-component of V1 at a slice point; the slice is transversal where it is non-zero.
double slice_transversality(const SliceChart& sc, const Vec& s);
// Slice point (q, y) -> tilde point (q, y, 0).
Vec slice_to_tilde(const Vec& s);

struct TildeChecks {
  double bracket_eR = 0;      // [e1R, e2R] + 2 e3R and cyclic
  double frames_at_one = 0;   // eL_a - eR_a at q = 1 (evaluated at the point's y)
  double kernel_V1 = 0;       // I_a V1
  double quaternionic = 0;    // relations on the complement of V1
  double frame_action = 0;    // I_a on eR
  double lie_V1_I = 0;
  double lie_e0R_I = 0;
  double lie_V1_Yh = 0;       // L_{V1} Y^h + [Z, Y]^h for an affine field Y
  double df1_iota = 0;        // df1 + iota_Z d eta
  double XP_Z1 = 0;           // [XP, Z1]
  double lie_XP_I = 0;
  double lie_V1_XP = 0;
  double lie_V1_theta0 = 0;
};
TildeChecks tilde_checks(const TildeChart& tc, const Vec& x, std::uint64_t fields_seed = 5);

// Fields that need the slice Obata connection stay NaN when the Obata system is
// inconsistent (the structure is not integrable); obata_defect then holds the
// least-squares residual of that system.
struct SliceChecks {
  double quaternionic = 0;
  double nijenhuis = 0;
  bool obata_exists = false;
  double obata_defect = 0;
  double euler = kNaN;        // nabla V - id
  double lie_V_I = 0;
  double lie_IV_I = 0;        // L_{I_a V} I_b + 2 I_c, L_{I_a V} I_a
  double lie_V_nabla = kNaN;
  double lie_IV_nabla = kNaN;
  double obata_parallel = kNaN;
  double obata_torsion = kNaN;
  double lie_XP_I = 0;
  double lie_XP_nabla = kNaN;
  double lie_V_XP = 0;        // L_V XP and L_{I_a V} XP
  double lie_XP_theta0 = 0;
  double projector = 0;       // idempotent, kills V1
};
SliceChecks slice_checks(const SliceChart& sc, const Vec& s);

}  // namespace hqg
