#include <cmath>

#include "doctest.h"
#include "hqg/conification.hpp"
#include "hqg/examples_catalog.hpp"
#include "hqg/fd_check.hpp"

using namespace hqg;

namespace {

ExampleSpec spec(const char* name, int n, int l = 2) {
  ExampleSpec s;
  s.name = name;
  s.n = n;
  s.l = l;
  return s;
}

Quat<double> random_quat(std::uint64_t k) {
  return {0.3 + 0.1 * k, -0.7 + 0.2 * std::sin(k), 0.5 * std::cos(3.0 * k), 1.1 - 0.05 * k};
}

}  // namespace

TEST_CASE("ad_so3 is a rotation, scale invariant and trivial at 1") {
  for (std::uint64_t k = 0; k < 6; ++k) {
    auto q = random_quat(k);
    Mat A = ad_so3(q);
    CHECK(max_abs(Mat(A.transpose() * A - Mat::Identity(3, 3))) < 1e-14);
    CHECK(std::abs(A.determinant() - 1.0) < 1e-14);
    Quat<double> q3{3.0 * q[0], 3.0 * q[1], 3.0 * q[2], 3.0 * q[3]};
    CHECK(max_abs(Mat(ad_so3(q3) - A)) < 1e-14);
  }
  CHECK(max_abs(Mat(ad_so3({1, 0, 0, 0}) - Mat::Identity(3, 3))) == 0.0);
  CHECK_THROWS(ad_so3({0, 0, 0, 0}));
}

TEST_CASE("ad_so3 along the e1L flow is the transpose of the displayed rotation") {
  for (double t : {0.1, 0.7, 2.0}) {
    Mat A = ad_so3(qexp_imag(t, 1));
    Mat shown(3, 3);
    shown << 1, 0, 0, 0, std::cos(2 * t), std::sin(2 * t), 0, -std::sin(2 * t), std::cos(2 * t);
    CHECK(max_abs(Mat(A - shown.transpose())) < 1e-14);
  }
}

TEST_CASE("pipeline data satisfies the conification preconditions") {
  auto pl = make_pipeline(spec("l_family", 1));
  for (const auto& y : pl.data.M.sample(6, 71)) {
    auto r = tilde_preconditions(pl.data, y);
    CHECK(r.rot_I1 < 1e-9);
    CHECK(r.rot_I2 < 1e-9);
    CHECK(r.closed_Theta < 1e-12);
    CHECK(r.lie_Z_Theta < 1e-9);
    CHECK(r.df_iota < 1e-12);
    CHECK(r.curvature < 1e-9);
    // f1 = 2 mu + c
    const double mu = oracle::mu(1, y.head(pl.tn.d));
    CHECK(std::abs(eval_values(f1_program(pl.data), y)[0] - (2 * mu + 1.0)) < 1e-12);
  }
}

TEST_CASE("zero-form data gives f1 = 1") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto data = zero_form_data(pl.tn);
  for (const auto& y : data.M.sample(3, 73)) CHECK(eval_values(f1_program(data), y)[0] == 1.0);
}

TEST_CASE("broken input is rejected naming the failed axiom") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto data = pl.data;
  data.beta = [D = pl.tn.dim](const std::vector<Jet>&) { return std::vector<Jet>(D, Jet(0.0)); };
  try {
    build_tilde(data);
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(e.axiom() == "curvature_form");
    CHECK(e.residual() > 0.1);
  }
  data = pl.data;
  data.f = [](const std::vector<Jet>& y) { return std::vector<Jet>{y[0] * 0.0 + 1.0}; };
  try {
    build_tilde(data);
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(e.axiom() == "df_plus_iota_Z_Theta");
  }
  auto z = zero_form_data(pl.tn);
  z.f = [](const std::vector<Jet>& y) { return std::vector<Jet>{y[0] * 0.0}; };
  try {
    build_tilde(z);
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(e.axiom() == "f1_nonvanishing");
  }
}

TEST_CASE("tilde structures: frames, kernel and invariance") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto tc = build_tilde(pl.data);
  CHECK(tc.dim == pl.tn.dim + 5);
  for (const auto& x : tc.chart.sample(4, 75)) {
    auto r = tilde_checks(tc, x);
    CHECK(r.bracket_eR < 1e-12);
    CHECK(r.frames_at_one < 1e-14);
    CHECK(r.kernel_V1 < 1e-12);
    CHECK(r.quaternionic < 1e-10);
    CHECK(r.frame_action < 1e-12);
    CHECK(r.lie_V1_I < 1e-9);
    CHECK(r.lie_e0R_I < 1e-9);
    CHECK(r.lie_V1_Yh < 1e-9);
    CHECK(r.df1_iota < 1e-9);
    CHECK(r.XP_Z1 < 1e-9);
    CHECK(r.lie_XP_I < 1e-9);
    CHECK(r.lie_V1_XP < 1e-9);
    CHECK(r.lie_V1_theta0 < 1e-9);
    // I~_a e0R = eaR
    for (int a = 1; a <= 3; ++a) {
      Mat I = endo_of(tc.chart.eval("I" + std::to_string(a), x, 0), tc.dim);
      Vec e0 = values_of(tc.chart.eval("eR0", x, 0));
      Vec ea = values_of(tc.chart.eval("eR" + std::to_string(a), x, 0));
      CHECK(max_abs(Vec(I * e0 - ea)) < 1e-12);
    }
  }
}

TEST_CASE("tilde field derivatives agree with finite differences") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto tc = build_tilde(pl.data);
  for (const auto& x : tc.chart.sample(2, 77))
    for (const char* f : {"I1", "I2", "V1", "eta"}) {
      auto r = fd_compare(tc.chart.program(f), x);
      CHECK(r.first < 1e-5);
      CHECK(r.second < 1e-5);
    }
}

TEST_CASE("slice of integrable inputs is conical hypercomplex") {
  auto pz = make_pipeline(spec("l_family", 1));
  auto pf = make_pipeline(spec("trivial_flat", 1));
  for (const auto& data : {zero_form_data(pz.tn), flat_kahler_data(pf.tn)}) {
    auto sc = conification_slice(build_tilde(data));
    for (const auto& s : sc.chart.sample(2, 79)) {
      auto r = slice_checks(sc, s);
      REQUIRE(r.obata_exists);
      CHECK(r.quaternionic < 1e-10);
      CHECK(r.nijenhuis < 1e-9);
      CHECK(r.euler < 1e-9);
      CHECK(r.obata_parallel < 1e-9);
      CHECK(r.obata_torsion < 1e-12);
      CHECK(r.lie_V_I < 1e-9);
      CHECK(r.lie_IV_I < 1e-9);
      CHECK(r.lie_V_nabla < 1e-9);
      CHECK(r.lie_IV_nabla < 1e-9);
      CHECK(r.lie_XP_I < 1e-9);
      CHECK(r.lie_XP_nabla < 1e-9);
      CHECK(r.lie_V_XP < 1e-12);
      CHECK(r.lie_XP_theta0 < 1e-12);
      CHECK(r.projector < 1e-14);
    }
  }
}

TEST_CASE("flat Kaehler data has non-trivial Theta, beta and f1") {
  auto pf = make_pipeline(spec("trivial_flat", 1));
  auto data = flat_kahler_data(pf.tn);
  auto ys = data.M.sample(3, 81);
  CHECK(max_abs(values_of(data.beta(seed_point(ys[0], 0)))) > 0.1);
  CHECK(std::abs(eval_values(f1_program(data), ys[0])[0] - eval_values(f1_program(data), ys[1])[0]) > 1e-3);
  for (const auto& y : ys) CHECK(tilde_preconditions(data, y).curvature_type < 1e-12);
}

TEST_CASE("conified structure is integrable only where d eta is sp(1)-invariant") {
  // The pipeline's d eta = pi^* psi is I1-hermitian but not I2-hermitian; the slice
  // structure then has a non-zero Nijenhuis tensor and no Obata connection.
  auto pl = make_pipeline(spec("l_family", 1));
  auto sc = conification_slice(build_tilde(pl.data));
  for (const auto& s : sc.chart.sample(2, 83)) {
    CHECK(tilde_preconditions(pl.data, s.tail(pl.tn.dim)).curvature_type > 0.1);
    auto r = slice_checks(sc, s);
    CHECK(r.quaternionic < 1e-10);
    CHECK(r.lie_V_I < 1e-9);
    CHECK(r.nijenhuis > 0.1);
    CHECK_FALSE(r.obata_exists);
    CHECK(r.obata_defect > 1e-3);
    CHECK(std::isnan(r.euler));
  }
}
