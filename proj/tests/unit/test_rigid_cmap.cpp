#include "doctest.h"
#include "hqg/examples_catalog.hpp"
#include "hqg/fd_check.hpp"
#include "hqg/rigid_cmap.hpp"

using namespace hqg;

namespace {

ExampleSpec spec(const char* name, int n, int l = 2) {
  ExampleSpec s;
  s.name = name;
  s.n = n;
  s.l = l;
  return s;
}

}  // namespace

TEST_CASE("rigid c-map identities on the l-family") {
  for (auto [n, l] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{1, 3}}) {
    auto tc = tangent_chart(make_special(spec("l_family", n, l)));
    CHECK(tc.dim == 4 * (n + 1));
    for (const auto& p : tc.chart.sample(5, 51)) {
      auto r = rigid_cmap_checks(tc, p);
      CHECK(r.quaternionic < 1e-9);
      CHECK(r.lift_action < 1e-12);
      CHECK(r.nijenhuis < 1e-7);
      CHECK(r.torsion < 1e-9);
      CHECK(r.obata_parallel < 1e-8);
      CHECK(r.explicit_vs_solver < 1e-7);
      CHECK(r.solver_parallel < 1e-8);
      CHECK(r.ricci < 1e-7);
      CHECK(r.curvature_blocks < 1e-7);
      CHECK(r.leaves_geodesic < 1e-8);
      CHECK(r.euler_h < 1e-8);
      CHECK(r.euler_v < 1e-8);
      CHECK(r.rot_I1 < 1e-8);
      CHECK(r.rot_I2 < 1e-8);
      CHECK(r.rot_I3 < 1e-8);
      CHECK(r.bracket_hh < 1e-8);
      CHECK(r.bracket_hv < 1e-8);
      CHECK(r.bracket_vv < 1e-12);
    }
  }
}

TEST_CASE("flat base gives the flat hypercomplex tangent bundle") {
  auto tc = tangent_chart(make_special(spec("trivial_flat", 1)));
  for (const auto& p : tc.chart.sample(5, 53)) {
    auto G = tc.chart.eval("Gamma_obata", p, 1);
    CHECK(tensor3_of(G, tc.dim).max_abs() == 0.0);
    Vec X = Vec::LinSpaced(tc.d, -1.0, 1.0);
    Vec h = horizontal_lift_at(tc, p, X);
    CHECK(h.tail(tc.d).cwiseAbs().maxCoeff() == 0.0);
    auto r = rigid_cmap_checks(tc, p);
    CHECK(r.rot_I1 < 1e-14);
    CHECK(r.rot_I2 < 1e-14);
    CHECK(r.ricci == 0.0);
  }
}

TEST_CASE("explicit Obata on vertical lifts is half J A") {
  auto tc = tangent_chart(make_special(spec("l_family", 1, 2)));
  const int d = tc.d, D = tc.dim;
  for (const auto& p : tc.chart.sample(5, 57)) {
    Tensor3 G = tensor3_of(tc.chart.eval("Gamma_obata", p, 0), D);
    Tensor3 A = tensor3_of(tc.base.chart.eval("A", p.head(d), 0), d);
    Mat J = standard_J(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        // Gamma(U^v, V^v) for coordinate U = e_a, V = e_b (constant fields, no derivative term)
        Vec lhs(D);
        for (int k = 0; k < D; ++k) lhs[k] = G(k, d + a, d + b);
        Vec Ub = Vec::Zero(d);
        Ub[b] = 1.0;
        Vec rhs = horizontal_lift_at(tc, p, 0.5 * J * A.slot(a) * Ub);
        CHECK(max_abs(Vec(lhs - rhs)) < 1e-10);
      }
  }
}

TEST_CASE("I1 I2 = I3 and I2 I1 = -I3 as matrices") {
  auto tc = tangent_chart(make_special(spec("l_family", 2, 2)));
  for (const auto& p : tc.chart.sample(5, 59)) {
    Mat I1 = endo_of(tc.chart.eval("I1", p, 0), tc.dim);
    Mat I2 = endo_of(tc.chart.eval("I2", p, 0), tc.dim);
    Mat I3 = endo_of(tc.chart.eval("I3", p, 0), tc.dim);
    CHECK(max_abs(Mat(I1 * I2 - I3)) < 1e-12);
    CHECK(max_abs(Mat(I2 * I1 + I3)) < 1e-12);
  }
}

TEST_CASE("TN field derivatives agree with finite differences") {
  auto tc = tangent_chart(make_special(spec("l_family", 1, 2)));
  for (const auto& p : tc.chart.sample(2, 61)) {
    for (const char* f : {"I1", "I2", "ZM"}) {
      auto r = fd_compare(tc.chart.program(f), p);
      CHECK(r.first < 1e-5);
      CHECK(r.second < 1e-5);
    }
    auto r = fd_compare(tc.chart.program("Gamma_obata"), p, false);
    CHECK(r.first < 1e-5);
  }
}
