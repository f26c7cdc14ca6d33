#include <cmath>

#include "doctest.h"
#include "hqg/examples_catalog.hpp"
#include "hqg/hq_quotient.hpp"

using namespace hqg;

namespace {

ExampleSpec spec(const char* name, int n, int l = 2) {
  ExampleSpec s;
  s.name = name;
  s.n = n;
  s.l = l;
  return s;
}

const std::vector<Quat<double>> kOtherSections{{0.3, 0.8, -0.2, 0.5}, {-1.0, 0.2, 0.4, 0.1}};

}  // namespace

TEST_CASE("theta' splits the slice into D and an I-invariant complement") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto sc = conification_slice(build_tilde(pl.data));
  for (const auto& s : sc.chart.sample(3, 91)) {
    auto r = theta_prime_checks(sc, s);
    CHECK(r.theta0_V < 1e-14);
    CHECK(r.decomposition < 1e-12);
    CHECK(r.h_invariant < 1e-12);
    CHECK(r.lie_V < 1e-12);
    CHECK(r.lie_IV < 1e-12);
    CHECK(r.closed_theta0 < 1e-14);
  }
}

TEST_CASE("D is spanned by the q-directions") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto sc = conification_slice(build_tilde(pl.data));
  for (const auto& s : sc.chart.sample(2, 93)) {
    Mat D = vertical_frame(sc, s);
    CHECK(max_abs(Mat(D.bottomRows(sc.dim - 4))) == 0.0);
    CHECK(D.topRows(4).fullPivLu().rank() == 4);
  }
}

TEST_CASE("Q-bar: both constructions agree and do not depend on the section") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto sc = conification_slice(build_tilde(pl.data));
  for (const Quat<double>& z : {Quat<double>{1, 0, 0, 0}, Quat<double>{0.2, -0.6, 0.9, 0.3}}) {
    auto bc = bar_chart(sc, z);
    CHECK(bc.dim == pl.tn.dim);
    for (const auto& y : bc.chart.sample(2, 95)) {
      auto r = bar_checks(bc, y, kOtherSections);
      CHECK(r.quaternionic < 1e-10);
      CHECK(r.routes_agree < 1e-10);
      CHECK(r.section_angle < 1e-8);
      CHECK(r.lie_X_Q < 1e-9);
    }
  }
}

TEST_CASE("beta = 0 and section 1 give I-bar = I") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto data = zero_form_data(pl.tn);
  for (const auto& y : data.M.sample(2, 97)) {
    auto Id = qbar_direct_at(data, {1, 0, 0, 0}, y);
    for (int a = 0; a < 3; ++a)
      CHECK(max_abs(Mat(Id[a] - endo_of(data.M.eval("I" + std::to_string(a + 1), y, 0), pl.tn.dim))) == 0.0);
  }
}

TEST_CASE("H/Q output on integrable inputs is quaternionic with an affine field") {
  auto pz = make_pipeline(spec("l_family", 1));
  auto pf = make_pipeline(spec("trivial_flat", 1));
  for (const auto& data : {zero_form_data(pz.tn), flat_kahler_data(pf.tn)}) {
    auto bc = bar_chart(conification_slice(build_tilde(data)));
    for (const auto& y : bc.chart.sample(2, 99)) {
      auto r = bar_checks(bc, y, kOtherSections);
      REQUIRE(r.nabla_exists);
      CHECK(r.torsion < 1e-10);
      CHECK(r.q_preserved < 1e-9);
      CHECK(r.lie_X_nabla < 1e-8);
      CHECK(r.nabla_section < 1e-8);
      CHECK(r.routes_agree < 1e-10);
    }
  }
}

TEST_CASE("pipeline input has no projected connection") {
  auto pl = make_pipeline(spec("l_family", 1));
  auto bc = bar_chart(conification_slice(build_tilde(pl.data)));
  auto y = bc.chart.sample(1, 101)[0];
  auto r = bar_checks(bc, y, {});
  CHECK_FALSE(r.nabla_exists);
  CHECK(r.obata_defect > 1e-3);
  CHECK(std::isnan(r.torsion));
}

TEST_CASE("the leaf distribution on TN is integrable") {
  for (auto [n, l] : {std::pair{1, 2}, std::pair{2, 3}}) {
    auto tn = tangent_chart(make_special(spec("l_family", n, l)));
    for (const auto& y : tn.chart.sample(3, 103)) CHECK(leaf_foliation_residual(tn.chart, y) < 1e-10);
  }
}
