#include <cmath>

#include "doctest.h"
#include "hqg/cprojective.hpp"
#include "hqg/examples_catalog.hpp"

using namespace hqg;

namespace {

ExampleSpec spec(const char* name, int n, int l = 2) {
  ExampleSpec s;
  s.name = name;
  s.n = n;
  s.l = l;
  return s;
}

Tensor3 gamma_at(const BaseQuotientChart& bq, const Vec& w) {
  Tensor3 t(bq.dim);
  auto v = bq.chart.eval("Gamma_prime", w, 0);
  for (std::size_t i = 0; i < v.size(); ++i) t.v[i] = v[i].value();
  return t;
}

double diff(const Tensor4& a, const Tensor4& b) {
  double r = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) r = std::max(r, std::abs(a.v[i] - b.v[i]));
  return r;
}

// kappa-horizontal lifts at the slice point, assembled here from xi, J xi and eta
Mat lifts_at(const BaseQuotientChart& bq, const Vec& w) {
  const Vec p = slice_embed(w);
  const auto x = seed_point(p, 0);
  const auto& c = bq.special.chart;
  const Vec xi = values_of(c.program("xi")(x)), jxi = values_of(c.program("Jxi")(x));
  const Vec e1 = values_of(bq.eta.eta1(x)), e2 = values_of(bq.eta.eta2(x));
  Mat X(p.size(), bq.dim);
  for (int j = 0; j < bq.dim; ++j) {
    Vec L = Vec::Zero(p.size());
    L[2 + 2 * (j / 2) + (j % 2)] = 1.0;
    X.col(j) = L - e1.dot(L) * xi - e2.dot(L) * jxi;
  }
  return X;
}

}  // namespace

TEST_CASE("kappa and trivialization forms are admissible principal connections") {
  auto sc = make_special(spec("l_family", 2));
  for (const auto& eta : {kappa_connection(sc), trivialization_connection(sc)})
    for (const auto& p : sc.chart.sample(3, 31)) {
      auto r = connection_form_checks(sc, eta, p);
      CHECK(r.normalization < 1e-12);
      CHECK(r.type_10 < 1e-14);
      CHECK(r.invariance < 1e-12);
    }
}

TEST_CASE("a connection form not of type (1,0) is rejected") {
  auto sc = make_special(spec("l_family", 2));
  auto t = trivialization_connection(sc), k = kappa_connection(sc);
  ConnectionForm bad = t;
  bad.eta2 = [t, k](const std::vector<Jet>& x) {
    auto a = t.eta2(x);
    const auto ka = k.eta1(x), ta = t.eta1(x);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] + 0.1 * (ka[i] - ta[i]);
    return a;
  };
  try {
    base_quotient(sc, bad);
    FAIL("expected ConstructionError");
  } catch (const ConstructionError& e) {
    CHECK(e.axiom() == "type_10");
  }
}

TEST_CASE("induced connection and fundamental tensors on the l-family base") {
  for (auto [n, l] : {std::pair{2, 2}, std::pair{2, 3}}) {
    auto sc = make_special(spec("l_family", n, l));
    for (const auto& eta : {kappa_connection(sc), trivialization_connection(sc)}) {
      auto bq = base_quotient(sc, eta);
      CHECK(bq.dim == 2 * n);
      for (const auto& w : bq.chart.sample(3, 33)) {
        auto r = fundamental_checks(bq, w);
        CHECK(r.nabla_J < 1e-9);
        CHECK(r.torsion < 1e-12);
        CHECK(r.b_eq < 1e-8);
        CHECK(r.calB_symmetric < 1e-9);
        CHECK(r.calB_hermitian < 1e-9);
        CHECK(r.A_xi < 1e-12);
        CHECK(r.A_Jxi < 1e-12);
        CHECK(r.T_vanish < 1e-12);
        CHECK(r.dgamma1 < 1e-7);
        CHECK(r.dgamma2 < 1e-7);
        CHECK(r.curvature < 1e-9);
        CHECK(r.ricci_identity < 1e-7);
        CHECK(r.rho_identity < 1e-7);
        CHECK(r.bar_a < 1e-7);
        CHECK(r.weyl_closed < 1e-6);
        CHECK(r.weyl_type11 < 1e-6);
        CHECK(r.square_B_gauge < 1e-8);
        CHECK(r.B_gauge_change > 1e-2);
        CHECK(r.invariance < 1e-10);
      }
    }
  }
}

TEST_CASE("kappa gauge: abar and B_cal match the closed forms, Ricci is non-negative") {
  for (auto [n, l] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 2}}) {
    auto sc = make_special(spec("l_family", n, l));
    auto bq = base_quotient(sc, kappa_connection(sc));
    const int D = bq.dim;
    for (const auto& w : bq.chart.sample(4, 35)) {
      const Mat X = lifts_at(bq, w);
      const Vec p = slice_embed(w);
      auto a = bq.chart.eval("abar", w, 0);
      Tensor3 B(D);
      auto Bv = bq.chart.eval("B", w, 0);
      for (std::size_t i = 0; i < Bv.size(); ++i) B.v[i] = Bv[i].value();
      const Mat cal = trace_square(B);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
          CHECK(std::abs(a[i * D + j].value() - oracle::abar(n, p, X.col(i), X.col(j))) < 1e-10);
          CHECK(std::abs(cal(i, j) - oracle::TrA2(n, l, p, X.col(i), X.col(j))) < 1e-8 * (1 + std::abs(cal(i, j))));
        }
      auto r = fundamental_checks(bq, w);
      CHECK(r.ricci_min_eig >= -1e-8);
      CHECK(r.ricci_asym < 1e-10);
    }
  }
}

TEST_CASE("two gauges differ by the c-projective change with theta0 = gamma1 difference") {
  auto sc = make_special(spec("l_family", 2));
  auto ka = base_quotient(sc, kappa_connection(sc));
  auto tr = base_quotient(sc, trivialization_connection(sc));
  const Mat J = standard_J(ka.dim);
  for (const auto& w : ka.chart.sample(3, 37)) {
    auto ch = cproj_change_oneform(gamma_at(ka, w), gamma_at(tr, w), J);
    CHECK(ch.related);
    const Vec theta0 = values_of(tr.chart.eval("gamma1", w, 0)) - values_of(ka.chart.eval("gamma1", w, 0));
    CHECK(max_abs(Vec(ch.theta - theta0)) < 1e-7);
    CHECK(max_abs(theta0) > 0.1);
    CHECK(diff(cproj_weyl(ka.chart.program("Gamma_prime"), J, w), cproj_weyl(tr.chart.program("Gamma_prime"), J, w)) <
          1e-6);
  }
}

TEST_CASE("c-projective change: trivial and synthetic round trips") {
  auto sc = make_special(spec("l_family", 2, 3));
  auto bq = base_quotient(sc, kappa_connection(sc));
  const Mat J = standard_J(bq.dim);
  Program theta = [](const std::vector<Jet>& x) {
    std::vector<Jet> t(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) t[j] = x[j] * x[0] + sin(x[(j + 1) % x.size()]) + 0.3 * (j + 1.0);
    return t;
  };
  const Program G = bq.chart.program("Gamma_prime");
  const Program G2 = cproj_shift(G, theta, J);
  for (const auto& w : bq.chart.sample(3, 39)) {
    const Tensor3 g = gamma_at(bq, w);
    auto same = cproj_change_oneform(g, g, J);
    CHECK(same.related);
    CHECK(max_abs(same.theta) == 0.0);
    Tensor3 g2(bq.dim);
    auto v = G2(seed_point(w, 0));
    for (std::size_t i = 0; i < v.size(); ++i) g2.v[i] = v[i].value();
    auto ch = cproj_change_oneform(g2, g, J);
    CHECK(ch.related);
    CHECK(max_abs(Vec(ch.theta - eval_values(theta, w))) < 1e-8);
    CHECK(diff(cproj_weyl(G2, J, w), cproj_weyl(G, J, w)) < 1e-6);
  }
}

TEST_CASE("an unrelated pair is reported as not c-projectively related") {
  const int d = 4;
  const Mat J = standard_J(d);
  Tensor3 g1(d), g2(d);
  g1(0, 1, 1) = 0.5;  // symmetric but not of the c-projective form
  auto ch = cproj_change_oneform(g1, g2, J);
  CHECK_FALSE(ch.related);
  CHECK(ch.residual > 0.1);
}

TEST_CASE("Rho tensor: zero, hermitian and dimension cases") {
  const Mat J = standard_J(4);
  CHECK(max_abs(rho_from_ricci(Mat::Zero(4, 4), J)) == 0.0);
  Mat S = Mat::Random(4, 4);
  S = S + S.transpose();
  const Mat H = 0.5 * (S + J.transpose() * S * J);  // symmetric and J-hermitian
  CHECK(max_abs(Mat(rho_from_ricci(H, J) - H / 3.0)) < 1e-15);
  CHECK_THROWS(rho_from_ricci(Mat::Zero(2, 2), standard_J(2)));
}

TEST_CASE("trivial chart: B vanishes and the base is c-projectively flat") {
  auto sc = make_special(spec("trivial_flat", 2));
  auto bq = base_quotient(sc, kappa_connection(sc));
  for (const auto& w : bq.chart.sample(2, 41)) {
    CHECK(max_abs(values_of(bq.chart.eval("B", w, 0))) < 1e-14);
    CHECK(cproj_weyl(bq.chart.program("Gamma_prime"), standard_J(bq.dim), w).max_abs() < 1e-12);
    auto r = fundamental_checks(bq, w);
    CHECK(r.bar_a < 1e-12);
  }
}

TEST_CASE("flat complex connection has zero c-projective Weyl curvature") {
  Program zero = [](const std::vector<Jet>&) { return std::vector<Jet>(64, Jet(0.0)); };
  Vec p = Vec::Constant(4, 0.3);
  CHECK(cproj_weyl(zero, standard_J(4), p).max_abs() == 0.0);
}
