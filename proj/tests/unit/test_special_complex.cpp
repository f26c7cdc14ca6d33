#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hqg/examples_catalog.hpp"
#include "hqg/fd_check.hpp"
#include "hqg/special_complex.hpp"
#include "hqg/tensor.hpp"

using namespace hqg;

namespace {

ExampleSpec lfam(int n, int l) {
  ExampleSpec s;
  s.name = "l_family";
  s.n = n;
  s.l = l;
  return s;
}

Vec basis(int d, int i) {
  Vec e = Vec::Zero(d);
  e[i] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("trivial data gives a trivial special structure") {
  ExampleSpec s;
  s.name = "trivial_flat";
  s.n = 2;
  auto sc = make_special(s);
  for (const auto& p : sc.chart.sample(10, 3)) {
    auto G = sc.chart.eval("Gamma", p, 1);
    auto A = sc.chart.eval("A", p, 1);
    auto Gp = sc.chart.eval("Gamma_prime", p, 1);
    CHECK(tensor3_of(G, sc.dim).max_abs() < 1e-14);
    CHECK(tensor3_of(A, sc.dim).max_abs() < 1e-14);
    for (std::size_t m = 0; m < G.size(); ++m) CHECK(Gp[m].value() == G[m].value());
  }
}

TEST_CASE("Jacobian of Re phi matches the displayed block matrix") {
  for (int n : {1, 2}) {
    auto sc = make_special(lfam(n, 2));
    const int m = n + 1;
    for (const auto& p : sc.chart.sample(10, 11)) {
      Mat eng = phi_jacobian(sc, p);
      Mat perm(sc.dim, sc.dim);  // interleaved (u0,v0,u1,v1..) -> (u0..un, v0..vn)
      for (int i = 0; i < m; ++i) {
        perm.col(i) = eng.col(2 * i);
        perm.col(m + i) = eng.col(2 * i + 1);
      }
      CHECK(max_abs(Mat(perm - oracle::jacobian(n, 2, p))) < 1e-12);
    }
  }
}

TEST_CASE("displayed g_0 derivative forms agree with differentiating g") {
  for (int l : {2, 3, -1}) {
    auto sc = make_special(lfam(1, l));
    for (const auto& p : sc.chart.sample(5, 5)) {
      for (int i = 0; i < 4; ++i) {
        const double h = 1e-6;
        Vec a = p, b = p;
        a[i] += h;
        b[i] -= h;
        for (int gi : {0, 1}) {
          auto fd = (oracle::g_i(l, gi, a) - oracle::g_i(l, gi, b)) / (2 * h);
          CHECK(std::abs(fd.real() - oracle::dRe_g(l, gi, p, basis(4, i))) < 1e-6);
          CHECK(std::abs(fd.imag() - oracle::dIm_g(l, gi, p, basis(4, i))) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("transported connection and nabla J match the closed forms") {
  for (int n : {1, 2})
    for (int l : {2, 3}) {
      auto sc = make_special(lfam(n, l));
      const int d = sc.dim;
      for (const auto& p : sc.chart.sample(10, 17)) {
        Tensor3 G = tensor3_of(sc.chart.eval("Gamma", p, 0), d);
        Tensor3 A = tensor3_of(sc.chart.eval("A", p, 0), d);
        for (int i = 0; i < d; ++i) {
          CHECK(max_abs(Mat(G.slot(i) - oracle::S_matrix(n, l, p, basis(d, i)))) < 1e-8);
          CHECK(max_abs(Mat(A.slot(i) - oracle::A_matrix(n, l, p, basis(d, i)))) < 1e-8);
        }
      }
    }
}

TEST_CASE("Gamma derivatives agree with finite differences") {
  auto sc = make_special(lfam(1, 2));
  for (const auto& p : sc.chart.sample(5, 23)) {
    auto r = fd_compare(sc.chart.program("Gamma"), p);
    CHECK(r.first < 1e-5);
    CHECK(r.second < 1e-5);
    auto rp = fd_compare(sc.gamma_dgamma, p, false);
    CHECK(rp.first < 1e-5);
  }
}

TEST_CASE("Gamma_dGamma carries the first partials of Gamma") {
  auto sc = make_special(lfam(2, 3));
  const int d = sc.dim, n3 = d * d * d;
  for (const auto& p : sc.chart.sample(3, 29)) {
    auto G = sc.chart.eval("Gamma", p, 1);
    auto GG = sc.gamma_dgamma(seed_point(p, 1));
    for (int m = 0; m < n3; ++m) {
      CHECK(GG[m].value() == doctest::Approx(G[m].value()).epsilon(1e-12));
      for (int l = 0; l < d; ++l) CHECK(std::abs(GG[n3 + m * d + l].value() - G[m].d(l)) < 1e-9);
    }
  }
}

TEST_CASE("conical special complex axioms and nabla' laws") {
  for (int n : {1, 2})
    for (int l : {2, 3, 0}) {
      auto sc = make_special(lfam(n, l));
      for (const auto& p : sc.chart.sample(8, 31)) {
        auto s = special_axioms(sc, p);
        CHECK(s.flat < 1e-8);
        CHECK(s.torsion < 1e-12);
        CHECK(s.A_symmetric < 1e-8);
        CHECK(s.nabla_xi < 1e-9);
        CHECK(s.lie_xi_J < 1e-12);
        CHECK(s.A_xi < 1e-9);
        CHECK(s.A_Jxi < 1e-9);
        CHECK(s.lie_Jxi_J < 1e-12);
        CHECK(s.AJ_anticommute < 1e-9);
        CHECK(s.prime_J_parallel < 1e-9);
        CHECK(s.prime_torsion < 1e-9);
        CHECK(s.prime_xi < 1e-9);
        CHECK(s.prime_curvature_law < 1e-8);
        CHECK(s.prime_curv_Jxi < 1e-8);
        CHECK(s.lie_xi_prime < 1e-8);
        CHECK(s.lie_Jxi_prime < 1e-8);
        CHECK(s.lie_Jxi_nabla_is_A < 1e-8);
        CHECK(s.lie_Jxi_A < 1e-8);
        CHECK(s.lie_Jxi_JA < 1e-8);
        CHECK(s.hessian_symmetry < 1e-8);
        CHECK(s.trace_identity < 1e-7);
      }
    }
}

TEST_CASE("nabla' curvature and Tr A^2 match the closed displays") {
  for (int l : {2, 3}) {
    auto sc = make_special(lfam(1, l));
    const int d = sc.dim;
    for (const auto& p : sc.chart.sample(10, 37)) {
      Tensor4 R = curvature(sc.chart.eval("Gamma_prime", p, 1), d);
      Tensor3 A = tensor3_of(sc.chart.eval("A", p, 0), d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Vec X = basis(d, i), Y = basis(d, j);
          CHECK(max_abs(Mat(R.endo(i, j) - oracle::R_cl(1, l, p, X, Y))) < 1e-8);
          const double tr = (A.slot(i) * A.slot(j)).trace();
          CHECK(std::abs(tr - oracle::TrA2(1, l, p, X, Y)) < 1e-8);
          CHECK(std::abs(tr - oracle::TrA2_via_g0(1, l, p, X, Y)) < 1e-8);
        }
    }
  }
}

TEST_CASE("l = 0 has vanishing curvature closed forms") {
  Vec p(4);
  p << 0.7, -0.2, 0.4, 0.9;
  Vec X = basis(4, 1), Y = basis(4, 2);
  CHECK(max_abs(oracle::R_cl(1, 0, p, X, Y)) == 0.0);
  CHECK(oracle::TrA2(1, 0, p, X, Y) == 0.0);
}

TEST_CASE("nabla^t family") {
  auto sc = make_special(lfam(1, 3));
  const int d = sc.dim;
  for (const auto& p : sc.chart.sample(8, 41)) {
    auto G0 = nabla_t(sc, 0.0)(seed_point(p, 1));
    auto G = sc.chart.eval("Gamma", p, 1);
    for (std::size_t m = 0; m < G.size(); ++m) CHECK(G0[m].raw() == G[m].raw());
    for (double t : {std::numbers::pi / 4, 1.0, 2.5}) {
      auto f = family_axioms(sc, t, p);
      CHECK(f.flat < 1e-8);
      CHECK(f.torsion < 1e-12);
      CHECK(f.A_symmetric < 1e-8);
      CHECK(f.nabla_xi < 1e-9);
      CHECK(f.A_xi < 1e-9);
      CHECK(f.A_Jxi < 1e-9);
      CHECK(f.psi_parallel < 1e-9);
    }
    // t = pi/2 gives nabla - J A, the conjugate connection
    auto Gh = nabla_t(sc, std::numbers::pi / 2)(seed_point(p, 0));
    auto A = nabla_J_from(G, d);
    std::vector<Jet> JA(A.size());
    Mat J = standard_J(d);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0;
          for (int m = 0; m < d; ++m) s += J(k, m) * A[ci(d, m, i, j)].value();
          CHECK(std::abs(Gh[ci(d, k, i, j)].value() - (G[ci(d, k, i, j)].value() - s)) < 1e-12);
        }
  }
}

TEST_CASE("two-form psi and its moment map") {
  auto sc = make_special(lfam(2, 2));
  for (const auto& p : sc.chart.sample(10, 43)) {
    auto r = two_form_residuals(sc, sc.chart.program("psi"), p);
    CHECK(r.hermitian < 1e-12);
    CHECK(r.parallel < 1e-9);
    CHECK(r.moment < 1e-12);
    CHECK(sc.chart.eval("mu", p, 0)[0].value() == doctest::Approx(oracle::mu(2, p)));
  }
  Vec q = Vec::Zero(6);
  q[0] = 0.8;
  q[1] = 0.3;
  q[2] = 1.0;
  CHECK(sc.chart.eval("mu", q, 0)[0].value() == doctest::Approx(0.5));
  auto zero = [](const std::vector<Jet>&) { return std::vector<Jet>(36, Jet(0.0)); };
  CHECK(moment_map(sc, zero)(seed_point(q, 1))[0].value() == 0.0);
}

TEST_CASE("register_two_form rejects a non-parallel form") {
  auto sc = make_special(lfam(1, 2));
  // du_0 ^ dv_0 is hermitian but not parallel for the l-family
  auto bad = [](const std::vector<Jet>&) {
    std::vector<Jet> b(16, Jet(0.0));
    b[ei(4, 0, 1)] = 1.0;
    b[ei(4, 1, 0)] = -1.0;
    return b;
  };
  CHECK_THROWS_AS(register_two_form(sc, bad), std::invalid_argument);
  // du_0 (x) du_1 symmetric part is not hermitian
  auto nonherm = [](const std::vector<Jet>&) {
    std::vector<Jet> b(16, Jet(0.0));
    b[ei(4, 0, 2)] = 1.0;
    b[ei(4, 2, 0)] = 1.0;
    return b;
  };
  CHECK_THROWS_AS(register_two_form(sc, nonherm), std::invalid_argument);
}

TEST_CASE("construction rejects bad data") {
  HolomorphicData h;
  h.name = "quadratic";
  h.n = 1;
  h.F = [](const std::vector<CJet>& z) { return std::vector<CJet>{z[0] * z[0], -I_times(z[1])}; };
  auto sampler = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    Vec p(4);
    for (int i = 0; i < 4; ++i) p[i] = U(rng);
    return p;
  };
  CHECK_THROWS_AS(build_special_chart(h, nullptr, sampler), std::invalid_argument);
  h.conical = false;
  CHECK_NOTHROW(build_special_chart(h, nullptr, sampler));

  HolomorphicData nh = h;
  nh.F = [](const std::vector<CJet>& z) {
    return std::vector<CJet>{CJet(z[0].re, 0.0), -I_times(z[1])};
  };
  CHECK_THROWS_AS(build_special_chart(nh, nullptr, sampler), std::invalid_argument);

  ExampleSpec s = lfam(1, 1);
  CHECK_THROWS_AS(make_special(s), std::invalid_argument);
  // l = 1 data built directly: Re F_0 = Re F_1, the pushforward refuses the point
  auto raw = build_special_chart(l_family_data(1, 1), nullptr, sampler);
  Vec p(4);
  p << 0.5, 0.2, 0.3, -0.4;
  CHECK_THROWS_AS(raw.chart.eval("Gamma", p, 1), DegeneratePointError);
}
