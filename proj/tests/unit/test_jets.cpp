#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hqg/jet.hpp"
#include "hqg/jet_linalg.hpp"

using namespace hqg;

namespace {

// Straight-line random program over doubles or jets; each instruction combines
// two earlier registers with a smooth operation.
struct RandomProgram {
  struct Ins {
    int op, a, b;
    double c;
  };
  int nin;
  std::vector<Ins> code;

  RandomProgram(int nin_, std::mt19937_64& rng, int len = 8) : nin(nin_) {
    std::uniform_int_distribution<int> opd(0, 6);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    for (int k = 0; k < len; ++k) {
      std::uniform_int_distribution<int> rd(0, nin + k - 1);
      code.push_back({opd(rng), rd(rng), rd(rng), cd(rng)});
    }
  }

  template <class T>
  T run(const std::vector<T>& x) const {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    std::vector<T> r(x.begin(), x.end());
    for (const auto& i : code) {
      const T& a = r[i.a];
      const T& b = r[i.b];
      switch (i.op) {
        case 0: r.push_back(a + i.c * b); break;
        case 1: r.push_back(a * b); break;
        case 2: r.push_back(sin(a + i.c)); break;
        case 3: r.push_back(cos(i.c * b) * a); break;
        case 4: r.push_back(exp(0.3 * a)); break;
        case 5: r.push_back(log(T(1.5) + a * a)); break;
        default: r.push_back(a / (T(2.0) + b * b)); break;
      }
    }
    return r.back();
  }
};

double fd_first(const RandomProgram& p, std::vector<double> x, int i, double h) {
  std::vector<double> xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (p.run(xp) - p.run(xm)) / (2 * h);
}

double fd_second(const RandomProgram& p, std::vector<double> x, int i, int j, double h) {
  auto f = [&](double si, double sj) {
    std::vector<double> y = x;
    y[i] += si * h;
    y[j] += sj * h;
    return p.run(y);
  };
  return (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * h * h);
}

}  // namespace

TEST_CASE("seed_variables and simple polynomials") {
  std::vector<double> p{3.0};
  auto x = seed_variables(p, 2);
  Jet f = x[0] * x[0];
  auto c = f.coeffs();
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(9));
  CHECK(c[1] == doctest::Approx(6));
  CHECK(c[2] == doctest::Approx(1));

  Jet k = Jet(5.0) + 0.0 * x[0];
  for (std::size_t m = 1; m < k.coeffs().size(); ++m) CHECK(k.coeffs()[m] == 0.0);
  CHECK(k.value() == 5.0);

  std::vector<double> q{0.0, 2.0};
  auto y = seed_variables(q, 1);
  Jet g = sin(y[0]) * y[1];
  CHECK(g.value() == doctest::Approx(0.0));
  CHECK(g.d(0) == doctest::Approx(2.0));
  CHECK(g.d(1) == doctest::Approx(0.0));
}

TEST_CASE("seed_variables rejects misconfiguration") {
  std::vector<double> p{1.0};
  CHECK_THROWS(seed_variables(p, 0));
  std::vector<double> e;
  CHECK_THROWS(seed_variables(e, 2));
}

TEST_CASE("extract_partial") {
  std::vector<double> p{1.0};
  auto x = seed_variables(p, 3);
  Jet f = x[0] * x[0] * x[0];
  std::vector<int> a2{2}, a0{0}, a4{4};
  CHECK(extract_partial(f, a2) == doctest::Approx(6.0));
  CHECK(extract_partial(f, a0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(extract_partial(f, a4), std::out_of_range);
  Jet k(JetSpace::get(1, 3), 4.0);
  std::vector<int> a1{1};
  CHECK(extract_partial(k, a1) == 0.0);
}

TEST_CASE("singular values are rejected") {
  std::vector<double> p{0.0};
  auto x = seed_variables(p, 2);
  CHECK_THROWS_AS(recip(x[0]), JetDomainError);
  CHECK_THROWS_AS(log(x[0]), JetDomainError);
  CHECK_THROWS_AS(Jet(1.0) / x[0], JetDomainError);
}

TEST_CASE("dimension cap") {
  const int old = jet_dimension_cap();
  set_jet_dimension_cap(4);
  std::vector<double> p(5, 0.1);
  CHECK_THROWS_AS(seed_variables(p, 2), std::invalid_argument);
  set_jet_dimension_cap(old);
}

TEST_CASE("product rule is the Cauchy product") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pt{u(rng), u(rng), u(rng)};
    auto x = seed_variables(pt, 3);
    RandomProgram pf(3, rng), pg(3, rng);
    Jet f = pf.run(x), g = pg.run(x);
    Jet fg = f * g;
    const JetSpace* sp = fg.space();
    auto cf = f.coeffs(), cg = g.coeffs();
    std::vector<double> want(sp->size(), 0.0);
    for (std::size_t a = 0; a < sp->size(); ++a)
      for (std::size_t b = 0; b < sp->size(); ++b) {
        if (sp->degree(a) + sp->degree(b) > 3) continue;
        std::vector<int> e(3);
        for (int v = 0; v < 3; ++v) e[v] = sp->exponents(a)[v] + sp->exponents(b)[v];
        want[sp->find(e)] += cf[a] * cg[b];
      }
    auto got = fg.coeffs();
    for (std::size_t m = 0; m < want.size(); ++m)
      CHECK(got[m] == doctest::Approx(want[m]).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("chain rule against central differences on random programs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst1 = 0, worst2 = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3;
    RandomProgram p(n, rng, 10);
    std::vector<double> pt{u(rng), u(rng), u(rng)};
    auto x = seed_variables(pt, 2);
    Jet f = p.run(x);
    for (int i = 0; i < n; ++i) {
      const double fd = fd_first(p, pt, i, 1e-5);
      const double jd = f.d(i);
      worst1 = std::max(worst1, std::abs(fd - jd) / std::max(1.0, std::abs(jd)));
      for (int j = 0; j < n; ++j) {
        std::vector<int> a(n, 0);
        a[i] += 1;
        a[j] += 1;
        const double js = extract_partial(f, a);
        const double fs = fd_second(p, pt, i, j, 1e-4);
        worst2 = std::max(worst2, std::abs(fs - js) / std::max(1.0, std::abs(js)));
      }
    }
  }
  CHECK(worst1 <= 1e-6);
  CHECK(worst2 <= 1e-6);
}

TEST_CASE("truncating a K=3 evaluation equals the K=2 evaluation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    RandomProgram p(2, rng, 12);
    std::vector<double> pt{u(rng), u(rng)};
    Jet f3 = p.run(seed_variables(pt, 3));
    Jet f2 = p.run(seed_variables(pt, 2));
    auto a = truncate(f3, 2).coeffs();
    auto b = f2.coeffs();
    REQUIRE(a.size() == b.size());
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == b[m]);
  }
}

TEST_CASE("elementary functions match their series") {
  std::vector<double> p{0.7};
  auto x = seed_variables(p, 4);
  std::vector<int> a3{3};
  CHECK(extract_partial(exp(x[0]), a3) == doctest::Approx(std::exp(0.7)));
  CHECK(extract_partial(sin(x[0]), a3) == doctest::Approx(-std::cos(0.7)));
  CHECK(extract_partial(cos(x[0]), a3) == doctest::Approx(std::sin(0.7)));
  CHECK(extract_partial(log(x[0]), a3) == doctest::Approx(2.0 / std::pow(0.7, 3)));
  CHECK(extract_partial(sqrt(x[0]), a3) == doctest::Approx(3.0 / 8.0 * std::pow(0.7, -2.5)));
  CHECK(extract_partial(ipow(x[0], -2), a3) == doctest::Approx(-24.0 * std::pow(0.7, -5)));
  CHECK(extract_partial(pow(x[0], 1.5), a3) == doctest::Approx(-0.375 * std::pow(0.7, -1.5)));
}

TEST_CASE("derivative lowers the order and differentiates") {
  std::vector<double> p{0.3, -0.4};
  auto x = seed_variables(p, 3);
  Jet f = x[0] * x[0] * x[1] + sin(x[1]);
  Jet g = derivative(f, 1);
  CHECK(g.order() == 2);
  CHECK(g.value() == doctest::Approx(0.09 + std::cos(-0.4)));
  CHECK(g.d(0) == doctest::Approx(0.6));
  CHECK(g.d(1) == doctest::Approx(-std::sin(-0.4)));
}

TEST_CASE("composition reproduces direct evaluation") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  RandomProgram p(2, rng, 10);
  // outer map (s, t, r) -> (s*t + 0.2, sin r - t)
  std::vector<double> pt{u(rng), u(rng), u(rng)};
  auto s = seed_variables(pt, 3);
  std::vector<Jet> outer{s[0] * s[1] + Jet(0.2), sin(s[2]) - s[1]};
  Jet direct = p.run(outer);
  std::vector<double> x0{outer[0].value(), outer[1].value()};
  Jet base = p.run(seed_variables(x0, 3));
  Composer comp(outer);
  Jet composed = comp.apply(base);
  auto a = direct.coeffs(), b = composed.coeffs();
  for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == doctest::Approx(b[m]).scale(1.0));
  Composer ident(seed_variables(x0, 3));
  CHECK(ident.identity());
}

TEST_CASE("restrict_vars keeps only the chosen variables") {
  std::vector<double> p{0.1, 0.2, 0.3};
  auto x = seed_variables(p, 2);
  Jet f = x[0] * x[2] + x[1] * x[1];
  std::vector<int> keep{2, 0};
  Jet r = restrict_vars(f, keep);
  CHECK(r.nvars() == 2);
  CHECK(r.d(0) == doctest::Approx(0.1));
  CHECK(r.d(1) == doctest::Approx(0.3));
  std::vector<int> a{1, 1};
  CHECK(extract_partial(r, a) == doctest::Approx(1.0));
}

TEST_CASE("jet_linear_solve trivial cases") {
  std::vector<double> p{0.0};
  auto e = seed_variables(p, 2);
  JMat A(1, 1);
  A(0, 0) = Jet(2.0) + e[0];
  std::vector<Jet> b{Jet(4.0)};
  auto x = jet_linear_solve(A, b);
  CHECK(x[0].value() == doctest::Approx(2.0));
  CHECK(x[0].d(0) == doctest::Approx(-1.0));

  JMat I(3, 3);
  for (int i = 0; i < 3; ++i) I(i, i) = Jet(1.0);
  std::vector<double> q{0.5, -0.5};
  auto s = seed_variables(q, 2);
  std::vector<Jet> rhs{s[0] * s[1], sin(s[0]), Jet(3.0)};
  auto y = jet_linear_solve(I, rhs);
  for (int i = 0; i < 3; ++i) {
    auto u = y[i].coeffs(), v = rhs[i].coeffs();
    for (std::size_t m = 0; m < v.size(); ++m) CHECK(u[m] == doctest::Approx(v[m]));
  }
}

TEST_CASE("jet_linear_solve rejects singular blocks") {
  JMat A(2, 2);
  A(0, 0) = Jet(1.0);
  A(0, 1) = Jet(2.0);
  A(1, 0) = Jet(2.0);
  A(1, 1) = Jet(4.0);
  std::vector<Jet> b{Jet(1.0), Jet(1.0)};
  CHECK_THROWS_AS(jet_linear_solve(A, b), DegeneratePointError);
}

TEST_CASE("jet_linear_solve against perturbed real solves") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 5, nv = 2;
  Eigen::MatrixXd M0(n, n), M1(n, n), M2(n, n);
  Eigen::VectorXd c0(n), c1(n), c2(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      M0(i, j) = u(rng) + (i == j ? 4.0 : 0.0);
      M1(i, j) = u(rng);
      M2(i, j) = u(rng);
    }
    c0[i] = u(rng);
    c1[i] = u(rng);
    c2[i] = u(rng);
  }
  // A(s) = M0 + s0 M1 + s0 s1 M2, b(s) = c0 + sin(s1) c1 + s0^2 c2
  auto realA = [&](double s0, double s1) { return Eigen::MatrixXd(M0 + s0 * M1 + s0 * s1 * M2); };
  auto realb = [&](double s0, double s1) {
    return Eigen::VectorXd(c0 + std::sin(s1) * c1 + s0 * s0 * c2);
  };
  std::vector<double> pt{0.2, -0.3};
  auto s = seed_variables(pt, 2);
  JMat A(n, n);
  std::vector<Jet> b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = Jet(M0(i, j)) + M1(i, j) * s[0] + M2(i, j) * s[0] * s[1];
    b[i] = Jet(c0[i]) + c1[i] * sin(s[1]) + c2[i] * s[0] * s[0];
  }
  auto x = jet_linear_solve(A, b);
  const double h = 1e-5;
  double worst = 0;
  for (int v = 0; v < nv; ++v) {
    double dp[2] = {pt[0], pt[1]}, dm[2] = {pt[0], pt[1]};
    dp[v] += h;
    dm[v] -= h;
    Eigen::VectorXd xp = realA(dp[0], dp[1]).lu().solve(realb(dp[0], dp[1]));
    Eigen::VectorXd xm = realA(dm[0], dm[1]).lu().solve(realb(dm[0], dm[1]));
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs((xp[i] - xm[i]) / (2 * h) - x[i].d(v)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("jet_lstsq solves consistent overdetermined systems") {
  std::vector<double> pt{0.1, 0.4};
  auto s = seed_variables(pt, 2);
  // unknowns x0 = s0 s1, x1 = cos s0; rows: x0, x1, x0 + (1+s1) x1, 2 x0 - x1
  std::vector<Jet> truth{s[0] * s[1], cos(s[0])};
  JetSystem sys;
  sys.unknowns = 2;
  sys.add_row({{0, Jet(1.0)}}, truth[0]);
  sys.add_row({{1, Jet(1.0)}}, truth[1]);
  Jet w = Jet(1.0) + s[1];
  sys.add_row({{0, Jet(1.0)}, {1, w}}, truth[0] + w * truth[1]);
  sys.add_row({{0, Jet(2.0)}, {1, Jet(-1.0)}}, 2.0 * truth[0] - truth[1]);
  auto r = jet_lstsq(sys, 2);
  for (int i = 0; i < 2; ++i) {
    auto a = r.x[i].coeffs(), b = truth[i].coeffs();
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == doctest::Approx(b[m]).scale(1.0));
  }
  sys.add_row({{0, Jet(1.0)}}, Jet(5.0));
  CHECK_THROWS_AS(jet_lstsq(sys, 1), InconsistentSystemError);
}
