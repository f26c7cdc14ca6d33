#include "hqg/rigid_cmap.hpp"

#include <algorithm>
#include <cmath>

namespace hqg {

namespace {

std::vector<Jet> base_part(const std::vector<Jet>& y, int d) {
  return std::vector<Jet>(y.begin(), y.begin() + d);
}

// c^a_i = Gamma^a_ij w^j
JMat connection_matrix(const std::vector<Jet>& G, const std::vector<Jet>& y, int d) {
  JMat c(d, d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i) {
      Jet s(0.0);
      for (int j = 0; j < d; ++j) s += G[ci(d, a, i, j)] * y[d + j];
      c(a, i) = s;
    }
  return c;
}

JMat constant_jmat(const Mat& m) {
  JMat r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r(i, j) = Jet(m(i, j));
  return r;
}

JMat add(const JMat& a, const JMat& b, double s = 1.0) {
  JMat r = a;
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] += s * b.a[k];
  return r;
}

// Assemble [[P, Q], [R, S]] into an endomorphism component list of size (2d)^2.
std::vector<Jet> blocks(const JMat& P, const JMat& Q, const JMat& R, const JMat& S, int d) {
  const int D = 2 * d;
  std::vector<Jet> out(D * D);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out[ei(D, i, j)] = P(i, j);
      out[ei(D, i, d + j)] = Q(i, j);
      out[ei(D, d + i, j)] = R(i, j);
      out[ei(D, d + i, d + j)] = S(i, j);
    }
  return out;
}

struct Triple {
  std::vector<Jet> I1, I2, I3;
};

// In the (h, v) frame I1 = diag(J, -J), I2 = [[0, 1], [-1, 0]], I3 = [[0, J], [J, 0]];
// coordinates differ by [[1, 0], [G, 1]] with G = -c.
Triple hypercomplex(const SpecialComplexChart& base, const std::vector<Jet>& y) {
  const int d = base.dim;
  auto G = base.chart.program("Gamma")(base_part(y, d));
  JMat Gm = connection_matrix(G, y, d);
  for (auto& j : Gm.a) j = -j;
  const JMat J = constant_jmat(standard_J(d));
  const JMat Id = constant_jmat(Mat::Identity(d, d));
  const JMat Z = constant_jmat(Mat::Zero(d, d));
  JMat GJ = Gm * J, JG = J * Gm;
  JMat negJ = J;
  for (auto& j : negJ.a) j = -j;
  Triple t;
  t.I1 = blocks(J, Z, add(GJ, JG), negJ, d);
  JMat negG = Gm;
  for (auto& j : negG.a) j = -j;
  JMat negId = Id;
  for (auto& j : negId.a) j = -j;
  t.I2 = blocks(negG, Id, add(negId, Gm * Gm, -1.0), Gm, d);
  JMat negJG = JG;
  for (auto& j : negJG.a) j = -j;
  t.I3 = blocks(negJG, J, add(J, GJ * Gm, -1.0), GJ, d);
  return t;
}

std::vector<Jet> obata_explicit(const SpecialComplexChart& base, const std::vector<Jet>& y) {
  const int d = base.dim, D = 2 * d, n3 = d * d * d;
  auto GG = base.gamma_dgamma(base_part(y, d));
  std::vector<Jet> G(GG.begin(), GG.begin() + n3);
  auto A = nabla_J_from(G, d);
  auto Gp = nabla_prime_from(G, d);
  auto B = J_times(A, d);
  for (auto& b : B) b = 0.5 * b;
  JMat c = connection_matrix(G, y, d);
  auto dG = [&](int p, int j, int m, int i) -> const Jet& { return GG[n3 + ci(d, p, j, m) * d + i]; };

  std::vector<Jet> T(D * D * D, Jet(0.0));
  // (w_a, w_b)
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k) {
        const Jet& bk = B[ci(d, k, a, b)];
        T[ci(D, k, d + a, d + b)] = bk;
        for (int m = 0; m < d; ++m) T[ci(D, d + m, d + a, d + b)] -= bk * c(m, k);
      }
  // (x_i, w_a) and its mirror
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) {
      std::vector<Jet> q(d, Jet(0.0));  // q^l = c^k_i B^l_ka
      for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k) q[l] += c(k, i) * B[ci(d, l, k, a)];
      for (int l = 0; l < d; ++l) {
        T[ci(D, l, i, d + a)] = q[l];
        T[ci(D, l, d + a, i)] = q[l];
      }
      for (int m = 0; m < d; ++m) {
        Jet s = Gp[ci(d, m, i, a)];
        for (int l = 0; l < d; ++l) s -= q[l] * c(m, l);
        T[ci(D, d + m, i, d + a)] = s;
        T[ci(D, d + m, d + a, i)] = s;
      }
    }
  // (x_i, x_j)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<Jet> P(d);
      for (int m = 0; m < d; ++m) {
        Jet s = Gp[ci(d, m, i, j)];
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) s += c(k, i) * c(l, j) * B[ci(d, m, k, l)];
        P[m] = s;
        T[ci(D, m, i, j)] = s;
      }
      for (int p = 0; p < d; ++p) {
        Jet s(0.0);
        for (int m = 0; m < d; ++m) {
          s += dG(p, j, m, i) * y[d + m];
          s += c(m, j) * Gp[ci(d, p, i, m)];
          s -= c(m, i) * B[ci(d, p, m, j)];
          s -= c(p, m) * P[m];
        }
        T[ci(D, d + p, i, j)] = s;
      }
    }
  return T;
}

std::vector<Jet> lift_h(const SpecialComplexChart& base, const std::vector<Jet>& y,
                        const std::vector<Jet>& X) {
  const int d = base.dim;
  auto G = base.chart.program("Gamma")(base_part(y, d));
  std::vector<Jet> out(2 * d, Jet(0.0));
  for (int i = 0; i < d; ++i) out[i] = X[i];
  for (int a = 0; a < d; ++a) {
    Jet s(0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += G[ci(d, a, i, j)] * X[i] * y[d + j];
    out[d + a] = -s;
  }
  return out;
}

// (nabla_U V)^k for pointwise U and a jet field V
Vec cov_along(const std::vector<Jet>& G, const Vec& U, const std::vector<Jet>& V) {
  const int D = static_cast<int>(U.size());
  Vec r = Vec::Zero(D);
  for (int k = 0; k < D; ++k) {
    double s = 0;
    for (int i = 0; i < D; ++i) {
      if (U[i] == 0.0) continue;
      s += U[i] * V[k].d(i);
      for (int j = 0; j < D; ++j) s += G[ci(D, k, i, j)].value() * U[i] * V[j].value();
    }
    r[k] = s;
  }
  return r;
}

}  // namespace

TangentChart tangent_chart(const SpecialComplexChart& base) {
  TangentChart tc;
  tc.base = base;
  const int d = base.dim, D = 2 * d;
  tc.d = d;
  tc.dim = D;
  const ChartGeometry& bc = base.chart;
  auto domain = [bc, d](const Vec& p) { return bc.in_domain(p.head(d)); };
  auto region = [bc, d](const Vec& p) { return bc.in_region(p.head(d)); };
  auto sampler = [bc, d](std::mt19937_64& rng) {
    Vec p(2 * d);
    p.head(d) = bc.sampler()(rng);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int a = 0; a < d; ++a) p[d + a] = U(rng);
    return p;
  };
  tc.chart = ChartGeometry("TN:" + bc.name(), D, domain, sampler, region);

  tc.chart.add("I1", Valence::Endo, [base](const std::vector<Jet>& y) { return hypercomplex(base, y).I1; });
  tc.chart.add("I2", Valence::Endo, [base](const std::vector<Jet>& y) { return hypercomplex(base, y).I2; });
  tc.chart.add("I3", Valence::Endo, [base](const std::vector<Jet>& y) { return hypercomplex(base, y).I3; });
  tc.chart.add("Gamma_obata", Valence::Christoffel,
               [base](const std::vector<Jet>& y) { return obata_explicit(base, y); });
  tc.chart.add("Gamma_obata_solver", Valence::Christoffel,
               lifted(
                   [base, D](const std::vector<Jet>& y) {
                     auto t = hypercomplex(base, y);
                     return obata_solve(t.I1, t.I2, D, y[0].order() - 1).gamma;
                   },
                   D, 1));
  tc.chart.add("ZM", Valence::Vector, [base, d](const std::vector<Jet>& y) {
    std::vector<Jet> jx(d);
    for (int p = 0; p < d / 2; ++p) {
      jx[2 * p] = -2.0 * y[2 * p + 1];
      jx[2 * p + 1] = 2.0 * y[2 * p];
    }
    return lift_h(base, y, jx);
  });
  tc.chart.add("xi_h", Valence::Vector,
               [base, d](const std::vector<Jet>& y) { return lift_h(base, y, base_part(y, d)); });
  return tc;
}

Program horizontal_lift(const TangentChart& tc, Program X) {
  const SpecialComplexChart& base = tc.base;
  const int d = tc.d;
  return [base, d, X = std::move(X)](const std::vector<Jet>& y) {
    return lift_h(base, y, X(base_part(y, d)));
  };
}

Program vertical_lift(const TangentChart& tc, Program Y) {
  const int d = tc.d;
  return [d, Y = std::move(Y)](const std::vector<Jet>& y) {
    auto v = Y(base_part(y, d));
    std::vector<Jet> out(2 * d, Jet(0.0));
    for (int a = 0; a < d; ++a) out[d + a] = v[a];
    return out;
  };
}

Vec horizontal_lift_at(const TangentChart& tc, const Vec& p, const Vec& X) {
  const int d = tc.d;
  Tensor3 G = tensor3_of(tc.base.chart.eval("Gamma", p.head(d), 0), d);
  Vec out(2 * d);
  out.head(d) = X;
  for (int a = 0; a < d; ++a) {
    double s = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += G(a, i, j) * X[i] * p[d + j];
    out[d + a] = -s;
  }
  return out;
}

Vec vertical_lift_at(const TangentChart& tc, const Vec& X) {
  Vec out = Vec::Zero(2 * tc.d);
  out.tail(tc.d) = X;
  return out;
}

RigidCmapChecks rigid_cmap_checks(const TangentChart& tc, const Vec& p, std::uint64_t fields_seed) {
  const int d = tc.d, D = tc.dim;
  const auto& ch = tc.chart;
  const auto& bch = tc.base.chart;
  const Vec x = p.head(d);
  auto y1 = seed_point(p, 1);
  RigidCmapChecks r;

  auto I1 = ch.program("I1")(y1), I2 = ch.program("I2")(y1), I3 = ch.program("I3")(y1);
  const Mat M1 = endo_of(I1, D), M2 = endo_of(I2, D), M3 = endo_of(I3, D);
  r.quaternionic = quaternionic_residual(M1, M2, M3);

  const Mat J = standard_J(d);
  auto h = [&](const Vec& X) { return horizontal_lift_at(tc, p, X); };
  auto v = [&](const Vec& X) { return vertical_lift_at(tc, X); };
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    Vec Je = J * e;
    r.lift_action = std::max({r.lift_action, max_abs(Vec(M1 * h(e) - h(Je))),
                              max_abs(Vec(M1 * v(e) + v(Je))), max_abs(Vec(M2 * h(e) + v(e))),
                              max_abs(Vec(M2 * v(e) - h(e))), max_abs(Vec(M3 * h(e) - v(Je))),
                              max_abs(Vec(M3 * v(e) - h(Je)))});
  }
  r.nijenhuis = std::max({nijenhuis_tensor(I1, D).max_abs(), nijenhuis_tensor(I2, D).max_abs(),
                          nijenhuis_tensor(I3, D).max_abs()});

  auto Gt = ch.program("Gamma_obata")(y1);
  r.torsion = torsion(Gt, D).max_abs();
  r.obata_parallel = std::max({parallel_residual(Gt, I1, D), parallel_residual(Gt, I2, D),
                               parallel_residual(Gt, I3, D)});
  auto Gs = ch.eval("Gamma_obata_solver", p, 0);
  for (int m = 0; m < D * D * D; ++m)
    r.explicit_vs_solver = std::max(r.explicit_vs_solver, std::abs(Gs[m].value() - Gt[m].value()));
  r.solver_parallel = std::max({parallel_residual(Gs, I1, D), parallel_residual(Gs, I2, D),
                                parallel_residual(Gs, I3, D)});
  r.ricci = max_abs(ricci(Gt, D));

  // curvature blocks against base data
  Tensor4 Rt = curvature(Gt, D);
  auto xb1 = seed_point(x, 1);
  auto Gb = bch.program("Gamma")(xb1);
  auto Ab = nabla_J_from(Gb, d);
  Tensor4 Rp = curvature(nabla_prime_from(Gb, d), d);
  Tensor3 A = tensor3_of(Ab, d);
  auto H = second_cov_deriv_endo(Gb, Ab, d);
  std::vector<Vec> E(d, Vec::Zero(d));
  for (int i = 0; i < d; ++i) E[i][i] = 1.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Mat Aa = A.slot(a), Abm = A.slot(b);
      const Mat JHab = J * H[a * d + b];
      for (int c = 0; c < d; ++c) {
        const Vec& U = E[a];
        const Vec& V = E[b];
        const Vec& W = E[c];
        const Mat Ac = A.slot(c);
        double e = 0;
        e = std::max(e, max_abs(Vec(Rt.apply(v(U), v(V), v(W)) - v(Rp.apply(U, V, W)))));
        e = std::max(e, max_abs(Vec(Rt.apply(v(U), v(V), h(W)) - h(Rp.apply(U, V, W)))));
        // U = e_a, V = e_b, X = e_c
        Vec rhs3 = -0.5 * (J * H[a * d + b]) * W - 0.25 * Ac * Aa * V - 0.25 * Aa * Ac * V;
        e = std::max(e, max_abs(Vec(Rt.apply(v(U), h(W), v(V)) - h(rhs3))));
        // U = e_c, X = e_a, Y = e_b
        Vec rhs4 = 0.5 * JHab * W + 0.25 * Aa * Abm * W + 0.25 * Ac * Aa * V;
        e = std::max(e, max_abs(Vec(Rt.apply(v(W), h(U), h(V)) - v(rhs4))));
        e = std::max(e, max_abs(Vec(Rt.apply(h(U), h(V), v(W)) - v(Rp.apply(U, V, W)))));
        e = std::max(e, max_abs(Vec(Rt.apply(h(U), h(V), h(W)) - h(Rp.apply(U, V, W)))));
        r.curvature_blocks = std::max(r.curvature_blocks, e);
      }
    }

  // leaves totally geodesic and the Euler-field remark, with coordinate base fields
  auto xi_h = ch.program("xi_h")(y1);
  Tensor3 Gpb = tensor3_of(nabla_prime_from(Gb, d), d);
  for (int i = 0; i < d; ++i) {
    Program Xi = [i, d](const std::vector<Jet>&) {
      std::vector<Jet> e(d, Jet(0.0));
      e[i] = 1.0;
      return e;
    };
    auto Xh = horizontal_lift(tc, Xi)(y1);
    for (int j = 0; j < d; ++j) {
      Program Xj = [j, d](const std::vector<Jet>&) {
        std::vector<Jet> e(d, Jet(0.0));
        e[j] = 1.0;
        return e;
      };
      auto Yh = horizontal_lift(tc, Xj)(y1);
      Vec lhs = cov_along(Gt, values_of(Xh), Yh);
      Vec npr(d);
      for (int k = 0; k < d; ++k) npr[k] = Gpb(k, i, j);
      r.leaves_geodesic = std::max(r.leaves_geodesic, max_abs(Vec(lhs - h(npr))));
    }
    r.euler_h = std::max(r.euler_h, max_abs(Vec(cov_along(Gt, values_of(Xh), xi_h) - values_of(Xh))));
    r.euler_v = std::max(r.euler_v, max_abs(cov_along(Gt, v(E[i]), xi_h)));
  }

  auto Z = ch.program("ZM")(y1);
  r.rot_I1 = max_abs(lie_derivative_endo(Z, I1, D));
  r.rot_I2 = max_abs(Mat(lie_derivative_endo(Z, I2, D) + 2 * M3));
  r.rot_I3 = max_abs(Mat(lie_derivative_endo(Z, I3, D) - 2 * M2));

  // bracket identities for affine base fields X = a + M x
  std::mt19937_64 rng(fields_seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto affine = [&]() {
    Vec a(d);
    Mat M(d, d);
    for (int i = 0; i < d; ++i) a[i] = U(rng);
    for (int i = 0; i < d * d; ++i) M.data()[i] = U(rng);
    return Program([a, M, d](const std::vector<Jet>& xs) {
      std::vector<Jet> out(d);
      for (int k = 0; k < d; ++k) {
        Jet s(a[k]);
        for (int j = 0; j < d; ++j) s += M(k, j) * xs[j];
        out[k] = s;
      }
      return out;
    });
  };
  Program X = affine(), Y = affine();
  auto Xb = X(xb1), Yb = Y(xb1);
  Vec XY = lie_bracket(Xb, Yb);
  Vec nXY = cov_along(Gb, values_of(Xb), Yb);
  auto Xh = horizontal_lift(tc, X)(y1), Yh = horizontal_lift(tc, Y)(y1);
  auto Xv = vertical_lift(tc, X)(y1), Yv = vertical_lift(tc, Y)(y1);
  r.bracket_hh = max_abs(Vec(lie_bracket(Xh, Yh) - h(XY)));
  r.bracket_hv = max_abs(Vec(lie_bracket(Xh, Yv) - v(nXY)));
  r.bracket_vv = max_abs(lie_bracket(Xv, Yv));
  return r;
}

}  // namespace hqg
