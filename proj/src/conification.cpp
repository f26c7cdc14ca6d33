#include "hqg/conification.hpp"

#include "hqg/jet_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hqg {

namespace {

std::vector<Jet> sub(const std::vector<Jet>& x, int off, int n) {
  return std::vector<Jet>(x.begin() + off, x.begin() + off + n);
}

Quat<Jet> quat_at(const std::vector<Jet>& x, int off = 0) {
  return {x[off], x[off + 1], x[off + 2], x[off + 3]};
}

// Fields of M at the jets y.
struct MFields {
  int m = 0;
  std::vector<Jet> I[3], Z, Theta, beta;
  Jet f, f1;
};

MFields eval_M(const ConificationData& d, const std::vector<Jet>& y) {
  MFields r;
  r.m = static_cast<int>(y.size());
  const int m = r.m;
  r.I[0] = d.M.program("I1")(y);
  r.I[1] = d.M.program("I2")(y);
  r.I[2] = d.M.program("I3")(y);
  r.Z = d.M.program("Z")(y);
  r.Theta = d.Theta(y);
  r.beta = d.beta(y);
  r.f = d.f(y)[0];
  Jet s(0.0);
  for (int a = 0; a < m; ++a) {
    Jet IZ(0.0);
    for (int b = 0; b < m; ++b) IZ += r.I[0][ei(m, a, b)] * r.Z[b];
    for (int b = 0; b < m; ++b) s += r.Theta[b * m + a] * r.Z[b] * IZ;
  }
  r.f1 = r.f - 0.5 * s;
  return r;
}

Jet pair(const std::vector<Jet>& w, const std::vector<Jet>& X) {
  Jet s(0.0);
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * X[i];
  return s;
}

// All three degenerate structures at a tilde point, each N x N in endo layout.
std::array<std::vector<Jet>, 3> tilde_structures(const ConificationData& d, int m,
                                                  const std::vector<Jet>& x) {
  const int N = m + 5;
  const Quat<Jet> q = quat_at(x);
  const MFields M = eval_M(d, sub(x, 4, m));
  const auto Ad = ad_matrix(q);
  const Quat<Jet> qi = qmul(q, qunit_as<Jet>(1));
  const Jet inv_f1 = recip(M.f1);

  std::array<std::vector<Jet>, 3> out;
  for (int al = 0; al < 3; ++al) {
    // I'_al = sum_b Ad(al, b) I_b
    std::vector<Jet> Ip(m * m, Jet(0.0));
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < m * m; ++k) Ip[k] += Ad[al][b] * M.I[b][k];
    std::vector<Jet> IpZ(m, Jet(0.0));
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j) IpZ[k] += Ip[ei(m, k, j)] * M.Z[j];
    const Quat<Jet> ia = qunit_as<Jet>(al + 1);
    std::vector<Jet> T(N * N, Jet(0.0));
    for (int j = 0; j < N; ++j) {
      // column j: X = e_j, a = -eta(X)/f1
      Jet a(0.0);
      bool has_a = false;
      if (j >= 4 && j < 4 + m) {
        a = -M.beta[j - 4] * inv_f1;
        has_a = true;
      } else if (j == N - 1) {
        a = -inv_f1;
        has_a = true;
      }
      Quat<Jet> Xq = qunit_as<Jet>(0);
      for (auto& c : Xq) c = Jet(0.0);
      if (j < 4) Xq[j] = Jet(1.0);
      if (has_a)
        for (int c = 0; c < 4; ++c) Xq[c] -= a * qi[c];
      const Quat<Jet> qp = qmul(ia, Xq);
      for (int c = 0; c < 4; ++c) T[ei(N, c, j)] = qp[c];
      std::vector<Jet> yp(m, Jet(0.0));
      for (int k = 0; k < m; ++k) {
        if (j >= 4 && j < 4 + m) yp[k] = Ip[ei(m, k, j - 4)];
        if (has_a) yp[k] += a * IpZ[k];
        T[ei(N, 4 + k, j)] = yp[k];
      }
      T[ei(N, N - 1, j)] = -pair(M.beta, yp);
    }
    out[al] = std::move(T);
  }
  return out;
}

std::vector<Jet> tilde_V1(const ConificationData& d, int m, const std::vector<Jet>& x) {
  const int N = m + 5;
  const MFields M = eval_M(d, sub(x, 4, m));
  const auto qi = qmul(quat_at(x), qunit_as<Jet>(1));
  std::vector<Jet> V(N);
  for (int c = 0; c < 4; ++c) V[c] = qi[c];
  for (int k = 0; k < m; ++k) V[4 + k] = -M.Z[k];
  V[N - 1] = pair(M.beta, M.Z) - M.f1;
  return V;
}

std::vector<Jet> tilde_Z1(const ConificationData& d, int m, const std::vector<Jet>& x) {
  const int N = m + 5;
  const MFields M = eval_M(d, sub(x, 4, m));
  std::vector<Jet> V(N, Jet(0.0));
  for (int k = 0; k < m; ++k) V[4 + k] = M.Z[k];
  V[N - 1] = M.f1 - pair(M.beta, M.Z);
  return V;
}

// slice jets (q, y) -> tilde jets (q, y, 0)
std::vector<Jet> embed_slice(const std::vector<Jet>& s) {
  std::vector<Jet> x = s;
  const JetSpace* sp = nullptr;
  for (const auto& j : s)
    if (j.space()) sp = j.space();
  x.push_back(sp ? Jet(sp, 0.0) : Jet(0.0));
  return x;
}

// Projection along V1 onto the slice tangent space: X -> X - (X^t / V1^t) V1, slice part.
std::array<std::vector<Jet>, 3> slice_structures(const ConificationData& d, int m,
                                                  const std::vector<Jet>& s) {
  const int S = m + 4, N = m + 5;
  auto x = embed_slice(s);
  auto T = tilde_structures(d, m, x);
  auto V1 = tilde_V1(d, m, x);
  const Jet r = recip(V1[N - 1]);
  std::array<std::vector<Jet>, 3> out;
  for (int al = 0; al < 3; ++al) {
    std::vector<Jet> I(S * S);
    for (int k = 0; k < S; ++k) {
      const Jet vk = V1[k] * r;
      for (int j = 0; j < S; ++j) I[ei(S, k, j)] = T[al][ei(N, k, j)] - T[al][ei(N, N - 1, j)] * vk;
    }
    out[al] = std::move(I);
  }
  return out;
}

Mat bilinear_of(const std::vector<Jet>& b, int m) {
  Mat B(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) B(i, j) = b[i * m + j].value();
  return B;
}

double closedness(const std::vector<Jet>& w, int m) {
  double e = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        e = std::max(e, std::abs(w[j * m + k].d(i) + w[k * m + i].d(j) + w[i * m + j].d(k)));
  return e;
}

Vec vec_of(const Quat<double>& q, int N) {
  Vec v = Vec::Zero(N);
  for (int c = 0; c < 4; ++c) v[c] = q[c];
  return v;
}

}  // namespace

Program f1_program(const ConificationData& data) {
  return [data](const std::vector<Jet>& y) { return std::vector<Jet>{eval_M(data, y).f1}; };
}

Program required_curvature(const ConificationData& data) {
  return [data](const std::vector<Jet>& y) {
    const int m = static_cast<int>(y.size());
    auto Theta = data.Theta(y);
    // omega = (iota_Z Theta) o I1, lifted so that d omega keeps the caller's order
    Program omega_p = lifted(
        [data, m](const std::vector<Jet>& z) {
          auto M = eval_M(data, z);
          std::vector<Jet> w(m, Jet(0.0));
          for (int j = 0; j < m; ++j)
            for (int a = 0; a < m; ++a)
              for (int b = 0; b < m; ++b) w[j] += M.Z[a] * M.Theta[a * m + b] * M.I[0][ei(m, b, j)];
          // d omega with a one-order loss, returned as m*m jets
          std::vector<Jet> dw(m * m);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) dw[i * m + j] = derivative(w[j], i) - derivative(w[i], j);
          return dw;
        },
        m, 1);
    auto dw = omega_p(y);
    std::vector<Jet> out(m * m);
    for (int k = 0; k < m * m; ++k) out[k] = Theta[k] - 0.5 * dw[k];
    return out;
  };
}

TildePreconditions tilde_preconditions(const ConificationData& data, const Vec& y) {
  const int m = static_cast<int>(y.size());
  auto y1 = seed_point(y, 1);
  TildePreconditions r;
  auto I1 = data.M.program("I1")(y1), I2 = data.M.program("I2")(y1), I3 = data.M.program("I3")(y1);
  auto Z = data.M.program("Z")(y1);
  r.rot_I1 = max_abs(lie_derivative_endo(Z, I1, m));
  r.rot_I2 = max_abs(Mat(lie_derivative_endo(Z, I2, m) + 2.0 * endo_of(I3, m)));
  auto Theta = data.Theta(y1);
  r.closed_Theta = closedness(Theta, m);
  r.lie_Z_Theta = max_abs(lie_derivative_bilinear(Z, Theta, m));
  auto f = data.f(y1)[0];
  const Mat Th = bilinear_of(Theta, m);
  const Vec Zv = values_of(Z);
  Vec df(m);
  for (int i = 0; i < m; ++i) df[i] = f.d(i);
  r.df_iota = max_abs(Vec(df + Th.transpose() * Zv));
  Mat dbeta = exterior_derivative(data.beta(y1), m);
  Mat req = bilinear_of(required_curvature(data)(y1), m);
  r.curvature = max_abs(Mat(dbeta - req));
  for (const auto& Ia : {I1, I2, I3}) {
    Mat A = endo_of(Ia, m);
    r.curvature_type = std::max(r.curvature_type, max_abs(Mat(A.transpose() * req * A - req)));
  }
  r.f1_abs = std::abs(f1_program(data)(seed_point(y, 0))[0].value());
  return r;
}

TildeChart build_tilde(const ConificationData& data, int samples, std::uint64_t seed, double tol,
                       double f1_margin) {
  for (const auto& y : data.M.sample(samples, seed)) {
    auto r = tilde_preconditions(data, y);
    const std::pair<const char*, double> checks[] = {
        {"rotating_LZ_I1", r.rot_I1},     {"rotating_LZ_I2", r.rot_I2},
        {"Theta_closed", r.closed_Theta}, {"LZ_Theta", r.lie_Z_Theta},
        {"df_plus_iota_Z_Theta", r.df_iota}, {"curvature_form", r.curvature}};
    for (auto [name, v] : checks)
      if (!(v <= tol)) throw ConstructionError(name, v);
    if (!(r.f1_abs >= f1_margin)) throw ConstructionError("f1_nonvanishing", r.f1_abs);
  }

  TildeChart tc;
  tc.data = data;
  const int m = data.M.dim(), N = m + 5;
  tc.m = m;
  tc.dim = N;
  const ChartGeometry& M = data.M;
  Program f1p = f1_program(data);
  auto domain = [M, f1p, m, f1_margin](const Vec& x) {
    if (x.head(4).norm() < 1e-4) return false;
    Vec y = x.segment(4, m);
    if (!M.in_domain(y)) return false;
    return std::abs(eval_values(f1p, y)[0]) >= f1_margin;
  };
  // |f1| >= 0.2 keeps samples off the f1 = 0 locus, where the Obata data blow up like 1/f1^k
  auto region = [M, f1p, m](const Vec& x) {
    return x.head(4).norm() >= 0.5 && M.in_region(x.segment(4, m)) &&
           std::abs(eval_values(f1p, x.segment(4, m))[0]) >= 0.2;
  };
  auto sampler = [M, m](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vec x(m + 5);
    for (int c = 0; c < 4; ++c) x[c] = U(rng);
    x.segment(4, m) = M.sampler()(rng);
    x[m + 4] = U(rng);
    return x;
  };
  tc.chart = ChartGeometry("tilde:" + M.name(), N, domain, sampler, region);

  auto all = [data, m](const std::vector<Jet>& x) {
    auto T = tilde_structures(data, m, x);
    std::vector<Jet> out;
    out.reserve(3 * T[0].size());
    for (auto& t : T) out.insert(out.end(), t.begin(), t.end());
    return out;
  };
  for (int al = 0; al < 3; ++al)
    tc.chart.add("I" + std::to_string(al + 1), Valence::Endo, slice_program(all, al * N * N, N * N));
  tc.chart.add("V1", Valence::Vector, [data, m](const std::vector<Jet>& x) { return tilde_V1(data, m, x); });
  tc.chart.add("Z1", Valence::Vector, [data, m](const std::vector<Jet>& x) { return tilde_Z1(data, m, x); });
  tc.chart.add("XP", Valence::Vector, [N](const std::vector<Jet>&) {
    std::vector<Jet> v(N, Jet(0.0));
    v[N - 1] = 1.0;
    return v;
  });
  for (int a = 0; a < 4; ++a) {
    tc.chart.add("eR" + std::to_string(a), Valence::Vector, [a, N](const std::vector<Jet>& x) {
      std::vector<Jet> v(N, Jet(0.0));
      auto e = right_frame(a, quat_at(x));
      for (int c = 0; c < 4; ++c) v[c] = e[c];
      return v;
    });
    tc.chart.add("eL" + std::to_string(a), Valence::Vector, [a, N](const std::vector<Jet>& x) {
      std::vector<Jet> v(N, Jet(0.0));
      auto e = left_frame(a, quat_at(x));
      for (int c = 0; c < 4; ++c) v[c] = e[c];
      return v;
    });
  }
  tc.chart.add("eta", Valence::OneForm, [data, m, N](const std::vector<Jet>& x) {
    std::vector<Jet> w(N, Jet(0.0));
    auto b = data.beta(sub(x, 4, m));
    for (int k = 0; k < m; ++k) w[4 + k] = b[k];
    w[N - 1] = 1.0;
    return w;
  });
  tc.chart.add("theta0", Valence::OneForm, [N](const std::vector<Jet>& x) {
    std::vector<Jet> w(N, Jet(0.0));
    const Jet r = recip(qnorm2(quat_at(x)));
    for (int c = 0; c < 4; ++c) w[c] = x[c] * r;
    return w;
  });
  tc.chart.add("f1", Valence::Scalar, [f1p, m](const std::vector<Jet>& x) { return f1p(sub(x, 4, m)); });
  return tc;
}

Vec slice_to_tilde(const Vec& s) {
  Vec x(s.size() + 1);
  x.head(s.size()) = s;
  x[s.size()] = 0.0;
  return x;
}

SliceChart conification_slice(const TildeChart& tc, double transversal_margin) {
  SliceChart sc;
  sc.tilde = tc;
  const int m = tc.m, S = m + 4, N = m + 5;
  sc.dim = S;
  const ConificationData data = tc.data;
  const ChartGeometry tch = tc.chart;
  Program V1p = tch.program("V1");
  auto domain = [tch, V1p, N, transversal_margin](const Vec& s) {
    Vec x = slice_to_tilde(s);
    if (!tch.in_domain(x)) return false;
    return std::abs(eval_values(V1p, x)[N - 1]) >= transversal_margin;
  };
  auto region = [tch, V1p, N](const Vec& s) {
    Vec x = slice_to_tilde(s);
    return tch.in_region(x) && std::abs(eval_values(V1p, x)[N - 1]) >= 0.2;
  };
  auto sampler = [tch, S](std::mt19937_64& rng) {
    Vec x = tch.sampler()(rng);
    return Vec(x.head(S));
  };
  sc.chart = ChartGeometry("slice:" + tch.name(), S, domain, sampler, region);

  auto all = [data, m](const std::vector<Jet>& s) {
    auto T = slice_structures(data, m, s);
    std::vector<Jet> out;
    out.reserve(3 * T[0].size());
    for (auto& t : T) out.insert(out.end(), t.begin(), t.end());
    return out;
  };
  for (int al = 0; al < 3; ++al)
    sc.chart.add("I" + std::to_string(al + 1), Valence::Endo, slice_program(all, al * S * S, S * S));
  sc.chart.add("V", Valence::Vector, [S](const std::vector<Jet>& s) {
    std::vector<Jet> v(S, Jet(0.0));
    for (int c = 0; c < 4; ++c) v[c] = s[c];
    return v;
  });
  for (int al = 1; al <= 3; ++al)
    sc.chart.add("IV" + std::to_string(al), Valence::Vector, [S, al](const std::vector<Jet>& s) {
      std::vector<Jet> v(S, Jet(0.0));
      auto e = right_frame(al, quat_at(s));
      for (int c = 0; c < 4; ++c) v[c] = e[c];
      return v;
    });
  sc.chart.add("XP", Valence::Vector, [data, m, S, N](const std::vector<Jet>& s) {
    auto V1 = tilde_V1(data, m, embed_slice(s));
    const Jet r = recip(V1[N - 1]);
    std::vector<Jet> v(S);
    for (int k = 0; k < S; ++k) v[k] = -V1[k] * r;
    return v;
  });
  sc.chart.add("theta0", Valence::OneForm, [S](const std::vector<Jet>& s) {
    std::vector<Jet> w(S, Jet(0.0));
    const Jet r = recip(qnorm2(quat_at(s)));
    for (int c = 0; c < 4; ++c) w[c] = s[c] * r;
    return w;
  });
  sc.chart.add("Gamma", Valence::Christoffel,
               lifted(
                   [data, m, S](const std::vector<Jet>& s) {
                     auto T = slice_structures(data, m, s);
                     return obata_solve(T[0], T[1], S, s[0].order() - 1).gamma;
                   },
                   S, 1));
  return sc;
}

double slice_transversality(const SliceChart& sc, const Vec& s) {
  return eval_values(sc.tilde.chart.program("V1"), slice_to_tilde(s))[sc.tilde.dim - 1];
}

TildeChecks tilde_checks(const TildeChart& tc, const Vec& x, std::uint64_t fields_seed) {
  const int m = tc.m, N = tc.dim;
  const auto& ch = tc.chart;
  auto x1 = seed_point(x, 1);
  TildeChecks r;

  std::vector<Jet> eR[4], eL[4];
  for (int a = 0; a < 4; ++a) {
    eR[a] = ch.program("eR" + std::to_string(a))(x1);
    eL[a] = ch.program("eL" + std::to_string(a))(x1);
  }
  for (int al = 1; al <= 3; ++al) {
    const int be = al % 3 + 1, ga = be % 3 + 1;
    r.bracket_eR = std::max(r.bracket_eR, max_abs(Vec(lie_bracket(eR[al], eR[be]) + 2.0 * values_of(eR[ga]))));
  }
  {
    Vec one = x;
    one.head(4) << 1, 0, 0, 0;
    for (int a = 0; a < 4; ++a) {
      Vec l = eval_values(ch.program("eL" + std::to_string(a)), one);
      Vec rr = eval_values(ch.program("eR" + std::to_string(a)), one);
      r.frames_at_one = std::max({r.frames_at_one, max_abs(Vec(l - rr)), max_abs(Vec(rr - vec_of(qunit(a), N)))});
    }
  }

  std::vector<Jet> I[3];
  Mat Im[3];
  for (int al = 0; al < 3; ++al) {
    I[al] = ch.program("I" + std::to_string(al + 1))(x1);
    Im[al] = endo_of(I[al], N);
  }
  auto V1 = ch.program("V1")(x1);
  const Vec V1v = values_of(V1);
  for (int al = 0; al < 3; ++al) r.kernel_V1 = std::max(r.kernel_V1, max_abs(Vec(Im[al] * V1v)));

  // basis (V1, eR_0..3, horizontal lifts of the coordinate vectors of M)
  auto beta = tc.data.beta(seed_point(x.segment(4, m), 0));
  Mat B = Mat::Zero(N, N);
  B.col(0) = V1v;
  for (int a = 0; a < 4; ++a) B.col(1 + a) = values_of(eR[a]);
  for (int j = 0; j < m; ++j) {
    B(4 + j, 5 + j) = 1.0;
    B(N - 1, 5 + j) = -beta[j].value();
  }
  Eigen::PartialPivLU<Mat> lu(B);
  Mat C[3];
  for (int al = 0; al < 3; ++al) C[al] = lu.solve(Im[al] * B).bottomRightCorner(N - 1, N - 1);
  r.quaternionic = quaternionic_residual(C[0], C[1], C[2]);
  for (int al = 0; al < 3; ++al) {
    r.quaternionic = std::max(r.quaternionic, max_abs(Mat(lu.solve(Im[al] * B).row(0))));
    for (int b = 0; b < 4; ++b) {
      Quat<double> target = qmul(qunit(al + 1), qmul(qunit(b), Quat<double>{x[0], x[1], x[2], x[3]}));
      r.frame_action = std::max(r.frame_action, max_abs(Vec(Im[al] * values_of(eR[b]) - vec_of(target, N))));
    }
    r.lie_V1_I = std::max(r.lie_V1_I, max_abs(lie_derivative_endo(V1, I[al], N)));
    r.lie_e0R_I = std::max(r.lie_e0R_I, max_abs(lie_derivative_endo(eR[0], I[al], N)));
  }

  // L_{V1} Y^h + [Z, Y]^h for an affine field Y on M
  std::mt19937_64 rng(fields_seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec a0(m);
  Mat A0(m, m);
  for (int i = 0; i < m; ++i) a0[i] = U(rng);
  for (int i = 0; i < m * m; ++i) A0.data()[i] = U(rng);
  const ConificationData& data = tc.data;
  auto Yfield = [a0, A0, m](const std::vector<Jet>& y) {
    std::vector<Jet> out(m);
    for (int k = 0; k < m; ++k) {
      Jet s(a0[k]);
      for (int j = 0; j < m; ++j) s += A0(k, j) * y[j];
      out[k] = s;
    }
    return out;
  };
  auto hlift = [&](const std::vector<Jet>& xx, const std::vector<Jet>& Y) {
    auto b = data.beta(sub(xx, 4, m));
    std::vector<Jet> out(N, Jet(0.0));
    for (int k = 0; k < m; ++k) out[4 + k] = Y[k];
    out[N - 1] = -pair(b, Y);
    return out;
  };
  auto Yh = hlift(x1, Yfield(sub(x1, 4, m)));
  auto y1 = seed_point(x.segment(4, m), 1);
  Vec ZY = lie_bracket(data.M.program("Z")(y1), Yfield(y1));
  std::vector<Jet> ZYc(m);
  for (int k = 0; k < m; ++k) ZYc[k] = Jet(ZY[k]);
  Vec ZYh = values_of(hlift(seed_point(x, 0), ZYc));
  r.lie_V1_Yh = max_abs(Vec(lie_bracket(V1, Yh) + ZYh));

  // df1 + iota_Z d eta on M
  auto f1 = f1_program(data)(y1)[0];
  Mat dbeta = exterior_derivative(data.beta(y1), m);
  Vec Zv = values_of(data.M.program("Z")(y1));
  Vec df1(m);
  for (int i = 0; i < m; ++i) df1[i] = f1.d(i);
  r.df1_iota = max_abs(Vec(df1 + dbeta.transpose() * Zv));

  auto XP = ch.program("XP")(x1);
  auto Z1 = ch.program("Z1")(x1);
  r.XP_Z1 = max_abs(lie_bracket(XP, Z1));
  for (int al = 0; al < 3; ++al) r.lie_XP_I = std::max(r.lie_XP_I, max_abs(lie_derivative_endo(XP, I[al], N)));
  r.lie_V1_XP = max_abs(lie_bracket(V1, XP));
  r.lie_V1_theta0 = max_abs(lie_derivative_oneform(V1, ch.program("theta0")(x1), N));
  return r;
}

SliceChecks slice_checks(const SliceChart& sc, const Vec& s) {
  const int S = sc.dim, N = sc.tilde.dim;
  const auto& ch = sc.chart;
  auto s2 = seed_point(s, 2);
  SliceChecks r;

  std::vector<Jet> I[3];
  Mat Im[3];
  for (int al = 0; al < 3; ++al) {
    I[al] = ch.program("I" + std::to_string(al + 1))(s2);
    Im[al] = endo_of(I[al], S);
  }
  r.quaternionic = quaternionic_residual(Im[0], Im[1], Im[2]);
  for (int al = 0; al < 3; ++al) r.nijenhuis = std::max(r.nijenhuis, nijenhuis_tensor(I[al], S).max_abs());

  auto V = ch.program("V")(s2);
  std::vector<Jet> IV[3];
  for (int al = 0; al < 3; ++al) {
    IV[al] = ch.program("IV" + std::to_string(al + 1))(s2);
    r.lie_V_I = std::max(r.lie_V_I, max_abs(lie_derivative_endo(V, I[al], S)));
  }
  for (int al = 0; al < 3; ++al) {
    const int be = (al + 1) % 3, ga = (al + 2) % 3;
    r.lie_IV_I = std::max({r.lie_IV_I, max_abs(lie_derivative_endo(IV[al], I[al], S)),
                           max_abs(Mat(lie_derivative_endo(IV[al], I[be], S) + 2.0 * Im[ga]))});
  }

  auto XP = ch.program("XP")(s2);
  std::vector<Jet> G;
  try {
    G = ch.program("Gamma")(s2);
  } catch (const InconsistentSystemError& e) {
    r.obata_defect = e.residual();
  }
  if (!G.empty()) {
    r.obata_exists = true;
    r.euler = max_abs(Mat(cov_deriv_vector(G, V, S) - Mat::Identity(S, S)));
    r.obata_torsion = torsion(G, S).max_abs();
    r.obata_parallel = 0;
    r.lie_IV_nabla = 0;
    for (int al = 0; al < 3; ++al) {
      r.obata_parallel = std::max(r.obata_parallel, parallel_residual(G, I[al], S));
      r.lie_IV_nabla = std::max(r.lie_IV_nabla, lie_derivative_connection(IV[al], G, S).max_abs());
    }
    r.lie_V_nabla = lie_derivative_connection(V, G, S).max_abs();
    r.lie_XP_nabla = lie_derivative_connection(XP, G, S).max_abs();
  }

  for (int al = 0; al < 3; ++al) {
    r.lie_XP_I = std::max(r.lie_XP_I, max_abs(lie_derivative_endo(XP, I[al], S)));
    r.lie_V_XP = std::max(r.lie_V_XP, max_abs(lie_bracket(IV[al], XP)));
  }
  r.lie_V_XP = std::max(r.lie_V_XP, max_abs(lie_bracket(V, XP)));
  r.lie_XP_theta0 = max_abs(lie_derivative_oneform(XP, ch.program("theta0")(s2), S));

  // projector along V1 onto {t = 0}
  Vec V1 = eval_values(sc.tilde.chart.program("V1"), slice_to_tilde(s));
  Mat P = Mat::Identity(N, N);
  P.col(N - 1) -= V1 / V1[N - 1];
  r.projector = std::max({max_abs(Mat(P * P - P)), max_abs(Vec(P * V1)), max_abs(Vec(P.row(N - 1).transpose()))});
  return r;
}

}  // namespace hqg
