#include "hqg/hq_quotient.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace hqg {

namespace {

using JV = std::vector<Jet>;

JV one_form_after(const JV& w, const JV& T, int d) {
  JV r(d, Jet(0.0));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) r[j] += w[k] * T[ei(d, k, j)];
  return r;
}

JV slice_field(const SliceChart& sc, const std::string& name, const JV& s) { return sc.chart.program(name)(s); }

Program on_section(Program f, const Quat<double>& section, int m) {
  std::vector<int> slots(m);
  for (int i = 0; i < m; ++i) slots[i] = 4 + i;
  Vec base = Vec::Zero(m + 4);
  for (int c = 0; c < 4; ++c) base[c] = section[c];
  return restricted(std::move(f), std::move(slots), std::move(base));
}

Vec slice_point(const Quat<double>& section, const Vec& y) {
  Vec s(y.size() + 4);
  for (int c = 0; c < 4; ++c) s[c] = section[c];
  s.tail(y.size()) = y;
  return s;
}

// q-parts d_j of the theta'-horizontal lifts E_j = (d_j, e_j); returns a 4 x m jet matrix.
JMat horizontal_q_parts(const std::array<JV, 4>& tp, int m) {
  JMat A(4, 4), B(4, m);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) A(r, c) = tp[r][c];
    for (int j = 0; j < m; ++j) B(r, j) = Jet(0.0) - tp[r][4 + j];
  }
  return jet_linear_solve(A, B);
}

JV bar_structure(const SliceChart& sc, int al, int m, const JV& s) {
  const int S = m + 4;
  auto I = slice_field(sc, "I" + std::to_string(al + 1), s);
  JV out(m * m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) out[ei(m, k, j)] = I[ei(S, 4 + k, 4 + j)];
  return out;
}

JV bar_gamma(const SliceChart& sc, int m, const JV& s) {
  const int S = m + 4;
  auto G = slice_field(sc, "Gamma", s);
  auto tp = theta_prime(sc, s);
  JMat D = horizontal_q_parts(tp, m);
  auto g = [&](int k, int a, int b) -> const Jet& { return G[ci(S, 4 + k, a, b)]; };
  JV out(m * m * m, Jet(0.0));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet v = g(k, 4 + i, 4 + j);
        for (int a = 0; a < 4; ++a) {
          v += D(a, i) * g(k, a, 4 + j);
          v += D(a, j) * g(k, 4 + i, a);
          for (int b = 0; b < 4; ++b) v += D(a, i) * D(b, j) * g(k, a, b);
        }
        out[ci(m, k, i, j)] = v;
      }
  return out;
}

JV direct_structure(const ConificationData& data, const Program& f1p, const Quat<double>& section, int al,
                    const JV& y) {
  const int m = data.M.dim();
  const auto A = ad_matrix(section);
  JV I[3];
  for (int b = 0; b < 3; ++b) I[b] = data.M.program("I" + std::to_string(b + 1))(y);
  const JV Z = data.M.program("Z")(y), beta = data.beta(y);
  const Jet f1 = f1p(y)[0];
  Jet bZ(0.0);
  for (int i = 0; i < m; ++i) bZ += beta[i] * Z[i];
  const Jet cz = recip(f1 - bZ), ci_ = recip(f1);
  // I' = sum_b A(al, b) I_b
  JV Ip(m * m, Jet(0.0));
  for (int b = 0; b < 3; ++b)
    for (int k = 0; k < m * m; ++k) Ip[k] += A[al][b] * I[b][k];
  // C = 1 + Z beta^T / (f1 - beta(Z)),  C^-1 = 1 - Z beta^T / f1
  JV T(m * m, Jet(0.0));  // I' C^-1
  JV IpZ(m, Jet(0.0));
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) IpZ[k] += Ip[ei(m, k, j)] * Z[j];
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) T[ei(m, k, j)] = Ip[ei(m, k, j)] - IpZ[k] * beta[j] * ci_;
  JV bT(m, Jet(0.0));  // beta^T T
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) bT[j] += beta[k] * T[ei(m, k, j)];
  JV out(m * m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) out[ei(m, k, j)] = T[ei(m, k, j)] + Z[k] * cz * bT[j];
  return out;
}

double span_defect(const Mat& M, const std::array<Mat, 3>& B) { return span_residual(M, B); }

}  // namespace

std::array<JV, 4> theta_prime(const SliceChart& sc, const JV& s) {
  const int S = sc.dim;
  std::array<JV, 4> tp;
  tp[0] = slice_field(sc, "theta0", s);
  for (int al = 1; al <= 3; ++al) tp[al] = one_form_after(tp[0], slice_field(sc, "I" + std::to_string(al), s), S);
  return tp;
}

Mat vertical_frame(const SliceChart& sc, const Vec& s) {
  Mat D(sc.dim, 4);
  D.col(0) = eval_values(sc.chart.program("V"), s);
  for (int al = 1; al <= 3; ++al) D.col(al) = eval_values(sc.chart.program("IV" + std::to_string(al)), s);
  return D;
}

ThetaPrimeChecks theta_prime_checks(const SliceChart& sc, const Vec& s) {
  const int S = sc.dim;
  auto s1 = seed_point(s, 1);
  ThetaPrimeChecks r;
  auto tp = theta_prime(sc, s1);
  Mat Tp(4, S);
  for (int k = 0; k < 4; ++k) Tp.row(k) = values_of(tp[k]).transpose();
  Mat D = vertical_frame(sc, s);
  r.theta0_V = std::abs(Tp.row(0).dot(D.col(0)) - 1.0);
  Mat expect = Mat::Zero(4, 4);
  expect.diagonal() << 1, -1, -1, -1;
  r.decomposition = max_abs(Mat(Tp * D - expect));

  Eigen::JacobiSVD<Mat> svd(Tp, Eigen::ComputeFullV);
  Mat H = svd.matrixV().rightCols(S - 4);
  Mat Im[3];
  for (int al = 0; al < 3; ++al) {
    Im[al] = endo_of(sc.chart.program("I" + std::to_string(al + 1))(s1), S);
    r.h_invariant = std::max(r.h_invariant, max_abs(Mat(Tp * Im[al] * H)));
  }

  auto V = sc.chart.program("V")(s1);
  for (int k = 0; k < 4; ++k) r.lie_V = std::max(r.lie_V, max_abs(lie_derivative_oneform(V, tp[k], S)));
  for (int al = 1; al <= 3; ++al) {
    const int be = al % 3 + 1, ga = be % 3 + 1;
    auto IV = sc.chart.program("IV" + std::to_string(al))(s1);
    std::array<Vec, 4> expect_l;
    for (auto& e : expect_l) e = Vec::Zero(S);
    expect_l[ga] = 2.0 * Tp.row(be).transpose();
    expect_l[be] = -2.0 * Tp.row(ga).transpose();
    for (int k = 0; k < 4; ++k)
      r.lie_IV = std::max(r.lie_IV, max_abs(Vec(lie_derivative_oneform(IV, tp[k], S) - expect_l[k])));
  }
  r.closed_theta0 = max_abs(exterior_derivative(tp[0], S));
  return r;
}

BarChart bar_chart(const SliceChart& sc, const Quat<double>& section) {
  BarChart bc;
  bc.slice = sc;
  bc.section = section;
  const int m = sc.tilde.m;
  bc.dim = m;
  const ChartGeometry sch = sc.chart;
  const ChartGeometry& M = sc.tilde.data.M;
  auto domain = [sch, section](const Vec& y) { return sch.in_domain(slice_point(section, y)); };
  auto region = [sch, section](const Vec& y) { return sch.in_region(slice_point(section, y)); };
  bc.chart = ChartGeometry("bar:" + M.name(), m, domain, M.sampler(), region);

  for (int al = 0; al < 3; ++al) {
    bc.chart.add("I" + std::to_string(al + 1), Valence::Endo,
                 on_section([sc, al, m](const JV& s) { return bar_structure(sc, al, m, s); }, section, m));
    const ConificationData data = sc.tilde.data;
    Program f1p = f1_program(data);
    bc.chart.add("Id" + std::to_string(al + 1), Valence::Endo, [data, f1p, section, al](const JV& y) {
      return direct_structure(data, f1p, section, al, y);
    });
  }
  bc.chart.add("X", Valence::Vector, on_section(
                                         [sc, m](const JV& s) {
                                           auto XP = slice_field(sc, "XP", s);
                                           return JV(XP.begin() + 4, XP.end());
                                         },
                                         section, m));
  bc.chart.add("Gamma", Valence::Christoffel,
               on_section([sc, m](const JV& s) { return bar_gamma(sc, m, s); }, section, m));
  return bc;
}

std::array<Mat, 3> qbar_at(const SliceChart& sc, const Quat<double>& section, const Vec& y) {
  const int m = sc.tilde.m;
  auto s0 = seed_point(slice_point(section, y), 0);
  std::array<Mat, 3> out;
  for (int al = 0; al < 3; ++al) out[al] = endo_of(bar_structure(sc, al, m, s0), m);
  return out;
}

std::array<Mat, 3> qbar_direct_at(const ConificationData& data, const Quat<double>& section, const Vec& y) {
  const int m = data.M.dim();
  auto y0 = seed_point(y, 0);
  Program f1p = f1_program(data);
  std::array<Mat, 3> out;
  for (int al = 0; al < 3; ++al) out[al] = endo_of(direct_structure(data, f1p, section, al, y0), m);
  return out;
}

BarChecks bar_checks(const BarChart& bc, const Vec& y, const std::vector<Quat<double>>& other_sections) {
  const int m = bc.dim;
  const auto& ch = bc.chart;
  auto y1 = seed_point(y, 1);
  auto y2 = seed_point(y, 2);
  BarChecks r;

  JV I[3];
  std::array<Mat, 3> Im, Id;
  for (int al = 0; al < 3; ++al) {
    I[al] = ch.program("I" + std::to_string(al + 1))(y1);
    Im[al] = endo_of(I[al], m);
    Id[al] = endo_of(ch.program("Id" + std::to_string(al + 1))(seed_point(y, 0)), m);
    r.routes_agree = std::max(r.routes_agree, max_abs(Mat(Im[al] - Id[al])));
  }
  r.quaternionic = quaternionic_residual(Im[0], Im[1], Im[2]);
  for (const auto& z : other_sections) {
    r.section_angle = std::max(r.section_angle, max_principal_angle(Im, qbar_at(bc.slice, z, y)));
    r.section_angle = std::max(r.section_angle, max_principal_angle(Im, qbar_direct_at(bc.slice.tilde.data, z, y)));
  }
  auto X = ch.program("X")(y2);
  auto X1 = ch.program("X")(y1);
  for (int al = 0; al < 3; ++al) r.lie_X_Q = std::max(r.lie_X_Q, span_defect(lie_derivative_endo(X1, I[al], m), Im));

  JV G;
  try {
    G = ch.program("Gamma")(y1);
  } catch (const InconsistentSystemError& e) {
    r.obata_defect = e.residual();
    return r;
  }
  r.nabla_exists = true;
  r.torsion = torsion(G, m).max_abs();
  r.q_preserved = 0;
  for (int al = 0; al < 3; ++al) {
    Tensor3 DI = cov_deriv_endo(G, I[al], m);
    for (int i = 0; i < m; ++i) r.q_preserved = std::max(r.q_preserved, span_defect(DI.slot(i), Im));
  }
  r.lie_X_nabla = lie_derivative_connection(X, G, m).max_abs();
  r.nabla_section = 0;
  auto y0 = seed_point(y, 0);
  const Tensor3 G0 = tensor3_of(G, m);
  for (const auto& z : other_sections) {
    auto Gz = on_section([&bc, m](const JV& s) { return bar_gamma(bc.slice, m, s); }, z, m)(y0);
    Tensor3 Tz = tensor3_of(Gz, m);
    for (std::size_t k = 0; k < Tz.v.size(); ++k)
      r.nabla_section = std::max(r.nabla_section, std::abs(Tz.v[k] - G0.v[k]));
  }
  return r;
}

double leaf_foliation_residual(const ChartGeometry& tn, const Vec& y) {
  const int D = tn.dim(), d = D / 2;
  auto y1 = seed_point(y, 1);
  std::vector<JV> basis;
  for (int j = 0; j < d; ++j) {
    JV v(D, Jet(0.0));
    v[d + j] = Jet(1.0);
    basis.push_back(v);
  }
  basis.push_back(tn.program("xi_h")(y1));
  basis.push_back(tn.program("ZM")(y1));
  Mat B(D, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) B.col(c) = values_of(basis[c]);
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinU);
  Mat Q = svd.matrixU();
  double res = 0;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      Vec br = lie_bracket(basis[a], basis[b]);
      res = std::max(res, max_abs(Vec(br - Q * (Q.transpose() * br))));
    }
  return res;
}

}  // namespace hqg
