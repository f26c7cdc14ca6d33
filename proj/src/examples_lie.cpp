#include <Eigen/Dense>
#include <complex>
#include <cstring>
#include <random>
#include <stdexcept>

#include "hqg/examples_catalog.hpp"
#include "hqg/quaternion.hpp"

namespace hqg {

namespace {

using cd = std::complex<double>;
using CM = Eigen::Matrix3cd;

int gi(int k, int i, int j) { return (k * 8 + i) * 8 + j; }

Eigen::VectorXd flat(const CM& m) {
  Eigen::VectorXd v(18);
  for (int i = 0; i < 9; ++i) {
    v[i] = m(i / 3, i % 3).real();
    v[9 + i] = m(i / 3, i % 3).imag();
  }
  return v;
}

// Basis f0 = V, f1..f3 = su(2) block (quaternion units), f4..f7 = g1.
std::vector<CM> su3_basis(double v_scale) {
  const cd I(0, 1);
  std::vector<CM> e(8, CM::Zero());
  e[0].diagonal() << v_scale * I, v_scale * I, -2.0 * v_scale * I;
  Eigen::Matrix2cd Bi, Bj, Bk;
  Bi << I, 0, 0, -I;
  Bj << 0, 1, -1, 0;
  Bk << 0, I, I, 0;
  e[1].topLeftCorner<2, 2>() = Bi;
  e[2].topLeftCorner<2, 2>() = Bj;
  e[3].topLeftCorner<2, 2>() = Bk;
  const cd vs[4][2] = {{1, 0}, {I, 0}, {0, 1}, {0, I}};
  for (int a = 0; a < 4; ++a) {
    CM Y = CM::Zero();
    Y(0, 2) = vs[a][0];
    Y(1, 2) = vs[a][1];
    Y(2, 0) = -std::conj(vs[a][0]);
    Y(2, 1) = -std::conj(vs[a][1]);
    e[4 + a] = Y;
  }
  return e;
}

Mat ad_of(const std::vector<double>& C, const Vec& x) {
  Mat m = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      for (int j = 0; j < 8; ++j) m(k, j) += x[i] * C[gi(k, i, j)];
  return m;
}

}  // namespace

LieAlgebraData su3_data(double v_scale) {
  if (v_scale == 0.0) throw std::invalid_argument("V scale must be non-zero");
  LieAlgebraData L;
  L.v_scale = v_scale;
  const auto e = su3_basis(v_scale);
  Mat E(18, 8);
  for (int a = 0; a < 8; ++a) E.col(a) = flat(e[a]);
  const auto qr = E.colPivHouseholderQr();
  L.C.assign(512, 0.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const Eigen::VectorXd b = flat(e[i] * e[j] - e[j] * e[i]);
      const Eigen::VectorXd x = qr.solve(b);
      L.basis_fit = std::max(L.basis_fit, (E * x - b).cwiseAbs().maxCoeff());
      for (int k = 0; k < 8; ++k) L.C[gi(k, i, j)] = x[k];
    }
  // R_i, R_j, -R_k on g0 = H; -ad_{I_a V} on g1
  const Quat<double> units[3] = {qunit(1), qunit(2), {0, 0, 0, -1}};
  for (int a = 0; a < 3; ++a) {
    Mat M = Mat::Zero(8, 8);
    M.topLeftCorner(4, 4) = right_mult(units[a]);
    Vec IV = Vec::Zero(8);
    IV.head(4) = M.topLeftCorner(4, 4).col(0);
    M.bottomRightCorner(4, 4) = -ad_of(L.C, IV).bottomRightCorner(4, 4);
    L.I[a] = M;
  }
  return L;
}

LieObata solve_lie_obata(const LieAlgebraData& L) {
  // unknowns G^k_ij with nabla_{f_i} f_j = G^k_ij f_k
  Mat A = Mat::Zero(3 * 512, 512);
  Vec r = Vec::Zero(3 * 512);
  int row = 0;
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j, ++row) {
        A(row, gi(k, i, j)) += 1;
        A(row, gi(k, j, i)) -= 1;
        r[row] = L.C[gi(k, i, j)];
      }
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 8; ++k)
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j, ++row)
          for (int m = 0; m < 8; ++m) {
            A(row, gi(k, i, m)) += L.I[a](m, j);
            A(row, gi(m, i, j)) -= L.I[a](k, m);
          }
  const auto qr = A.colPivHouseholderQr();
  const Vec G = qr.solve(r);
  LieObata o;
  o.G = to_std(G);
  o.residual = (A * G - r).cwiseAbs().maxCoeff();
  o.rank = static_cast<int>(qr.rank());
  return o;
}

VerificationReport su3_verify(double v_scale) {
  VerificationReport rep;
  const LieAlgebraData L = su3_data(v_scale);
  const auto& C = L.C;
  rep.add(make_record("su3_structure_fit", "su3_real_basis", 64, L.basis_fit, 1e-12));

  double jac = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        for (int k = 0; k < 8; ++k) {
          double s = 0;
          for (int m = 0; m < 8; ++m)
            s += C[gi(m, b, c)] * C[gi(k, a, m)] + C[gi(m, c, a)] * C[gi(k, b, m)] + C[gi(m, a, b)] * C[gi(k, c, m)];
          jac = std::max(jac, std::abs(s));
        }
  rep.add(make_record("su3_jacobi", "su3_structure_constants", 512, jac, 1e-12));

  double sub = 0, mod = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 8; ++b)
      for (int k = 0; k < 8; ++k) {
        if (b < 4 && k >= 4) sub = std::max(sub, std::abs(C[gi(k, a, b)]));
        if (b >= 4 && k < 4) mod = std::max(mod, std::abs(C[gi(k, a, b)]));
      }
  rep.add(make_record("su3_g0_subalgebra", "g0_closed_under_bracket", 16, sub, 1e-12));
  rep.add(make_record("su3_g1_module", "g1_is_g0_invariant", 16, mod, 1e-12));

  const Mat Id = Mat::Identity(8, 8);
  double q = 0;
  for (int a = 0; a < 3; ++a) q = std::max(q, max_abs(Mat(L.I[a] * L.I[a] + Id)));
  q = std::max({q, max_abs(Mat(L.I[0] * L.I[1] - L.I[2])), max_abs(Mat(L.I[1] * L.I[0] + L.I[2]))});
  rep.add(make_record("su3_quaternionic", "su3_hypercomplex_triple", 1, q, 1e-13));

  const LieObata o = solve_lie_obata(L);
  rep.add(make_record("su3_obata_system", "su3_left_invariant_obata", 1536, o.residual, 1e-12,
                      "rank " + std::to_string(o.rank) + " of 512"));
  rep.add(make_record("su3_obata_unique", "su3_left_invariant_obata", 1, 512.0 - o.rank, 0.5));

  // nabla_{phi a} phi b = phi(ab) on g0 = H
  double prod = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto ab = qmul(qunit(a), qunit(b));
      for (int k = 0; k < 8; ++k) {
        const double want = k < 4 ? ab[k] : 0.0;
        prod = std::max(prod, std::abs(o.G[gi(k, a, b)] - want));
      }
    }
  rep.add(make_record("su3_g0_quaternion_product", "obata_on_g0_is_quaternion_product", 16, prod, 1e-12));

  double ev = 0;
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) ev = std::max(ev, std::abs(o.G[gi(k, i, 0)] - (k == i)));
  rep.add(make_record("su3_nabla_V", "su3_euler_field", 8, ev, 1e-12));

  const LieObata o2 = solve_lie_obata(su3_data(v_scale));
  const bool same = o2.G.size() == o.G.size() &&
                    std::memcmp(o2.G.data(), o.G.data(), o.G.size() * sizeof(double)) == 0;
  rep.add(make_record("su3_solve_deterministic", "su3_left_invariant_obata", 2, same ? 0.0 : 1.0, 0.5));

  // nabla V = id does not pin the scale of V: it holds for every scale
  double scan = 0;
  for (double s : {0.25, 0.5, 2.0, -1.0}) {
    const auto Ls = su3_data(s);
    const auto os = solve_lie_obata(Ls);
    scan = std::max(scan, os.residual);
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k) scan = std::max(scan, std::abs(os.G[gi(k, i, 0)] - (k == i)));
  }
  rep.add(make_record("su3_euler_scale_free", "su3_euler_field", 4, scan, 1e-11,
                      "V = s diag(i, i, -2i); Obata and nabla V = id hold for every s tried"));
  return rep;
}

VerificationReport hopf_linear_verify(int n, const Quat<double>& q, int points, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (std::abs(qnorm2(q) - 1.0) > 1e-12) throw std::invalid_argument("q must be a unit quaternion");
  const double im = std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  if (im < 1e-12) throw std::invalid_argument("q must differ from +-1");
  const int d = 4 * n;
  const Quat<double> u{0, q[1] / im, q[2] / im, q[3] / im};
  // unit imaginary v orthogonal to u; v = j when u = i
  Quat<double> v = std::abs(u[2]) < 0.9 ? Quat<double>{0, 0, 1, 0} : Quat<double>{0, 1, 0, 0};
  const double dot = u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
  for (int a = 1; a < 4; ++a) v[a] -= dot * u[a];
  const double nv = std::sqrt(qnorm2(v));
  for (auto& x : v) x /= nv;

  auto block = [n, d](const Mat& m4) {
    Mat M = Mat::Zero(d, d);
    for (int b = 0; b < n; ++b) M.block(4 * b, 4 * b, 4, 4) = m4;
    return M;
  };
  const std::array<Mat, 3> Hs{block(right_mult(qunit(1))), block(right_mult(qunit(2))),
                              block(right_mult({0, 0, 0, -1}))};
  const Mat I1 = block(right_mult(u)), I2 = block(right_mult(v));
  const Mat I3 = I1 * I2;
  const Mat Zm = I1;  // Z(x) = x u

  auto const_jets = [d](const Mat& M) {
    std::vector<Jet> js(d * d);
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) js[ei(d, k, j)] = Jet(M(k, j));
    return js;
  };

  VerificationReport rep;
  rep.add(make_record("hopf_quaternionic", "hopf_standard_triple", 1, quaternionic_residual(Hs[0], Hs[1], Hs[2]),
                      1e-14));
  rep.add(make_record("hopf_adapted_quaternionic", "hopf_standard_triple", 1, quaternionic_residual(I1, I2, I3),
                      1e-14, "frame R_u, R_v, R_u R_v adapted to U_q(1)"));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  double ob = 0, par = 0, r1 = 0, r2 = 0, stated = 0;
  for (int p = 0; p < points; ++p) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = N(rng);
    const auto X = seed_point(x, 1);
    std::vector<Jet> Z(d, Jet(0.0)), Zs(d, Jet(0.0));
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m)
        if (Zm(k, m) != 0.0) {
          Z[k] = Z[k] + Zm(k, m) * X[m];
          Zs[k] = Zs[k] - Zm(k, m) * X[m];
        }
    std::vector<Jet> J1 = const_jets(Hs[0]), J2 = const_jets(Hs[1]), J3 = const_jets(Hs[2]);
    for (auto* js : {&J1, &J2, &J3})
      for (auto& c : *js) c = c + 0.0 * X[0];
    auto O = obata_solve(J1, J2, d, 0);
    for (const auto& g : O.gamma) ob = std::max(ob, std::abs(g.value()));
    par = std::max({par, parallel_residual(O.gamma, J1, d), parallel_residual(O.gamma, J3, d)});
    auto A1 = const_jets(I1), A2 = const_jets(I2);
    for (auto* js : {&A1, &A2})
      for (auto& c : *js) c = c + 0.0 * X[0];
    r1 = std::max(r1, max_abs(lie_derivative_endo(Z, A1, d)));
    r2 = std::max(r2, max_abs(Mat(lie_derivative_endo(Z, A2, d) + 2 * I3)));
    stated = std::max(stated, max_abs(Mat(lie_derivative_endo(Zs, A2, d) - 2 * I3)));
  }
  rep.add(make_record("hopf_obata_flat", "hopf_flat_obata", points, ob, 1e-12));
  rep.add(make_record("hopf_obata_parallel", "hopf_flat_obata", points, par, 1e-12));
  rep.add(make_record("hopf_rotating_I1", "hopf_rotating_field", points, r1, 1e-10, "Z = x u"));
  rep.add(make_record("hopf_rotating_I2", "hopf_rotating_field", points, r2, 1e-10, "Z = x u"));
  rep.add(make_record("hopf_action_orientation", "hopf_rotating_field", points, stated, 1e-10,
                      "generator -x u of z -> z exp(-t u) has L I2 = +2 I3"));
  return rep;
}

}  // namespace hqg
