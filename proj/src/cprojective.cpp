#include "hqg/cprojective.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace hqg {

namespace {

Mat bilinear_values(const std::vector<Jet>& js, int d, int offset = 0) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = js[offset + i * d + j].value();
  return m;
}

Tensor3 tensor3_values(const std::vector<double>& v, int d, int offset) {
  Tensor3 t(d);
  for (int i = 0; i < d * d * d; ++i) t.v[i] = v[offset + i];
  return t;
}

// (w o J)_j = sum_k w_k J^k_j
std::vector<Jet> compose_J(const std::vector<Jet>& w, const Mat& J) {
  const int d = static_cast<int>(w.size());
  std::vector<Jet> r(d, Jet(0.0));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      if (J(k, j) != 0.0) r[j] = r[j] + J(k, j) * w[k];
  return r;
}

Jet dot(const std::vector<Jet>& a, const std::vector<Jet>& b) {
  Jet s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

// Programs of the working chart of N used by the base construction.
struct NPrograms {
  int dN = 0;
  Program xi, jxi, gp, A, eta1, eta2;
};

NPrograms n_programs(const SpecialComplexChart& sc, const ConnectionForm& eta) {
  return {sc.dim,
          sc.chart.program("xi"),
          sc.chart.program("Jxi"),
          sc.chart.program("Gamma_prime"),
          sc.chart.program("A"),
          eta.eta1,
          eta.eta2};
}

// Horizontal lifts X^h_j = L_j - eta1(L_j) xi - eta2(L_j) J xi, with the invariant lift
// L_j = z_0 eps_j placed in the complex slot of coordinate j.
std::vector<std::vector<Jet>> lifts(const std::vector<Jet>& z, const std::vector<Jet>& xi,
                                    const std::vector<Jet>& jxi, const std::vector<Jet>& e1,
                                    const std::vector<Jet>& e2) {
  const int dN = static_cast<int>(z.size()), D = dN - 2;
  std::vector<std::vector<Jet>> X(D);
  for (int j = 0; j < D; ++j) {
    std::vector<Jet> L(dN, Jet(0.0));
    const int s = 2 + 2 * (j / 2);
    if (j % 2 == 0) {
      L[s] = z[0];
      L[s + 1] = z[1];
    } else {
      L[s] = -z[1];
      L[s + 1] = z[0];
    }
    const Jet a = dot(e1, L), b = dot(e2, L);
    for (int k = 0; k < dN; ++k) L[k] = L[k] - a * xi[k] - b * jxi[k];
    X[j] = std::move(L);
  }
  return X;
}

// p_* V at z: (V_k - w_k V_0) / z_0 in complex slots k >= 1, w_k = z_k / z_0.
std::vector<Jet> push_down(const std::vector<Jet>& z, const std::vector<Jet>& V) {
  const int dN = static_cast<int>(z.size()), n = dN / 2 - 1;
  const CJet z0(z[0], z[1]), V0(V[0], V[1]);
  std::vector<Jet> out(2 * n);
  for (int k = 1; k <= n; ++k) {
    const CJet zk(z[2 * k], z[2 * k + 1]), Vk(V[2 * k], V[2 * k + 1]);
    const CJet c = (Vk - zk / z0 * V0) / z0;
    out[2 * (k - 1)] = c.re;
    out[2 * (k - 1) + 1] = c.im;
  }
  return out;
}

// Christoffel contraction G(X, Y)^k
std::vector<Jet> contract(const std::vector<Jet>& G, const std::vector<Jet>& X, const std::vector<Jet>& Y,
                          int d) {
  std::vector<Jet> r(d, Jet(0.0));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      if (X[i].value() == 0.0 && X[i].is_constant()) continue;
      Jet s(0.0);
      for (int j = 0; j < d; ++j) s = s + G[ci(d, k, i, j)] * Y[j];
      r[k] = r[k] + X[i] * s;
    }
  return r;
}

// Order-reducing directional derivative (D Y) X.
std::vector<Jet> directional(const std::vector<Jet>& X, const std::vector<Jet>& Y) {
  const int d = static_cast<int>(X.size());
  std::vector<Jet> r(d, Jet(0.0));
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m) r[k] = r[k] + X[m] * derivative(Y[k], m);
  return r;
}

// [Gamma_prime (D^3), abar (D^2), bbar (D^2), B (D^3)] at any point of N. Needs one extra order.
Program induced_program(const NPrograms& np) {
  return [np](const std::vector<Jet>& z) {
    const int dN = np.dN, D = dN - 2;
    const auto xi = np.xi(z), jxi = np.jxi(z), e1 = np.eta1(z), e2 = np.eta2(z);
    const auto G = np.gp(z), A = np.A(z);
    const auto X = lifts(z, xi, jxi, e1, e2);
    // e^{2 theta J} with theta = arg z_0
    const Jet r2 = z[0] * z[0] + z[1] * z[1];
    const Jet c2 = (z[0] * z[0] - z[1] * z[1]) / r2, s2 = 2.0 * z[0] * z[1] / r2;
    const Mat J = standard_J(dN);
    std::vector<Jet> out(2 * D * D * D + 2 * D * D);
    const int oa = D * D * D, ob = oa + D * D, oB = ob + D * D;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        auto V = directional(X[i], X[j]);
        auto GV = contract(G, X[i], X[j], dN);
        for (int k = 0; k < dN; ++k) V[k] = V[k] + GV[k];
        out[oa + i * D + j] = dot(e1, V);
        out[ob + i * D + j] = dot(e2, V);
        auto pV = push_down(z, V);
        for (int k = 0; k < D; ++k) out[ci(D, k, i, j)] = pV[k];
        auto AV = contract(A, X[i], X[j], dN);
        std::vector<Jet> BV(dN);
        for (int k = 0; k < dN; ++k) {
          Jet jv(0.0);
          for (int m = 0; m < dN; ++m)
            if (J(k, m) != 0.0) jv = jv + J(k, m) * AV[m];
          BV[k] = c2 * AV[k] + s2 * jv;
        }
        auto pB = push_down(z, BV);
        for (int k = 0; k < D; ++k) out[oB + ci(D, k, i, j)] = pB[k];
      }
    return out;
  };
}

// Lifts X^h_j as one flat list (j * dN + k).
Program lift_program(const NPrograms& np) {
  return [np](const std::vector<Jet>& z) {
    const auto X = lifts(z, np.xi(z), np.jxi(z), np.eta1(z), np.eta2(z));
    std::vector<Jet> out;
    for (const auto& x : X) out.insert(out.end(), x.begin(), x.end());
    return out;
  };
}

std::vector<int> slice_slots(int dN) {
  std::vector<int> s;
  for (int k = 2; k < dN; ++k) s.push_back(k);
  return s;
}

Vec slice_base(int dN) {
  Vec b = Vec::Zero(dN);
  b[0] = 1.0;
  return b;
}

Mat sym(const Mat& a) { return 0.5 * (a + a.transpose()); }
Mat alt(const Mat& a) { return 0.5 * (a - a.transpose()); }

Tensor4 combine(std::initializer_list<std::pair<double, const Tensor4*>> terms, int d) {
  Tensor4 r(d);
  for (auto [c, t] : terms)
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += c * t->v[i];
  return r;
}

double diff(const Tensor4& a, const Tensor4& b) {
  double r = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) r = std::max(r, std::abs(a.v[i] - b.v[i]));
  return r;
}

}  // namespace

ConnectionForm connection_from_real(const SpecialComplexChart& sc, std::string name, Program alpha) {
  const Mat J = standard_J(sc.dim);
  Program eta2 = [alpha, J](const std::vector<Jet>& x) {
    auto aJ = compose_J(alpha(x), J);
    for (auto& c : aJ) c = -c;
    return aJ;
  };
  return {std::move(name), std::move(alpha), std::move(eta2)};
}

ConnectionForm trivialization_connection(const SpecialComplexChart& sc) {
  const int d = sc.dim;
  Program alpha = [d](const std::vector<Jet>& x) {
    std::vector<Jet> r(d, Jet(0.0));
    const Jet r2 = x[0] * x[0] + x[1] * x[1];
    r[0] = x[0] / r2;
    r[1] = x[1] / r2;
    return r;
  };
  return connection_from_real(sc, "trivialization", std::move(alpha));
}

ConnectionForm kappa_connection(const SpecialComplexChart& sc) {
  if (!sc.chart.has("mu")) throw std::invalid_argument("kappa connection needs a registered moment map");
  const int d = sc.dim;
  Program mu = sc.chart.program("mu");
  Program alpha = lifted(
      [mu, d](const std::vector<Jet>& x) {
        const Jet m = mu(x)[0];
        const Jet inv = recip(2.0 * m);
        std::vector<Jet> r(d);
        for (int k = 0; k < d; ++k) r[k] = derivative(m, k) * inv;
        return r;
      },
      d, 1);
  return connection_from_real(sc, "kappa", std::move(alpha));
}

ConnectionFormChecks connection_form_checks(const SpecialComplexChart& sc, const ConnectionForm& eta,
                                            const Vec& p) {
  const int d = sc.dim;
  const auto x = seed_point(p, 1);
  const auto xi = sc.chart.program("xi")(x), jxi = sc.chart.program("Jxi")(x);
  const auto e1 = eta.eta1(x), e2 = eta.eta2(x);
  ConnectionFormChecks r;
  const double a = dot(e1, xi).value(), b = dot(e2, xi).value();
  const double c = dot(e1, jxi).value(), e = dot(e2, jxi).value();
  r.normalization = std::max({std::abs(a - 1), std::abs(b), std::abs(c), std::abs(e - 1)});
  const auto e1J = compose_J(e1, standard_J(d));
  for (int k = 0; k < d; ++k) r.type_10 = std::max(r.type_10, std::abs(e2[k].value() + e1J[k].value()));
  for (const auto* X : {&xi, &jxi})
    for (const auto* w : {&e1, &e2})
      r.invariance = std::max(r.invariance, max_abs(lie_derivative_oneform(*X, *w, d)));
  return r;
}

Vec slice_embed(const Vec& w) {
  Vec p = Vec::Zero(w.size() + 2);
  p[0] = 1.0;
  p.tail(w.size()) = w;
  return p;
}

BaseQuotientChart base_quotient(const SpecialComplexChart& sc, const ConnectionForm& eta, int samples,
                                std::uint64_t seed, double tol) {
  ConnectionFormChecks worst;
  for (const auto& p : sc.chart.sample(samples, seed)) {
    auto r = connection_form_checks(sc, eta, p);
    worst.normalization = std::max(worst.normalization, r.normalization);
    worst.type_10 = std::max(worst.type_10, r.type_10);
    worst.invariance = std::max(worst.invariance, r.invariance);
  }
  if (worst.normalization > tol) throw ConstructionError("connection_normalization", worst.normalization);
  if (worst.type_10 > tol) throw ConstructionError("type_10", worst.type_10);
  if (worst.invariance > tol) throw ConstructionError("cstar_invariance", worst.invariance);

  const int dN = sc.dim, D = dN - 2;
  BaseQuotientChart bq;
  bq.special = sc;
  bq.eta = eta;
  bq.n = D / 2;
  bq.dim = D;
  const ChartGeometry& nc = sc.chart;
  auto domain = [nc](const Vec& w) { return nc.in_domain(slice_embed(w)); };
  auto region = [nc](const Vec& w) { return nc.in_region(slice_embed(w)); };
  auto sampler = [nc, D](std::mt19937_64& rng) {
    // project a working-chart draw onto the slice along the C* orbit
    for (;;) {
      Vec p = nc.sampler()(rng);
      const std::complex<double> z0(p[0], p[1]);
      if (std::abs(z0) < 1e-3) continue;
      Vec w(D);
      for (int k = 0; k < D / 2; ++k) {
        auto c = std::complex<double>(p[2 + 2 * k], p[3 + 2 * k]) / z0;
        w[2 * k] = c.real();
        w[2 * k + 1] = c.imag();
      }
      return w;
    }
  };
  bq.chart = ChartGeometry(sc.chart.name() + "/C*", D, domain, sampler, region);

  const auto np = n_programs(sc, eta);
  Program all = restricted(lifted(induced_program(np), dN, 1), slice_slots(dN), slice_base(dN));
  const int d3 = D * D * D, d2 = D * D;
  std::vector<Jet> Jj = standard_J_jets(D);
  bq.chart.add("J", Valence::Endo, [Jj](const std::vector<Jet>&) { return Jj; });
  bq.chart.add("Gamma_prime", Valence::Christoffel, slice_program(all, 0, d3));
  bq.chart.add("abar", Valence::Bilinear, slice_program(all, d3, d2));
  bq.chart.add("bbar", Valence::Bilinear, slice_program(all, d3 + d2, d2));
  bq.chart.add("B", Valence::Christoffel, slice_program(all, d3 + 2 * d2, d3));
  const auto slots = slice_slots(dN);
  const Vec base = slice_base(dN);
  bq.chart.add("gamma1", Valence::OneForm, restricted(slice_program(eta.eta1, 2, D), slots, base));
  bq.chart.add("gamma2", Valence::OneForm, restricted(slice_program(eta.eta2, 2, D), slots, base));
  return bq;
}

std::vector<double> induced_data_at(const BaseQuotientChart& bq, const Vec& p) {
  const int dN = bq.special.dim;
  Program f = lifted(induced_program(n_programs(bq.special, bq.eta)), dN, 1);
  return to_std(values_of(f(seed_point(p, 0))));
}

Tensor3 bbar_shifted(const BaseQuotientChart& bq, const Vec& w, double c) {
  const int D = bq.dim;
  auto v = induced_data_at(bq, slice_embed(w));
  Tensor3 B = tensor3_values(v, D, D * D * D + 2 * D * D);
  const Mat J = standard_J(D);
  const Mat rot = std::cos(2 * c) * Mat::Identity(D, D) + std::sin(2 * c) * J;
  Tensor3 r(D);
  for (int i = 0; i < D; ++i) {
    Mat Bi = rot * B.slot(i);
    for (int k = 0; k < D; ++k)
      for (int j = 0; j < D; ++j) r(k, i, j) = Bi(k, j);
  }
  return r;
}

Tensor4 wedge(const Mat& a, const Mat& K) {
  const int d = static_cast<int>(a.rows());
  Tensor4 t(d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(k, l, i, j) = a(i, l) * K(k, j) - a(j, l) * K(k, i);
  return t;
}

Tensor4 alt_tensor(const Mat& a, const Mat& K) {
  const int d = static_cast<int>(a.rows());
  const Mat aa = alt(a);
  Tensor4 t(d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(k, l, i, j) = aa(i, j) * K(k, l);
  return t;
}

Tensor4 bracket_square(const Tensor3& B) {
  const int d = B.d;
  Tensor4 t(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Mat c = B.slot(i) * B.slot(j) - B.slot(j) * B.slot(i);
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) t(k, l, i, j) = c(k, l);
    }
  return t;
}

double type11_residual(const Tensor4& W, const Mat& J) {
  const int d = W.d;
  double r = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat m = Mat::Zero(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          if (J(a, i) != 0.0 && J(b, j) != 0.0) m += J(a, i) * J(b, j) * W.endo(a, b);
      r = std::max(r, max_abs(Mat(m - W.endo(i, j))));
    }
  return r;
}

Mat trace_square(const Tensor3& B) {
  const int d = B.d;
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = (B.slot(i) * B.slot(j)).trace();
  return m;
}

Mat rho_from_ricci(const Mat& Ric, const Mat& J) {
  const int d = static_cast<int>(Ric.rows());
  if (d < 4 || d % 2) throw std::invalid_argument("Rho tensor needs even dimension >= 4");
  const double m = d / 2;
  const Mat s = sym(Ric);
  return (Ric + (s - J.transpose() * s * J) / (m - 1)) / (m + 1);
}

Mat rho_tensor(const Program& Gamma, const Mat& J, const Vec& p) {
  const int d = static_cast<int>(p.size());
  return rho_from_ricci(ricci(Gamma(seed_point(p, 1)), d), J);
}

Tensor4 cproj_weyl_from(const Tensor4& R, const Mat& P, const Mat& J) {
  const int d = R.d;
  const Mat Id = Mat::Identity(d, d);
  const Mat PJ = P * J;
  const Tensor4 t1 = alt_tensor(P, Id), t2 = alt_tensor(PJ, J), t3 = wedge(P, Id), t4 = wedge(PJ, J);
  return combine({{1.0, &R}, {1.0, &t1}, {-1.0, &t2}, {0.5, &t3}, {-0.5, &t4}}, d);
}

Tensor4 cproj_weyl(const Program& Gamma, const Mat& J, const Vec& p) {
  const int d = static_cast<int>(p.size());
  if (d < 4) throw std::invalid_argument("c-projective Weyl curvature needs dimension >= 4");
  const Tensor4 R = curvature(Gamma(seed_point(p, 1)), d);
  return cproj_weyl_from(R, rho_from_ricci(ricci(R), J), J);
}

Tensor4 weyl_closed_form(const Tensor3& B, const Mat& J) {
  const int d = B.d;
  const double n = d / 2;
  const Mat cal = trace_square(B), calJ = cal * J, Id = Mat::Identity(d, d);
  const Tensor4 bb = bracket_square(B), w1 = wedge(cal, Id), w2 = wedge(calJ, J);
  // B_J (x) J with B_J antisymmetric: no 1/2 from the alternation
  Tensor4 t(d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(k, l, i, j) = calJ(i, j) * J(k, l);
  const double c = 1.0 / (8 * (n + 1));
  return combine({{-0.25, &bb}, {-2 * c, &t}, {c, &w1}, {-c, &w2}}, d);
}

Tensor3 cproj_difference(const Vec& theta, const Mat& J) {
  const int d = static_cast<int>(theta.size());
  const Vec tJ = J.transpose() * theta;  // tJ_i = theta(J e_i)
  Tensor3 t(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        t(k, i, j) = theta[i] * (k == j) + theta[j] * (k == i) - tJ[i] * J(k, j) - tJ[j] * J(k, i);
  return t;
}

Program cproj_shift(Program Gamma, Program theta, Mat J) {
  return [Gamma = std::move(Gamma), theta = std::move(theta), J = std::move(J)](const std::vector<Jet>& x) {
    auto G = Gamma(x);
    const auto th = theta(x);
    const int d = static_cast<int>(th.size());
    const auto tJ = compose_J(th, J);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Jet& g = G[ci(d, k, i, j)];
          if (k == j) g = g + th[i];
          if (k == i) g = g + th[j];
          if (J(k, j) != 0.0) g = g - J(k, j) * tJ[i];
          if (J(k, i) != 0.0) g = g - J(k, i) * tJ[j];
        }
    return G;
  };
}

CprojChange cproj_change_oneform(const Tensor3& G1, const Tensor3& G2, const Mat& J, double tol) {
  const int d = G1.d;
  CprojChange r;
  r.theta = Vec::Zero(d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) r.theta[j] += G1(k, k, j) - G2(k, k, j);
  r.theta /= d + 2;
  const Tensor3 t = cproj_difference(r.theta, J);
  for (std::size_t i = 0; i < t.v.size(); ++i)
    r.residual = std::max(r.residual, std::abs(G1.v[i] - G2.v[i] - t.v[i]));
  r.related = r.residual <= tol;
  return r;
}

FundamentalChecks fundamental_checks(const BaseQuotientChart& bq, const Vec& w) {
  const int D = bq.dim, dN = bq.special.dim;
  const double n = bq.n;
  const Mat J = standard_J(D), Id = Mat::Identity(D, D);
  FundamentalChecks r;

  const auto G = bq.chart.eval("Gamma_prime", w, 1);
  r.nabla_J = cov_deriv_endo(G, standard_J_jets(D), D).max_abs();
  r.torsion = torsion(G, D).max_abs();
  const Mat a = bilinear_values(bq.chart.eval("abar", w, 0), D);
  const Mat b = bilinear_values(bq.chart.eval("bbar", w, 0), D);
  const Mat aJ = a * J;
  r.b_eq = max_abs(Mat(b + aJ));
  Tensor3 B(D);
  {
    auto Bv = bq.chart.eval("B", w, 0);
    for (int i = 0; i < D * D * D; ++i) B.v[i] = Bv[i].value();
  }
  const Mat cal = trace_square(B);
  r.calB_symmetric = max_abs(Mat(cal - cal.transpose()));
  r.calB_hermitian = max_abs(Mat(J.transpose() * cal * J - cal));

  // A_X xi, A_X J xi and T on vertical arguments, from jets of the lifts at the slice point
  {
    const Vec p = slice_embed(w);
    const auto np = n_programs(bq.special, bq.eta);
    const auto x = seed_point(p, 1);
    const auto xi = np.xi(x), jxi = np.jxi(x), e1 = np.eta1(x), e2 = np.eta2(x), Gp = np.gp(x);
    const auto Lf = lift_program(np)(x);
    auto cov = [&](const std::vector<Jet>& X, const std::vector<Jet>& Y) {
      Vec v(dN);
      for (int k = 0; k < dN; ++k) {
        double s = 0;
        for (int m = 0; m < dN; ++m) {
          s += X[m].value() * Y[k].d(m);
          for (int j = 0; j < dN; ++j) s += Gp[ci(dN, k, m, j)].value() * X[m].value() * Y[j].value();
        }
        v[k] = s;
      }
      return v;
    };
    const Vec xv = values_of(xi), jv = values_of(jxi), e1v = values_of(e1), e2v = values_of(e2);
    auto vert = [&](const Vec& V) { Vec u = e1v.dot(V) * xv + e2v.dot(V) * jv; return u; };
    auto hor = [&](const Vec& V) { return Vec(V - vert(V)); };
    const Mat JN = standard_J(dN);
    for (int j = 0; j < D; ++j) {
      std::vector<Jet> X(Lf.begin() + j * dN, Lf.begin() + (j + 1) * dN);
      const Vec Xv = values_of(X);
      r.A_xi = std::max(r.A_xi, max_abs(Vec(hor(cov(X, xi)) - Xv)));
      r.A_Jxi = std::max(r.A_Jxi, max_abs(Vec(hor(cov(X, jxi)) - JN * Xv)));
      for (const auto* E : {&xi, &jxi}) r.T_vanish = std::max(r.T_vanish, max_abs(vert(cov(*E, X))));
    }
    for (const auto* E : {&xi, &jxi})
      for (const auto* F : {&xi, &jxi}) r.T_vanish = std::max(r.T_vanish, max_abs(hor(cov(*E, *F))));
  }

  const Mat dg1 = exterior_derivative(bq.chart.eval("gamma1", w, 1), D);
  const Mat dg2 = exterior_derivative(bq.chart.eval("gamma2", w, 1), D);
  r.dgamma1 = max_abs(Mat(dg1 + 2 * alt(a)));
  r.dgamma2 = max_abs(Mat(dg2 - 2 * alt(aJ)));

  const Tensor4 R = curvature(G, D);
  {
    const Tensor4 bb = bracket_square(B), t1 = alt_tensor(a, Id), t2 = alt_tensor(aJ, J), t3 = wedge(a, Id),
                  t4 = wedge(aJ, J);
    r.curvature = diff(R, combine({{-0.25, &bb}, {2.0, &t1}, {-2.0, &t2}, {1.0, &t3}, {-1.0, &t4}}, D));
  }
  const Mat Ric = ricci(R);
  const Mat aJJ = J.transpose() * a * J;
  r.ricci_identity =
      max_abs(Mat(Ric - (0.25 * cal - (2 * n + 1) * a + a.transpose() - aJJ - aJJ.transpose())));
  r.ricci_asym = max_abs(Mat(Ric - Ric.transpose()));
  r.ricci_min_eig = Eigen::SelfAdjointEigenSolver<Mat>(sym(Ric)).eigenvalues().minCoeff();

  if (D >= 4) {
    const Mat P = rho_from_ricci(Ric, J);
    r.rho_identity = max_abs(Mat((n + 1) * P - 0.25 * cal + 2 * (n + 1) * a));
    r.bar_a = max_abs(Mat(a - cal / (8 * (n + 1)) + 0.5 * P));
    const Tensor4 W = cproj_weyl_from(R, P, J);
    r.weyl_closed = diff(W, weyl_closed_form(B, J));
    r.weyl_type11 = type11_residual(W, J);
  }

  const Tensor3 Bs = bbar_shifted(bq, w, 0.37);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      r.square_B_gauge =
          std::max(r.square_B_gauge, max_abs(Mat(Bs.slot(i) * Bs.slot(j) - B.slot(i) * B.slot(j))));
  for (std::size_t i = 0; i < B.v.size(); ++i) r.B_gauge_change = std::max(r.B_gauge_change, std::abs(Bs.v[i] - B.v[i]));

  {
    const auto base = induced_data_at(bq, slice_embed(w));
    const std::complex<double> lam = std::polar(1.3, 0.7);
    Vec p = slice_embed(w);
    for (int k = 0; k < dN / 2; ++k) {
      auto c = lam * std::complex<double>(p[2 * k], p[2 * k + 1]);
      p[2 * k] = c.real();
      p[2 * k + 1] = c.imag();
    }
    const auto moved = induced_data_at(bq, p);
    for (std::size_t i = 0; i < base.size(); ++i) r.invariance = std::max(r.invariance, std::abs(moved[i] - base[i]));
  }
  return r;
}

}  // namespace hqg
