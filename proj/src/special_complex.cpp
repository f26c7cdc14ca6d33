#include "hqg/special_complex.hpp"

#include <cmath>
#include <stdexcept>

namespace hqg {

namespace {

std::vector<CJet> complex_coords(const std::vector<Jet>& x) {
  std::vector<CJet> z(x.size() / 2);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = CJet(x[2 * i], x[2 * i + 1]);
  return z;
}

// Affine coordinates (Re z_0..Re z_n, Re F_0..Re F_n) as jets.
std::vector<Jet> affine_coords(const HolomorphicData& data, const std::vector<Jet>& x) {
  auto z = complex_coords(x);
  auto F = data.F(z);
  if (static_cast<int>(F.size()) != data.n + 1)
    throw std::invalid_argument("holomorphic data " + data.name + " returned wrong arity");
  std::vector<Jet> phi;
  phi.reserve(x.size());
  for (const auto& zi : z) phi.push_back(zi.re);
  for (const auto& Fi : F) phi.push_back(Fi.re);
  return phi;
}

// Gamma of the flat connection in which affine_coords are affine; the output
// order is the input order minus two.
std::vector<Jet> gamma_core(const HolomorphicData& data, const std::vector<Jet>& x) {
  const int d = static_cast<int>(x.size());
  auto phi = affine_coords(data, x);
  JMat D(d, d);
  std::vector<Jet> H(d * d * d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i) {
      D(a, i) = derivative(phi[a], i);
      for (int j = 0; j < d; ++j) H[ci(d, a, i, j)] = derivative(D(a, i), j);
    }
  return pushforward_connection(D, H, {}, d);
}

bool is_zero(const Jet& j) { return j.is_constant() && j.value() == 0.0; }

Mat slot_of(const Tensor3& t, const Vec& X) {
  Mat m = Mat::Zero(t.d, t.d);
  for (int i = 0; i < t.d; ++i)
    if (X[i] != 0.0) m += X[i] * t.slot(i);
  return m;
}

}  // namespace

std::vector<Jet> J_times(const std::vector<Jet>& T, int d) {
  std::vector<Jet> out(d * d * d);
  for (int p = 0; p < d / 2; ++p)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        out[ci(d, 2 * p, i, j)] = -T[ci(d, 2 * p + 1, i, j)];
        out[ci(d, 2 * p + 1, i, j)] = T[ci(d, 2 * p, i, j)];
      }
  return out;
}

Mat standard_J(int dim) {
  Mat J = Mat::Zero(dim, dim);
  for (int p = 0; p < dim / 2; ++p) {
    J(2 * p + 1, 2 * p) = 1.0;
    J(2 * p, 2 * p + 1) = -1.0;
  }
  return J;
}

std::vector<Jet> standard_J_jets(int dim) {
  Mat J = standard_J(dim);
  std::vector<Jet> out(dim * dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j) out[ei(dim, k, j)] = Jet(J(k, j));
  return out;
}

std::vector<Jet> nabla_J_from(const std::vector<Jet>& G, int d) {
  // A^k_ij = G^k_im J^m_j - J^k_m G^m_ij
  std::vector<Jet> out(d * d * d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const int jp = j ^ 1, kp = k ^ 1;
        const double Jmj = (j % 2 == 0) ? 1.0 : -1.0;   // J^{j^1}_j
        const double Jkm = (k % 2 == 0) ? -1.0 : 1.0;   // J^k_{k^1}
        out[ci(d, k, i, j)] = Jmj * G[ci(d, k, i, jp)] - Jkm * G[ci(d, kp, i, j)];
      }
  return out;
}

std::vector<Jet> nabla_prime_from(const std::vector<Jet>& G, int d) {
  auto JA = J_times(nabla_J_from(G, d), d);
  std::vector<Jet> out(G.size());
  for (std::size_t m = 0; m < G.size(); ++m) out[m] = G[m] - 0.5 * JA[m];
  return out;
}

std::vector<Jet> nabla_t_from(const std::vector<Jet>& G, int d, double t) {
  if (std::sin(t) == 0.0) return G;
  auto A = nabla_J_from(G, d);
  auto JA = J_times(A, d);
  const double a = std::sin(t) * std::cos(t), b = std::sin(t) * std::sin(t);
  std::vector<Jet> out(G.size());
  for (std::size_t m = 0; m < G.size(); ++m) out[m] = G[m] - a * A[m] - b * JA[m];
  return out;
}

std::vector<Jet> standard_psi(int dim) {
  std::vector<Jet> b(dim * dim, Jet(0.0));
  for (int p = 1; p < dim / 2; ++p) {
    b[ei(dim, 2 * p, 2 * p + 1)] = Jet(1.0);
    b[ei(dim, 2 * p + 1, 2 * p)] = Jet(-1.0);
  }
  return b;
}

Program standard_psi_program(int dim) {
  return [dim](const std::vector<Jet>&) { return standard_psi(dim); };
}

SpecialComplexChart build_special_chart(const HolomorphicData& data,
                                        ChartGeometry::Predicate domain,
                                        ChartGeometry::Sampler sampler,
                                        ChartGeometry::Predicate sampling_region) {
  if (!data.F) throw std::invalid_argument("holomorphic data without F");
  SpecialComplexChart sc;
  sc.data = data;
  sc.n = data.n;
  sc.dim = 2 * (data.n + 1);
  const int d = sc.dim;
  sc.chart = ChartGeometry("special:" + data.name, d, std::move(domain), std::move(sampler),
                           std::move(sampling_region));

  // reject data violating Cauchy-Riemann or, if flagged conical, homogeneity
  for (const auto& p : sc.chart.sample(5, 12345)) {
    auto r = holomorphic_residuals(data, p);
    if (r.cauchy_riemann > 1e-9)
      throw std::invalid_argument(data.name + ": F is not holomorphic");
    if (data.conical && r.euler > 1e-8)
      throw std::invalid_argument(data.name + ": F is not homogeneous of degree one");
  }

  Program gamma = lifted([data](const std::vector<Jet>& x) { return gamma_core(data, x); }, d, 2);
  sc.gamma_dgamma = lifted(
      [data, d](const std::vector<Jet>& x) {
        auto G = gamma_core(data, x);
        std::vector<Jet> out(G);
        out.reserve(G.size() * (d + 1));
        for (const auto& g : G)
          for (int l = 0; l < d; ++l) out.push_back(derivative(g, l));
        return out;
      },
      d, 3);

  sc.chart.add("J", Valence::Endo, [d](const std::vector<Jet>&) { return standard_J_jets(d); });
  sc.chart.add("Gamma", Valence::Christoffel, gamma);
  sc.chart.add("A", Valence::Christoffel,
               [gamma, d](const std::vector<Jet>& x) { return nabla_J_from(gamma(x), d); });
  sc.chart.add("Gamma_prime", Valence::Christoffel,
               [gamma, d](const std::vector<Jet>& x) { return nabla_prime_from(gamma(x), d); });
  sc.chart.add("xi", Valence::Vector, [](const std::vector<Jet>& x) { return x; });
  sc.chart.add("Jxi", Valence::Vector, [](const std::vector<Jet>& x) {
    std::vector<Jet> out(x.size());
    for (std::size_t p = 0; p < x.size() / 2; ++p) {
      out[2 * p] = -x[2 * p + 1];
      out[2 * p + 1] = x[2 * p];
    }
    return out;
  });
  return sc;
}

Program nabla_t(const SpecialComplexChart& sc, double t) {
  Program gamma = sc.chart.program("Gamma");
  const int d = sc.dim;
  return [gamma, d, t](const std::vector<Jet>& x) { return nabla_t_from(gamma(x), d, t); };
}

Mat phi_jacobian(const SpecialComplexChart& sc, const Vec& p) {
  const int d = sc.dim;
  auto phi = affine_coords(sc.data, seed_point(p, 1));
  Mat D(d, d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i) D(a, i) = phi[a].d(i);
  return D;
}

HolomorphicResiduals holomorphic_residuals(const HolomorphicData& data, const Vec& p) {
  auto x = seed_point(p, 1);
  auto z = complex_coords(x);
  auto F = data.F(z);
  HolomorphicResiduals r;
  for (const auto& Fi : F) {
    double er = -Fi.re.value(), eim = -Fi.im.value();
    for (std::size_t j = 0; j < z.size(); ++j) {
      const int u = 2 * static_cast<int>(j), v = u + 1;
      r.cauchy_riemann = std::max(r.cauchy_riemann, std::abs(Fi.re.d(u) - Fi.im.d(v)));
      r.cauchy_riemann = std::max(r.cauchy_riemann, std::abs(Fi.re.d(v) + Fi.im.d(u)));
      // z_j dF/dz_j with dF/dz_j = d_u F
      const double zr = p[u], zi = p[v], fr = Fi.re.d(u), fi = Fi.im.d(u);
      er += zr * fr - zi * fi;
      eim += zr * fi + zi * fr;
    }
    r.euler = std::max(r.euler, std::hypot(er, eim));
  }
  return r;
}

Program moment_map(const SpecialComplexChart& sc, const Program& psi) {
  const Program Jxi = sc.chart.program("Jxi");
  const int d = sc.dim;
  return [psi, Jxi, d](const std::vector<Jet>& x) {
    auto b = psi(x);
    auto jx = Jxi(x);
    Jet s(0.0);
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c) {
        const Jet& bac = b[ei(d, a, c)];
        if (is_zero(bac)) continue;
        s += bac * x[a] * jx[c];
      }
    return std::vector<Jet>{0.5 * s};
  };
}

TwoFormResiduals two_form_residuals(const SpecialComplexChart& sc, const Program& psi,
                                    const Vec& p) {
  const int d = sc.dim;
  auto x = seed_point(p, 1);
  auto b = psi(x);
  Mat B = endo_of(b, d);
  Mat J = standard_J(d);
  TwoFormResiduals r;
  r.hermitian = max_abs(Mat(J.transpose() * B * J - B));
  auto G = sc.chart.program("Gamma")(x);
  r.parallel = cov_deriv_bilinear(G, b, d).max_abs();
  auto mu = moment_map(sc, psi)(x);
  Vec jx = values_of(sc.chart.program("Jxi")(x));
  Vec iota = B.transpose() * jx;  // (iota_{J xi} psi)_c = (J xi)^a psi_ac
  for (int c = 0; c < d; ++c) r.moment = std::max(r.moment, std::abs(mu[0].d(c) + iota[c]));
  return r;
}

void register_two_form(SpecialComplexChart& sc, Program psi, int samples, std::uint64_t seed,
                       double tol) {
  double herm = 0, par = 0;
  for (const auto& p : sc.chart.sample(samples, seed)) {
    auto r = two_form_residuals(sc, psi, p);
    herm = std::max(herm, r.hermitian);
    par = std::max(par, r.parallel);
  }
  if (herm > tol)
    throw std::invalid_argument("two-form is not hermitian (max residual " +
                                std::to_string(herm) + ")");
  if (par > tol)
    throw std::invalid_argument("two-form is not parallel (max residual " + std::to_string(par) +
                                ")");
  sc.chart.add("psi", Valence::Bilinear, psi);
  sc.chart.add("mu", Valence::Scalar, moment_map(sc, psi));
}

SpecialAxioms special_axioms(const SpecialComplexChart& sc, const Vec& p) {
  const int d = sc.dim;
  const auto& ch = sc.chart;
  auto x1 = seed_point(p, 1);
  auto x2 = seed_point(p, 2);
  auto G = ch.program("Gamma")(x1);
  auto Aj = nabla_J_from(G, d);
  auto Gp = nabla_prime_from(G, d);
  auto Jj = standard_J_jets(d);
  auto xi = ch.program("xi")(x2);
  auto jxi = ch.program("Jxi")(x2);
  const Vec xv = values_of(xi), jv = values_of(jxi);
  const Mat J = standard_J(d);
  const Mat Id = Mat::Identity(d, d);
  Tensor3 A = tensor3_of(Aj, d);

  SpecialAxioms s;
  s.flat = curvature(G, d).max_abs();
  s.torsion = torsion(G, d).max_abs();
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s.A_symmetric = std::max(s.A_symmetric, std::abs(A(k, i, j) - A(k, j, i)));
  s.nabla_xi = max_abs(Mat(cov_deriv_vector(G, xi, d) - Id));
  s.lie_xi_J = max_abs(lie_derivative_endo(xi, Jj, d));
  s.A_xi = max_abs(slot_of(A, xv));
  s.A_Jxi = max_abs(slot_of(A, jv));
  s.lie_Jxi_J = max_abs(lie_derivative_endo(jxi, Jj, d));
  for (int i = 0; i < d; ++i) {
    Mat AJX = slot_of(A, J.col(i));
    Mat AX = A.slot(i);
    s.AJ_anticommute = std::max({s.AJ_anticommute, max_abs(Mat(AJX + J * AX)), max_abs(Mat(AJX - AX * J))});
  }
  s.prime_J_parallel = cov_deriv_endo(Gp, Jj, d).max_abs();
  s.prime_torsion = torsion(Gp, d).max_abs();
  s.prime_xi = max_abs(Mat(cov_deriv_vector(Gp, xi, d) - Id));
  Tensor4 Rp = curvature(Gp, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat Ai = A.slot(i), Aj2 = A.slot(j);
      s.prime_curvature_law =
          std::max(s.prime_curvature_law, max_abs(Mat(Rp.endo(i, j) + 0.25 * (Ai * Aj2 - Aj2 * Ai))));
    }
  for (int j = 0; j < d; ++j) {
    Mat m = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) m += jv[i] * Rp.endo(i, j);
    s.prime_curv_Jxi = std::max(s.prime_curv_Jxi, max_abs(m));
  }
  s.lie_xi_prime = lie_derivative_connection(xi, Gp, d).max_abs();
  s.lie_Jxi_prime = lie_derivative_connection(jxi, Gp, d).max_abs();
  Tensor3 LG = lie_derivative_connection(jxi, G, d);
  Tensor3 LA = lie_derivative_tensor12(jxi, Aj, d);
  auto JAj = J_times(Aj, d);
  Tensor3 LJA = lie_derivative_tensor12(jxi, JAj, d);
  Tensor3 JA = tensor3_of(JAj, d);
  for (std::size_t m = 0; m < A.v.size(); ++m) {
    s.lie_Jxi_nabla_is_A = std::max(s.lie_Jxi_nabla_is_A, std::abs(LG.v[m] - A.v[m]));
    s.lie_Jxi_A = std::max(s.lie_Jxi_A, std::abs(LA.v[m] + 2 * JA.v[m]));
    s.lie_Jxi_JA = std::max(s.lie_Jxi_JA, std::abs(LJA.v[m] - 2 * A.v[m]));
  }
  auto H = second_cov_deriv_endo(G, Aj, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      s.hessian_symmetry = std::max(s.hessian_symmetry, max_abs(Mat(H[i * d + j] - H[j * d + i])));
      const double tr = (J * H[i * d + j]).trace() + (A.slot(i) * A.slot(j)).trace();
      s.trace_identity = std::max(s.trace_identity, std::abs(tr));
    }
  return s;
}

FamilyAxioms family_axioms(const SpecialComplexChart& sc, double t, const Vec& p) {
  const int d = sc.dim;
  auto x1 = seed_point(p, 1);
  auto G = nabla_t(sc, t)(x1);
  auto Aj = nabla_J_from(G, d);
  Tensor3 A = tensor3_of(Aj, d);
  auto xi = sc.chart.program("xi")(x1);
  auto jxi = sc.chart.program("Jxi")(x1);
  FamilyAxioms f;
  f.flat = curvature(G, d).max_abs();
  f.torsion = torsion(G, d).max_abs();
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) f.A_symmetric = std::max(f.A_symmetric, std::abs(A(k, i, j) - A(k, j, i)));
  f.nabla_xi = max_abs(Mat(cov_deriv_vector(G, xi, d) - Mat::Identity(d, d)));
  f.A_xi = max_abs(slot_of(A, values_of(xi)));
  f.A_Jxi = max_abs(slot_of(A, values_of(jxi)));
  const Program psi = sc.chart.has("psi") ? sc.chart.program("psi") : standard_psi_program(d);
  f.psi_parallel = cov_deriv_bilinear(G, psi(x1), d).max_abs();
  return f;
}

}  // namespace hqg
