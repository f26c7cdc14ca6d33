#include "hqg/examples_catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace hqg {

namespace {

CJet cpow_signed(const CJet& z, int p) {
  if (p >= 0) return cipow(z, p);
  return CJet(1.0) / cipow(z, -p);
}

Vec box_sample(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec p(d);
  for (int i = 0; i < d; ++i) p[i] = U(rng);
  return p;
}

double fiber_norm2(int n, const Vec& p) {
  double s = 0;
  for (int i = 1; i <= n; ++i) s += p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1];
  return s;
}

}  // namespace

void validate(const ExampleSpec& spec) {
  if (spec.name == "su3_lie" || spec.name == "hopf_linear") return;
  if (spec.name != "trivial_flat" && spec.name != "l_family")
    throw std::invalid_argument("unknown example " + spec.name);
  if (spec.n < 1) throw std::invalid_argument("n must be >= 1");
  if (spec.name == "l_family" && spec.l == 1)
    throw std::invalid_argument(
        "l = 1 makes Re phi degenerate (Re F_0 = Re F_1 = v_1); chart degenerate");
  if (!(spec.c > 0)) throw std::invalid_argument("c must be positive");
}

HolomorphicData trivial_data(int n) {
  HolomorphicData h;
  h.name = "trivial_flat";
  h.n = n;
  h.F = [](const std::vector<CJet>& z) {
    std::vector<CJet> F(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) F[i] = -I_times(z[i]);
    return F;
  };
  return h;
}

HolomorphicData l_family_data(int n, int l) {
  HolomorphicData h;
  h.name = "l_family(l=" + std::to_string(l) + ")";
  h.n = n;
  h.F = [l](const std::vector<CJet>& z) {
    std::vector<CJet> F(z.size());
    F[0] = -I_times(cpow_signed(z[1], l) * cpow_signed(z[0], 1 - l));
    for (std::size_t i = 1; i < z.size(); ++i) F[i] = -I_times(z[i]);
    return F;
  };
  return h;
}

bool l_family_in_domain(int n, int l, const Vec& p, double margin) {
  if (p.size() < 2 * (n + 1)) return false;
  const double z0 = std::hypot(p[0], p[1]);
  if (z0 < margin) return false;
  if (l < 2 && std::hypot(p[2], p[3]) < margin) return false;
  return std::abs(oracle::g_i(l, 0, p).imag()) >= margin;
}

SpecialComplexChart make_special(const ExampleSpec& spec) {
  validate(spec);
  const int n = spec.n, d = 2 * (n + 1);
  auto sampler = [d](std::mt19937_64& rng) { return box_sample(rng, d); };
  SpecialComplexChart sc;
  if (spec.name == "trivial_flat") {
    sc = build_special_chart(
        trivial_data(n), nullptr, sampler,
        [n](const Vec& p) { return std::hypot(p[0], p[1]) >= 0.5 && fiber_norm2(n, p) >= 0.1; });
  } else {
    const int l = spec.l;
    sc = build_special_chart(
        l_family_data(n, l), [n, l](const Vec& p) { return l_family_in_domain(n, l, p); }, sampler,
        [n, l](const Vec& p) {
          const double z0 = std::hypot(p[0], p[1]), w = std::hypot(p[2], p[3]) / z0;
          return z0 >= 0.5 && w <= 1.0 && fiber_norm2(n, p) >= 0.1 &&
                 std::abs(oracle::g_i(l, 0, p).imag()) >= 0.2 && (l >= 2 || w >= 0.5);
        });
  }
  register_two_form(sc, standard_psi_program(d));
  return sc;
}

namespace {

ChartGeometry tn_with_rotating_field(const TangentChart& tn) {
  ChartGeometry M = tn.chart;
  M.add("Z", Valence::Vector, tn.chart.program("ZM"));
  return M;
}

}  // namespace

Pipeline make_pipeline(const ExampleSpec& spec) {
  Pipeline pl;
  pl.spec = spec;
  pl.special = make_special(spec);
  pl.tn = tangent_chart(pl.special);
  const int d = pl.tn.d, D = pl.tn.dim;
  const double c = spec.c;
  Program psi = pl.special.chart.program("psi");
  Program mu = pl.special.chart.program("mu");
  pl.data.M = tn_with_rotating_field(pl.tn);
  pl.data.Theta = [psi, d, D](const std::vector<Jet>& y) {
    auto p = psi(std::vector<Jet>(y.begin(), y.begin() + d));
    std::vector<Jet> out(D * D, Jet(0.0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[i * D + j] = -p[i * d + j];
    return out;
  };
  pl.data.f = [mu, d, c](const std::vector<Jet>& y) {
    auto v = mu(std::vector<Jet>(y.begin(), y.begin() + d));
    return std::vector<Jet>{c - 2.0 * v[0]};
  };
  pl.data.beta = [d, D](const std::vector<Jet>& y) {
    std::vector<Jet> out(D, Jet(0.0));
    for (int i = 1; i < d / 2; ++i) out[2 * i + 1] = y[2 * i];
    return out;
  };
  return pl;
}

ConificationData zero_form_data(const TangentChart& tn) {
  ConificationData data;
  const int D = tn.dim;
  data.M = tn_with_rotating_field(tn);
  data.Theta = [D](const std::vector<Jet>&) { return std::vector<Jet>(D * D, Jet(0.0)); };
  data.f = [](const std::vector<Jet>&) { return std::vector<Jet>{Jet(1.0)}; };
  data.beta = [D](const std::vector<Jet>&) { return std::vector<Jet>(D, Jet(0.0)); };
  return data;
}

ConificationData flat_kahler_data(const TangentChart& tn, double c) {
  const int D = tn.dim;
  ConificationData data;
  data.M = tn_with_rotating_field(tn);
  const Vec y0 = Vec::Zero(D);
  auto y1 = seed_point(y0, 1);
  std::vector<Jet> I1 = data.M.program("I1")(y1), Z = data.M.program("Z")(y1);
  Mat B(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      if (std::abs(I1[ei(D, i, j)].d(0)) + std::abs(I1[ei(D, i, j)].d(j)) > 0.0)
        throw std::invalid_argument("flat_kahler_data needs constant I1 (trivial_flat input)");
      B(i, j) = Z[i].d(j);
    }
  if (max_abs(values_of(Z)) > 0.0) throw std::invalid_argument("flat_kahler_data needs linear Z");
  const Mat Th = endo_of(I1, D).transpose();  // Theta(X, Y) = <I1 X, Y>
  const Mat S = -Th.transpose() * B;          // df = -iota_Z Theta = S y
  const Mat Ssym = 0.5 * (S + S.transpose());
  auto constant = [](const Mat& m) {
    return [m](const std::vector<Jet>&) {
      std::vector<Jet> out;
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.emplace_back(m(i, j));
      return out;
    };
  };
  data.Theta = constant(Th);
  data.f = [Ssym, c, D](const std::vector<Jet>& y) {
    Jet f(c);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) f += 0.5 * Ssym(i, j) * y[i] * y[j];
    return std::vector<Jet>{f};
  };
  data.beta = [D](const std::vector<Jet>&) { return std::vector<Jet>(D, Jet(0.0)); };
  // the required curvature is constant; beta_j = 1/2 sum_i y_i F_ij has d beta = F
  const Mat F = endo_of(required_curvature(data)(seed_point(Vec::Constant(D, 0.3), 1)), D);
  data.beta = [F, D](const std::vector<Jet>& y) {
    std::vector<Jet> out(D, Jet(0.0));
    for (int j = 0; j < D; ++j)
      for (int i = 0; i < D; ++i) out[j] += 0.5 * F(i, j) * y[i];
    return out;
  };
  return data;
}

namespace oracle {

namespace {

cd zc(const Vec& p, int i) { return {p[2 * i], p[2 * i + 1]}; }
cd dz(const Vec& X, int i) { return {X[2 * i], X[2 * i + 1]}; }
cd ipw(cd z, int k) {
  cd r = 1.0;
  for (int i = 0; i < std::abs(k); ++i) r *= z;
  return k >= 0 ? r : 1.0 / r;
}
const cd I(0.0, 1.0);

}  // namespace

cd w_of(const Vec& p) { return zc(p, 1) / zc(p, 0); }

cd dw(const Vec& p, const Vec& X) {
  const cd z0 = zc(p, 0), z1 = zc(p, 1);
  return dz(X, 1) / z0 - z1 * dz(X, 0) / (z0 * z0);
}

cd g_i(int l, int i, const Vec& p) {
  const cd w = w_of(p);
  if (i == 0) return I * double(l - 1) * ipw(w, l);
  if (i == 1) return -I * double(l) * ipw(w, l - 1);
  return 0.0;
}

double dRe_g0(int l, const Vec& p, const Vec& X) {
  const cd w = w_of(p), a = dw(p, X);
  const cd v = (I / 2.0) * double((-l + 1) * l) * (-ipw(w, l - 1) * a + std::conj(ipw(w, l - 1) * a));
  return v.real();
}

double dIm_g0(int l, const Vec& p, const Vec& X) {
  const cd w = w_of(p), a = dw(p, X);
  const cd v = -0.5 * double((-l + 1) * l) * (ipw(w, l - 1) * a + std::conj(ipw(w, l - 1) * a));
  return v.real();
}

// The display prints conj(w)^(l-1) in the second term; the conjugate of the first term
// (w^(l-2) dw) is what makes the form real, so that exponent is used here.
double dRe_g1(int l, const Vec& p, const Vec& X) {
  const cd w = w_of(p), a = dw(p, X);
  const cd v = (I / 2.0) * double((-l + 1) * l) * (ipw(w, l - 2) * a - std::conj(ipw(w, l - 2) * a));
  return v.real();
}

double dIm_g1(int l, const Vec& p, const Vec& X) {
  const cd w = w_of(p), a = dw(p, X);
  const cd v = 0.5 * double((-l + 1) * l) * (ipw(w, l - 2) * a + std::conj(ipw(w, l - 2) * a));
  return v.real();
}

double dRe_g(int l, int i, const Vec& p, const Vec& X) {
  return i == 0 ? dRe_g0(l, p, X) : i == 1 ? dRe_g1(l, p, X) : 0.0;
}
double dIm_g(int l, int i, const Vec& p, const Vec& X) {
  return i == 0 ? dIm_g0(l, p, X) : i == 1 ? dIm_g1(l, p, X) : 0.0;
}

Mat jacobian(int n, int l, const Vec& p) {
  const int m = n + 1;
  Mat Jm = Mat::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) Jm(i, i) = 1.0;
  for (int i = 0; i < m; ++i) {
    const cd g = g_i(l, i, p);
    Jm(m, i) = g.real();
    Jm(m, m + i) = -g.imag();
  }
  for (int j = 1; j < m; ++j) Jm(m + j, m + j) = 1.0;
  return Jm;
}

Mat S_matrix(int n, int l, const Vec& p, const Vec& X) {
  const int d = 2 * (n + 1);
  const double img0 = g_i(l, 0, p).imag();
  Mat S = Mat::Zero(d, d);
  for (int i = 0; i <= n; ++i) {
    S(1, 2 * i) = -dRe_g(l, i, p, X) / img0;
    S(1, 2 * i + 1) = dIm_g(l, i, p, X) / img0;
  }
  return S;
}

Mat A_matrix(int n, int l, const Vec& p, const Vec& X) {
  const int d = 2 * (n + 1);
  const double img0 = g_i(l, 0, p).imag();
  Mat A = Mat::Zero(d, d);
  for (int i = 0; i <= n; ++i) {
    const double re = dRe_g(l, i, p, X), im = dIm_g(l, i, p, X);
    A(0, 2 * i) = -re / img0;
    A(0, 2 * i + 1) = im / img0;
    A(1, 2 * i) = im / img0;
    A(1, 2 * i + 1) = re / img0;
  }
  return A;
}

Mat R_cl(int n, int l, const Vec& p, const Vec& X, const Vec& Y) {
  const int d = 2 * (n + 1);
  const cd w = w_of(p);
  const double aw2 = std::norm(w);
  const cd wl = ipw(w, l);
  const cd den = (wl + std::conj(wl)) * (wl + std::conj(wl));
  const cd a = dw(p, X), b = dw(p, Y);
  const cd wedge = a * std::conj(b) - b * std::conj(a);
  const cd factor = -I * double(l * l) * std::pow(aw2, l - 2) / den * wedge;
  Mat M = Mat::Zero(d, d);
  M(0, 1) = -aw2;
  M(0, 2) = -w.imag();
  M(0, 3) = w.real();
  M(1, 0) = aw2;
  M(1, 2) = -w.real();
  M(1, 3) = -w.imag();
  return factor.real() * M;
}

double TrA2(int, int l, const Vec& p, const Vec& X, const Vec& Y) {
  const cd w = w_of(p);
  const cd wl = ipw(w, l);
  const cd den = (wl + std::conj(wl)) * (wl + std::conj(wl));
  const cd a = dw(p, X), b = dw(p, Y);
  const cd v = 4.0 * double(l * l) * std::pow(std::norm(w), l - 1) / den *
               (a * std::conj(b) + std::conj(a) * b);
  return v.real();
}

double TrA2_via_g0(int, int l, const Vec& p, const Vec& X, const Vec& Y) {
  const double img0 = g_i(l, 0, p).imag();
  return 2.0 / (img0 * img0) *
         (dRe_g0(l, p, X) * dRe_g0(l, p, Y) + dIm_g0(l, p, X) * dIm_g0(l, p, Y));
}

double abar(int n, const Vec& p, const Vec& X, const Vec& Y) {
  double s = 0, r = 0;
  for (int i = 1; i <= n; ++i) {
    r += p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1];
    s += X[2 * i] * Y[2 * i] + X[2 * i + 1] * Y[2 * i + 1];
  }
  return -s / r;
}

double mu(int n, const Vec& p) {
  double s = 0;
  for (int i = 1; i <= n; ++i) s += p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1];
  return 0.5 * s;
}

}  // namespace oracle

}  // namespace hqg
