#include "hqg/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hqg/conification.hpp"
#include "hqg/cprojective.hpp"
#include "hqg/fd_check.hpp"
#include "hqg/hq_quotient.hpp"
#include "hqg/jet_linalg.hpp"
#include "hqg/rigid_cmap.hpp"
#include "hqg/special_complex.hpp"
#include "hqg/tensor.hpp"

namespace hqg {

namespace {

constexpr double kFdTol = 1e-5;
constexpr int kSupplementPoints = 10;
const std::vector<Quat<double>> kOtherSections{{0.3, 0.8, -0.2, 0.5}, {-1.0, 0.2, 0.4, 0.1}};

bool is_geometry(const std::string& name) { return name == "l_family" || name == "trivial_flat"; }

// Max-reduction over sample points, one entry per check id in first-seen order.
class Recorder {
 public:

  void observe(const std::string& id, const std::string& anchor, double tol, double r) {
    Acc& a = slot(id, anchor, tol);
    ++a.points;
    if (std::isnan(r))
      a.nan = true;
    else
      a.max = std::max(a.max, r);
  }
  void fail(const std::string& id, const std::string& anchor, double tol, const std::string& why) {
    Acc& a = slot(id, anchor, tol);
    a.nan = true;
    if (a.note.empty()) a.note = why;
  }
  void note(const std::string& id, const std::string& text) {
    auto it = acc_.find(id);
    if (it != acc_.end() && it->second.note.empty()) it->second.note = text;
  }

  void flush_into(VerificationReport& rep) {
    for (const auto& id : order_) {
      const Acc& a = acc_.at(id);
      rep.add(make_record(id, a.anchor, a.points, a.nan ? kNaN : a.max, a.tol, a.note));
    }
    order_.clear();
    acc_.clear();
  }

 private:
  struct Acc {
    std::string anchor;
    int points = 0;
    double max = 0;
    double tol = 0;
    bool nan = false;
    std::string note;
  };
  Acc& slot(const std::string& id, const std::string& anchor, double tol) {
    auto it = acc_.find(id);
    if (it == acc_.end()) {
      order_.push_back(id);
      it = acc_.emplace(id, Acc{anchor, 0, 0, tol, false, {}}).first;
    }
    return it->second;
  }

  std::vector<std::string> order_;
  std::map<std::string, Acc> acc_;
};

struct Check {
  const char* id;
  const char* anchor;
  double tol;
};

// Evaluates a bundle of residuals at every point; an exception at a point fails every
// check of the bundle with the message, the other points still run.
template <class R>
void battery(Recorder& rec, const std::string& prefix, const std::vector<Vec>& pts,
             const std::function<R(const Vec&)>& eval,
             const std::vector<std::pair<Check, std::function<double(const R&)>>>& checks) {
  for (const auto& p : pts) {
    try {
      const R r = eval(p);
      for (const auto& [c, get] : checks) rec.observe(prefix + c.id, c.anchor, c.tol, get(r));
    } catch (const std::exception& e) {
      for (const auto& [c, get] : checks) rec.fail(prefix + c.id, c.anchor, c.tol, e.what());
    }
  }
}

std::vector<Vec> subsample(const std::vector<Vec>& pts, std::uint64_t seed) {
  const std::size_t k = (pts.size() + 9) / 10;
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<Vec> out;
  for (auto i : idx) out.push_back(pts[i]);
  return out;
}

void fd_fields(Recorder& rec, const std::string& prefix, const ChartGeometry& chart,
               const std::vector<std::string>& fields, const std::vector<Vec>& pts, const SuiteConfig& cfg) {
  const auto sub = subsample(pts, cfg.seed);
  for (const auto& f : fields) {
    const std::string id = prefix + "fd_" + f;
    for (const auto& p : sub) {
      try {
        auto r = fd_compare(chart.program(f), p, true, 1e-5, 1e-3, cfg.jet_order);
        rec.observe(id, "jet_vs_central_differences", kFdTol, std::max(r.first, r.second));
      } catch (const std::exception& e) {
        rec.fail(id, "jet_vs_central_differences", kFdTol, e.what());
      }
    }
  }
}

Vec unit(int d, int i) {
  Vec e = Vec::Zero(d);
  e[i] = 1.0;
  return e;
}

std::string obata_note(double defect) {
  std::ostringstream s;
  s << "no Obata connection: integrability system inconsistent, defect " << defect;
  return s.str();
}

// ---------------------------------------------------------------------------------------
// special_axioms

void suite_special(Recorder& rec, const SpecialComplexChart& sc, const SuiteConfig& cfg) {
  const std::string P = "special_axioms.";
  const auto pts = sc.chart.sample(cfg.points, cfg.seed);
  using S = SpecialAxioms;
  battery<S>(rec, P, pts, [&](const Vec& p) { return special_axioms(sc, p); },
             {
                 {{"flat", "special_connection_flat", 1e-8}, [](const S& r) { return r.flat; }},
                 {{"torsion", "special_connection_torsion_free", 1e-12}, [](const S& r) { return r.torsion; }},
                 {{"A_symmetric", "nablaJ_symmetric", 1e-8}, [](const S& r) { return r.A_symmetric; }},
                 {{"nabla_xi", "conical_euler_field", 1e-9}, [](const S& r) { return r.nabla_xi; }},
                 {{"lie_xi_J", "conical_xi_holomorphic", 1e-12}, [](const S& r) { return r.lie_xi_J; }},
                 {{"A_xi", "A_kills_xi", 1e-9}, [](const S& r) { return r.A_xi; }},
                 {{"A_Jxi", "A_kills_Jxi", 1e-9}, [](const S& r) { return r.A_Jxi; }},
                 {{"lie_Jxi_J", "Jxi_holomorphic", 1e-12}, [](const S& r) { return r.lie_Jxi_J; }},
                 {{"AJ_anticommute", "A_J_anticommute", 1e-9}, [](const S& r) { return r.AJ_anticommute; }},
                 {{"prime_J_parallel", "nabla_prime_complex", 1e-9}, [](const S& r) { return r.prime_J_parallel; }},
                 {{"prime_torsion", "nabla_prime_torsion_free", 1e-9}, [](const S& r) { return r.prime_torsion; }},
                 {{"prime_xi", "nabla_prime_euler", 1e-9}, [](const S& r) { return r.prime_xi; }},
                 {{"prime_curvature_law", "nabla_prime_curvature_law", 1e-8},
                  [](const S& r) { return r.prime_curvature_law; }},
                 {{"prime_curv_Jxi", "nabla_prime_curvature_Jxi", 1e-8}, [](const S& r) { return r.prime_curv_Jxi; }},
                 {{"lie_xi_prime", "xi_preserves_nabla_prime", 1e-8}, [](const S& r) { return r.lie_xi_prime; }},
                 {{"lie_Jxi_prime", "Jxi_preserves_nabla_prime", 1e-8}, [](const S& r) { return r.lie_Jxi_prime; }},
                 {{"lie_Jxi_nabla_is_A", "Jxi_derivative_of_nabla", 1e-8},
                  [](const S& r) { return r.lie_Jxi_nabla_is_A; }},
                 {{"lie_Jxi_A", "Jxi_rotates_A", 1e-8}, [](const S& r) { return r.lie_Jxi_A; }},
                 {{"lie_Jxi_JA", "Jxi_rotates_JA", 1e-8}, [](const S& r) { return r.lie_Jxi_JA; }},
                 {{"hessian_symmetry", "second_derivative_of_J_symmetric", 1e-8},
                  [](const S& r) { return r.hessian_symmetry; }},
                 {{"trace_identity", "trace_JHJ_plus_AA", 1e-7}, [](const S& r) { return r.trace_identity; }},
             });
  using H = HolomorphicResiduals;
  battery<H>(rec, P, pts, [&](const Vec& p) { return holomorphic_residuals(sc.data, p); },
             {
                 {{"cauchy_riemann", "holomorphic_one_form", 1e-10}, [](const H& r) { return r.cauchy_riemann; }},
                 {{"homogeneity", "holomorphic_one_form_homogeneous", 1e-10}, [](const H& r) { return r.euler; }},
             });
  using T = TwoFormResiduals;
  const Program psi = sc.chart.program("psi");
  battery<T>(rec, P, pts, [&](const Vec& p) { return two_form_residuals(sc, psi, p); },
             {
                 {{"psi_hermitian", "psi_hermitian", 1e-12}, [](const T& r) { return r.hermitian; }},
                 {{"psi_parallel", "psi_parallel", 1e-9}, [](const T& r) { return r.parallel; }},
                 {{"moment_map", "moment_map_of_Jxi", 1e-12}, [](const T& r) { return r.moment; }},
             });
  fd_fields(rec, P, sc.chart, {"Gamma", "A", "Gamma_prime", "psi", "mu"}, pts, cfg);
}

// ---------------------------------------------------------------------------------------
// rigid_cmap

void suite_rigid(Recorder& rec, const TangentChart& tn, const SuiteConfig& cfg) {
  const std::string P = "rigid_cmap.";
  const auto pts = tn.chart.sample(cfg.points, cfg.seed);
  using R = RigidCmapChecks;
  battery<R>(rec, P, pts, [&](const Vec& p) { return rigid_cmap_checks(tn, p); },
             {
                 {{"quaternionic", "tangent_bundle_quaternion_relations", 1e-9}, [](const R& r) { return r.quaternionic; }},
                 {{"lift_action", "structures_on_lifts", 1e-12}, [](const R& r) { return r.lift_action; }},
                 {{"nijenhuis", "tangent_bundle_integrable", 1e-7}, [](const R& r) { return r.nijenhuis; }},
                 {{"torsion", "obata_torsion_free", 1e-9}, [](const R& r) { return r.torsion; }},
                 {{"obata_parallel", "obata_parallel_explicit", 1e-8}, [](const R& r) { return r.obata_parallel; }},
                 {{"explicit_vs_solver", "obata_explicit_vs_solver", 1e-7},
                  [](const R& r) { return r.explicit_vs_solver; }},
                 {{"solver_parallel", "obata_parallel_solver", 1e-8}, [](const R& r) { return r.solver_parallel; }},
                 {{"ricci", "obata_ricci_flat", 1e-7}, [](const R& r) { return r.ricci; }},
                 {{"curvature_blocks", "obata_curvature_blocks", 1e-7}, [](const R& r) { return r.curvature_blocks; }},
                 {{"leaves_geodesic", "horizontal_leaves_totally_geodesic", 1e-8},
                  [](const R& r) { return r.leaves_geodesic; }},
                 {{"euler_h", "lifted_euler_horizontal", 1e-8}, [](const R& r) { return r.euler_h; }},
                 {{"euler_v", "lifted_euler_vertical", 1e-8}, [](const R& r) { return r.euler_v; }},
                 {{"rot_I1", "rotating_field_I1", 1e-8}, [](const R& r) { return r.rot_I1; }},
                 {{"rot_I2", "rotating_field_I2", 1e-8}, [](const R& r) { return r.rot_I2; }},
                 {{"rot_I3", "rotating_field_I3", 1e-8}, [](const R& r) { return r.rot_I3; }},
                 {{"bracket_hh", "lift_bracket_horizontal", 1e-8}, [](const R& r) { return r.bracket_hh; }},
                 {{"bracket_hv", "lift_bracket_mixed", 1e-8}, [](const R& r) { return r.bracket_hv; }},
                 {{"bracket_vv", "lift_bracket_vertical", 1e-12}, [](const R& r) { return r.bracket_vv; }},
             });
  for (const auto& p : pts) {
    try {
      rec.observe(P + "leaf_foliation", "rotating_leaves_integrable", 1e-10, leaf_foliation_residual(tn.chart, p));
    } catch (const std::exception& e) {
      rec.fail(P + "leaf_foliation", "rotating_leaves_integrable", 1e-10, e.what());
    }
  }
  fd_fields(rec, P, tn.chart, {"I1", "I2", "I3", "Gamma_obata", "Gamma_obata_solver", "ZM", "xi_h"}, pts, cfg);
}

// ---------------------------------------------------------------------------------------
// oracles: engine tensors against the literal closed forms of the l-family

// kappa-horizontal lifts at the slice point as columns
Mat kappa_lifts(const BaseQuotientChart& bq, const Vec& w) {
  const Vec p = slice_embed(w);
  const auto x = seed_point(p, 0);
  const auto& c = bq.special.chart;
  const Vec xi = values_of(c.program("xi")(x)), jxi = values_of(c.program("Jxi")(x));
  const Vec e1 = values_of(bq.eta.eta1(x)), e2 = values_of(bq.eta.eta2(x));
  Mat X(p.size(), bq.dim);
  for (int j = 0; j < bq.dim; ++j) {
    Vec L = Vec::Zero(p.size());
    L[2 + j] = 1.0;
    X.col(j) = L - e1.dot(L) * xi - e2.dot(L) * jxi;
  }
  return X;
}

void suite_oracles_l1(Recorder& rec, const SuiteConfig& cfg) {
  // g = -i z_1 is linear: every displayed derivative of g_i carries a factor (l - 1).
  const ExampleSpec& s = cfg.example;
  const int d = 2 * (s.n + 1);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-1, 1);
  const std::string id = "oracles.trivial_curvature_branch";
  for (int k = 0; k < cfg.points; ++k) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = U(rng);
    if (std::hypot(p[0], p[1]) < 0.5) p[0] += 0.5;
    double r = 0;
    for (int i = 0; i < d; ++i)
      for (int gi : {0, 1})
        r = std::max({r, std::abs(oracle::dRe_g(1, gi, p, unit(d, i))), std::abs(oracle::dIm_g(1, gi, p, unit(d, i)))});
    rec.observe(id, "l_family_linear_g_constant_derivatives", 1e-14, r);
  }
  rec.note(id, "l = 1: dg is constant, A = 0 branch; the special chart itself is degenerate (Im g_0 = 0)");
}

void suite_oracles(Recorder& rec, const SpecialComplexChart& sc, const SuiteConfig& cfg) {
  const std::string P = "oracles.";
  const int n = sc.n, d = sc.dim;
  const auto pts = sc.chart.sample(cfg.points, cfg.seed);
  if (cfg.example.name == "trivial_flat") {
    for (const auto& p : pts) {
      rec.observe(P + "A_vanishes", "trivial_example_A_zero", 1e-14,
                  tensor3_of(sc.chart.eval("A", p, 0), d).max_abs());
      rec.observe(P + "moment_map", "moment_map_closed_form", 1e-13,
                  std::abs(sc.chart.eval("mu", p, 0)[0].value() - oracle::mu(n, p)));
    }
    return;
  }
  const int l = cfg.example.l;
  for (const auto& p : pts) {
    try {
      Mat eng = phi_jacobian(sc, p), perm(d, d);
      for (int i = 0; i <= n; ++i) {
        perm.col(i) = eng.col(2 * i);
        perm.col(n + 1 + i) = eng.col(2 * i + 1);
      }
      rec.observe(P + "jacobian", "l_family_jacobian_display", 1e-8, max_abs(Mat(perm - oracle::jacobian(n, l, p))));
      const Tensor3 G = tensor3_of(sc.chart.eval("Gamma", p, 0), d);
      const Tensor3 A = tensor3_of(sc.chart.eval("A", p, 0), d);
      const Tensor4 R = curvature(sc.chart.eval("Gamma_prime", p, 1), d);
      double rs = 0, ra = 0, rc = 0, rb = 0, rg = 0;
      for (int i = 0; i < d; ++i) {
        rs = std::max(rs, max_abs(Mat(G.slot(i) - oracle::S_matrix(n, l, p, unit(d, i)))));
        ra = std::max(ra, max_abs(Mat(A.slot(i) - oracle::A_matrix(n, l, p, unit(d, i)))));
        for (int j = 0; j < d; ++j) {
          const Vec X = unit(d, i), Y = unit(d, j);
          rc = std::max(rc, max_abs(Mat(R.endo(i, j) - oracle::R_cl(n, l, p, X, Y))));
          const double tr = (A.slot(i) * A.slot(j)).trace();
          rb = std::max(rb, std::abs(tr - oracle::TrA2(n, l, p, X, Y)));
          rg = std::max(rg, std::abs(tr - oracle::TrA2_via_g0(n, l, p, X, Y)));
        }
      }
      rec.observe(P + "connection", "l_family_special_connection_display", 1e-8, rs);
      rec.observe(P + "nabla_J", "l_family_nablaJ_display", 1e-8, ra);
      rec.observe(P + "curvature_cl", "l_family_nabla_prime_curvature_display", 1e-8, rc);
      rec.observe(P + "trace_bl", "l_family_trace_AA_display", 1e-8, rb);
      rec.observe(P + "trace_via_g0", "l_family_trace_AA_via_img0", 1e-8, rg);
      rec.observe(P + "moment_map", "moment_map_closed_form", 1e-13,
                  std::abs(sc.chart.eval("mu", p, 0)[0].value() - oracle::mu(n, p)));
    } catch (const std::exception& e) {
      for (const char* id : {"jacobian", "connection", "nabla_J", "curvature_cl", "trace_bl", "trace_via_g0"})
        rec.fail(P + id, "l_family_closed_forms", 1e-8, e.what());
    }
  }
  // abar of the base quotient in the kappa gauge
  try {
    auto bq = base_quotient(sc, kappa_connection(sc));
    const int D = bq.dim;
    for (const auto& w : bq.chart.sample(cfg.points, cfg.seed)) {
      const Mat X = kappa_lifts(bq, w);
      const Vec p = slice_embed(w);
      auto a = bq.chart.eval("abar", w, 0);
      double r = 0;
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          r = std::max(r, std::abs(a[i * D + j].value() - oracle::abar(n, p, X.col(i), X.col(j))));
      rec.observe(P + "abar_kappa", "l_family_abar_display", 1e-8, r);
    }
  } catch (const std::exception& e) {
    rec.fail(P + "abar_kappa", "l_family_abar_display", 1e-8, e.what());
  }
}

// ---------------------------------------------------------------------------------------
// conification

void conification_battery(Recorder& rec, const std::string& P, const ConificationData& data,
                          const SuiteConfig& cfg) {
  const auto mpts = data.M.sample(cfg.points, cfg.seed);
  using Pre = TildePreconditions;
  battery<Pre>(rec, P, mpts, [&](const Vec& y) { return tilde_preconditions(data, y); },
               {
                   {{"pre_rot_I1", "input_rotating_I1", 1e-8}, [](const Pre& r) { return r.rot_I1; }},
                   {{"pre_rot_I2", "input_rotating_I2", 1e-8}, [](const Pre& r) { return r.rot_I2; }},
                   {{"pre_closed_Theta", "input_Theta_closed", 1e-10}, [](const Pre& r) { return r.closed_Theta; }},
                   {{"pre_lie_Z_Theta", "input_Theta_Z_invariant", 1e-8}, [](const Pre& r) { return r.lie_Z_Theta; }},
                   {{"pre_df_iota", "input_df_moment", 1e-10}, [](const Pre& r) { return r.df_iota; }},
                   {{"pre_curvature", "bundle_curvature_potential", 1e-8}, [](const Pre& r) { return r.curvature; }},
                   {{"deta_type11", "bundle_curvature_type11_all_structures", 1e-7},
                    [](const Pre& r) { return r.curvature_type; }},
               });
  TildeChart tc;
  try {
    tc = build_tilde(data);
  } catch (const std::exception& e) {
    rec.fail(P + "construction", "conification_construction", 1e-9, e.what());
    return;
  }
  const auto tpts = tc.chart.sample(cfg.points, cfg.seed);
  using T = TildeChecks;
  battery<T>(rec, P, tpts, [&](const Vec& x) { return tilde_checks(tc, x); },
             {
                 {{"bracket_eR", "right_frame_brackets", 1e-12}, [](const T& r) { return r.bracket_eR; }},
                 {{"frames_at_one", "left_right_frames_at_one", 1e-14}, [](const T& r) { return r.frames_at_one; }},
                 {{"kernel_V1", "structures_kill_V1", 1e-12}, [](const T& r) { return r.kernel_V1; }},
                 {{"tilde_quaternionic", "degenerate_quaternion_relations", 1e-10},
                  [](const T& r) { return r.quaternionic; }},
                 {{"frame_action", "structures_on_right_frame", 1e-12}, [](const T& r) { return r.frame_action; }},
                 {{"lie_V1_I", "V1_preserves_structures", 1e-7}, [](const T& r) { return r.lie_V1_I; }},
                 {{"lie_e0R_I", "e0R_preserves_structures", 1e-7}, [](const T& r) { return r.lie_e0R_I; }},
                 {{"lie_V1_Yh", "V1_bracket_with_lift", 1e-7}, [](const T& r) { return r.lie_V1_Yh; }},
                 {{"df1_iota", "f1_moment", 1e-9}, [](const T& r) { return r.df1_iota; }},
                 {{"XP_Z1", "XP_commutes_Z1", 1e-7}, [](const T& r) { return r.XP_Z1; }},
                 {{"lie_XP_I", "XP_preserves_structures", 1e-7}, [](const T& r) { return r.lie_XP_I; }},
                 {{"lie_V1_XP", "V1_commutes_XP", 1e-7}, [](const T& r) { return r.lie_V1_XP; }},
                 {{"lie_V1_theta0", "V1_preserves_theta0", 1e-7}, [](const T& r) { return r.lie_V1_theta0; }},
             });
  fd_fields(rec, P + "tilde_", tc.chart, {"I1", "I2", "I3", "V1", "Z1", "XP", "eta", "theta0", "f1"}, tpts, cfg);

  SliceChart sc;
  try {
    sc = conification_slice(tc);
  } catch (const std::exception& e) {
    rec.fail(P + "slice_construction", "conification_slice", 1e-9, e.what());
    return;
  }
  const auto spts = sc.chart.sample(cfg.points, cfg.seed);
  using S = SliceChecks;
  double defect = 0;
  battery<S>(rec, P, spts,
             [&](const Vec& s) {
               auto r = slice_checks(sc, s);
               if (!r.obata_exists) defect = std::max(defect, r.obata_defect);
               return r;
             },
             {
                 {{"quaternionic", "conified_quaternion_relations", 1e-7}, [](const S& r) { return r.quaternionic; }},
                 {{"nijenhuis", "conified_structures_integrable", 1e-7}, [](const S& r) { return r.nijenhuis; }},
                 {{"euler", "conical_obata_euler_field", 1e-7}, [](const S& r) { return r.euler; }},
                 {{"obata_parallel", "conified_obata_parallel", 1e-7}, [](const S& r) { return r.obata_parallel; }},
                 {{"obata_torsion", "conified_obata_torsion_free", 1e-7}, [](const S& r) { return r.obata_torsion; }},
                 {{"lie_V_I", "V_preserves_structures", 1e-7}, [](const S& r) { return r.lie_V_I; }},
                 {{"lie_IV_I", "IV_rotates_structures", 1e-7}, [](const S& r) { return r.lie_IV_I; }},
                 {{"lie_V_nabla", "V_preserves_obata", 1e-7}, [](const S& r) { return r.lie_V_nabla; }},
                 {{"lie_IV_nabla", "IV_preserves_obata", 1e-7}, [](const S& r) { return r.lie_IV_nabla; }},
                 {{"lie_XP_I", "slice_XP_preserves_structures", 1e-7}, [](const S& r) { return r.lie_XP_I; }},
                 {{"lie_XP_nabla", "slice_XP_preserves_obata", 1e-7}, [](const S& r) { return r.lie_XP_nabla; }},
                 {{"lie_V_XP", "D_commutes_XP", 1e-7}, [](const S& r) { return r.lie_V_XP; }},
                 {{"lie_XP_theta0", "XP_preserves_theta0", 1e-7}, [](const S& r) { return r.lie_XP_theta0; }},
                 {{"projector", "slice_projector", 1e-12}, [](const S& r) { return r.projector; }},
             });
  if (defect > 0)
    for (const char* id : {"euler", "obata_parallel", "obata_torsion", "lie_V_nabla", "lie_IV_nabla", "lie_XP_nabla"})
      rec.note(P + id, obata_note(defect));
  std::vector<std::string> fields{"I1", "I2", "I3", "V", "IV1", "IV2", "IV3", "XP", "theta0"};
  if (defect == 0) fields.push_back("Gamma");
  fd_fields(rec, P + "slice_", sc.chart, fields, spts, cfg);
}

// ---------------------------------------------------------------------------------------
// hq

void hq_battery(Recorder& rec, const std::string& P, const ConificationData& data, const SuiteConfig& cfg) {
  SliceChart sc;
  try {
    sc = conification_slice(build_tilde(data));
  } catch (const std::exception& e) {
    rec.fail(P + "construction", "hq_construction", 1e-9, e.what());
    return;
  }
  const auto spts = sc.chart.sample(cfg.points, cfg.seed);
  using TP = ThetaPrimeChecks;
  battery<TP>(rec, P, spts, [&](const Vec& s) { return theta_prime_checks(sc, s); },
              {
                  {{"theta0_V", "theta0_on_V", 1e-12}, [](const TP& r) { return r.theta0_V; }},
                  {{"decomposition", "vertical_horizontal_splitting", 1e-10}, [](const TP& r) { return r.decomposition; }},
                  {{"h_invariant", "horizontal_space_quaternionic", 1e-10}, [](const TP& r) { return r.h_invariant; }},
                  {{"lie_V_theta", "V_preserves_theta_prime", 1e-7}, [](const TP& r) { return r.lie_V; }},
                  {{"lie_IV_theta", "IV_rotates_theta_prime", 1e-7}, [](const TP& r) { return r.lie_IV; }},
                  {{"closed_theta0", "theta0_closed", 1e-12}, [](const TP& r) { return r.closed_theta0; }},
              });
  for (const Quat<double>& z : {Quat<double>{1, 0, 0, 0}, Quat<double>{0.2, -0.6, 0.9, 0.3}}) {
    BarChart bc;
    try {
      bc = bar_chart(sc, z);
    } catch (const std::exception& e) {
      rec.fail(P + "bar_construction", "quaternionic_quotient", 1e-9, e.what());
      continue;
    }
    const auto ypts = bc.chart.sample(cfg.points, cfg.seed);
    using B = BarChecks;
    double defect = 0;
    battery<B>(rec, P, ypts,
               [&](const Vec& y) {
                 auto r = bar_checks(bc, y, kOtherSections);
                 if (!r.nabla_exists) defect = std::max(defect, r.obata_defect);
                 return r;
               },
               {
                   {{"quaternionic", "quotient_quaternion_relations", 1e-9}, [](const B& r) { return r.quaternionic; }},
                   {{"routes_agree", "quotient_slice_vs_direct_formula", 1e-6}, [](const B& r) { return r.routes_agree; }},
                   {{"section_independence", "quotient_section_independent", 1e-6},
                    [](const B& r) { return r.section_angle; }},
                   {{"lie_X_Q", "X_preserves_quaternionic_structure", 1e-7}, [](const B& r) { return r.lie_X_Q; }},
                   {{"torsion", "quotient_connection_torsion_free", 1e-8}, [](const B& r) { return r.torsion; }},
                   {{"q_preserved", "quotient_connection_preserves_Q", 1e-6}, [](const B& r) { return r.q_preserved; }},
                   {{"lie_X_nabla", "X_affine_for_quotient_connection", 1e-7}, [](const B& r) { return r.lie_X_nabla; }},
                   {{"nabla_section", "quotient_connection_section_independent", 1e-6},
                    [](const B& r) { return r.nabla_section; }},
               });
    if (defect > 0)
      for (const char* id : {"torsion", "q_preserved", "lie_X_nabla", "nabla_section"}) rec.note(P + id, obata_note(defect));
    if (z[0] == 1.0) {
      std::vector<std::string> fields{"I1", "I2", "I3", "Id1", "Id2", "Id3", "X"};
      if (defect == 0) fields.push_back("Gamma");
      fd_fields(rec, P + "bar_", bc.chart, fields, ypts, cfg);
    }
  }
}

// ---------------------------------------------------------------------------------------
// cprojective

Tensor3 gamma_at(const BaseQuotientChart& bq, const Vec& w) {
  return tensor3_of(bq.chart.eval("Gamma_prime", w, 0), bq.dim);
}

void suite_cprojective(Recorder& rec, const SpecialComplexChart& sc, const SuiteConfig& cfg,
                       std::vector<std::string>& skipped) {
  const std::string P = "cprojective.";
  BaseQuotientChart ka, tr;
  try {
    ka = base_quotient(sc, kappa_connection(sc));
    tr = base_quotient(sc, trivialization_connection(sc));
  } catch (const ConstructionError& e) {
    rec.fail(P + "construction", "base_quotient_connection_" + e.axiom(), 1e-9, e.what());
    return;
  } catch (const std::exception& e) {
    rec.fail(P + "construction", "base_quotient_construction", 1e-9, e.what());
    return;
  }
  const bool weyl = ka.dim >= 4;
  if (!weyl) skipped.push_back("cprojective Rho and Weyl checks: base of real dimension 2");
  const auto pts = ka.chart.sample(cfg.points, cfg.seed);
  using F = FundamentalChecks;
  std::vector<std::pair<Check, std::function<double(const F&)>>> checks{
      {{"nabla_J", "base_connection_complex", 1e-9}, [](const F& r) { return r.nabla_J; }},
      {{"torsion", "base_connection_torsion_free", 1e-12}, [](const F& r) { return r.torsion; }},
      {{"b_eq", "bbar_from_abar", 1e-8}, [](const F& r) { return r.b_eq; }},
      {{"calB_symmetric", "trace_BB_symmetric", 1e-9}, [](const F& r) { return r.calB_symmetric; }},
      {{"calB_hermitian", "trace_BB_hermitian", 1e-9}, [](const F& r) { return r.calB_hermitian; }},
      {{"A_xi", "A_on_vertical_xi", 1e-12}, [](const F& r) { return r.A_xi; }},
      {{"A_Jxi", "A_on_vertical_Jxi", 1e-12}, [](const F& r) { return r.A_Jxi; }},
      {{"T_vanish", "T_vanishes_on_vertical", 1e-12}, [](const F& r) { return r.T_vanish; }},
      {{"dgamma1", "dgamma1_minus_two_abar_alt", 1e-7}, [](const F& r) { return r.dgamma1; }},
      {{"dgamma2", "dgamma2_two_abarJ_alt", 1e-7}, [](const F& r) { return r.dgamma2; }},
      {{"curvature", "base_curvature_formula", 1e-9}, [](const F& r) { return r.curvature; }},
      {{"ricci_identity", "base_ricci_formula", 1e-7}, [](const F& r) { return r.ricci_identity; }},
      {{"square_B_gauge", "B_square_gauge_invariant", 1e-8}, [](const F& r) { return r.square_B_gauge; }},
      {{"invariance", "induced_data_cstar_invariant", 1e-10}, [](const F& r) { return r.invariance; }},
  };
  if (weyl) {
    checks.push_back({{"rho_identity", "rho_from_trace_BB_and_abar", 1e-7}, [](const F& r) { return r.rho_identity; }});
    checks.push_back({{"bar_a", "abar_from_rho", 1e-7}, [](const F& r) { return r.bar_a; }});
    checks.push_back({{"weyl_closed_form", "cprojective_weyl_closed_form", 1e-6}, [](const F& r) { return r.weyl_closed; }});
    checks.push_back({{"weyl_type11", "cprojective_weyl_type11", 1e-6}, [](const F& r) { return r.weyl_type11; }});
  }
  checks.push_back({{"ricci_min_eig", "kappa_ricci_nonnegative", 1e-8},
                    [](const F& r) { return std::max(0.0, -r.ricci_min_eig); }});
  checks.push_back({{"ricci_asym", "kappa_ricci_symmetric", 1e-10}, [](const F& r) { return r.ricci_asym; }});
  battery<F>(rec, P, pts, [&](const Vec& w) { return fundamental_checks(ka, w); }, checks);

  const Mat J = standard_J(ka.dim);
  for (const auto& w : pts) {
    try {
      auto ch = cproj_change_oneform(gamma_at(ka, w), gamma_at(tr, w), J);
      rec.observe(P + "gauge_related", "gauges_cprojectively_related", 1e-7, ch.residual);
      const Vec theta0 = values_of(tr.chart.eval("gamma1", w, 0)) - values_of(ka.chart.eval("gamma1", w, 0));
      rec.observe(P + "gauge_theta", "gauge_change_oneform", 1e-7, max_abs(Vec(ch.theta - theta0)));
      if (weyl) {
        Tensor4 a = cproj_weyl(ka.chart.program("Gamma_prime"), J, w);
        Tensor4 b = cproj_weyl(tr.chart.program("Gamma_prime"), J, w);
        double r = 0;
        for (std::size_t i = 0; i < a.v.size(); ++i) r = std::max(r, std::abs(a.v[i] - b.v[i]));
        rec.observe(P + "weyl_gauge_invariance", "cprojective_weyl_gauge_invariant", 1e-6, r);
      }
    } catch (const std::exception& e) {
      rec.fail(P + "gauge_related", "gauges_cprojectively_related", 1e-7, e.what());
    }
  }
  fd_fields(rec, P, ka.chart, {"Gamma_prime", "abar", "bbar", "B", "gamma1", "gamma2"}, pts, cfg);
}


}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"special_axioms", "rigid_cmap", "oracles", "conification",
                                              "hq",             "cprojective", "su3",    "hopf"};
  return names;
}

std::vector<std::string> default_suites(const ExampleSpec& spec) {
  if (spec.name == "su3_lie") return {"su3"};
  if (spec.name == "hopf_linear") return {"hopf"};
  return {"special_axioms", "rigid_cmap", "oracles", "conification", "hq", "cprojective"};
}

std::vector<std::string> parse_suites(const std::string& list, const ExampleSpec& spec) {
  if (list == "all") return default_suites(spec);
  std::vector<std::string> want;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    if (std::find(suite_names().begin(), suite_names().end(), item) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + item + "'");
    want.push_back(item);
  }
  std::vector<std::string> out;
  for (const auto& s : suite_names())
    if (std::find(want.begin(), want.end(), s) != want.end()) out.push_back(s);
  return out;
}

void validate(const SuiteConfig& cfg) {
  if (cfg.points < 1) throw std::invalid_argument("points must be >= 1");
  if (cfg.jet_order < 2) throw std::invalid_argument("jet order must be >= 2 (second derivatives are checked)");
  for (const auto& [id, tol] : cfg.tolerances)
    if (!(tol > 0)) throw std::invalid_argument("tolerance for " + id + " must be > 0");
  const auto& e = cfg.example;
  if (e.name != "l_family" && e.name != "trivial_flat" && e.name != "su3_lie" && e.name != "hopf_linear")
    throw std::invalid_argument("unknown example '" + e.name + "'");
  if (e.n < 1) throw std::invalid_argument("n must be >= 1");
  for (const auto& s : cfg.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + s + "'");
    if ((s != "su3" && s != "hopf") && !is_geometry(e.name))
      throw std::invalid_argument("suite " + s + " needs a special complex example (l_family or trivial_flat)");
  }
}

ojson config_json(const SuiteConfig& cfg) {
  ojson j;
  j["example"] = {{"name", cfg.example.name}, {"n", cfg.example.n}, {"l", cfg.example.l}, {"c", cfg.example.c}};
  j["suites"] = cfg.suites;
  j["points"] = cfg.points;
  j["seed"] = cfg.seed;
  j["jet_order"] = cfg.jet_order;
  j["supplement_points"] = std::min(cfg.points, kSupplementPoints);
  ojson tol = ojson::object();
  for (const auto& [id, t] : cfg.tolerances) tol[id] = t;
  j["tolerances"] = tol;
  return j;
}

VerificationReport run(const SuiteConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.config = config_json(cfg);
  Recorder rec;
  std::vector<std::string> skipped;
  auto wants = [&](const char* s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };
  const bool geometry =
      wants("special_axioms") || wants("rigid_cmap") || wants("oracles") || wants("conification") || wants("hq") ||
      wants("cprojective");

  // Constructions are shared by the later suites.
  std::optional<Pipeline> pl;
  if (geometry) {
    try {
      pl = make_pipeline(cfg.example);
    } catch (const std::exception& e) {
      rec.fail("construction." + cfg.example.name, "special_complex_construction", 1e-9, e.what());
      if (wants("oracles") && cfg.example.name == "l_family" && cfg.example.l == 1) suite_oracles_l1(rec, cfg);
    }
  }
  if (pl) {
    const ExampleSpec& ex = cfg.example;
    if (wants("special_axioms")) suite_special(rec, pl->special, cfg);
    if (wants("rigid_cmap")) suite_rigid(rec, pl->tn, cfg);
    if (wants("oracles")) suite_oracles(rec, pl->special, cfg);
    // Integrable inputs on the same TN, run at a reduced point count.
    SuiteConfig sup = cfg;
    sup.points = std::min(cfg.points, kSupplementPoints);
    if (wants("conification")) {
      conification_battery(rec, "conification.", pl->data, cfg);
      conification_battery(rec, "conification.integrable_zero_form.", zero_form_data(pl->tn), sup);
      if (ex.name == "trivial_flat")
        conification_battery(rec, "conification.integrable_flat_kahler.", flat_kahler_data(pl->tn, ex.c), sup);
    }
    if (wants("hq")) {
      hq_battery(rec, "hq.", pl->data, cfg);
      hq_battery(rec, "hq.integrable_zero_form.", zero_form_data(pl->tn), sup);
      if (ex.name == "trivial_flat")
        hq_battery(rec, "hq.integrable_flat_kahler.", flat_kahler_data(pl->tn, ex.c), sup);
    }
    if (wants("cprojective")) suite_cprojective(rec, pl->special, cfg, skipped);
  }
  rec.flush_into(rep);
  if (wants("su3")) rep.append(su3_verify());
  if (wants("hopf")) rep.append(hopf_linear_verify(cfg.example.n, {0, 1, 0, 0}, cfg.points, cfg.seed));
  for (auto& r : rep.checks) {
    auto ov = cfg.tolerances.find(r.id);
    if (ov != cfg.tolerances.end()) r = make_record(r.id, r.anchor, r.points, r.max_residual, ov->second, r.note);
  }
  if (!skipped.empty()) rep.config["skipped"] = skipped;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace hqg
