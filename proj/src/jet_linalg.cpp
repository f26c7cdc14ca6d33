#include "hqg/jet_linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <utility>

namespace hqg {

namespace {

const JetSpace* common_space(const JetSpace* sp, const Jet& j) {
  const JetSpace* o = j.space();
  if (!o) return sp;
  if (!sp) return o;
  if (sp->nvars() != o->nvars()) throw std::invalid_argument("jet variable count mismatch");
  return o->order() < sp->order() ? o : sp;
}

// pairs (a, b) with a != 0 and a + b = c, bucketed by c
std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> convolution_buckets(
    const JetSpace* sp) {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out(sp->size());
  for (const auto& t : sp->mul_table())
    if (t.a != 0) out[t.c].emplace_back(t.a, t.b);
  return out;
}

}  // namespace

JMat operator*(const JMat& x, const JMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("jet matrix shape mismatch");
  JMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < y.cols; ++j) {
      Jet s(0.0);
      for (int k = 0; k < x.cols; ++k) {
        const Jet& a = x(i, k);
        const Jet& b = y(k, j);
        if ((a.is_constant() && a.value() == 0.0) || (b.is_constant() && b.value() == 0.0))
          continue;
        s += a * b;
      }
      r(i, j) = s;
    }
  return r;
}

std::vector<Jet> operator*(const JMat& x, const std::vector<Jet>& v) {
  if (x.cols != static_cast<int>(v.size())) throw std::invalid_argument("jet matrix shape");
  std::vector<Jet> r(x.rows, Jet(0.0));
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Jet& a = x(i, k);
      if (a.is_constant() && a.value() == 0.0) continue;
      r[i] += a * v[k];
    }
  return r;
}

JMat jet_linear_solve(const JMat& A, const JMat& B, double rcond_min) {
  const int n = A.rows;
  if (A.cols != n || B.rows != n) throw std::invalid_argument("jet_linear_solve shape");
  const int m = B.cols;
  const JetSpace* sp = nullptr;
  for (const auto& j : A.a) sp = common_space(sp, j);
  for (const auto& j : B.a) sp = common_space(sp, j);
  const std::size_t S = sp ? sp->size() : 1;

  std::vector<Eigen::MatrixXd> Ac(S);
  std::vector<char> Anz(S, 0);
  Ac[0] = Eigen::MatrixXd::Zero(n, n);
  Anz[0] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& raw = A(i, j).raw();
      const std::size_t lim = std::min(raw.size(), S);
      for (std::size_t c = 0; c < lim; ++c) {
        if (raw[c] == 0.0) continue;
        if (!Anz[c]) {
          Ac[c] = Eigen::MatrixXd::Zero(n, n);
          Anz[c] = 1;
        }
        Ac[c](i, j) = raw[c];
      }
    }
  std::vector<Eigen::MatrixXd> X(S, Eigen::MatrixXd::Zero(n, m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const auto& raw = B(i, j).raw();
      const std::size_t lim = std::min(raw.size(), S);
      for (std::size_t c = 0; c < lim; ++c) X[c](i, j) = raw[c];
    }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Ac[0]);
  // the estimator can miss exact zero pivots, so the pivot ratio is checked as well
  const auto piv = lu.matrixLU().diagonal().cwiseAbs();
  const double rc = std::min(lu.rcond(), n ? piv.minCoeff() / std::max(piv.maxCoeff(), 1e-300) : 1.0);
  if (!(rc >= rcond_min)) throw DegeneratePointError("degenerate point in jet linear solve", rc);

  if (sp) {
    auto buckets = convolution_buckets(sp);
    for (std::size_t c = 0; c < S; ++c) {
      for (auto [a, b] : buckets[c])
        if (Anz[a]) X[c].noalias() -= Ac[a] * X[b];
      X[c] = lu.solve(X[c]);
    }
  } else {
    X[0] = lu.solve(X[0]);
  }

  JMat out(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      if (!sp) {
        out(i, j) = Jet(X[0](i, j));
        continue;
      }
      std::vector<double> c(S);
      for (std::size_t k = 0; k < S; ++k) c[k] = X[k](i, j);
      out(i, j) = Jet::from_coeffs(sp, std::move(c));
    }
  return out;
}

std::vector<Jet> jet_linear_solve(const JMat& A, const std::vector<Jet>& b, double rcond_min) {
  JMat B(static_cast<int>(b.size()), 1);
  for (std::size_t i = 0; i < b.size(); ++i) B.a[i] = b[i];
  JMat X = jet_linear_solve(A, B, rcond_min);
  return X.a;
}

LstsqResult jet_lstsq(const JetSystem& sys, int out_order, double max_residual,
                      double rcond_min) {
  const int nu = sys.unknowns;
  const int nr = static_cast<int>(sys.rows.size());
  const JetSpace* sp = nullptr;
  for (int r = 0; r < nr; ++r) {
    for (const auto& e : sys.rows[r]) sp = common_space(sp, e.coef);
    sp = common_space(sp, sys.rhs[r]);
  }
  if (sp && sp->order() > out_order) sp = JetSpace::get(sp->nvars(), out_order);
  const std::size_t S = sp ? sp->size() : 1;

  // rows are equilibrated by their degree-0 norm; the same factor applies at every degree
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(nr);
  for (int r = 0; r < nr; ++r) {
    double s2 = 0;
    for (const auto& e : sys.rows[r]) s2 += e.coef.value() * e.coef.value();
    if (s2 > 0) scale[r] = 1.0 / std::sqrt(s2);
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < nr; ++r)
    for (const auto& e : sys.rows[r])
      if (e.coef.value() != 0.0) trip.emplace_back(r, e.col, scale[r] * e.coef.value());
  Eigen::SparseMatrix<double> A0(nr, nu);
  A0.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> A0t = A0.transpose();
  Eigen::SparseMatrix<double> N0 = A0t * A0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt(N0);
  LstsqResult res;
  // pivot ratio of the LDL^T factorization stands in for the reciprocal condition number
  if (llt.info() == Eigen::Success && nu > 0) {
    const Eigen::VectorXd D = llt.vectorD();
    const double lo = D.minCoeff(), hi = D.cwiseAbs().maxCoeff();
    res.rcond = hi > 0 && lo > 0 ? lo / hi : 0.0;
  } else {
    res.rcond = nu == 0 ? 1.0 : 0.0;
  }
  if (!(res.rcond >= rcond_min))
    throw DegeneratePointError("degenerate point in least-squares solve", res.rcond);

  // normal equations followed by refinement steps on the residual
  auto solve = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd x = llt.solve(A0t * b);
    for (int it = 0; it < 4; ++it) {
      Eigen::VectorXd r = b - A0 * x;
      x += llt.solve(A0t * r);
    }
    return x;
  };

  std::vector<Eigen::VectorXd> X(S);
  Eigen::VectorXd rhs(nr);
  for (int r = 0; r < nr; ++r) rhs[r] = scale[r] * sys.rhs[r].value();
  X[0] = solve(rhs);
  Eigen::VectorXd r0 = (A0 * X[0] - rhs).cwiseQuotient(scale);
  res.residual = r0.size() ? r0.cwiseAbs().maxCoeff() : 0.0;
  if (res.residual > max_residual)
    throw InconsistentSystemError("inconsistent least-squares system", res.residual);

  if (sp) {
    auto buckets = convolution_buckets(sp);
    for (std::size_t c = 1; c < S; ++c) {
      for (int r = 0; r < nr; ++r) {
        double v = sys.rhs[r].coeff(c);
        for (const auto& e : sys.rows[r]) {
          const auto& raw = e.coef.raw();
          for (auto [a, b] : buckets[c])
            if (a < raw.size()) v -= raw[a] * X[b][e.col];
        }
        rhs[r] = scale[r] * v;
      }
      X[c] = solve(rhs);
    }
  }

  res.x.resize(nu);
  for (int i = 0; i < nu; ++i) {
    if (!sp) {
      res.x[i] = Jet(X[0][i]);
      continue;
    }
    std::vector<double> c(S);
    for (std::size_t k = 0; k < S; ++k) c[k] = X[k][i];
    res.x[i] = Jet::from_coeffs(sp, std::move(c));
  }
  return res;
}

}  // namespace hqg
