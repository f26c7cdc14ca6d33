#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hqg/jet.hpp"

namespace hqg {

// Singular or badly conditioned degree-0 block.
class DegeneratePointError : public std::runtime_error {
 public:
  DegeneratePointError(const std::string& what, double rcond)
      : std::runtime_error(what + " (rcond " + std::to_string(rcond) + ")"), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

// Overdetermined system had a residual above the consistency threshold.
class InconsistentSystemError : public std::runtime_error {
 public:
  InconsistentSystemError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Row-major dense matrix of jets.
struct JMat {
  int rows = 0, cols = 0;
  std::vector<Jet> a;
  JMat() = default;
  JMat(int r, int c, const Jet& fill = Jet(0.0)) : rows(r), cols(c), a(r * c, fill) {}
  Jet& operator()(int i, int j) { return a[i * cols + j]; }
  const Jet& operator()(int i, int j) const { return a[i * cols + j]; }
};

JMat operator*(const JMat& x, const JMat& y);
std::vector<Jet> operator*(const JMat& x, const std::vector<Jet>& v);

inline double& default_rcond_threshold() {
  static double t = 1e-10;
  return t;
}

// Solves A x = b over the jet ring using one LU of the degree-0 block.
std::vector<Jet> jet_linear_solve(const JMat& A, const std::vector<Jet>& b,
                                  double rcond_min = default_rcond_threshold());
// Same, several right-hand sides given as columns of B.
JMat jet_linear_solve(const JMat& A, const JMat& B, double rcond_min = default_rcond_threshold());

// Sparse overdetermined linear system with jet coefficients.
struct JetSystem {
  struct Entry {
    int col;
    Jet coef;
  };
  int unknowns = 0;
  std::vector<std::vector<Entry>> rows;
  std::vector<Jet> rhs;
  void add_row(std::vector<Entry> entries, Jet r) {
    rows.push_back(std::move(entries));
    rhs.push_back(std::move(r));
  }
};

struct LstsqResult {
  std::vector<Jet> x;
  double residual = 0.0;  // max abs degree-0 residual
  double rcond = 0.0;     // of the degree-0 normal matrix
};

// Least squares over the jet ring up to out_order (consistent systems only).
// Throws InconsistentSystemError if the degree-0 residual exceeds max_residual.
LstsqResult jet_lstsq(const JetSystem& sys, int out_order, double max_residual = 1e-6,
                      double rcond_min = 1e-20);

}  // namespace hqg
