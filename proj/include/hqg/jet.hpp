#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hqg {

// Raised when a jet operation hits a singular value (division by ~0, log of ~0, ...).
class JetDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Layout of all monomials of total degree <= order in nvars variables.
// Sorted by degree, then lexicographically (descending in the first variable),
// so the layout for order k is a prefix of the layout for any order > k.
class JetSpace {
 public:
  struct Triple {
    std::uint32_t a, b, c;
  };
  struct DerivEntry {
    std::uint32_t src, dst;
    double factor;
  };

  static const JetSpace* get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return size_by_degree_.back(); }
  // number of monomials with degree <= k
  std::size_t size_upto(int k) const;
  int degree(std::size_t m) const { return degree_[m]; }
  std::span<const int> exponents(std::size_t m) const {
    return {exps_.data() + m * nvars_, static_cast<std::size_t>(nvars_)};
  }
  std::size_t find(std::span<const int> alpha) const;
  std::size_t unit(int var) const { return 1 + var; }

  const std::vector<Triple>& mul_table() const { return mul_; }
  const std::vector<DerivEntry>& deriv_table(int var) const { return deriv_[var]; }

 private:
  JetSpace(int nvars, int order);

  int nvars_;
  int order_;
  std::vector<int> exps_;
  std::vector<int> degree_;
  std::vector<std::size_t> size_by_degree_;
  std::vector<Triple> mul_;
  std::vector<std::vector<DerivEntry>> deriv_;
};

// Variables above this count are refused (dense storage grows as C(n+K, K)).
int jet_dimension_cap();
void set_jet_dimension_cap(int cap);

inline constexpr int kUnboundedOrder = 1 << 20;

// Truncated multivariate Taylor polynomial. Coefficients are Taylor coefficients,
// i.e. partial derivative divided by the multi-index factorial.
//
// A jet built from a bare double has no space; it acts as a constant in any space.
// Constant jets store only their value.
class Jet {
 public:
  Jet() : Jet(0.0) {}
  Jet(double v) : c_{v} {}  // NOLINT(google-explicit-constructor)
  Jet(const JetSpace* sp, double v) : sp_(sp), c_{v} {}

  static Jet variable(const JetSpace* sp, int var, double value);
  static Jet from_coeffs(const JetSpace* sp, std::vector<double> coeffs);

  const JetSpace* space() const { return sp_; }
  int order() const;
  int nvars() const { return sp_ ? sp_->nvars() : 0; }
  bool is_constant() const { return konst_; }
  double value() const { return c_[0]; }
  double coeff(std::size_t m) const { return m < c_.size() ? c_[m] : 0.0; }
  // Full coefficient vector in the jet's own space (constants are expanded).
  std::vector<double> coeffs() const;
  // Raw storage: size 1 for constants, space size otherwise.
  const std::vector<double>& raw() const { return c_; }

  // first partial derivative in variable var (not a Taylor coefficient: same thing at degree 1)
  double d(int var) const { return (konst_ || !sp_) ? 0.0 : c_[1 + var]; }

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator*=(double s);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(double s, const Jet& a);
  friend Jet operator*(const Jet& a, double s) { return s * a; }
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet truncate(const Jet& j, int order);
  friend Jet derivative(const Jet& j, int var);
  friend Jet apply_series(const Jet& a, std::span<const double> taylor);

 private:
  const JetSpace* sp_ = nullptr;
  std::vector<double> c_;
  bool konst_ = true;
};

std::vector<Jet> seed_variables(std::span<const double> point, int order);
// Seeds over nvars variables where point[i] is attached to variable offset+i.
std::vector<Jet> seed_block(const JetSpace* sp, std::span<const double> point, int offset);

double extract_partial(const Jet& j, std::span<const int> alpha);

Jet truncate(const Jet& j, int order);
// Partial derivative; the order drops by one.
Jet derivative(const Jet& j, int var);
// Evaluates sum_k taylor[k] (a - a0)^k with taylor[k] = f^(k)(a0)/k!.
Jet apply_series(const Jet& a, std::span<const double> taylor);

Jet recip(const Jet& a);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, double p);
Jet ipow(const Jet& a, int p);

// Keep the variables listed in vars (in that order); the others are set to zero displacement.
Jet restrict_vars(const Jet& j, std::span<const int> vars);

// Taylor composition. Inputs base[i] are jets in m variables centered at x0, and
// outer are m jets (any space) with outer[v].value() == x0[v]. Returns base[i](outer).
class Composer {
 public:
  explicit Composer(std::span<const Jet> outer);
  Jet apply(const Jet& base) const;
  std::vector<Jet> apply(std::span<const Jet> base) const;
  bool identity() const { return identity_; }

 private:
  std::vector<Jet> basis_;
  const JetSpace* outer_sp_ = nullptr;
  int m_ = 0;
  int order_ = 0;
  bool identity_ = false;
};

// Complex jet pair, used to write holomorphic data.
struct CJet {
  Jet re, im;
  CJet() = default;
  CJet(Jet r, Jet i) : re(std::move(r)), im(std::move(i)) {}
  CJet(double r) : re(r), im(0.0) {}  // NOLINT(google-explicit-constructor)
};

CJet operator+(const CJet& a, const CJet& b);
CJet operator-(const CJet& a, const CJet& b);
CJet operator-(const CJet& a);
CJet operator*(const CJet& a, const CJet& b);
CJet operator/(const CJet& a, const CJet& b);
CJet cipow(const CJet& a, int p);
inline CJet I_times(const CJet& a) { return {-a.im, a.re}; }

}  // namespace hqg
