#include "hqg/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

namespace hqg {

namespace {

std::mutex g_space_mutex;
std::map<std::pair<int, int>, std::unique_ptr<JetSpace>>& space_registry() {
  static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> reg;
  return reg;
}
int g_dim_cap = 32;

std::string key_of(std::span<const int> alpha) {
  std::string k(alpha.size(), '\0');
  for (std::size_t i = 0; i < alpha.size(); ++i) k[i] = static_cast<char>(alpha[i]);
  return k;
}

// all exponent vectors of total degree deg in n variables, lex descending
void monomials_of_degree(int n, int deg, std::vector<int>& out) {
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n - 1) {
      cur[var] = left;
      out.insert(out.end(), cur.begin(), cur.end());
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[var] = e;
      self(self, var + 1, left - e);
    }
  };
  rec(rec, 0, deg);
}

const JetSpace* merge_spaces(const JetSpace* a, const JetSpace* b) {
  if (!a) return b;
  if (!b) return a;
  if (a == b) return a;
  if (a->nvars() != b->nvars()) throw std::invalid_argument("jet variable count mismatch");
  return a->order() <= b->order() ? a : b;
}

}  // namespace

int jet_dimension_cap() { return g_dim_cap; }
void set_jet_dimension_cap(int cap) {
  if (cap < 1) throw std::invalid_argument("dimension cap must be positive");
  g_dim_cap = cap;
}

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  size_by_degree_.reserve(order + 1);
  for (int k = 0; k <= order; ++k) {
    monomials_of_degree(nvars, k, exps_);
    size_by_degree_.push_back(exps_.size() / nvars);
  }
  const std::size_t n = size();
  degree_.resize(n);
  std::unordered_map<std::string, std::size_t> lookup;
  lookup.reserve(n * 2);
  for (std::size_t m = 0; m < n; ++m) {
    auto e = exponents(m);
    int s = 0;
    for (int x : e) s += x;
    degree_[m] = s;
    lookup.emplace(key_of(e), m);
  }
  std::vector<int> tmp(nvars);
  for (std::size_t a = 0; a < n; ++a) {
    auto ea = exponents(a);
    const std::size_t bmax = size_upto(order - degree_[a]);
    for (std::size_t b = 0; b < bmax; ++b) {
      auto eb = exponents(b);
      for (int v = 0; v < nvars; ++v) tmp[v] = ea[v] + eb[v];
      mul_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(lookup.at(key_of(tmp)))});
    }
  }
  deriv_.resize(nvars);
  for (int v = 0; v < nvars; ++v) {
    for (std::size_t m = 0; m < n; ++m) {
      auto e = exponents(m);
      if (e[v] == 0) continue;
      std::copy(e.begin(), e.end(), tmp.begin());
      tmp[v] -= 1;
      deriv_[v].push_back({static_cast<std::uint32_t>(m),
                           static_cast<std::uint32_t>(lookup.at(key_of(tmp))),
                           static_cast<double>(e[v])});
    }
  }
}

const JetSpace* JetSpace::get(int nvars, int order) {
  if (nvars < 1) throw std::invalid_argument("jet space needs at least one variable");
  if (order < 0) throw std::invalid_argument("negative jet order");
  if (nvars > g_dim_cap)
    throw std::invalid_argument("jet dimension " + std::to_string(nvars) + " exceeds cap " +
                                std::to_string(g_dim_cap));
  std::lock_guard<std::mutex> lock(g_space_mutex);
  auto& reg = space_registry();
  auto key = std::make_pair(nvars, order);
  auto it = reg.find(key);
  if (it != reg.end()) return it->second.get();
  auto* sp = new JetSpace(nvars, order);
  reg.emplace(key, std::unique_ptr<JetSpace>(sp));
  return sp;
}

std::size_t JetSpace::size_upto(int k) const {
  if (k < 0) return 0;
  if (k > order_) k = order_;
  return size_by_degree_[k];
}

std::size_t JetSpace::find(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != nvars_) throw std::out_of_range("multi-index length");
  int deg = 0;
  for (int x : alpha) {
    if (x < 0) throw std::out_of_range("negative multi-index entry");
    deg += x;
  }
  if (deg > order_) throw std::out_of_range("multi-index degree exceeds jet order");
  for (std::size_t m = size_upto(deg - 1); m < size_upto(deg); ++m) {
    auto e = exponents(m);
    if (std::equal(e.begin(), e.end(), alpha.begin())) return m;
  }
  throw std::out_of_range("multi-index not found");
}

// ---------------------------------------------------------------- Jet

Jet Jet::variable(const JetSpace* sp, int var, double value) {
  if (var < 0 || var >= sp->nvars()) throw std::out_of_range("variable index");
  Jet j;
  j.sp_ = sp;
  j.konst_ = sp->order() == 0;
  if (j.konst_) {
    j.c_ = {value};
    return j;
  }
  j.c_.assign(sp->size(), 0.0);
  j.c_[0] = value;
  j.c_[sp->unit(var)] = 1.0;
  return j;
}

Jet Jet::from_coeffs(const JetSpace* sp, std::vector<double> coeffs) {
  if (coeffs.size() != sp->size()) throw std::invalid_argument("coefficient count mismatch");
  Jet j;
  j.sp_ = sp;
  j.konst_ = false;
  j.c_ = std::move(coeffs);
  return j;
}

int Jet::order() const { return sp_ ? sp_->order() : kUnboundedOrder; }

std::vector<double> Jet::coeffs() const {
  if (!konst_) return c_;
  std::vector<double> out(sp_ ? sp_->size() : 1, 0.0);
  out[0] = c_[0];
  return out;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Jet truncate(const Jet& j, int order) {
  if (!j.sp_ || order >= j.order()) return j;
  Jet r;
  r.sp_ = JetSpace::get(j.sp_->nvars(), order);
  r.konst_ = j.konst_;
  if (j.konst_) {
    r.c_ = {j.c_[0]};
  } else {
    r.c_.assign(j.c_.begin(), j.c_.begin() + r.sp_->size());
  }
  return r;
}

namespace {

Jet add_impl(const Jet& a, const Jet& b, double sb) {
  const JetSpace* sp = merge_spaces(a.space(), b.space());
  if (a.is_constant() && b.is_constant()) {
    const double v = a.value() + sb * b.value();
    return sp ? Jet(sp, v) : Jet(v);
  }
  std::vector<double> c(sp->size(), 0.0);
  const auto& ra = a.raw();
  const auto& rb = b.raw();
  const std::size_t na = std::min(ra.size(), c.size());
  for (std::size_t m = 0; m < na; ++m) c[m] = ra[m];
  const std::size_t nb = std::min(rb.size(), c.size());
  for (std::size_t m = 0; m < nb; ++m) c[m] += sb * rb[m];
  return Jet::from_coeffs(sp, std::move(c));
}

}  // namespace

Jet operator+(const Jet& a, const Jet& b) { return add_impl(a, b, 1.0); }
Jet operator-(const Jet& a, const Jet& b) { return add_impl(a, b, -1.0); }

Jet operator*(double s, const Jet& a) {
  Jet r = a;
  for (auto& x : r.c_) x *= s;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetSpace* sp = merge_spaces(a.sp_, b.sp_);
  if (a.konst_ || b.konst_) {
    const Jet& k = a.konst_ ? a : b;
    const Jet& x = a.konst_ ? b : a;
    Jet r = truncate(x, sp ? sp->order() : kUnboundedOrder);
    if (sp) r.sp_ = sp;
    for (auto& v : r.c_) v *= k.c_[0];
    return r;
  }
  std::vector<double> c(sp->size(), 0.0);
  const double* pa = a.c_.data();
  const double* pb = b.c_.data();
  for (const auto& t : sp->mul_table()) c[t.c] += pa[t.a] * pb[t.b];
  return Jet::from_coeffs(sp, std::move(c));
}

Jet& Jet::operator+=(const Jet& o) { return *this = *this + o; }
Jet& Jet::operator-=(const Jet& o) { return *this = *this - o; }
Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_constant()) {
    if (std::abs(b.value()) < 1e-12) throw JetDomainError("jet division by near-zero value");
    return a * Jet(b.space(), 1.0 / b.value());
  }
  return a * recip(b);
}

Jet derivative(const Jet& j, int var) {
  if (!j.sp_) return Jet(0.0);
  if (var < 0 || var >= j.sp_->nvars()) throw std::out_of_range("derivative variable");
  if (j.sp_->order() == 0) throw std::logic_error("derivative of an order-0 jet");
  const JetSpace* low = JetSpace::get(j.sp_->nvars(), j.sp_->order() - 1);
  if (j.konst_) return Jet(low, 0.0);
  std::vector<double> c(low->size(), 0.0);
  for (const auto& e : j.sp_->deriv_table(var)) {
    if (e.dst < c.size()) c[e.dst] += e.factor * j.c_[e.src];
  }
  return Jet::from_coeffs(low, std::move(c));
}

Jet apply_series(const Jet& a, std::span<const double> taylor) {
  if (a.konst_) {
    Jet r = a;
    r.c_[0] = taylor[0];
    return r;
  }
  const int K = a.order();
  Jet h = a;
  h.c_[0] = 0.0;
  std::vector<double> c(a.c_.size(), 0.0);
  c[0] = taylor[0];
  Jet p = h;
  for (int k = 1; k <= K && k < static_cast<int>(taylor.size()); ++k) {
    if (k > 1) p = p * h;
    const double t = taylor[k];
    for (std::size_t m = 0; m < c.size(); ++m) c[m] += t * p.c_[m];
  }
  return Jet::from_coeffs(a.sp_, std::move(c));
}

namespace {

int series_len(const Jet& a) { return std::min(a.order(), 64) + 1; }

}  // namespace

Jet recip(const Jet& a) {
  const double x = a.value();
  if (std::abs(x) < 1e-12) throw JetDomainError("jet reciprocal of near-zero value");
  std::vector<double> t(series_len(a));
  double v = 1.0 / x;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = v;
    v *= -1.0 / x;
  }
  return apply_series(a, t);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (x < 1e-12) throw JetDomainError("jet sqrt of non-positive value");
  return pow(a, 0.5);
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  if (x <= 0.0 && p != std::floor(p)) throw JetDomainError("jet pow of non-positive base");
  if (std::abs(x) < 1e-12 && p < 0) throw JetDomainError("jet pow of near-zero base");
  std::vector<double> t(series_len(a));
  double coef = 1.0;  // binom(p, k)
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = coef * std::pow(x, p - static_cast<double>(k));
    coef *= (p - static_cast<double>(k)) / static_cast<double>(k + 1);
  }
  return apply_series(a, t);
}

Jet exp(const Jet& a) {
  std::vector<double> t(series_len(a));
  double e = std::exp(a.value());
  double f = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) f /= static_cast<double>(k);
    t[k] = e * f;
  }
  return apply_series(a, t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (x < 1e-12) throw JetDomainError("jet log of non-positive value");
  std::vector<double> t(series_len(a));
  t[0] = std::log(x);
  double v = 1.0 / x;
  for (std::size_t k = 1; k < t.size(); ++k) {
    t[k] = ((k % 2) ? 1.0 : -1.0) * v / static_cast<double>(k);
    v /= x;
  }
  return apply_series(a, t);
}

Jet sin(const Jet& a) {
  std::vector<double> t(series_len(a));
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {s, c, -s, -c};
  double f = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) f /= static_cast<double>(k);
    t[k] = cyc[k % 4] * f;
  }
  return apply_series(a, t);
}

Jet cos(const Jet& a) {
  std::vector<double> t(series_len(a));
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cyc[4] = {c, -s, -c, s};
  double f = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) f /= static_cast<double>(k);
    t[k] = cyc[k % 4] * f;
  }
  return apply_series(a, t);
}

Jet ipow(const Jet& a, int p) {
  if (p < 0) return recip(ipow(a, -p));
  Jet r = a.space() ? Jet(a.space(), 1.0) : Jet(1.0);
  Jet base = a;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p) base = base * base;
  }
  return r;
}

std::vector<Jet> seed_variables(std::span<const double> point, int order) {
  if (order < 1) throw std::invalid_argument("jet order must be at least 1");
  if (point.empty()) throw std::invalid_argument("cannot seed zero variables");
  const JetSpace* sp = JetSpace::get(static_cast<int>(point.size()), order);
  return seed_block(sp, point, 0);
}

std::vector<Jet> seed_block(const JetSpace* sp, std::span<const double> point, int offset) {
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i)
    out.push_back(Jet::variable(sp, offset + static_cast<int>(i), point[i]));
  return out;
}

double extract_partial(const Jet& j, std::span<const int> alpha) {
  int deg = 0;
  double fact = 1.0;
  for (int x : alpha) {
    if (x < 0) throw std::out_of_range("negative multi-index entry");
    deg += x;
    for (int k = 2; k <= x; ++k) fact *= k;
  }
  if (deg > j.order()) throw std::out_of_range("multi-index degree exceeds jet order");
  if (deg == 0) return j.value();
  if (j.is_constant()) return 0.0;
  return fact * j.raw()[j.space()->find(alpha)];
}

Jet restrict_vars(const Jet& j, std::span<const int> vars) {
  if (!j.space()) return j;
  const JetSpace* src = j.space();
  const JetSpace* dst = JetSpace::get(static_cast<int>(vars.size()), src->order());
  if (j.is_constant()) return Jet(dst, j.value());
  std::vector<double> c(dst->size(), 0.0);
  std::vector<int> full(src->nvars(), 0);
  for (std::size_t m = 0; m < dst->size(); ++m) {
    auto e = dst->exponents(m);
    std::fill(full.begin(), full.end(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) full[vars[i]] += e[i];
    c[m] = j.raw()[src->find(full)];
  }
  return Jet::from_coeffs(dst, std::move(c));
}

// ---------------------------------------------------------------- Composer

Composer::Composer(std::span<const Jet> outer) : m_(static_cast<int>(outer.size())) {
  for (const auto& o : outer) outer_sp_ = merge_spaces(outer_sp_, o.space());
  if (!outer_sp_) {
    order_ = 0;
    return;
  }
  order_ = outer_sp_->order();
  identity_ = outer_sp_->nvars() == m_;
  for (int v = 0; v < m_ && identity_; ++v) {
    const auto& o = outer[v];
    if (o.is_constant() || o.space() != outer_sp_) {
      identity_ = false;
      break;
    }
    const auto& r = o.raw();
    for (std::size_t k = 1; k < r.size(); ++k) {
      const double want = (k == outer_sp_->unit(v)) ? 1.0 : 0.0;
      if (r[k] != want) {
        identity_ = false;
        break;
      }
    }
  }
  if (identity_) return;
  const JetSpace* bsp = JetSpace::get(m_, order_);
  std::vector<Jet> h(m_);
  for (int v = 0; v < m_; ++v) {
    h[v] = outer[v] - Jet(outer[v].value());
    h[v] = h[v] * Jet(outer_sp_, 1.0);
  }
  basis_.resize(bsp->size());
  basis_[0] = Jet(outer_sp_, 1.0);
  std::vector<int> tmp(m_);
  for (std::size_t b = 1; b < bsp->size(); ++b) {
    auto e = bsp->exponents(b);
    int v = 0;
    while (e[v] == 0) ++v;
    std::copy(e.begin(), e.end(), tmp.begin());
    tmp[v] -= 1;
    basis_[b] = basis_[bsp->find(tmp)] * h[v];
  }
}

Jet Composer::apply(const Jet& base) const {
  if (!outer_sp_) return Jet(base.value());
  if (base.is_constant()) return Jet(outer_sp_, base.value());
  if (base.nvars() != m_) throw std::invalid_argument("composition variable count mismatch");
  if (base.order() < order_) throw std::invalid_argument("composition base order too low");
  if (identity_) {
    Jet r = truncate(base, order_);
    return r;
  }
  std::vector<double> c(outer_sp_->size(), 0.0);
  const auto& rb = base.raw();
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    const double s = rb[b];
    if (s == 0.0) continue;
    const auto& pb = basis_[b];
    if (pb.is_constant()) {
      c[0] += s * pb.value();
      continue;
    }
    const auto& r = pb.raw();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += s * r[k];
  }
  return Jet::from_coeffs(outer_sp_, std::move(c));
}

std::vector<Jet> Composer::apply(std::span<const Jet> base) const {
  std::vector<Jet> out;
  out.reserve(base.size());
  for (const auto& b : base) out.push_back(apply(b));
  return out;
}

// ---------------------------------------------------------------- CJet

CJet operator+(const CJet& a, const CJet& b) { return {a.re + b.re, a.im + b.im}; }
CJet operator-(const CJet& a, const CJet& b) { return {a.re - b.re, a.im - b.im}; }
CJet operator-(const CJet& a) { return {-a.re, -a.im}; }
CJet operator*(const CJet& a, const CJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
CJet operator/(const CJet& a, const CJet& b) {
  Jet n2 = b.re * b.re + b.im * b.im;
  Jet inv = recip(n2);
  return {(a.re * b.re + a.im * b.im) * inv, (a.im * b.re - a.re * b.im) * inv};
}
CJet cipow(const CJet& a, int p) {
  if (p < 0) return CJet(1.0) / cipow(a, -p);
  CJet r(1.0);
  CJet base = a;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p) base = base * base;
  }
  return r;
}

}  // namespace hqg
