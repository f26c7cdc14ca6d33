#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqg/jet.hpp"

namespace hqg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A jet program: coordinate jets in, field components out. Programs must not lose
// order: for input jets of order K every output has order >= K.
using Program = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

enum class Valence { Scalar, Vector, OneForm, Endo, Bilinear, Christoffel };

int component_count(Valence v, int dim);

// Component layout:
//   Vector/OneForm  X^k           -> k
//   Endo            T^k_j         -> k*d + j
//   Bilinear        b_ij          -> i*d + j
//   Christoffel     G^k_ij        -> (k*d + i)*d + j
inline int ei(int d, int k, int j) { return k * d + j; }
inline int ci(int d, int k, int i, int j) { return (k * d + i) * d + j; }

struct Field {
  Valence valence;
  Program eval;
};

class ChartDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ChartGeometry {
 public:
  using Predicate = std::function<bool(const Vec&)>;
  using Sampler = std::function<Vec(std::mt19937_64&)>;

  ChartGeometry() = default;
  // sampling_region, if set, further restricts where sample() draws points
  ChartGeometry(std::string name, int dim, Predicate domain, Sampler sampler,
                Predicate sampling_region = nullptr);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  bool in_domain(const Vec& p) const { return domain_ ? domain_(p) : true; }
  bool in_region(const Vec& p) const { return in_domain(p) && (!region_ || region_(p)); }
  const Predicate& domain() const { return domain_; }
  const Predicate& region() const { return region_; }
  const Sampler& sampler() const { return sampler_; }

  void add(const std::string& name, Valence v, Program p);
  bool has(const std::string& name) const { return fields_.count(name) > 0; }
  const Field& field(const std::string& name) const;
  const Program& program(const std::string& name) const { return field(name).eval; }

  // Seeds the chart coordinates at p with the given order and evaluates the field.
  std::vector<Jet> eval(const std::string& name, const Vec& p, int order) const;

  // Seeded rejection sampling from the domain, at most max_attempts draws per point.
  std::vector<Vec> sample(int count, std::uint64_t seed, int max_attempts = 1000) const;

 private:
  std::string name_;
  int dim_ = 0;
  Predicate domain_;
  Sampler sampler_;
  Predicate region_;
  std::map<std::string, Field> fields_;
};

std::vector<Jet> seed_point(const Vec& p, int order);
// Evaluate at order 0 (values only).
Vec eval_values(const Program& f, const Vec& p);

// Wraps f (over m variables) so that it is evaluated on fresh seeds of order K+extra at
// the input values, then composed back onto the input jets. Lets f differentiate its
// own intermediates without losing order.
Program lifted(Program f, int m, int extra);

// Restrict program inputs: g(x) = f(embed(x)) with x filling the listed slots of a
// point whose remaining slots are held at the constants in base.
Program restricted(Program f, std::vector<int> slots, Vec base);

// Concatenate / slice component lists.
Program slice_program(Program f, int offset, int count);

std::vector<double> to_std(const Vec& v);
Vec values_of(const std::vector<Jet>& js);
Mat endo_of(const std::vector<Jet>& js, int d, int offset = 0);

}  // namespace hqg
