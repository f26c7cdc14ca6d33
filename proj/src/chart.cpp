#include "hqg/chart.hpp"

#include <utility>

namespace hqg {

int component_count(Valence v, int d) {
  switch (v) {
    case Valence::Scalar: return 1;
    case Valence::Vector:
    case Valence::OneForm: return d;
    case Valence::Endo:
    case Valence::Bilinear: return d * d;
    case Valence::Christoffel: return d * d * d;
  }
  return 0;
}

ChartGeometry::ChartGeometry(std::string name, int dim, Predicate domain, Sampler sampler,
                             Predicate sampling_region)
    : name_(std::move(name)),
      dim_(dim),
      domain_(std::move(domain)),
      sampler_(std::move(sampler)),
      region_(std::move(sampling_region)) {}

void ChartGeometry::add(const std::string& name, Valence v, Program p) {
  fields_[name] = Field{v, std::move(p)};
}

const Field& ChartGeometry::field(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) throw std::out_of_range("chart " + name_ + " has no field " + name);
  return it->second;
}

std::vector<Jet> ChartGeometry::eval(const std::string& name, const Vec& p, int order) const {
  if (!in_domain(p)) throw ChartDomainError("point outside chart " + name_);
  const Field& f = field(name);
  auto out = f.eval(seed_point(p, order));
  if (static_cast<int>(out.size()) != component_count(f.valence, dim_))
    throw std::logic_error("field " + name + " returned wrong component count");
  return out;
}

std::vector<Vec> ChartGeometry::sample(int count, std::uint64_t seed, int max_attempts) const {
  std::mt19937_64 rng(seed);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    bool ok = false;
    for (int a = 0; a < max_attempts; ++a) {
      Vec p = sampler_(rng);
      if (in_region(p)) {
        pts.push_back(std::move(p));
        ok = true;
        break;
      }
    }
    if (!ok) throw ChartDomainError("sampling chart " + name_ + " exceeded the attempt cap");
  }
  return pts;
}

std::vector<Jet> seed_point(const Vec& p, int order) {
  const JetSpace* sp = JetSpace::get(static_cast<int>(p.size()), order);
  std::vector<Jet> out;
  out.reserve(p.size());
  for (int i = 0; i < p.size(); ++i) out.push_back(Jet::variable(sp, i, p[i]));
  return out;
}

Vec eval_values(const Program& f, const Vec& p) { return values_of(f(seed_point(p, 0))); }

Program lifted(Program f, int m, int extra) {
  return [f = std::move(f), m, extra](const std::vector<Jet>& x) {
    if (static_cast<int>(x.size()) != m) throw std::invalid_argument("lifted program arity");
    int K = 0;
    std::vector<double> x0(m);
    for (int i = 0; i < m; ++i) {
      x0[i] = x[i].value();
      if (x[i].space()) K = std::max(K, x[i].order());
    }
    for (int i = 0; i < m; ++i)
      if (x[i].space()) K = std::min(K, x[i].order());
    Composer comp(x);
    auto base = f(seed_block(JetSpace::get(m, K + extra), x0, 0));
    for (auto& j : base) j = truncate(j, K);
    return comp.apply(base);
  };
}

Program restricted(Program f, std::vector<int> slots, Vec base) {
  return [f = std::move(f), slots = std::move(slots), base = std::move(base)](
             const std::vector<Jet>& x) {
    const JetSpace* sp = nullptr;
    for (const auto& j : x)
      if (j.space()) sp = j.space();
    std::vector<Jet> full(base.size());
    for (int i = 0; i < base.size(); ++i) full[i] = sp ? Jet(sp, base[i]) : Jet(base[i]);
    for (std::size_t k = 0; k < slots.size(); ++k) full[slots[k]] = x[k];
    return f(full);
  };
}

Program slice_program(Program f, int offset, int count) {
  return [f = std::move(f), offset, count](const std::vector<Jet>& x) {
    auto all = f(x);
    return std::vector<Jet>(all.begin() + offset, all.begin() + offset + count);
  };
}

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec values_of(const std::vector<Jet>& js) {
  Vec v(js.size());
  for (std::size_t i = 0; i < js.size(); ++i) v[i] = js[i].value();
  return v;
}

Mat endo_of(const std::vector<Jet>& js, int d, int offset) {
  Mat m(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) m(k, j) = js[offset + k * d + j].value();
  return m;
}

}  // namespace hqg
