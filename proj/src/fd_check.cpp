#include "hqg/fd_check.hpp"

#include <algorithm>
#include <cmath>

namespace hqg {

FdComparison fd_compare(const Program& f, const Vec& p, bool second, double h1, double h2, int order) {
  const int d = static_cast<int>(p.size());
  auto jets = f(seed_point(p, std::max(order, second ? 2 : 1)));
  const int nc = static_cast<int>(jets.size());
  auto at = [&](const Vec& q) { return eval_values(f, q); };
  const Vec f0 = values_of(jets);

  std::vector<double> err1(nc, 0.0), err2(nc, 0.0), scale1(nc, 1.0), scale2(nc, 1.0);
  for (int i = 0; i < d; ++i) {
    Vec a = p, b = p;
    a[i] += h1;
    b[i] -= h1;
    const Vec fd = (at(a) - at(b)) / (2 * h1);
    for (int c = 0; c < nc; ++c) {
      const double jd = jets[c].d(i);
      scale1[c] = std::max(scale1[c], std::abs(jd));
      err1[c] = std::max(err1[c], std::abs(jd - fd[c]));
    }
  }
  if (second) {
    std::vector<int> alpha(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        auto stencil = [&](double h) -> Vec {
          if (i == j) {
            Vec a = p, b = p;
            a[i] += h;
            b[i] -= h;
            return (at(a) - 2 * f0 + at(b)) / (h * h);
          }
          Vec pp = p, pm = p, mp = p, mm = p;
          pp[i] += h, pp[j] += h;
          pm[i] += h, pm[j] -= h;
          mp[i] -= h, mp[j] += h;
          mm[i] -= h, mm[j] -= h;
          return (at(pp) - at(pm) - at(mp) + at(mm)) / (4 * h * h);
        };
        // Richardson: cancels the h^2 term, so h2 can stay large against round-off.
        const Vec fd = (4 * stencil(h2 / 2) - stencil(h2)) / 3;
        std::fill(alpha.begin(), alpha.end(), 0);
        alpha[i] += 1;
        alpha[j] += 1;
        for (int c = 0; c < nc; ++c) {
          const double jd = extract_partial(jets[c], alpha);
          scale2[c] = std::max(scale2[c], std::abs(jd));
          err2[c] = std::max(err2[c], std::abs(jd - fd[c]));
        }
      }
  }
  FdComparison r;
  for (int c = 0; c < nc; ++c) {
    r.first = std::max(r.first, err1[c] / scale1[c]);
    if (second) r.second = std::max(r.second, err2[c] / scale2[c]);
  }
  return r;
}

}  // namespace hqg
