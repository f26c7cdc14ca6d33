#include <cmath>
#include <cstring>

#include "doctest.h"
#include "hqg/examples_catalog.hpp"

using namespace hqg;

namespace {

const CheckRecord& rec(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c;
  FAIL("missing record " << id);
  static CheckRecord none;
  return none;
}

}  // namespace

TEST_CASE("su(3) structure constants fit the basis and are antisymmetric") {
  auto L = su3_data();
  CHECK(L.basis_fit < 1e-14);
  const int d = 8;
  double skew = 0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) skew = std::max(skew, std::abs(L.C[(k * d + i) * d + j] + L.C[(k * d + j) * d + i]));
  CHECK(skew < 1e-14);
}

TEST_CASE("su(3) triple: quaternion relations exact, Obata solve unique") {
  auto L = su3_data();
  const Mat Id = Mat::Identity(8, 8);
  CHECK(max_abs(Mat(L.I[0] * L.I[1] - L.I[2])) < 1e-13);
  for (int a = 0; a < 3; ++a) CHECK(max_abs(Mat(L.I[a] * L.I[a] + Id)) < 1e-13);
  auto G = solve_lie_obata(L);
  CHECK(G.rank == 512);
  CHECK(G.residual < 1e-12);
}

TEST_CASE("su(3) verifier passes and the solve is bitwise repeatable") {
  auto r = su3_verify();
  CHECK(r.pass());
  CHECK(rec(r, "su3_g0_quaternion_product").max_residual < 1e-12);
  CHECK(rec(r, "su3_nabla_V").max_residual < 1e-12);
  auto a = solve_lie_obata(su3_data()), b = solve_lie_obata(su3_data());
  CHECK(std::memcmp(a.G.data(), b.G.data(), a.G.size() * sizeof(double)) == 0);
}

TEST_CASE("nabla V = id does not depend on the scale of V") {
  for (double s : {0.5, 2.0}) {
    auto r = su3_verify(s);
    CHECK(rec(r, "su3_nabla_V").max_residual < 1e-12);
  }
}

TEST_CASE("flat H^n: standard triple, zero Obata connection, rotating U(1) field") {
  for (int n : {1, 2}) {
    auto r = hopf_linear_verify(n, {0, 1, 0, 0}, 4);
    CHECK(r.pass());
    CHECK(rec(r, "hopf_obata_flat").max_residual == 0.0);
  }
  CHECK(hopf_linear_verify(1, {0, 0.6, 0, 0.8}, 4).pass());
}

TEST_CASE("hopf verifier rejects non-unit and real q") {
  CHECK_THROWS_AS(hopf_linear_verify(1, {0, 2, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(hopf_linear_verify(1, {1, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(hopf_linear_verify(1, {-1, 0, 0, 0}), std::invalid_argument);
}
