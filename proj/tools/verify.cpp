// verify: run verification suites for one example and print the report.
//
//   verify l_family --n 1 --l 2 --suites all --points 50 --seed 7 --json out.json
//
// Exit status 0 iff every check passes; 2 on usage or configuration errors.

#include <CLI11.hpp>
#include <iostream>
#include <set>

#include "hqg/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verify the hypercomplex/quaternionic construction pipeline on an example"};
  hqg::SuiteConfig cfg;
  std::string example = "l_family", suites = "all";
  std::vector<std::string> tols;

  app.add_option("example,--example", example, "trivial_flat | l_family | su3_lie | hopf_linear");
  app.add_option("--n", cfg.example.n, "complex dimension of the special complex base minus one")->default_val(1);
  app.add_option("--l", cfg.example.l, "exponent of the l-family")->default_val(2);
  app.add_option("--c", cfg.example.c, "constant in f = -2 mu + c")->default_val(1.0);
  app.add_option("--points", cfg.points, "sample points per check")->default_val(50);
  app.add_option("--seed", cfg.seed, "sampling seed")->default_val(42);
  app.add_option("--jet-order", cfg.jet_order, "jet order of the derivative cross-checks")->default_val(3);
  app.add_option("--tol", tols, "per-check tolerance override, <check id>=<value>");
  app.add_option("--suites", suites, "'all' or a comma separated list")->default_val("all");
  app.add_option("--json", cfg.output, "write the JSON report to this path");
  CLI11_PARSE(app, argc, argv);

  try {
    cfg.example.name = example;
    for (const auto& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--tol expects <check>=<value>, got " + t);
      cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    }
    cfg.suites = hqg::parse_suites(suites, cfg.example);
    hqg::validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }

  const hqg::VerificationReport rep = hqg::run(cfg);
  std::set<std::string> seen;
  for (const auto& r : rep.checks) seen.insert(r.id);
  for (const auto& [id, t] : cfg.tolerances)
    if (!seen.count(id)) std::cerr << "verify: warning: --tol " << id << " matches no check\n";

  std::cout << hqg::emit_text(rep);
  if (!cfg.output.empty()) {
    try {
      hqg::write_file(cfg.output, hqg::emit_json(rep));
    } catch (const std::exception& e) {
      std::cerr << "verify: " << e.what() << "\n";
      return 2;
    }
  }
  return rep.pass() ? 0 : 1;
}
