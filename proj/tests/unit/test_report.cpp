#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hqg/suites.hpp"

using namespace hqg;

namespace {

VerificationReport sample_report() {
  VerificationReport r;
  r.config = {{"example", "l_family"}, {"seed", 7}};
  r.add(make_record("a.one", "anchor_one", 5, 1.5e-13, 1e-12));
  r.add(make_record("a.two", "anchor_two", 3, 2.0, 1e-9, "over"));
  r.add(make_record("a.three", "anchor_three", 4, kNaN, 1e-7, "not formed"));
  return r;
}

SuiteConfig small(const char* example, std::vector<std::string> suites, int points = 3) {
  SuiteConfig c;
  c.example.name = example;
  c.suites = std::move(suites);
  c.points = points;
  return c;
}

}  // namespace

TEST_CASE("records pass iff the residual is finite and within tolerance") {
  CHECK(make_record("x", "y", 1, 1e-9, 1e-9).pass);
  CHECK_FALSE(make_record("x", "y", 1, 2e-9, 1e-9).pass);
  CHECK_FALSE(make_record("x", "y", 1, kNaN, 1e-9).pass);
  CHECK_FALSE(sample_report().pass());
}

TEST_CASE("JSON round trip keeps every field") {
  const auto r = sample_report();
  const auto back = report_from_json(ojson::parse(emit_json(r)));
  REQUIRE(back.checks.size() == r.checks.size());
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto &a = r.checks[i], &b = back.checks[i];
    CHECK(a.id == b.id);
    CHECK(a.anchor == b.anchor);
    CHECK(a.points == b.points);
    CHECK(a.tolerance == b.tolerance);
    CHECK(a.pass == b.pass);
    CHECK(a.note == b.note);
    if (std::isnan(a.max_residual))
      CHECK(std::isnan(b.max_residual));
    else
      CHECK(a.max_residual == b.max_residual);
  }
  CHECK(back.config["seed"] == 7);
  CHECK(emit_json(back) == emit_json(r));
}

TEST_CASE("empty suite list gives zero checks and passes") {
  auto r = run(small("l_family", {}));
  CHECK(r.checks.empty());
  CHECK(r.pass());
  CHECK(to_json(r)["pass"] == true);
}

TEST_CASE("text output has one line per check carrying its anchor") {
  const auto r = sample_report();
  std::istringstream in(emit_text(r));
  std::vector<std::string> lines;
  for (std::string s; std::getline(in, s);) lines.push_back(s);
  REQUIRE(lines.size() == r.checks.size() + 2);  // header and summary
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    CHECK(lines[i + 1].find(r.checks[i].id) != std::string::npos);
    CHECK(lines[i + 1].find(r.checks[i].anchor) != std::string::npos);
  }
}

TEST_CASE("unwritable path is reported with the path") {
  try {
    write_file("/nonexistent-dir/x.json", "{}");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.json") != std::string::npos);
  }
}

TEST_CASE("suite list parsing and configuration checks") {
  ExampleSpec l;
  CHECK(parse_suites("hq,special_axioms", l) == std::vector<std::string>{"special_axioms", "hq"});
  CHECK(parse_suites("all", l).size() == 6);
  CHECK_THROWS_AS(parse_suites("special_axioms,bogus", l), std::invalid_argument);
  ExampleSpec su3;
  su3.name = "su3_lie";
  CHECK(parse_suites("all", su3) == std::vector<std::string>{"su3"});

  auto c = small("l_family", {"special_axioms"});
  c.points = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small("l_family", {"special_axioms"});
  c.tolerances["special_axioms.flat"] = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  CHECK_THROWS_AS(validate(small("su3_lie", {"rigid_cmap"})), std::invalid_argument);
  CHECK_THROWS_AS(validate(small("nope", {})), std::invalid_argument);
}

TEST_CASE("runs are deterministic and tolerance overrides apply") {
  auto c = small("l_family", {"special_axioms", "oracles"});
  c.seed = 7;
  const auto a = emit_json(run(c)), b = emit_json(run(c));
  CHECK(a == b);
  c.tolerances["special_axioms.flat"] = 1e-300;
  auto r = run(c);
  bool seen = false;
  for (const auto& rec : r.checks)
    if (rec.id == "special_axioms.flat") {
      seen = true;
      CHECK(rec.tolerance == 1e-300);
    }
  CHECK(seen);
}

TEST_CASE("trivial example passes its special, rigid and oracle suites") {
  auto r = run(small("trivial_flat", {"special_axioms", "rigid_cmap", "oracles"}));
  CHECK(r.pass());
}

TEST_CASE("l = 1 surfaces as a failed construction and the trivial curvature branch") {
  auto c = small("l_family", {"special_axioms", "oracles"});
  c.example.l = 1;
  auto r = run(c);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].id == "construction.l_family");
  CHECK_FALSE(r.checks[0].pass);
  CHECK(r.checks[0].note.find("degenerate") != std::string::npos);
  CHECK(r.checks[1].id == "oracles.trivial_curvature_branch");
  CHECK(r.checks[1].pass);
}

TEST_CASE("base of real dimension 2 skips the Weyl checks and says so") {
  auto r = run(small("l_family", {"cprojective"}));
  for (const auto& c : r.checks) CHECK(c.id.find("weyl") == std::string::npos);
  REQUIRE(r.config.contains("skipped"));
  CHECK(r.pass());
}
