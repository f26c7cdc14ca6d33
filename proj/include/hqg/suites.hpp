#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hqg/examples_catalog.hpp"
#include "hqg/report.hpp"

namespace hqg {

struct SuiteConfig {
  ExampleSpec example;
  std::vector<std::string> suites;  // empty: nothing runs
  int points = 50;
  std::uint64_t seed = 42;
  int jet_order = 3;
  std::map<std::string, double> tolerances;  // per-check overrides, keyed by check id
  std::string output;                        // JSON path, empty for none
};

// Fixed dependency order of the suite names.
const std::vector<std::string>& suite_names();
// Suites that "all" expands to for an example.
std::vector<std::string> default_suites(const ExampleSpec& spec);
// "all" or a comma separated list; result follows the dependency order. Throws on unknown names.
std::vector<std::string> parse_suites(const std::string& list, const ExampleSpec& spec);

// Throws std::invalid_argument for N < 1, K < 2, non-positive tolerances, or a suite that
// does not apply to the example. l = 1 is not rejected here: it surfaces as failed records.
void validate(const SuiteConfig& cfg);
ojson config_json(const SuiteConfig& cfg);

VerificationReport run(const SuiteConfig& cfg);

}  // namespace hqg
