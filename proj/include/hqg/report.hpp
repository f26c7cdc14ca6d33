#pragma once

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace hqg {

using ojson = nlohmann::ordered_json;

// One verified identity: worst residual over the sampled points against its tolerance.
// A NaN residual (quantity could not be formed) never passes.
struct CheckRecord {
  std::string id;
  std::string anchor;
  int points = 0;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;

  bool operator==(const CheckRecord&) const = default;
};

CheckRecord make_record(std::string id, std::string anchor, int points, double residual, double tolerance,
                        std::string note = {});

struct VerificationReport {
  ojson config = ojson::object();
  std::vector<CheckRecord> checks;
  double wall_seconds = 0;  // text output only; kept out of JSON for byte stability

  bool pass() const;
  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  void append(const VerificationReport& other);
};

inline constexpr const char* kEngineVersion = "0.3.0";

ojson to_json(const VerificationReport& r);
VerificationReport report_from_json(const ojson& j);
std::string emit_json(const VerificationReport& r);
std::string emit_text(const VerificationReport& r);
// Writes bytes to path; throws std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace hqg
