#include "hqg/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hqg {

CheckRecord make_record(std::string id, std::string anchor, int points, double residual, double tolerance,
                        std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.points = points;
  r.max_residual = residual;
  r.tolerance = tolerance;
  r.pass = !std::isnan(residual) && residual <= tolerance;
  r.note = std::move(note);
  return r;
}

bool VerificationReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }
double number_from(const ojson& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

ojson to_json(const VerificationReport& r) {
  ojson j;
  ojson cfg = r.config;
  cfg["engine_version"] = kEngineVersion;
  j["config"] = cfg;
  j["checks"] = ojson::array();
  for (const auto& c : r.checks) {
    ojson e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["points"] = c.points;
    e["max_residual"] = number_or_null(c.max_residual);
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(std::move(e));
  }
  j["pass"] = r.pass();
  return j;
}

VerificationReport report_from_json(const ojson& j) {
  VerificationReport r;
  r.config = j.at("config");
  r.config.erase("engine_version");
  for (const auto& e : j.at("checks")) {
    CheckRecord c;
    c.id = e.at("id").get<std::string>();
    c.anchor = e.at("anchor").get<std::string>();
    c.points = e.at("points").get<int>();
    c.max_residual = number_from(e.at("max_residual"));
    c.tolerance = e.at("tolerance").get<double>();
    c.pass = e.at("pass").get<bool>();
    if (e.contains("note")) c.note = e.at("note").get<std::string>();
    r.checks.push_back(std::move(c));
  }
  return r;
}

std::string emit_json(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

std::string emit_text(const VerificationReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "pass" << std::setw(54) << "check" << std::setw(14) << "residual"
     << std::setw(10) << "tol" << std::setw(7) << "pts"
     << "anchor\n";
  for (const auto& c : r.checks) {
    std::ostringstream res;
    res << std::scientific << std::setprecision(2) << c.max_residual;
    std::ostringstream tol;
    tol << std::scientific << std::setprecision(0) << c.tolerance;
    os << std::left << std::setw(6) << (c.pass ? "ok" : "FAIL") << std::setw(54) << c.id << std::setw(14)
       << res.str() << std::setw(10) << tol.str() << std::setw(7) << c.points << c.anchor;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  int failed = 0;
  for (const auto& c : r.checks) failed += !c.pass;
  os << r.checks.size() << " checks, " << failed << " failed, " << std::fixed << std::setprecision(1)
     << r.wall_seconds << " s\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << bytes;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace hqg
