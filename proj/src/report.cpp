#include "fraclap/report.hpp"

#include <cmath>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Reported: return "reported";
  }
  return "reported";
}

double Report::value(const std::string& label) const {
  for (const auto& m : measured) {
    if (m.label == label) return m.value;
  }
  throw UsageError("report " + check_name + " has no measurement '" + label + "'");
}

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json out;
  out["check_name"] = report.check_name;
  out["inputs"] = report.inputs;
  auto measured = nlohmann::ordered_json::array();
  for (const auto& m : report.measured) {
    measured.push_back({{"label", m.label}, {"value", number(m.value)}});
  }
  out["measured"] = std::move(measured);
  out["threshold"] = report.threshold ? number(*report.threshold) : nlohmann::ordered_json("reported-only");
  out["verdict"] = to_string(report.verdict);
  if (!report.notes.empty()) out["notes"] = report.notes;
  return out;
}

nlohmann::ordered_json to_json(const std::vector<Report>& reports) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

}  // namespace fraclap
