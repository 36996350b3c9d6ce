#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fraclap {

enum class Verdict { Pass, Fail, Reported };

const char* to_string(Verdict verdict);

struct Measurement {
  std::string label;
  double value = 0.0;
};

/// Outcome of one executable check. A missing threshold means the check only
/// reports its measurements (serialized as "reported-only").
struct Report {
  std::string check_name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<Measurement> measured;
  std::optional<double> threshold;
  Verdict verdict = Verdict::Reported;
  std::string notes;

  void add(const std::string& label, double value) { measured.push_back({label, value}); }
  /// Value of the first measurement with this label; UsageError if absent.
  double value(const std::string& label) const;
  bool passed() const { return verdict != Verdict::Fail; }
};

/// Serialization with keys check_name, inputs, measured (label/value
/// objects in insertion order), threshold, verdict and notes. Non-finite
/// values are written as strings ("inf", "-inf", "nan").
nlohmann::ordered_json to_json(const Report& report);
nlohmann::ordered_json to_json(const std::vector<Report>& reports);

}  // namespace fraclap
