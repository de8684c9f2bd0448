#pragma once

// Serialization of classification evidence: JSON reports and sweep CSV.

#include <string>
#include <span>

#include <json.hpp>

#include "bidisk/classifier.hpp"

namespace bidisk {

inline constexpr int kReportSchema = 1;

nlohmann::json complex_to_json(cd v);
nlohmann::json point_to_json(const Point2& z);
nlohmann::json direction_to_json(const Direction& h);
nlohmann::json derivative_to_json(const DerivativeSample& d);

/// Full report with all evidence lists; top-level "schema": 1.
nlohmann::json report_to_json(const ClassificationReport& report);

nlohmann::json escalation_to_json(const EscalationDiagnostic& diag);

/// Header `t,z1_re,z1_im,z2_re,z2_im,aperture,quotient`, one row per sample in
/// the given order, numbers with 17 significant digits.
std::string sweep_csv(std::span<const JuliaSample> rows);

/// JSON text with a trailing newline; doubles in shortest round-trip form.
std::string dump(const nlohmann::json& j);

}  // namespace bidisk
