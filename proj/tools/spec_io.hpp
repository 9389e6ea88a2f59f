#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qthermo/qthermo.hpp"

namespace qthermo::cli {

using json = nlohmann::json;

/// Parsed channel specification document (format 1).
struct Analysis {
  std::string label;
  Channel channel;
  State input_state;
  ThermoConfig config;
};

/// ValidationError with the offending field path on any structural or
/// numerical defect of the document.
Analysis parse_spec(const json& doc);
Analysis read_spec_file(const std::string& path);

json encode_matrix(const CMat& m);
CMat decode_matrix(const json& j, const std::string& path);

/// Spec document for a channel given by Kraus operators and an input state.
json spec_document(const std::string& label, const KrausSet& kraus, const State& phi, const ThermoConfig& cfg);

/// Real numbers rounded to 12 significant digits, |x| < 1e-12 written as 0.
double report_number(double x);

json report_json(const ThermoReport& r, const ThermoConfig& cfg, const MultiMatrixAlgebra& source,
                 const MultiMatrixAlgebra& target, const std::vector<double>& component_dims,
                 std::uint64_t seed);
std::string report_markdown(const json& report);

}  // namespace qthermo::cli
