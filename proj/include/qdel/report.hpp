#pragma once

// Serialization of fidelity reports: 12-significant-digit numbers, the JSON
// report object and the sweep CSV row layout.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qdel/analysis.hpp"

namespace qdel {

inline constexpr std::string_view kCsvHeader =
    "swept_param,swept_value,alpha2,beta_phase,lambda,y,m1,m2re,m2im,"
    "F1,F2,F3,F4,Fc,class,note";

// Decimal with 12 significant digits; negative zero prints as 0.
std::string format_number(double x);

// x rounded to 12 significant digits, so that JSON output is stable.
double round_sig(double x);

nlohmann::json inputs_json(double alpha2, double beta_phase, const MachineParams& p,
                           bool transformer);
nlohmann::json to_json(const FidelityReport& report);
nlohmann::json to_json(const DensityOp& rho);

// Human-readable report followed by the four reduced states.
std::string format_report(const FidelityReport& report, const PipelineResult& selected);

}  // namespace qdel
