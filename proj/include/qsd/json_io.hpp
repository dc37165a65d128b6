#pragma once

// JSON and CSV serialization of families, schedules and reports.
// Complex numbers are two-element [re, im] arrays everywhere.

#include <string>

#include "json.hpp"
#include "qsd/montecarlo.hpp"
#include "qsd/multiport.hpp"
#include "qsd/physical_models.hpp"
#include "qsd/symmetric_states.hpp"

namespace qsd {

using Json = nlohmann::json;

Json complex_to_json(cplx c);
cplx complex_from_json(const Json& j);

/// {"N": int, "M": int, "coeffs": [[re, im], ...]}
Json family_to_json(const SymmetricFamily& family);
SymmetricFamily family_from_json(const Json& j, bool require_protocol_ordering = false);

/// {"mechanism": "tpa"|"sfg", "products": [p0, p1]}
Json schedule_to_json(const ChannelSchedule& schedule);
ChannelSchedule schedule_from_json(const Json& j);

/// {"P_C", "P_E", "norms", "completeness_residual", "overlaps"}
Json min_error_report(const SymmetricFamily& family);

/// {"P_D", "inconclusive_prob", "orthogonality_residual", "equivalence_residual",
///  "recovered_family"} plus the mechanism and its schedule.
Json unambiguous_report(const SymmetricFamily& family, Mechanism mechanism);

Json trial_report_to_json(const TrialReport& report);
/// Header "outcome,count".
std::string trial_counts_csv(const TrialReport& report);

/// U as nested [re, im] arrays.
Json multiport_to_json(const MultiportUnitary& u);
/// Header "k,j,p".
std::string multiport_table_csv(const SinglePhotonDiscrimination& d);

/// Excitation probability of every detector atom k for every family state,
/// with the numeric prefactor reported next to 2 eta^2/(Gamma^2 + 12 eta^2).
Json atom_detector_report(const SymmetricFamily& family, double eta, double gamma);

/// Rounds every floating-point value to `digits` significant digits.
void round_numbers(Json& j, int digits = 10);

}  // namespace qsd
