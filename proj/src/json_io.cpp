#include "qsd/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qsd/min_error.hpp"
#include "qsd/unambiguous.hpp"

namespace qsd {

namespace {

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json complex_to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::kInvalidArgument, "complex numbers must be [re, im] arrays");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json family_to_json(const SymmetricFamily& family) {
  Json coeffs = Json::array();
  for (const auto& c : family.coeffs()) coeffs.push_back(complex_to_json(c));
  return Json{{"N", family.N()}, {"M", family.M()}, {"coeffs", std::move(coeffs)}};
}

SymmetricFamily family_from_json(const Json& j, bool require_protocol_ordering) {
  if (!j.is_object() || !j.contains("N") || !j.contains("M") || !j.contains("coeffs") ||
      !j["N"].is_number_integer() || !j["M"].is_number_integer() || !j["coeffs"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument,
                "family JSON needs integer N, integer M and a coeffs array");
  }
  std::vector<cplx> coeffs;
  for (const auto& c : j["coeffs"]) coeffs.push_back(complex_from_json(c));
  return make_family(j["N"].get<int>(), j["M"].get<int>(), std::move(coeffs),
                     require_protocol_ordering);
}

Json schedule_to_json(const ChannelSchedule& schedule) {
  return Json{{"mechanism", to_string(schedule.mechanism)},
              {"products", Json::array({schedule.products[0], schedule.products[1]})}};
}

ChannelSchedule schedule_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("mechanism") || !j.contains("products") ||
      !j["products"].is_array() || j["products"].size() != 2) {
    throw Error(ErrorCode::kInvalidArgument, "schedule JSON needs mechanism and two products");
  }
  ChannelSchedule s{mechanism_from_string(j["mechanism"].get<std::string>()),
                    {j["products"][0].get<double>(), j["products"][1].get<double>()}};
  s.validate();
  return s;
}

Json min_error_report(const SymmetricFamily& family) {
  BasisPtr basis;
  std::vector<std::size_t> labels;
  if (family.M() == 2) {
    basis = build_basis(2, 2);
    labels = two_photon_labels(*basis);
  } else if (family.M() == 1) {
    basis = build_basis(2, 1);
    labels = single_photon_labels(*basis);
  } else {
    basis = build_basis(1, family.M());
    for (int l = 0; l <= family.M(); ++l) labels.push_back(static_cast<std::size_t>(l));
  }
  const auto states = family_states(family, basis, labels);
  const DetectionSet numeric = srm_states_numeric(states);
  const DetectionSet closed = srm_states_closed(family, basis, labels);
  const double pc = success_probability_analytic(family);

  Json norms = Json::array();
  for (const auto& mu : closed.vectors) norms.push_back(mu.norm_squared());
  double path_agreement = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    path_agreement = std::max(
        path_agreement, (numeric.vectors[k].amplitudes() - closed.vectors[k].amplitudes()).norm());
  }
  return Json{{"family", family_to_json(family)},
              {"P_C", pc},
              {"P_E", 1.0 - pc},
              {"P_C_numeric", success_probability_from_detection(numeric, states)},
              {"norms", std::move(norms)},
              {"completeness_residual", numeric.completeness_residual},
              {"srm_path_agreement", path_agreement},
              {"orthogonal", closed.orthogonal},
              {"overlaps", matrix_to_json(detection_overlaps(closed))}};
}

Json unambiguous_report(const SymmetricFamily& family, Mechanism mechanism) {
  const double pd = success_probability_ud(family);
  std::vector<StateVector> conditioned;
  double inconclusive = 0.0;
  Json schedule;
  if (mechanism == Mechanism::kTpa) {
    auto tpa = orthogonalize_tpa(family);
    schedule = schedule_to_json(tpa.schedule);
    for (double p : tpa.jump_probability) inconclusive += p / 3.0;
    conditioned = std::move(tpa.states);
  } else {
    auto sfg = orthogonalize_sfg(family);
    schedule = schedule_to_json(sfg.schedule);
    for (double p : sfg.inconclusive_probability) inconclusive += p / 3.0;
    conditioned = std::move(sfg.conclusive);
  }
  Json recovered = "uninformative";
  if (mechanism == Mechanism::kSfg) {
    const RecoveredFamily rec = inconclusive_family(family);
    if (!rec.uninformative()) {
      recovered = family_to_json(*rec.family);
      recovered["P_C"] = success_probability_analytic(*rec.family);
    }
  }
  return Json{{"family", family_to_json(family)},
              {"mechanism", to_string(mechanism)},
              {"schedule", std::move(schedule)},
              {"P_D", pd},
              {"inconclusive_prob", inconclusive},
              {"orthogonality_residual", orthogonality_residual(conditioned)},
              {"equivalence_residual", equivalence_check(family)},
              {"recovered_family", std::move(recovered)}};
}

Json trial_report_to_json(const TrialReport& report) {
  Json counts = Json::object();
  for (const auto& [k, v] : report.counts) counts[k] = v;
  return Json{{"protocol", to_string(report.protocol)},
              {"trials", report.trials},
              {"seed", report.seed},
              {"shards", report.shards},
              {"counts", std::move(counts)},
              {"empirical", report.empirical},
              {"analytic", report.analytic},
              {"stderr", report.standard_error},
              {"notes", report.notes}};
}

std::string trial_counts_csv(const TrialReport& report) {
  std::ostringstream os;
  os << "outcome,count\n";
  for (const auto& [k, v] : report.counts) os << k << ',' << v << '\n';
  return os.str();
}

Json multiport_to_json(const MultiportUnitary& u) {
  return Json{{"N", u.N}, {"phase_offset", u.phase_offset}, {"U", matrix_to_json(u.matrix)}};
}

std::string multiport_table_csv(const SinglePhotonDiscrimination& d) {
  std::ostringstream os;
  os << "k,j,p\n";
  for (Eigen::Index k = 0; k < d.table.rows(); ++k) {
    for (Eigen::Index j = 0; j < d.table.cols(); ++j) {
      os << k + 1 << ',' << j + 1 << ',' << format_sig(d.table(k, j)) << '\n';
    }
  }
  return os.str();
}

Json atom_detector_report(const SymmetricFamily& family, double eta, double gamma) {
  auto basis = build_basis(2, 2);
  const auto labels = two_photon_labels(*basis);
  const auto states = family_states(family, basis, labels);
  const DetectionSet mus = srm_states_closed(family, basis, labels);

  Json rows = Json::array();
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 1; k <= family.N(); ++k) {
    const AtomFieldModel model = make_detector_model(family, k, eta, gamma);
    for (int m = 1; m <= family.N(); ++m) {
      const auto& psi = states[static_cast<std::size_t>(m - 1)];
      const AtomExcitation ex = atom_excitation_avg(model, psi);
      const double mu_overlap = std::norm(mus.vectors[static_cast<std::size_t>(k - 1)].inner(psi));
      Json row{{"k", k}, {"state", m}, {"numeric", ex.numeric}, {"analytic", ex.analytic},
               {"detection_overlap", ex.detection_overlap}, {"mu_overlap", mu_overlap},
               {"quadrature_error", ex.quadrature_error}};
      if (ex.detection_overlap > 1e-12) {
        const double prefactor = ex.numeric / ex.detection_overlap;
        row["prefactor_numeric"] = prefactor;
        lo = std::min(lo, prefactor);
        hi = std::max(hi, prefactor);
      }
      rows.push_back(std::move(row));
    }
  }
  const double mean = 0.5 * (lo + hi);
  return Json{{"family", family_to_json(family)},
              {"eta", eta},
              {"Gamma", gamma},
              {"prefactor_numeric", mean},
              {"prefactor_relative_spread", (hi - lo) / mean},
              {"prefactor_closed_form", 2.0 * eta * eta / (gamma * gamma + 12.0 * eta * eta)},
              {"atom_rescale", static_cast<double>(family.N()) / 3.0},
              {"rows", std::move(rows)}};
}

void round_numbers(Json& j, int digits) {
  if (j.is_number_float()) {
    j = round_sig(j.get<double>(), digits);
  } else if (j.is_structured()) {
    for (auto& child : j) round_numbers(child, digits);
  }
}

}  // namespace qsd
