#include "qsd/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qsd/json_io.hpp"
#include "qsd/min_error.hpp"
#include "qsd/montecarlo.hpp"
#include "qsd/multiport.hpp"
#include "qsd/unambiguous.hpp"

namespace qsd::cli {

namespace {

// Decimal inputs such as 0.70710678 miss unit norm by ~1e-8; within this
// slack the CLI rescales and records a warning.
constexpr double kInputNormSlack = 1e-6;
constexpr std::uint64_t kDefaultSeed = 20010427;

const std::map<std::string, std::set<std::string>> kCommands = {
    {"family", {"validate"}},
    {"min-error", {"analyze", "simulate"}},
    {"unambiguous", {"analyze", "simulate"}},
    {"pipeline", {"sfg-recover"}},
    {"multiport", {"table"}},
    {"atom-detector", {}},
};

const char* kUsage =
    "usage: qsd <command> [options]\n"
    "commands:\n"
    "  family validate\n"
    "  min-error analyze | min-error simulate\n"
    "  unambiguous analyze --mechanism tpa|sfg | unambiguous simulate\n"
    "  pipeline sfg-recover\n"
    "  multiport table\n"
    "  atom-detector\n"
    "family flags: --N <int> --M <int> --coeffs re,im ... | --coeffs-polar mag,phase ...\n"
    "              or --config <path> with {\"family\": {\"N\", \"M\", \"coeffs\"}, ...}\n";

struct Options {
  int N = -1;
  int M = -1;
  std::vector<std::string> coeffs;
  std::vector<std::string> coeffs_polar;
  std::string config;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  int shards = 1;
  std::string format = "json";
  std::string output;
  bool no_timestamp = false;
  std::string mechanism = "tpa";
  double eta = 1.0;
  double gamma = 0.01;
};

std::pair<double, double> parse_pair(const std::string& token) {
  const auto comma = token.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "expected a \"x,y\" pair, got '" + token + "'");
  }
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = token.substr(0, comma), b = token.substr(comma + 1);
    const double x = std::stod(a, &used_a);
    const double y = std::stod(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(token);
    return {x, y};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "malformed number pair '" + token + "'");
  }
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class Runner {
 public:
  Runner(Options opts, const CLI::App& leaf, std::ostream& out)
      : opts_(std::move(opts)), leaf_(leaf), out_(out) {
    load_config();
  }

  SymmetricFamily family(bool protocol) {
    std::vector<cplx> coeffs;
    if (!opts_.coeffs.empty() || !opts_.coeffs_polar.empty()) {
      for (const auto& t : opts_.coeffs) {
        auto [re, im] = parse_pair(t);
        coeffs.emplace_back(re, im);
      }
      for (const auto& t : opts_.coeffs_polar) {
        auto [mag, phase] = parse_pair(t);
        coeffs.push_back(std::polar(mag, phase));
      }
      if (opts_.N < 0) throw Error(ErrorCode::kInvalidArgument, "--N is required with --coeffs");
      const int m = opts_.M >= 0 ? opts_.M : static_cast<int>(coeffs.size()) - 1;
      return build(opts_.N, m, std::move(coeffs), protocol);
    }
    if (config_.contains("family")) {
      const Json& f = config_["family"];
      if (!f.contains("coeffs") || !f["coeffs"].is_array()) {
        throw Error(ErrorCode::kInvalidArgument, "config family needs a coeffs array");
      }
      for (const auto& c : f["coeffs"]) coeffs.push_back(complex_from_json(c));
      return build(f.value("N", -1), f.value("M", -1), std::move(coeffs), protocol);
    }
    throw Error(ErrorCode::kInvalidArgument, "no family given (use --N/--M/--coeffs or --config)");
  }

  void emit(Json report, const std::string& csv = {}) {
    if (!warnings_.empty()) report["input_warnings"] = warnings_;
    if (!opts_.no_timestamp) report["timestamp"] = timestamp_now();
    round_numbers(report, 10);
    std::string text;
    if (opts_.format == "csv") {
      text = csv.empty() ? flat_csv(report) : csv;
    } else if (opts_.format == "json") {
      text = report.dump(2) + "\n";
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown --format '" + opts_.format + "'");
    }
    if (opts_.output.empty()) {
      out_ << text;
    } else {
      std::ofstream file(opts_.output);
      if (!file) throw Error(ErrorCode::kInvalidArgument, "cannot open " + opts_.output);
      file << text;
    }
  }

  const Options& options() const { return opts_; }

 private:
  SymmetricFamily build(int n, int m, std::vector<cplx> coeffs, bool protocol) {
    double norm2 = 0.0;
    for (const auto& c : coeffs) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > kNormTolerance && std::abs(norm2 - 1.0) <= kInputNormSlack) {
      std::string note;
      coeffs = normalize_coefficients(std::move(coeffs), &note);
      warnings_.push_back(note);
    }
    SymmetricFamily f = make_family(n, m, std::move(coeffs), protocol);
    for (const auto& w : f.warnings()) warnings_.push_back(w);
    return f;
  }

  bool given(const char* flag) const {
    const CLI::Option* opt = leaf_.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  }

  void load_config() {
    if (const char* env = std::getenv("QSD_SEED"); env && !given("--seed")) {
      opts_.seed = std::stoull(env);
    } else if (!given("--seed")) {
      opts_.seed = kDefaultSeed;
    }
    if (opts_.config.empty()) return;
    std::ifstream in(opts_.config);
    if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read config " + opts_.config);
    try {
      config_ = Json::parse(in);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    auto take = [&](const char* key, const char* flag, auto& field) {
      if (config_.contains(key) && !given(flag)) {
        field = config_[key].get<std::decay_t<decltype(field)>>();
      }
    };
    take("trials", "--trials", opts_.trials);
    take("seed", "--seed", opts_.seed);
    take("shards", "--shards", opts_.shards);
    take("format", "--format", opts_.format);
    take("output", "--output", opts_.output);
    take("mechanism", "--mechanism", opts_.mechanism);
    take("eta", "--eta", opts_.eta);
    take("Gamma", "--gamma", opts_.gamma);
  }

  static std::string flat_csv(const Json& report) {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [key, value] : report.items()) {
      if (value.is_primitive()) {
        os << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
      }
    }
    return os.str();
  }

  Options opts_;
  const CLI::App& leaf_;
  std::ostream& out_;
  Json config_ = Json::object();
  std::vector<std::string> warnings_;
};

void add_family_options(CLI::App* sub, Options& o) {
  sub->add_option("--N", o.N, "number of states");
  sub->add_option("--M", o.M, "largest basis index (defaults to #coeffs - 1)");
  sub->add_option("--coeffs", o.coeffs, "coefficients as re,im pairs");
  sub->add_option("--coeffs-polar", o.coeffs_polar, "coefficients as magnitude,phase pairs");
  sub->add_option("--config", o.config, "JSON run configuration");
  sub->add_option("--format", o.format, "json | csv");
  sub->add_option("--output", o.output, "write the report to a file");
  sub->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp field");
}

void add_sampling_options(CLI::App* sub, Options& o) {
  sub->add_option("--trials", o.trials, "Monte Carlo trials");
  sub->add_option("--seed", o.seed, "64-bit seed (QSD_SEED overrides the default)");
  sub->add_option("--shards", o.shards, "parallel shards; shard s uses seed ^ s");
}

bool known_command(const std::vector<std::string>& args) {
  if (args.empty()) return false;
  if (args[0] == "--help" || args[0] == "-h") return true;
  auto it = kCommands.find(args[0]);
  if (it == kCommands.end()) return false;
  if (it->second.empty()) return true;
  if (args.size() < 2) return false;
  return args[1] == "--help" || args[1] == "-h" || it->second.count(args[1]) > 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInfeasibleSchedule:
    case ErrorCode::kCoefficientOrdering:
      return kExitInfeasible;
    default:
      return kExitValidation;
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!known_command(args)) {
    err << kUsage;
    return kExitUsage;
  }

  CLI::App app{"Discrimination of symmetric nonorthogonal photon-polarization states", "qsd"};
  app.require_subcommand(1);
  Options o;

  auto* family = app.add_subcommand("family", "family definitions")->require_subcommand(1);
  auto* family_validate = family->add_subcommand("validate", "validate a family");
  add_family_options(family_validate, o);

  auto* min_error = app.add_subcommand("min-error", "square-root measurement")->require_subcommand(1);
  auto* me_analyze = min_error->add_subcommand("analyze", "analytic and numeric SRM report");
  auto* me_simulate = min_error->add_subcommand("simulate", "Monte Carlo min-error trials");
  add_family_options(me_analyze, o);
  add_family_options(me_simulate, o);
  add_sampling_options(me_simulate, o);

  auto* ud = app.add_subcommand("unambiguous", "optimum unambiguous discrimination")
                 ->require_subcommand(1);
  auto* ud_analyze = ud->add_subcommand("analyze", "orthogonalization report");
  auto* ud_simulate = ud->add_subcommand("simulate", "Monte Carlo unambiguous trials");
  for (auto* sub : {ud_analyze, ud_simulate}) {
    add_family_options(sub, o);
    sub->add_option("--mechanism", o.mechanism, "tpa | sfg")
        ->check(CLI::IsMember({"tpa", "sfg"}));
  }
  add_sampling_options(ud_simulate, o);

  auto* pipeline = app.add_subcommand("pipeline", "composite protocols")->require_subcommand(1);
  auto* sfg_recover =
      pipeline->add_subcommand("sfg-recover", "SFG discrimination with multiport recovery");
  add_family_options(sfg_recover, o);
  add_sampling_options(sfg_recover, o);

  auto* multiport = app.add_subcommand("multiport", "linear-optical multiport")->require_subcommand(1);
  auto* mp_table = multiport->add_subcommand("table", "p(j|k) table for an M = 1 family");
  add_family_options(mp_table, o);

  auto* atom = app.add_subcommand("atom-detector", "detector-atom excitation probabilities");
  add_family_options(atom, o);
  atom->add_option("--eta", o.eta, "atom-field coupling");
  atom->add_option("--gamma", o.gamma, "waiting-time rate Gamma");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kUsage;
    return kExitValidation;
  }

  const CLI::App* leaf = nullptr;
  for (const CLI::App* sub : {family_validate, me_analyze, me_simulate, ud_analyze, ud_simulate,
                              sfg_recover, mp_table, atom}) {
    if (sub->parsed()) leaf = sub;
  }

  try {
    Runner run(o, *leaf, out);
    const Options& opt = run.options();
    if (leaf == family_validate) {
      const SymmetricFamily f = run.family(false);
      run.emit(Json{{"valid", true},
                    {"family", family_to_json(f)},
                    {"linearly_independent", f.linearly_independent()},
                    {"warnings", f.warnings()}});
    } else if (leaf == me_analyze) {
      run.emit(min_error_report(run.family(false)));
    } else if (leaf == me_simulate) {
      const TrialReport r = run_min_error(run.family(false), opt.trials, opt.seed, opt.shards);
      run.emit(trial_report_to_json(r), opt.format == "csv" ? trial_counts_csv(r) : "");
    } else if (leaf == ud_analyze) {
      run.emit(unambiguous_report(run.family(true), mechanism_from_string(opt.mechanism)));
    } else if (leaf == ud_simulate) {
      const TrialReport r = run_unambiguous(run.family(true), mechanism_from_string(opt.mechanism),
                                            opt.trials, opt.seed, opt.shards);
      run.emit(trial_report_to_json(r), opt.format == "csv" ? trial_counts_csv(r) : "");
    } else if (leaf == sfg_recover) {
      const SymmetricFamily f = run.family(true);
      const TrialReport r = run_sfg_recovery_pipeline(f, opt.trials, opt.seed, opt.shards);
      Json report = trial_report_to_json(r);
      report["family"] = family_to_json(f);
      run.emit(std::move(report), opt.format == "csv" ? trial_counts_csv(r) : "");
    } else if (leaf == mp_table) {
      const SymmetricFamily f = run.family(false);
      const SinglePhotonDiscrimination d = min_error_single_photon(f);
      Json table = Json::array();
      for (Eigen::Index k = 0; k < d.table.rows(); ++k) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < d.table.cols(); ++j) row.push_back(d.table(k, j));
        table.push_back(std::move(row));
      }
      run.emit(Json{{"family", family_to_json(f)},
                    {"multiport", multiport_to_json(build_multiport(f))},
                    {"P_C", d.P_C},
                    {"table", std::move(table)}},
               opt.format == "csv" ? multiport_table_csv(d) : "");
    } else if (leaf == atom) {
      run.emit(atom_detector_report(run.family(false), opt.eta, opt.gamma));
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace qsd::cli
