// Command-line front end: MUB checks, invariant-information reports, state
// estimation from count files, Fisher/CRB queries, invariance scans and Monte
// Carlo experiments. Output goes to stdout (JSON by default, CSV on request)
// and is byte-identical for identical argument lists.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/estimators.hpp"
#include "tomoinfo/fisher.hpp"
#include "tomoinfo/hermitian_basis.hpp"
#include "tomoinfo/measurement.hpp"
#include "tomoinfo/montecarlo.hpp"
#include "tomoinfo/mub.hpp"
#include "tomoinfo/random.hpp"
#include "tomoinfo/serialize.hpp"

namespace {

using nlohmann::json;
using namespace tomoinfo;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitStrict = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// Scalar reports in CSV mode become a one-line table.
void emit_scalar_csv(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::ostringstream header;
  std::ostringstream row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) {
      header << ",";
      row << ",";
    }
    header << fields[i].first;
    row << fields[i].second;
  }
  std::cout << header.str() << "\n" << row.str() << "\n";
}

struct StateOptions {
  std::string state_file;
  double purity_lambda = 1.0;
  bool has_state = false;
  bool has_purity = false;
};

void add_state_options(CLI::App* cmd, StateOptions& opts) {
  auto* state = cmd->add_option("--state", opts.state_file, "State JSON file");
  auto* purity =
      cmd->add_option("--purity", opts.purity_lambda,
                      "Mixing weight w of a seeded random state w|psi><psi| + (1-w) I/p")
          ->check(CLI::Range(0.0, 1.0));
  state->excludes(purity);
  purity->excludes(state);
}

DensityMatrix resolve_state(const StateOptions& opts, int dim, std::uint64_t seed) {
  if (!opts.state_file.empty()) {
    const DensityMatrix rho = density_from_json(load_json_file(opts.state_file));
    if (rho.dim() != dim) {
      std::ostringstream msg;
      msg << "state file has dimension " << rho.dim() << ", expected " << dim;
      throw std::invalid_argument(msg.str());
    }
    return rho;
  }
  if (!opts.has_purity) {
    throw std::invalid_argument("either --state or --purity is required");
  }
  // Same derivation as the Monte Carlo runner, so a given seed names the same
  // state everywhere.
  return random_state(dim, StateKind::purity_target, split_seed(seed, 0), opts.purity_lambda);
}

int run_mub_check(int dim, const std::string& out, const std::string& save) {
  const MubSet set = build_mub(dim);
  const ComplementarityReport report = verify_complementarity(set);
  if (!save.empty()) save_json_file(save, to_json(set));
  if (out == "csv") {
    emit_scalar_csv({{"dim", std::to_string(dim)},
                     {"pass", report.pass ? "1" : "0"},
                     {"max_deviation", fmt(report.max_deviation)}});
  } else {
    emit_json(json{{"dim", dim}, {"pass", report.pass}, {"max_deviation", report.max_deviation}});
  }
  return report.pass ? kExitOk : kExitError;
}

int run_bz_error(int dim, const StateOptions& state_opts, std::uint64_t seed,
                 const std::string& out) {
  const DensityMatrix rho = resolve_state(state_opts, dim, seed);
  const MubSet set = build_mub(dim);
  const BzError e = bz_total_error(rho, set);
  const double info = invariant_information(rho);
  if (out == "csv") {
    emit_scalar_csv({{"dim", std::to_string(dim)},
                     {"purity", fmt(purity(rho))},
                     {"E", fmt(e.closed_form)},
                     {"sum_form", fmt(e.sum_form)},
                     {"closed_form", fmt(e.closed_form)},
                     {"invariant_information", fmt(info)}});
  } else {
    emit_json(json{{"dim", dim},
                   {"purity", purity(rho)},
                   {"E", e.closed_form},
                   {"sum_form", e.sum_form},
                   {"closed_form", e.closed_form},
                   {"invariant_information", info}});
  }
  return kExitOk;
}

int run_estimate(int dim, const std::string& counts_file, const std::string& scheme_name,
                 const std::string& method_name, int max_iter, bool strict) {
  if (!std::filesystem::exists(counts_file)) {
    throw std::invalid_argument("counts file not found: " + counts_file);
  }
  const MeasurementRecord record = record_from_json(load_json_file(counts_file));
  if (record.dim != dim) {
    std::ostringstream msg;
    msg << "counts file has dimension " << record.dim << ", expected " << dim;
    throw std::invalid_argument(msg.str());
  }
  const Scheme scheme = scheme_from_string(scheme_name);
  if (record.scheme != scheme) {
    std::ostringstream msg;
    msg << "counts file holds a " << to_string(record.scheme) << " record, not " << scheme_name;
    throw std::invalid_argument(msg.str());
  }
  const EstimatorKind method = estimator_from_string(method_name);

  json diagnostics;
  std::optional<DensityMatrix> estimate;
  bool reliability_flag = false;
  if (scheme == Scheme::mub) {
    const MubSet set = build_mub(dim);
    switch (method) {
      case EstimatorKind::direct:
        estimate = direct_inversion(record, set);
        diagnostics = {{"iterations", 0}, {"log_likelihood", nullptr}, {"converged", true}};
        break;
      case EstimatorKind::direct_projected:
        estimate = project_to_physical(direct_inversion(record, set));
        diagnostics = {{"iterations", 0}, {"log_likelihood", nullptr}, {"converged", true}};
        break;
      case EstimatorKind::ml: {
        MlOptions options;
        options.max_iter = max_iter;
        const MlResult result = ml_estimate(record, set, options);
        estimate = result.state;
        reliability_flag = !result.converged;
        diagnostics = {{"iterations", result.iterations},
                       {"log_likelihood", result.log_likelihood},
                       {"converged", result.converged},
                       {"probability_floored", result.probability_floored}};
        break;
      }
      default:
        throw std::invalid_argument("method " + method_name + " is not available for scheme mub");
    }
  } else if (scheme == Scheme::ortho) {
    const HermitianBasis basis = gell_mann_basis(dim);
    switch (method) {
      case EstimatorKind::ortho_inv:
        estimate = ortho_inversion(record, basis);
        diagnostics = {{"iterations", 0}, {"log_likelihood", nullptr}, {"converged", true}};
        break;
      case EstimatorKind::ml: {
        MlOptions options;
        options.max_iter = max_iter;
        const MlResult result = ml_estimate(record, ortho_quorum(dim, basis), options);
        estimate = result.state;
        reliability_flag = !result.converged;
        diagnostics = {{"iterations", result.iterations},
                       {"log_likelihood", result.log_likelihood},
                       {"converged", result.converged},
                       {"probability_floored", result.probability_floored}};
        break;
      }
      default:
        throw std::invalid_argument("method " + method_name +
                                    " is not available for scheme ortho");
    }
  } else {
    throw std::invalid_argument("eigen records fix the truth's own eigenbasis; nothing to estimate");
  }

  diagnostics["min_eigenvalue"] = estimate->min_eigenvalue();
  emit_json(json{{"state", to_json(*estimate)}, {"diagnostics", diagnostics}});
  return (strict && reliability_flag) ? kExitStrict : kExitOk;
}

int run_fisher(int dim, const StateOptions& state_opts, std::uint64_t seed,
               const std::string& form_name, const std::string& scheme_name, long long shots,
               bool closed_form, bool ellipsoid, bool strict, const std::string& out) {
  const DensityMatrix rho = resolve_state(state_opts, dim, seed);
  const HermitianBasis basis = gell_mann_basis(dim);
  FisherForm form;
  if (form_name == "gaussian") {
    form = FisherForm::gaussian;
  } else if (form_name == "multinomial") {
    form = FisherForm::multinomial;
  } else {
    throw std::invalid_argument("unknown form '" + form_name +
                                "' (expected gaussian or multinomial)");
  }

  std::optional<FisherMatrix> fisher;
  std::optional<double> closed;
  if (scheme_name == "mub") {
    const MubSet set = build_mub(dim);
    fisher = form == FisherForm::gaussian ? fisher_gaussian(rho, set, basis, shots)
                                          : fisher_multinomial(rho, set, basis, shots);
    if (closed_form) {
      if (dim == 3 && form == FisherForm::gaussian) {
        closed = fisher_p3_closed_form(rho, set, shots);
      } else if (dim == 2 && form == FisherForm::gaussian) {
        // Invariant closed form of Tr F^{-1} for the qubit MUB quorum.
        closed = (2.0 - purity(rho)) / (2.0 * static_cast<double>(shots));
      } else {
        throw std::invalid_argument(
            "no closed form for this configuration (mub closed forms: gaussian at p = 2 or 3)");
      }
    }
  } else if (scheme_name == "ortho") {
    const OrthoQuorum quorum = ortho_quorum(dim, basis);
    fisher = form == FisherForm::gaussian ? fisher_gaussian(rho, quorum, basis, shots)
                                          : fisher_multinomial(rho, quorum, basis, shots);
    if (closed_form) closed = ortho_quorum_error(rho, shots).closed_form;
  } else {
    throw std::invalid_argument("unknown scheme '" + scheme_name + "' (expected mub or ortho)");
  }

  const CrbResult crb = crb_trace(*fisher);
  json report{{"dim", dim},
              {"form", form_name},
              {"scheme", scheme_name},
              {"shots", shots},
              {"trace_inverse", crb.trace_inverse},
              {"condition_number", crb.condition_number},
              {"reliable", crb.reliable}};
  if (closed) report["closed_form"] = *closed;
  if (ellipsoid) {
    const ErrorEllipsoid e = error_ellipsoid(*fisher);
    json axes = json::array();
    for (Eigen::Index c = 0; c < e.axes.cols(); ++c) {
      json col = json::array();
      for (Eigen::Index r = 0; r < e.axes.rows(); ++r) col.push_back(e.axes(r, c));
      axes.push_back(std::move(col));
    }
    report["ellipsoid"] = json{
        {"eigenvalues", std::vector<double>(e.eigenvalues.data(),
                                            e.eigenvalues.data() + e.eigenvalues.size())},
        {"half_axis_scales",
         std::vector<double>(e.half_axis_scales.data(),
                             e.half_axis_scales.data() + e.half_axis_scales.size())},
        {"contour_half_axes",
         std::vector<double>(e.contour_half_axes.data(),
                             e.contour_half_axes.data() + e.contour_half_axes.size())},
        {"axes", std::move(axes)}};
  }
  if (out == "csv") {
    std::vector<std::pair<std::string, std::string>> fields{
        {"dim", std::to_string(dim)},
        {"form", form_name},
        {"scheme", scheme_name},
        {"shots", std::to_string(shots)},
        {"trace_inverse", fmt(crb.trace_inverse)},
        {"condition_number", fmt(crb.condition_number)},
        {"reliable", crb.reliable ? "1" : "0"}};
    if (closed) fields.emplace_back("closed_form", fmt(*closed));
    emit_scalar_csv(fields);
  } else {
    emit_json(report);
  }
  return (strict && !crb.reliable) ? kExitStrict : kExitOk;
}

int run_scan(int dim, double purity_lambda, int n_unitaries, const std::string& quantity_name,
             long long shots, std::uint64_t seed, bool strict, const std::string& out) {
  const ScanQuantity quantity = scan_quantity_from_string(quantity_name);
  const ScanResult result = invariance_scan(dim, purity_lambda, n_unitaries, quantity, seed, shots);
  if (out == "csv") {
    std::ostringstream csv;
    csv << "index,value\n";
    for (const auto& point : result.values) {
      csv << point.index << "," << fmt(point.value) << "\n";
    }
    std::cout << csv.str();
  } else {
    json values = json::array();
    for (const auto& point : result.values) {
      values.push_back(json{{"index", point.index}, {"value", point.value}});
    }
    emit_json(json{{"dim", dim},
                   {"quantity", quantity_name},
                   {"unitaries", n_unitaries},
                   {"shots", shots},
                   {"values", std::move(values)},
                   {"min", result.min_value},
                   {"max", result.max_value},
                   {"mean", result.mean_value},
                   {"relative_spread", result.relative_spread},
                   {"skipped", result.skipped}});
  }
  return (strict && result.skipped > 0) ? kExitStrict : kExitOk;
}

ExperimentConfig build_config(const json& file_config, int dim, bool has_dim,
                              const std::string& scheme, bool has_scheme,
                              const std::string& method, bool has_method, long long shots,
                              bool has_shots, long long trials, bool has_trials,
                              const StateOptions& state_opts, std::uint64_t seed, bool has_seed,
                              int jobs, bool has_jobs, bool exclude_nonconverged,
                              bool has_exclude) {
  ExperimentConfig config;
  // File values first, explicit flags override.
  if (file_config.contains("dim")) config.dim = file_config.at("dim").get<int>();
  if (file_config.contains("scheme")) {
    config.scheme = scheme_from_string(file_config.at("scheme").get<std::string>());
  }
  if (file_config.contains("method")) {
    config.estimator = estimator_from_string(file_config.at("method").get<std::string>());
  }
  if (file_config.contains("shots")) config.shots = file_config.at("shots").get<long long>();
  if (file_config.contains("trials")) config.trials = file_config.at("trials").get<long long>();
  if (file_config.contains("seed")) config.base_seed = file_config.at("seed").get<std::uint64_t>();
  if (file_config.contains("jobs")) config.jobs = file_config.at("jobs").get<int>();
  if (file_config.contains("exclude_nonconverged")) {
    config.exclude_nonconverged = file_config.at("exclude_nonconverged").get<bool>();
  }
  if (file_config.contains("purity")) {
    config.state.kind = StateKind::purity_target;
    config.state.lambda = file_config.at("purity").get<double>();
  }
  if (file_config.contains("state")) {
    config.state.fixed =
        density_from_json(load_json_file(file_config.at("state").get<std::string>()));
  }

  if (has_dim) config.dim = dim;
  if (has_scheme) config.scheme = scheme_from_string(scheme);
  if (has_method) config.estimator = estimator_from_string(method);
  if (has_shots) config.shots = shots;
  if (has_trials) config.trials = trials;
  if (has_seed) config.base_seed = seed;
  if (has_jobs) config.jobs = jobs;
  if (has_exclude) config.exclude_nonconverged = exclude_nonconverged;
  if (state_opts.has_state) {
    config.state.fixed = density_from_json(load_json_file(state_opts.state_file));
  } else if (state_opts.has_purity) {
    config.state.fixed.reset();
    config.state.kind = StateKind::purity_target;
    config.state.lambda = state_opts.purity_lambda;
  }
  return config;
}

json summary_to_json(const ExperimentConfig& config, const SummaryStats& summary) {
  return json{{"dim", config.dim},
              {"scheme", to_string(config.scheme)},
              {"method", to_string(config.estimator)},
              {"shots", config.shots},
              {"trials", config.trials},
              {"seed", config.base_seed},
              {"jobs", config.jobs},
              {"mean_d", summary.mean_d},
              {"std_error_of_mean", summary.std_error_of_mean},
              {"coord_mean_sq_dev",
               std::vector<double>(summary.coord_mean_sq_dev.data(),
                                   summary.coord_mean_sq_dev.data() +
                                       summary.coord_mean_sq_dev.size())},
              {"trials_used", summary.trials_used},
              {"nonphysical_count", summary.nonphysical_count},
              {"ml_nonconverged_count", summary.ml_nonconverged_count}};
}

int run_mc_run(const ExperimentConfig& config, bool paper_table, bool strict,
               const std::string& out) {
  const TrialsOutput result = run_trials_detailed(config);
  if (out == "csv") {
    std::ostringstream csv;
    csv << "trial,seed,d,converged,min_eigenvalue\n";
    for (const auto& row : result.rows) {
      csv << row.trial << "," << row.seed << "," << fmt(row.d) << ","
          << (row.converged ? 1 : 0) << "," << fmt(row.min_eigenvalue) << "\n";
    }
    std::cout << csv.str();
  } else {
    json report = summary_to_json(config, result.summary);
    if (paper_table) {
      // Truth state exactly as run_trials derived it.
      ExperimentConfig probe = config;
      const DensityMatrix truth =
          probe.state.fixed ? *probe.state.fixed
                            : random_state(config.dim, config.state.kind,
                                           split_seed(config.base_seed, 0), config.state.lambda);
      const double n = static_cast<double>(config.shots);
      const MubSet set = build_mub(config.dim);
      const double e = bz_total_error(truth, set).closed_form;
      json crb_value;
      try {
        switch (config.scheme) {
          case Scheme::mub: {
            const HermitianBasis basis = gell_mann_basis(config.dim);
            crb_value =
                crb_trace(fisher_multinomial(truth, set, basis, config.shots)).trace_inverse;
            break;
          }
          case Scheme::ortho:
            crb_value = ortho_quorum_error(truth, config.shots).closed_form;
            break;
          case Scheme::eigen:
            crb_value = eigenbasis_error(truth) / n;
            break;
        }
      } catch (const std::invalid_argument&) {
        crb_value = nullptr;  // boundary state: bound undefined
      }
      report["paper_table"] = json{{"E_over_N", e / n},
                                   {"crb_trace", crb_value},
                                   {"N_mean_d", n * result.summary.mean_d}};
    }
    emit_json(report);
  }
  return (strict && result.summary.ml_nonconverged_count > 0) ? kExitStrict : kExitOk;
}

int run_mc_sweep(const ExperimentConfig& base, const std::vector<long long>& shots_list,
                 const std::string& out) {
  const DensityMatrix truth =
      base.state.fixed ? *base.state.fixed
                       : random_state(base.dim, base.state.kind, split_seed(base.base_seed, 0),
                                      base.state.lambda);
  const std::vector<SweepRow> rows =
      crb_saturation_sweep(base.dim, truth, shots_list, base.trials, base.base_seed, base.jobs);
  if (out == "csv") {
    std::ostringstream csv;
    csv << "N,n_mean_d_ml,n_crb_multinomial,ratio,n_mean_d_direct,bz_error,"
           "ml_std_error,direct_std_error\n";
    for (const auto& row : rows) {
      csv << row.shots << "," << fmt(row.n_mean_d_ml) << "," << fmt(row.n_crb_multinomial) << ","
          << fmt(row.ratio) << "," << fmt(row.n_mean_d_direct) << "," << fmt(row.bz_error) << ","
          << fmt(row.ml_std_error) << "," << fmt(row.direct_std_error) << "\n";
    }
    std::cout << csv.str();
  } else {
    json table = json::array();
    for (const auto& row : rows) {
      table.push_back(json{{"N", row.shots},
                           {"n_mean_d_ml", row.n_mean_d_ml},
                           {"n_crb_multinomial", row.n_crb_multinomial},
                           {"ratio", row.ratio},
                           {"n_mean_d_direct", row.n_mean_d_direct},
                           {"bz_error", row.bz_error},
                           {"ml_std_error", row.ml_std_error},
                           {"direct_std_error", row.direct_std_error}});
    }
    emit_json(json{{"dim", base.dim},
                   {"trials", base.trials},
                   {"seed", base.base_seed},
                   {"rows", std::move(table)}});
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MUB tomography and invariant-information laboratory"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  try {
    // mub check
    auto* mub_cmd = app.add_subcommand("mub", "MUB set operations")->require_subcommand(1);
    auto* mub_check = mub_cmd->add_subcommand("check", "Build a MUB set and verify complementarity");
    int mc_dim = 2;
    std::string mc_out = "json";
    std::string mc_save;
    mub_check->add_option("--dim", mc_dim, "Hilbert space dimension (prime: 2, 3, 5, 7)")
        ->required();
    mub_check->add_option("--out", mc_out, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    mub_check->add_option("--save", mc_save, "Write the MUB set JSON to this file");
    mub_check->callback([&] { exit_code = run_mub_check(mc_dim, mc_out, mc_save); });

    // bz-error
    auto* bz_cmd = app.add_subcommand("bz-error", "Total error E and invariant information");
    int bz_dim = 2;
    StateOptions bz_state;
    std::uint64_t bz_seed = 0;
    std::string bz_out = "json";
    bz_cmd->add_option("--dim", bz_dim, "Hilbert space dimension (prime: 2, 3, 5, 7)")->required();
    add_state_options(bz_cmd, bz_state);
    bz_cmd->add_option("--seed", bz_seed, "Base RNG seed")
        ->envname("TOMOINFO_SEED")
        ->capture_default_str();
    bz_cmd->add_option("--out", bz_out, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    bz_cmd->callback([&] {
      bz_state.has_state = !bz_state.state_file.empty();
      bz_state.has_purity = bz_cmd->count("--purity") > 0;
      exit_code = run_bz_error(bz_dim, bz_state, bz_seed, bz_out);
    });

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Reconstruct a state from a counts file");
    int est_dim = 2;
    std::string est_counts;
    std::string est_scheme = "mub";
    std::string est_method = "direct";
    int est_max_iter = 10000;
    bool est_strict = false;
    est_cmd->add_option("--dim", est_dim, "Hilbert space dimension")->required();
    est_cmd->add_option("--counts", est_counts, "Measurement record JSON file")->required();
    est_cmd->add_option("--scheme", est_scheme, "Measurement scheme: mub or ortho")
        ->check(CLI::IsMember({"mub", "ortho"}))
        ->capture_default_str();
    est_cmd
        ->add_option("--method", est_method,
                     "Estimator: direct, direct-projected, ml or ortho-inv")
        ->capture_default_str();
    est_cmd->add_option("--max-iter", est_max_iter, "ML iteration cap")->capture_default_str();
    est_cmd->add_flag("--strict", est_strict, "Exit 2 when a reliability flag fires");
    est_cmd->callback([&] {
      exit_code = run_estimate(est_dim, est_counts, est_scheme, est_method, est_max_iter,
                               est_strict);
    });

    // fisher
    auto* fi_cmd = app.add_subcommand("fisher", "Fisher information and Cramer-Rao bound");
    int fi_dim = 2;
    StateOptions fi_state;
    std::uint64_t fi_seed = 0;
    std::string fi_form = "gaussian";
    std::string fi_scheme = "mub";
    long long fi_shots = 100;
    bool fi_closed = false;
    bool fi_ellipsoid = false;
    bool fi_strict = false;
    std::string fi_out = "json";
    fi_cmd->add_option("--dim", fi_dim, "Hilbert space dimension (prime: 2, 3, 5, 7)")->required();
    add_state_options(fi_cmd, fi_state);
    fi_cmd->add_option("--seed", fi_seed, "Base RNG seed")
        ->envname("TOMOINFO_SEED")
        ->capture_default_str();
    fi_cmd->add_option("--form", fi_form, "Fisher form: gaussian or multinomial")
        ->check(CLI::IsMember({"gaussian", "multinomial"}))
        ->capture_default_str();
    fi_cmd->add_option("--scheme", fi_scheme, "Quorum: mub or ortho")
        ->check(CLI::IsMember({"mub", "ortho"}))
        ->capture_default_str();
    fi_cmd->add_option("--shots", fi_shots, "Shots per observable")->capture_default_str();
    fi_cmd->add_flag("--closed-form", fi_closed, "Also report the closed-form error when one exists");
    fi_cmd->add_flag("--ellipsoid", fi_ellipsoid, "Also report the error-ellipsoid axes");
    fi_cmd->add_flag("--strict", fi_strict, "Exit 2 when a reliability flag fires");
    fi_cmd->add_option("--out", fi_out, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    fi_cmd->callback([&] {
      fi_state.has_state = !fi_state.state_file.empty();
      fi_state.has_purity = fi_cmd->count("--purity") > 0;
      exit_code = run_fisher(fi_dim, fi_state, fi_seed, fi_form, fi_scheme, fi_shots, fi_closed,
                             fi_ellipsoid, fi_strict, fi_out);
    });

    // scan invariance
    auto* scan_cmd = app.add_subcommand("scan", "Unitary-orbit scans")->require_subcommand(1);
    auto* scan_inv =
        scan_cmd->add_subcommand("invariance", "Evaluate a quantity over unitary rotations");
    int sc_dim = 2;
    double sc_purity = 1.0;
    int sc_unitaries = 50;
    std::string sc_quantity = "bz_error";
    long long sc_shots = 100;
    std::uint64_t sc_seed = 0;
    bool sc_strict = false;
    std::string sc_out = "json";
    scan_inv->add_option("--dim", sc_dim, "Hilbert space dimension (prime: 2, 3, 5, 7)")
        ->required();
    scan_inv->add_option("--purity", sc_purity, "Mixing weight of the seeded base state")
        ->check(CLI::Range(0.0, 1.0))
        ->required();
    scan_inv->add_option("--unitaries", sc_unitaries, "Number of rotations")
        ->capture_default_str();
    scan_inv
        ->add_option("--quantity", sc_quantity,
                     "bz_error, crb_gauss, crb_multinomial or ortho_error")
        ->capture_default_str();
    scan_inv->add_option("--shots", sc_shots, "Shots per observable (crb/ortho quantities)")
        ->capture_default_str();
    scan_inv->add_option("--seed", sc_seed, "Base RNG seed")
        ->envname("TOMOINFO_SEED")
        ->capture_default_str();
    scan_inv->add_flag("--strict", sc_strict, "Exit 2 when rotations were skipped");
    scan_inv->add_option("--out", sc_out, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    scan_inv->callback([&] {
      exit_code =
          run_scan(sc_dim, sc_purity, sc_unitaries, sc_quantity, sc_shots, sc_seed, sc_strict,
                   sc_out);
    });

    // mc run / mc sweep
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo experiments")->require_subcommand(1);
    auto* mc_run = mc_cmd->add_subcommand("run", "Repeated simulate-measure-estimate trials");
    int run_dim = 2;
    std::string run_scheme = "mub";
    std::string run_method = "direct";
    long long run_shots = 100;
    long long run_trials = 1000;
    StateOptions run_state;
    std::uint64_t run_seed = 0;
    int run_jobs = 1;
    bool run_exclude = false;
    bool run_paper_table = false;
    bool run_strict = false;
    std::string run_out = "json";
    std::string run_config_file;
    mc_run->add_option("--dim", run_dim, "Hilbert space dimension (prime: 2, 3, 5, 7)")
        ->capture_default_str();
    mc_run->add_option("--scheme", run_scheme, "Measurement scheme: mub, ortho or eigen")
        ->capture_default_str();
    mc_run
        ->add_option("--method", run_method, "Estimator: direct, direct-projected, ml or ortho-inv")
        ->capture_default_str();
    mc_run->add_option("--shots", run_shots, "Shots per observable")->capture_default_str();
    mc_run->add_option("--trials", run_trials, "Number of trials")->capture_default_str();
    add_state_options(mc_run, run_state);
    mc_run->add_option("--seed", run_seed, "Base RNG seed")
        ->envname("TOMOINFO_SEED")
        ->capture_default_str();
    mc_run->add_option("--jobs", run_jobs, "Worker threads (output independent of this)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    mc_run->add_flag("--exclude-nonconverged", run_exclude,
                     "Drop non-converged ML trials from summary moments");
    mc_run->add_flag("--paper-table", run_paper_table,
                     "Add the (E/N, Tr F^-1, N <d>) comparison to the JSON summary");
    mc_run->add_flag("--strict", run_strict, "Exit 2 when ML trials failed to converge");
    mc_run->add_option("--out", run_out, "Output format: json (summary) or csv (per-trial rows)")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    mc_run->add_option("--config", run_config_file, "JSON config file (flags override it)");
    mc_run->callback([&] {
      run_state.has_state = !run_state.state_file.empty();
      run_state.has_purity = mc_run->count("--purity") > 0;
      const json file_config =
          run_config_file.empty() ? json::object() : load_json_file(run_config_file);
      const ExperimentConfig config = build_config(
          file_config, run_dim, mc_run->count("--dim") > 0, run_scheme,
          mc_run->count("--scheme") > 0, run_method, mc_run->count("--method") > 0, run_shots,
          mc_run->count("--shots") > 0, run_trials, mc_run->count("--trials") > 0, run_state,
          run_seed, mc_run->count("--seed") > 0, run_jobs, mc_run->count("--jobs") > 0,
          run_exclude, mc_run->count("--exclude-nonconverged") > 0);
      exit_code = run_mc_run(config, run_paper_table, run_strict, run_out);
    });

    auto* mc_sweep = mc_cmd->add_subcommand("sweep", "ML error versus the multinomial bound over N");
    int sw_dim = 2;
    std::vector<long long> sw_shots;
    long long sw_trials = 1000;
    StateOptions sw_state;
    std::uint64_t sw_seed = 0;
    int sw_jobs = 1;
    std::string sw_out = "json";
    std::string sw_config_file;
    mc_sweep->add_option("--dim", sw_dim, "Hilbert space dimension (prime: 2, 3, 5, 7)")
        ->capture_default_str();
    mc_sweep->add_option("--shots", sw_shots, "Shot counts, ascending (repeatable)");
    mc_sweep->add_option("--trials", sw_trials, "Trials per sweep point")->capture_default_str();
    add_state_options(mc_sweep, sw_state);
    mc_sweep->add_option("--seed", sw_seed, "Base RNG seed")
        ->envname("TOMOINFO_SEED")
        ->capture_default_str();
    mc_sweep->add_option("--jobs", sw_jobs, "Worker threads (output independent of this)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    mc_sweep->add_option("--out", sw_out, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    mc_sweep->add_option("--config", sw_config_file, "JSON config file (flags override it)");
    mc_sweep->callback([&] {
      sw_state.has_state = !sw_state.state_file.empty();
      sw_state.has_purity = mc_sweep->count("--purity") > 0;
      const json file_config =
          sw_config_file.empty() ? json::object() : load_json_file(sw_config_file);
      ExperimentConfig config = build_config(
          file_config, sw_dim, mc_sweep->count("--dim") > 0, "mub", false, "ml", false, 100, false,
          sw_trials, mc_sweep->count("--trials") > 0, sw_state, sw_seed,
          mc_sweep->count("--seed") > 0, sw_jobs, mc_sweep->count("--jobs") > 0, false, false);
      std::vector<long long> shots_list = sw_shots;
      if (shots_list.empty() && file_config.contains("shots")) {
        shots_list = file_config.at("shots").get<std::vector<long long>>();
      }
      if (shots_list.empty()) {
        throw std::invalid_argument("mc sweep requires at least one --shots value");
      }
      exit_code = run_mc_sweep(config, shots_list, sw_out);
    });

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; every other parse problem is an input error.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return exit_code;
}
