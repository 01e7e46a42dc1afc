// tomo: generate analytic tomograms, simulate homodyne acquisitions, check
// uncertainty relations, and reconstruct Wigner functions.
//
// Exit codes: 0 = success / all checks pass, 1 = a physics check failed,
// 2 = usage, input or data error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tomo/common.hpp"
#include "tomo/io.hpp"
#include "tomo/radon.hpp"
#include "tomo/sampler.hpp"
#include "tomo/states.hpp"
#include "tomo/tomogram.hpp"
#include "tomo/uncertainty.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json make_provenance(const std::string& command,
                             ordered_json options) {
  ordered_json p;
  p["tool"] = "tomo";
  p["version"] = std::string(tomo::kVersion);
  p["command"] = command;
  p["options"] = std::move(options);
  return p;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw tomo::FormatError("cannot parse number \"" + token + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

// "lo:hi:count"
Eigen::VectorXd parse_range(const std::string& text) {
  const std::size_t a = text.find(':');
  const std::size_t b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw tomo::FormatError("range must look like lo:hi:count, got \"" + text +
                            "\"");
  try {
    const double lo = std::stod(text.substr(0, a));
    const double hi = std::stod(text.substr(a + 1, b - a - 1));
    const int count = std::stoi(text.substr(b + 1));
    return tomo::uniform_grid(lo, hi, count);
  } catch (const tomo::Error&) {
    throw;
  } catch (const std::exception&) {
    throw tomo::FormatError("cannot parse range \"" + text + "\"");
  }
}

struct StateFlags {
  std::string preset;
  std::string spec_path;
  double alpha_re = 0.0, alpha_im = 0.0;
  double r = 0.0, phi = 0.0;
  double nbar = 0.0;
  int n = 0;

  void add_to(CLI::App* cmd, const std::string& fock_flag = "--n") {
    cmd->add_option("--preset", preset,
                    "state preset: vacuum|coherent|squeezed|thermal|fock");
    cmd->add_option("--spec", spec_path, "state spec JSON file");
    cmd->add_option("--alpha-re", alpha_re, "coherent amplitude, real part");
    cmd->add_option("--alpha-im", alpha_im, "coherent amplitude, imag part");
    cmd->add_option("--r", r, "squeezing parameter");
    cmd->add_option("--phi", phi, "squeezing angle (radians)");
    cmd->add_option("--nbar", nbar, "thermal mean photon number");
    cmd->add_option(fock_flag, n, "fock photon number");
  }

  tomo::StateModel resolve() const {
    if (preset.empty() == spec_path.empty())
      throw tomo::FormatError("exactly one of --preset / --spec is required");
    if (!spec_path.empty())
      return tomo::state_from_json(tomo::load_json(spec_path));
    if (preset == "vacuum") return tomo::vacuum_state();
    if (preset == "coherent") return tomo::coherent_state(alpha_re, alpha_im);
    if (preset == "squeezed") return tomo::squeezed_vacuum_state(r, phi);
    if (preset == "thermal") return tomo::thermal_state(nbar);
    if (preset == "fock") return tomo::FockStateSpec(n);
    throw tomo::FormatError("unknown preset \"" + preset + "\"");
  }

  ordered_json describe() const {
    ordered_json j;
    if (!spec_path.empty()) {
      j["spec"] = spec_path;
    } else {
      j["preset"] = preset;
      if (preset == "coherent") {
        j["alpha_re"] = alpha_re;
        j["alpha_im"] = alpha_im;
      } else if (preset == "squeezed") {
        j["r"] = r;
        j["phi"] = phi;
      } else if (preset == "thermal") {
        j["nbar"] = nbar;
      } else if (preset == "fock") {
        j["n"] = n;
      }
    }
    return j;
  }
};

// --- generate ---

struct GenerateOptions {
  StateFlags state;
  int thetas = 48;
  std::string x_range;  // empty = sized to the state, at least -7:7:281
  std::string out;
};

int run_generate(const GenerateOptions& opt) {
  const tomo::StateModel state = opt.state.resolve();
  const Eigen::VectorXd thetas = tomo::phase_scan(opt.thetas);
  const Eigen::VectorXd xs = opt.x_range.empty()
                                 ? tomo::recommended_x_grid(state)
                                 : parse_range(opt.x_range);
  const tomo::OpticalTomogramGrid grid =
      tomo::exact_tomogram_grid(state, thetas, xs);

  const tomo::GridValidationReport report =
      tomo::validate(grid, tomo::kAnalyticNormTol);
  if (!report.pass) {
    std::cerr << "error: generated grid fails validation (max normalization "
                 "defect "
              << report.max_defect << " > " << tomo::kAnalyticNormTol
              << "); widen --x-range\n";
    return 2;
  }

  ordered_json j = tomo::grid_to_json(grid);
  ordered_json options = opt.state.describe();
  options["thetas"] = opt.thetas;
  {
    std::ostringstream effective;
    effective << xs(0) << ':' << xs(xs.size() - 1) << ':' << xs.size();
    options["x_range"] = effective.str();
  }
  options["state"] = tomo::state_to_json(state);
  j["provenance"] = make_provenance("generate", std::move(options));
  tomo::save_json(opt.out, j);
  std::cout << "wrote " << opt.out << " (" << grid.n_thetas() << " angles x "
            << grid.n_xs() << " quadratures, max defect " << report.max_defect
            << ")\n";
  return 0;
}

// --- sample ---

struct SampleOptions {
  StateFlags state;
  std::string phases;
  int count = 0;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::string out;
  std::string plan_out;
};

int run_sample(const SampleOptions& opt) {
  const tomo::StateModel state = opt.state.resolve();
  const tomo::AcquisitionPlan plan(parse_list(opt.phases), opt.count, opt.seed,
                                   opt.noise_sigma);
  const tomo::QuadratureSampleSet samples = tomo::acquire(state, plan);
  tomo::save_samples_csv(opt.out, samples);

  ordered_json j = tomo::plan_to_json(plan);
  ordered_json options = opt.state.describe();
  options["phases"] = opt.phases;
  options["n"] = opt.count;
  options["seed"] = opt.seed;
  options["noise_sigma"] = opt.noise_sigma;
  options["out"] = opt.out;
  options["state"] = tomo::state_to_json(state);
  j["provenance"] = make_provenance("sample", std::move(options));
  const std::string plan_path =
      opt.plan_out.empty() ? opt.out + ".plan.json" : opt.plan_out;
  tomo::save_json(plan_path, j);
  std::cout << "wrote " << samples.records.size() << " records to " << opt.out
            << " (plan: " << plan_path << ")\n";
  return 0;
}

// --- check ---

struct CheckOptions {
  std::string input;
  std::string input_format;  // "", "grid", "samples"
  std::string out;
  std::string format = "json";
  std::string checks = "heisenberg,sr,f";
  int replicates = 200;
  std::uint64_t seed = 0;
  int scan = 48;
  std::string scan_thetas;
  double se_mult = 3.0;
  double grid_slack = 1e-9;
  std::size_t min_samples = 1000;
  double theta_tol = 1e-6;
  std::string histogram;  // "theta_bins,x_bins,lo,hi"
};

bool wants(const std::string& checks, const std::string& name) {
  std::size_t pos = 0;
  while (pos <= checks.size()) {
    const std::size_t comma = checks.find(',', pos);
    const std::string token =
        checks.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (token == name) return true;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return false;
}

int run_check(const CheckOptions& opt) {
  const bool want_heis = wants(opt.checks, "heisenberg");
  const bool want_sr = wants(opt.checks, "sr");
  const bool want_f = wants(opt.checks, "f");
  if (!want_heis && !want_sr && !want_f)
    throw tomo::FormatError("--checks selected nothing: \"" + opt.checks +
                            "\"");

  tomo::CheckConfig config;
  config.bootstrap_replicates = opt.replicates;
  config.seed = opt.seed;
  config.se_multiplier = opt.se_mult;
  config.grid_slack = opt.grid_slack;
  config.min_samples = opt.min_samples;
  config.theta_tol = opt.theta_tol;
  if (!opt.scan_thetas.empty()) config.theta_scan = parse_list(opt.scan_thetas);

  std::string kind = opt.input_format;
  if (kind.empty()) {
    const std::string ext = std::filesystem::path(opt.input).extension();
    kind = (ext == ".csv") ? "samples" : "grid";
  }

  tomo::UncertaintyReport report;
  if (kind == "grid") {
    if (!opt.histogram.empty())
      throw tomo::FormatError("--histogram applies to sample input only");
    const tomo::OpticalTomogramGrid grid =
        tomo::grid_from_json(tomo::load_json(opt.input));
    const tomo::GridValidationReport validation =
        tomo::validate(grid, tomo::kMeasuredNormTol);
    if (!validation.pass) {
      std::cerr << "error: input grid fails validation: max normalization "
                   "defect "
                << validation.max_defect << ", " << validation.negatives.size()
                << " negative entries\n";
      return 2;
    }
    if (config.theta_scan.empty()) {
      const Eigen::VectorXd scan = tomo::phase_scan(opt.scan);
      config.theta_scan.assign(scan.begin(), scan.end());
    }
    report = tomo::f_scan(grid, config);
  } else if (kind == "samples") {
    const tomo::QuadratureSampleSet samples = tomo::load_samples_csv(opt.input);
    if (!opt.histogram.empty()) {
      const std::vector<double> h = parse_list(opt.histogram);
      if (h.size() != 4)
        throw tomo::FormatError(
            "--histogram needs theta_bins,x_bins,lo,hi");
      const tomo::HistogramTomogram hist = tomo::histogram_tomogram(
          samples, static_cast<int>(h[0]), static_cast<int>(h[1]), h[2], h[3]);
      if (hist.clipped_samples > 0)
        std::cerr << "note: " << hist.clipped_samples
                  << " samples fell outside the histogram X range\n";
      if (config.theta_scan.empty()) {
        const Eigen::VectorXd scan = tomo::phase_scan(opt.scan);
        config.theta_scan.assign(scan.begin(), scan.end());
      }
      report = tomo::f_scan(hist.grid, config);
    } else {
      report = tomo::f_scan(samples, config);
    }
  } else {
    throw tomo::FormatError("unknown --input-format \"" + kind + "\"");
  }
  report.input_description = opt.input;

  // human-readable summary
  double f_min = 0.0;
  int f_valid = 0;
  for (const auto& e : report.f_curve) {
    if (!e.ok()) continue;
    f_min = (f_valid == 0) ? e.f : std::min(f_min, e.f);
    ++f_valid;
  }
  if (want_heis)
    std::cout << "heisenberg: product = " << report.heisenberg.value
              << " (bound " << report.heisenberg.bound << ", slack "
              << report.heisenberg.slack << ") "
              << (report.heisenberg.pass ? "PASS" : "FAIL") << "\n";
  if (want_sr)
    std::cout << "sr: determinant = " << report.sr.value << " (bound "
              << report.sr.bound << ", slack " << report.sr.slack << ") "
              << (report.sr.pass ? "PASS" : "FAIL") << "\n";
  if (want_f)
    std::cout << "F(theta): min = " << f_min << " over " << f_valid
              << " angles " << (report.f_pass ? "PASS" : "FAIL") << "\n";
  for (const auto& warning : report.warnings)
    std::cerr << "warning: " << warning << "\n";

  if (!opt.out.empty()) {
    if (opt.format == "json") {
      ordered_json j = tomo::report_to_json(report);
      ordered_json options;
      options["input"] = opt.input;
      options["input_format"] = kind;
      options["checks"] = opt.checks;
      options["replicates"] = opt.replicates;
      options["seed"] = opt.seed;
      options["scan"] = opt.scan;
      options["se_mult"] = opt.se_mult;
      options["grid_slack"] = opt.grid_slack;
      options["min_samples"] = opt.min_samples;
      options["theta_tol"] = opt.theta_tol;
      if (!opt.histogram.empty()) options["histogram"] = opt.histogram;
      j["provenance"] = make_provenance("check", std::move(options));
      tomo::save_json(opt.out, j);
    } else if (opt.format == "csv") {
      std::ofstream out(opt.out, std::ios::binary);
      if (!out) throw tomo::FormatError("cannot open " + opt.out);
      out << "theta,f,se\n";
      for (const auto& e : report.f_curve) {
        if (!e.ok()) continue;
        out << tomo::format_double(e.theta) << ','
            << tomo::format_double(e.f) << ','
            << tomo::format_double(e.standard_error) << '\n';
      }
    } else {
      throw tomo::FormatError("unknown --format \"" + opt.format + "\"");
    }
  }

  if (want_f && f_valid == 0) {
    std::cerr << "error: no scan angle could be evaluated\n";
    return 2;
  }
  const bool pass = (!want_heis || report.heisenberg.pass) &&
                    (!want_sr || report.sr.pass) && (!want_f || report.f_pass);
  return pass ? 0 : 1;
}

// --- wigner ---

struct WignerOptions {
  std::string input;
  std::string q_range = "-6:6:241";
  std::string p_range = "-6:6:241";
  double cutoff_frac = 0.9;
  double cutoff_abs = 0.0;  // 0 = use fraction
  bool apodize = false;
  std::string out;
  std::string slice_out;
  double slice_p = 0.0;
};

int run_wigner(const WignerOptions& opt) {
  const tomo::OpticalTomogramGrid grid =
      tomo::grid_from_json(tomo::load_json(opt.input));
  tomo::InverseRadonOptions options;
  options.cutoff_fraction = opt.cutoff_frac;
  if (opt.cutoff_abs > 0.0) options.cutoff = opt.cutoff_abs;
  options.cosine_apodization = opt.apodize;

  const Eigen::VectorXd qs = parse_range(opt.q_range);
  const Eigen::VectorXd ps = parse_range(opt.p_range);
  const tomo::InverseRadonResult result =
      tomo::inverse_radon(grid, qs, ps, options);

  ordered_json j = tomo::wigner_to_json(result.wigner);
  j["reconstruction"] = ordered_json{
      {"cutoff", result.cutoff},
      {"n_projections", result.n_projections},
      {"distinct_angles", result.distinct_angles},
      {"max_theta_gap", result.max_theta_gap},
      {"filter", result.filter},
      {"normalization_defect", result.normalization_defect}};
  ordered_json cli_options;
  cli_options["input"] = opt.input;
  cli_options["q_range"] = opt.q_range;
  cli_options["p_range"] = opt.p_range;
  cli_options["cutoff_frac"] = opt.cutoff_frac;
  if (opt.cutoff_abs > 0.0) cli_options["cutoff"] = opt.cutoff_abs;
  cli_options["apodize"] = opt.apodize;
  j["provenance"] = make_provenance("wigner", std::move(cli_options));
  tomo::save_json(opt.out, j);

  if (!opt.slice_out.empty()) {
    // nearest-p row, plot-ready
    Eigen::Index jp = 0;
    (result.wigner.ps.array() - opt.slice_p).abs().minCoeff(&jp);
    std::ofstream out(opt.slice_out, std::ios::binary);
    if (!out) throw tomo::FormatError("cannot open " + opt.slice_out);
    out << "q,w\n";
    for (Eigen::Index i = 0; i < result.wigner.qs.size(); ++i)
      out << tomo::format_double(result.wigner.qs(i)) << ','
          << tomo::format_double(result.wigner.w(i, jp)) << '\n';
  }

  std::cout << "wrote " << opt.out << " (W(0,0) ~ "
            << tomo::wigner_at(result.wigner, 0.0, 0.0)
            << ", normalization defect " << result.normalization_defect
            << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homodyne tomography toolkit: tomograms, uncertainty checks, "
               "Wigner reconstruction"};
  app.require_subcommand(1);

  GenerateOptions gen_opt;
  auto* gen = app.add_subcommand(
      "generate", "write the exact tomogram grid of a state");
  gen_opt.state.add_to(gen);
  gen->add_option("--thetas", gen_opt.thetas,
                  "number of phases, equispaced over [0, pi)");
  gen->add_option("--x-range", gen_opt.x_range,
                  "quadrature grid lo:hi:count (default: sized to the "
                  "state, at least -7:7:281)");
  gen->add_option("--out", gen_opt.out, "output JSON path")->required();

  SampleOptions sample_opt;
  auto* sample = app.add_subcommand(
      "sample", "simulate a homodyne acquisition, write a sample CSV");
  sample_opt.state.add_to(sample, "--fock-n");  // --n is samples per phase
  sample->add_option("--phases", sample_opt.phases,
                     "comma-separated phases (radians)")
      ->required();
  sample->add_option("--n", sample_opt.count, "samples per phase")->required();
  sample->add_option("--seed", sample_opt.seed, "RNG seed");
  sample->add_option("--noise-sigma", sample_opt.noise_sigma,
                     "additive Gaussian detector noise");
  sample->add_option("--out", sample_opt.out, "output CSV path")->required();
  sample->add_option("--plan-out", sample_opt.plan_out,
                     "plan JSON path (default: <out>.plan.json)");

  CheckOptions check_opt;
  auto* check = app.add_subcommand(
      "check", "run the uncertainty-relation checks on a grid or sample set");
  check->add_option("--input", check_opt.input, "tomogram JSON or sample CSV")
      ->required();
  check->add_option("--input-format", check_opt.input_format,
                    "grid|samples (default: by extension)");
  check->add_option("--out", check_opt.out, "report output path");
  check->add_option("--format", check_opt.format, "report format: json|csv");
  check->add_option("--checks", check_opt.checks,
                    "comma list from heisenberg,sr,f");
  check->add_option("--replicates", check_opt.replicates,
                    "bootstrap replicates");
  check->add_option("--seed", check_opt.seed, "bootstrap seed");
  check->add_option("--scan", check_opt.scan,
                    "F(theta) scan points over [0, pi) (grid input)");
  check->add_option("--scan-thetas", check_opt.scan_thetas,
                    "explicit comma-separated scan angles");
  check->add_option("--se-mult", check_opt.se_mult,
                    "slack = se-mult * bootstrap SE (samples)");
  check->add_option("--grid-slack", check_opt.grid_slack,
                    "absolute slack for grid checks");
  check->add_option("--min-samples", check_opt.min_samples,
                    "minimum records per phase");
  check->add_option("--theta-tol", check_opt.theta_tol,
                    "phase matching tolerance (radians)");
  check->add_option("--histogram", check_opt.histogram,
                    "bin samples first: theta_bins,x_bins,lo,hi");

  WignerOptions wig_opt;
  auto* wig = app.add_subcommand(
      "wigner", "reconstruct the Wigner function from a tomogram grid");
  wig->add_option("--input", wig_opt.input, "tomogram JSON")->required();
  wig->add_option("--q-range", wig_opt.q_range, "q grid lo:hi:count");
  wig->add_option("--p-range", wig_opt.p_range, "p grid lo:hi:count");
  wig->add_option("--cutoff-frac", wig_opt.cutoff_frac,
                  "ramp cutoff as a fraction of Nyquist");
  wig->add_option("--cutoff", wig_opt.cutoff_abs,
                  "absolute ramp cutoff (overrides --cutoff-frac)");
  wig->add_flag("--apodize", wig_opt.apodize, "cosine-apodize the ramp");
  wig->add_option("--out", wig_opt.out, "output JSON path")->required();
  wig->add_option("--slice-out", wig_opt.slice_out,
                  "write a q,w CSV slice at fixed p");
  wig->add_option("--slice-p", wig_opt.slice_p, "p value for --slice-out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_generate(gen_opt);
    if (sample->parsed()) return run_sample(sample_opt);
    if (check->parsed()) return run_check(check_opt);
    if (wig->parsed()) return run_wigner(wig_opt);
  } catch (const tomo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
