#include "tomo/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include "tomo/common.hpp"

namespace tomo {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& a, const char* name) {
  if (!a.is_array())
    throw FormatError(std::string(name) + " must be a JSON array");
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number())
      throw FormatError(std::string(name) + " must contain only numbers");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const char* name) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array())
    throw FormatError(std::string(name) + " must be an array of arrays");
  const std::size_t n_cols = rows[0].size();
  Eigen::MatrixXd m(rows.size(), n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != n_cols)
      throw FormatError(std::string(name) + " rows must have equal length");
    for (std::size_t j = 0; j < n_cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
  }
  return m;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("missing required key \"") + key + "\"");
  return *it;
}

json variance_to_json(const VarianceEstimate& est) {
  json out{{"value", est.value}, {"se", est.standard_error}};
  if (est.negative_warning) out["warning"] = "negative_variance";
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, res.ptr};
}

ordered_json state_to_json(const StateModel& state) {
  ordered_json j;
  if (const auto* g = std::get_if<GaussianStateSpec>(&state)) {
    j["kind"] = "gaussian";
    j["mean_q"] = g->mean_q;
    j["mean_p"] = g->mean_p;
    j["sigma_qq"] = g->sigma_qq;
    j["sigma_pp"] = g->sigma_pp;
    j["sigma_qp"] = g->sigma_qp;
  } else {
    j["kind"] = "fock";
    j["n"] = std::get<FockStateSpec>(state).n;
  }
  return j;
}

StateModel state_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "gaussian") {
    return GaussianStateSpec(require(j, "mean_q").get<double>(),
                             require(j, "mean_p").get<double>(),
                             require(j, "sigma_qq").get<double>(),
                             require(j, "sigma_pp").get<double>(),
                             require(j, "sigma_qp").get<double>());
  }
  if (kind == "fock") return FockStateSpec(require(j, "n").get<int>());
  throw FormatError("unknown state kind \"" + kind + "\"");
}

ordered_json grid_to_json(const OpticalTomogramGrid& grid) {
  ordered_json j;
  j["thetas"] = vector_to_json(grid.thetas);
  j["xs"] = vector_to_json(grid.xs);
  j["w"] = matrix_to_json(grid.w);
  return j;
}

OpticalTomogramGrid grid_from_json(const json& j) {
  return {vector_from_json(require(j, "thetas"), "thetas"),
          vector_from_json(require(j, "xs"), "xs"),
          matrix_from_json(require(j, "w"), "w")};
}

ordered_json wigner_to_json(const WignerGrid& grid) {
  ordered_json j;
  j["qs"] = vector_to_json(grid.qs);
  j["ps"] = vector_to_json(grid.ps);
  j["w"] = matrix_to_json(grid.w);
  j["normalization"] = "integral_equals_2pi";
  return j;
}

WignerGrid wigner_from_json(const json& j) {
  return {vector_from_json(require(j, "qs"), "qs"),
          vector_from_json(require(j, "ps"), "ps"),
          matrix_from_json(require(j, "w"), "w")};
}

ordered_json plan_to_json(const AcquisitionPlan& plan) {
  ordered_json j;
  j["phases"] = plan.phases;
  j["samples_per_phase"] = plan.samples_per_phase;
  j["seed"] = plan.seed;
  j["noise_sigma"] = plan.noise_sigma;
  j["rng"] = std::string(kRngDescription);
  return j;
}

ordered_json report_to_json(const UncertaintyReport& report) {
  ordered_json j;
  j["sigma_qq"] = variance_to_json(report.sigma_qq);
  j["sigma_pp"] = variance_to_json(report.sigma_pp);
  j["sigma_qp"] = variance_to_json(report.sigma_qp);
  j["heisenberg"] = {{"product", report.heisenberg.value},
                     {"bound", report.heisenberg.bound},
                     {"se", report.heisenberg.standard_error},
                     {"slack", report.heisenberg.slack},
                     {"pass", report.heisenberg.pass}};
  j["sr"] = {{"determinant", report.sr.value},
             {"bound", report.sr.bound},
             {"se", report.sr.standard_error},
             {"slack", report.sr.slack},
             {"pass", report.sr.pass}};
  json curve = json::array();
  for (const auto& entry : report.f_curve) {
    json e{{"theta", entry.theta}};
    if (entry.ok()) {
      e["f"] = entry.f;
      e["se"] = entry.standard_error;
      e["slack"] = entry.slack;
    } else {
      e["error"] = entry.error;
    }
    curve.push_back(std::move(e));
  }
  j["f_curve"] = curve;
  j["f_pass"] = report.f_pass;
  j["cross_check"] = {{"f_at_theta0", report.f_at_zero},
                      {"sr_determinant_minus_bound", report.sr_minus_bound},
                      {"agrees", report.cross_check_ok}};
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  ordered_json cfg;
  cfg["bootstrap_replicates"] = report.config.bootstrap_replicates;
  cfg["grid_slack"] = report.config.grid_slack;
  cfg["se_multiplier"] = report.config.se_multiplier;
  cfg["seed"] = report.config.seed;
  cfg["theta_tol"] = report.config.theta_tol;
  cfg["min_samples"] = report.config.min_samples;
  cfg["quadrature"] =
      report.config.rule == QuadRule::Simpson ? "simpson" : "trapezoid";
  cfg["max_interp_gap"] = report.config.max_interp_gap;
  json scan = json::array();
  for (const auto& entry : report.f_curve) scan.push_back(entry.theta);
  cfg["theta_scan"] = scan;
  j["config"] = std::move(cfg);
  j["provenance"] = ordered_json{{"input", report.input_description},
                                 {"seed", report.config.seed}};
  return j;
}

void write_samples_csv(std::ostream& out, const QuadratureSampleSet& samples) {
  out << "theta,x\n";
  for (const auto& rec : samples.records)
    out << format_double(rec.theta) << ',' << format_double(rec.x) << '\n';
}

QuadratureSampleSet read_samples_csv(std::istream& in, std::string source) {
  QuadratureSampleSet set;
  set.source = std::move(source);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty sample CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta,x")
    throw FormatError("sample CSV must start with the header \"theta,x\"");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw FormatError("sample CSV line " + std::to_string(line_no) +
                        ": expected \"theta,x\"");
    QuadratureSample rec{};
    const char* begin = line.data();
    auto r1 = std::from_chars(begin, begin + comma, rec.theta);
    auto r2 = std::from_chars(begin + comma + 1, begin + line.size(), rec.x);
    if (r1.ec != std::errc() || r1.ptr != begin + comma ||
        r2.ec != std::errc() || r2.ptr != begin + line.size())
      throw FormatError("sample CSV line " + std::to_string(line_no) +
                        ": malformed number");
    set.records.push_back(rec);
  }
  return set;
}

void save_samples_csv(const std::filesystem::path& path,
                      const QuadratureSampleSet& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_samples_csv(out, samples);
}

QuadratureSampleSet load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_samples_csv(in, path.string());
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void save_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace tomo
