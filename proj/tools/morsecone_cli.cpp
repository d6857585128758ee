// morsecone: batch front end for the Morse-index pipeline.
//
//   morsecone <command> [--N n] [--p p | --p-from a --p-to b --p-steps k]
//             [--theta0 t | --spectrum file] [--tol x] [--out dir]
//             [--format csv,json,svg] [--verify] [--jobs j] [--config file]
//
// Default output directory comes from MORSECONE_OUT, else the working
// directory. Failures write error.json there and exit with status 2.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morsecone/bubble.hpp"
#include "morsecone/cap_spectrum.hpp"
#include "morsecone/detail/parallel.hpp"
#include "morsecone/errors.hpp"
#include "morsecone/io.hpp"
#include "morsecone/morse.hpp"
#include "morsecone/radial_solver.hpp"
#include "morsecone/singular_spectrum.hpp"

namespace {

using namespace morsecone;
using io::Json;

struct RunConfig {
  std::string command;
  int dimension = 3;
  std::optional<double> p;
  std::optional<double> p_from;
  std::optional<double> p_to;
  int p_steps = 0;
  std::optional<double> theta0;
  std::string spectrum;
  std::string radial_spectrum;
  std::optional<double> lambda_max;
  std::optional<double> area;
  int k_max = 8;
  double tol = 1e-10;
  std::string out;
  std::vector<std::string> formats{"json", "csv"};
  bool verify = false;
  int jobs = 1;
};

class Outputs {
 public:
  explicit Outputs(const RunConfig& config)
      : dir_(config.out), formats_(config.formats.begin(), config.formats.end()) {}

  void json(const std::string& stem, const Json& document) {
    if (formats_.count("json")) write(stem + ".json", document.dump(2) + "\n");
  }
  void csv(const std::string& stem, const std::string& text) {
    if (formats_.count("csv")) write(stem + ".csv", text);
  }
  void svg(const std::string& stem, const std::string& text) {
    if (formats_.count("svg")) write(stem + ".svg", text);
  }
  const std::vector<std::string>& written() const { return written_; }

 private:
  void write(const std::string& name, const std::string& text) {
    const auto path = (std::filesystem::path(dir_) / name).string();
    io::write_text(path, text);
    written_.push_back(path);
  }

  std::string dir_;
  std::set<std::string> formats_;
  std::vector<std::string> written_;
};

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorKind::InvalidArgument, "cli", message);
}

std::vector<double> exponent_list(const RunConfig& c) {
  if (c.p_from || c.p_to || c.p_steps > 0) {
    if (!c.p_from || !c.p_to || c.p_steps < 1) {
      config_error("a p sweep needs --p-from, --p-to and --p-steps >= 1");
    }
    if (c.p_steps == 1) return {*c.p_from};
    std::vector<double> list;
    for (int i = 0; i < c.p_steps; ++i) {
      list.push_back(*c.p_from + (*c.p_to - *c.p_from) * i / (c.p_steps - 1));
    }
    return list;
  }
  if (c.p) return {*c.p};
  return {};
}

void validate(const RunConfig& c) {
  if (c.dimension < 3) config_error("--N must be at least 3");
  const double p_s = critical_exponent(c.dimension);
  for (double p : exponent_list(c)) {
    if (!(p > 1.0 && p < p_s)) {
      throw Error(ErrorKind::InvalidArgument, "cli", "exponent outside (1, (N+2)/(N-2))",
                  {{"p", io::number(p)}, {"p_S", io::number(p_s)}});
    }
  }
  if (c.theta0 && !c.spectrum.empty()) config_error("give exactly one of --theta0 and --spectrum");
  if (c.theta0 && !(*c.theta0 > 0.0 && *c.theta0 < std::numbers::pi)) {
    config_error("--theta0 must lie in (0, pi)");
  }
  if (!(c.tol > 0.0)) config_error("--tol must be positive");
  if (c.jobs < 1) config_error("--jobs must be at least 1");
  for (const auto& f : c.formats) {
    if (f != "csv" && f != "json" && f != "svg") config_error("unknown format '" + f + "'");
  }
}

bool needs_angular(const std::string& command) {
  return command == "cap-spectrum" || command == "morse" || command == "bubble" ||
         command == "threshold";
}

double require_single_p(const RunConfig& c) {
  const auto list = exponent_list(c);
  if (list.size() != 1) config_error("this command needs a single --p");
  return list.front();
}

// Angular spectrum from --theta0 (enumerated to `cutoff`) or --spectrum.
CapSpectrum angular_spectrum(const RunConfig& c, double cutoff) {
  if (c.theta0) return cap_neumann_eigenvalues(c.dimension, *c.theta0, cutoff);
  auto spectrum = load_spectrum_file(c.spectrum);
  if (spectrum.dimension != c.dimension) {
    throw Error(ErrorKind::SpectrumFormat, "cli", "spectrum file dimension differs from --N",
                {{"N", std::to_string(c.dimension)},
                 {"file_N", std::to_string(spectrum.dimension)}});
  }
  return spectrum;
}

// --- commands --------------------------------------------------------------

void cmd_solve_radial(const RunConfig& c, Outputs& out) {
  const auto list = exponent_list(c);
  if (list.empty()) config_error("solve-radial needs --p or a p sweep");
  RadialOptions options;
  options.zero_tolerance = std::min(options.zero_tolerance, c.tol);
  if (list.size() == 1) {
    const auto solution = solve_lane_emden(c.dimension, list.front(), options);
    out.json("radial_solution", io::radial_header(solution));
    out.csv("radial_solution", io::radial_csv(solution));
    out.svg("radial_solution",
            io::svg_line_chart("Lane-Emden profile", "r", "u(r)",
                               {{"u", solution.r(), solution.u()}}));
    return;
  }
  const auto headers = detail::parallel_map<Json>(list.size(), c.jobs, [&](std::size_t i) {
    return io::radial_header(solve_lane_emden(c.dimension, list[i], options));
  });
  Json doc;
  doc["kind"] = "radial_sweep";
  doc["N"] = c.dimension;
  doc["rows"] = Json::array();
  std::ostringstream csv;
  csv << "p,M_p,R,ode_residual\n";
  std::vector<double> ps, peaks;
  for (const auto& h : headers) {
    doc["rows"].push_back({{"p", h["p"]}, {"M_p", h["M_p"]}, {"R", h["R"]},
                           {"ode_residual", h["ode_residual"]}});
    csv << io::number(h["p"].get<double>()) << ',' << io::number(h["M_p"].get<double>()) << ','
        << io::number(h["R"].get<double>()) << ',' << io::number(h["ode_residual"].get<double>())
        << '\n';
    ps.push_back(h["p"].get<double>());
    peaks.push_back(std::log10(h["M_p"].get<double>()));
  }
  out.json("radial_sweep", doc);
  out.csv("radial_sweep", csv.str());
  out.svg("radial_sweep", io::svg_line_chart("Peak of the radial solution", "p", "log10 M_p",
                                             {{"M_p", ps, peaks}}));
}

// Observed order from oracles at h, h/2, h/4; agreement with the oracle on a
// grid refined by `fine_factor`, within max(1e-6, 10 h^2).
template <class Oracle>
Json oracle_check(const std::vector<double>& shooting, int base, int fine_factor, Oracle oracle) {
  std::vector<std::vector<double>> ladder;
  for (int g : {base, 2 * base, 4 * base}) ladder.push_back(oracle(g).values);
  const auto fine = oracle(fine_factor * base);
  const double allowed = std::max(1e-6, 10.0 * fine.h * fine.h);
  bool passed = fine.values.size() >= shooting.size();
  double worst = 0.0;
  Json rows = Json::array();
  for (std::size_t i = 0; i < shooting.size(); ++i) {
    if (fine.values.size() <= i || ladder[2].size() <= i) {
      passed = false;
      break;
    }
    const double e1 = ladder[0][i] - ladder[1][i];
    const double e2 = ladder[1][i] - ladder[2][i];
    const double noise = 1e-9 * std::max(1.0, std::abs(shooting[i]));
    const bool exact = std::abs(e1) <= noise && std::abs(e2) <= noise;
    const double order = exact ? 0.0 : std::log2(std::abs(e1 / e2));
    const double diff = std::abs(shooting[i] - fine.values[i]);
    worst = std::max(worst, diff);
    passed = passed && diff <= allowed && (exact || std::abs(order - 2.0) < 0.25);
    rows.push_back({{"shooting", shooting[i]},
                    {"oracle", fine.values[i]},
                    {"difference", diff},
                    {"ladder", {ladder[0][i], ladder[1][i], ladder[2][i]}},
                    {"observed_order", exact ? Json(nullptr) : Json(order)}});
  }
  return {{"h", fine.h},       {"ladder_grid", base}, {"allowed", allowed},
          {"max_difference", worst}, {"rows", std::move(rows)}, {"passed", passed}};
}

void cmd_radial_spectrum(const RunConfig& c, Outputs& out) {
  const double p = require_single_p(c);
  const auto solution = solve_lane_emden(c.dimension, p);
  const auto potential = linearized_potential(solution);
  const auto spectrum = negative_singular_eigenvalues(c.dimension, potential, c.k_max, c.tol);
  Json doc = io::to_json(spectrum);
  if (c.verify) {
    doc["verification"] = oracle_check(spectrum.values(), 1000, 16, [&](int g) {
      return dense_oracle_singular(c.dimension, potential, g);
    });
  }
  out.json("radial_spectrum", doc);
  out.csv("radial_eigenfunctions", io::eigenfunctions_csv(spectrum));
  std::vector<io::Series> series;
  for (const auto& e : spectrum.eigenpairs) {
    series.push_back({"psi_" + std::to_string(e.index), e.r, e.psi});
  }
  out.svg("radial_eigenfunctions",
          io::svg_line_chart("Singular radial eigenfunctions", "r", "psi", series));
}

void cmd_cap_spectrum(const RunConfig& c, Outputs& out) {
  const double cutoff = c.lambda_max.value_or(2.0 * (c.dimension - 1.0));
  const auto spectrum = angular_spectrum(c, cutoff);
  Json doc = io::to_json(spectrum);
  if (c.verify && spectrum.theta0) {
    // Every enumerated eigenvalue, branch by branch, against the pencil.
    std::map<int, std::vector<double>> branches;
    for (const auto& e : spectrum.entries) branches[*e.ell].push_back(e.lambda);
    Json checks = Json::array();
    bool passed = true;
    for (const auto& [ell, values] : branches) {
      const int count = static_cast<int>(values.size());
      auto check = oracle_check(values, 400, 32, [&](int g) {
        return dense_oracle_angular(c.dimension, ell, *spectrum.theta0, g, count);
      });
      check["ell"] = ell;
      passed = passed && check["passed"].get<bool>();
      checks.push_back(std::move(check));
    }
    doc["verification"] = {{"branches", std::move(checks)}, {"passed", passed}};
  }
  out.json("cap_spectrum", doc);
  out.csv("cap_spectrum", io::cap_csv(spectrum));
  std::vector<double> idx, lam;
  for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
    idx.push_back(static_cast<double>(i));
    lam.push_back(spectrum.entries[i].lambda);
  }
  out.svg("cap_spectrum",
          io::svg_line_chart("Neumann eigenvalues", "index j", "lambda_j", {{"lambda", idx, lam}}));
}

void cmd_morse(const RunConfig& c, Outputs& out) {
  SingularSpectrum radial;
  std::optional<LinearizedPotential> potential;
  if (!c.radial_spectrum.empty()) {
    std::ifstream in(c.radial_spectrum);
    if (!in) {
      throw Error(ErrorKind::Io, "cli", "cannot open radial spectrum file",
                  {{"path", c.radial_spectrum}});
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::SpectrumFormat, "cli", std::string("malformed JSON: ") + e.what());
    }
    radial = io::singular_spectrum_from_json(j);
    if (radial.dimension != c.dimension) config_error("radial spectrum dimension differs from --N");
  } else {
    const double p = require_single_p(c);
    potential = linearized_potential(solve_lane_emden(c.dimension, p));
    radial = negative_singular_eigenvalues(c.dimension, *potential, c.k_max, c.tol);
  }
  double cutoff = c.lambda_max.value_or(0.0);
  if (!radial.eigenpairs.empty()) cutoff = std::max(cutoff, -radial.eigenpairs.front().value + 1.0);
  cutoff = std::max(cutoff, 1.0);
  const bool verify_counts = c.verify && potential.has_value();
  double count_cutoff = 0.0;
  if (verify_counts) {
    count_cutoff = standard_shift_cutoff(c.dimension, *potential);
    cutoff = std::max(cutoff, count_cutoff * (1.0 + 1e-6) + 1e-9);
  }
  const auto angular = angular_spectrum(c, cutoff);
  const auto report = morse_index_direct(radial, angular);
  Json doc = io::to_json(report);
  if (verify_counts) doc["count_equality"] = io::to_json(verify_count_equality(c.dimension, *potential, angular));
  out.json("morse_report", doc);
  std::ostringstream csv;
  csv << "k,j,lambda_hat,lambda,sum,multiplicity\n";
  for (const auto& pr : report.pairs) {
    csv << pr.k << ',' << pr.j << ',' << io::number(pr.lambda_hat) << ','
        << io::number(pr.lambda) << ',' << io::number(pr.sum) << ',' << pr.multiplicity << '\n';
  }
  out.csv("morse_pairs", csv.str());
}

void cmd_bubble(const RunConfig& c, Outputs& out) {
  const int n = c.dimension;
  const double cutoff = c.lambda_max.value_or(2.0 * (n - 1.0));
  const auto angular = angular_spectrum(c, cutoff);
  Json doc;
  doc["kind"] = "bubble_report";
  doc["N"] = n;
  doc["theta0"] = angular.theta0 ? Json(*angular.theta0) : Json("external");
  const auto l1 = angular.lambda1();
  doc["lambda1"] = l1 ? Json(*l1) : Json(nullptr);
  const int m_u = bubble_morse(angular, n);
  doc["m_U"] = m_u;
  doc["regime"] = m_u >= 2 ? "symmetry-breaking" : "radial-bubble-nondegenerate";

  constexpr int samples = 50;
  std::vector<double> radii, etas, residuals;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = std::pow(10.0, -3.0 + 6.0 * i / (samples - 1));
    const double res = eta_residual(n, r);
    radii.push_back(r);
    etas.push_back(eta_value(n, r));
    residuals.push_back(res);
    worst = std::max(worst, std::abs(res) / std::max(1.0, std::abs(etas.back())));
  }
  const auto quotient = eta_rayleigh_quotient(n);
  doc["eta"] = {{"samples", samples},
                {"max_scaled_residual", worst},
                {"rayleigh_quotient", quotient.quotient},
                {"rayleigh_error_bound", quotient.error_bound},
                {"expected", -(n - 1.0)}};
  if (angular.theta0) {
    doc["q_u_on_bubble"] = q_u_on_bubble(n, *angular.theta0);
  } else if (c.area) {
    doc["q_u_on_bubble"] = q_u_on_bubble_area(n, *c.area);
  } else {
    doc["q_u_on_bubble"] = nullptr;
  }
  Json forms = Json::array();
  for (const auto& e : angular.entries) {
    if (e.lambda > cutoff) break;
    const auto form = e.ell ? step1_test_function_form(n, *e.ell, *angular.theta0, e.lambda)
                            : step1_test_function_form(n, e.lambda);
    Json f = io::to_json(form);
    if (e.ell) f["ell"] = *e.ell;
    if (e.mode) f["mode"] = *e.mode;
    f["multiplicity"] = e.multiplicity;
    forms.push_back(std::move(f));
  }
  doc["step1"] = std::move(forms);
  out.json("bubble_report", doc);
  std::ostringstream csv;
  csv << "r,eta,residual\n";
  for (int i = 0; i < samples; ++i) {
    csv << io::number(radii[i]) << ',' << io::number(etas[i]) << ',' << io::number(residuals[i])
        << '\n';
  }
  out.csv("eta_residual", csv.str());
  out.svg("eta", io::svg_line_chart("Limit eigenfunction eta", "r", "eta(r)",
                                    {{"eta", radii, etas}}, true));
}

void cmd_threshold(const RunConfig& c, Outputs& out) {
  const int n = c.dimension;
  const auto angular = angular_spectrum(c, c.lambda_max.value_or(n - 1.0));
  ThresholdOptions options;
  options.jobs = c.jobs;
  const auto result = symmetry_breaking_threshold(n, angular, c.tol, options);
  out.json("threshold", io::to_json(result));
  out.csv("threshold_samples", io::threshold_csv(result));
  std::vector<double> ps, sums;
  for (const auto& s : result.samples) {
    ps.push_back(s.p);
    sums.push_back(s.sum);
  }
  if (!ps.empty()) {
    out.svg("threshold", io::svg_line_chart("lambda_1(D) + first singular eigenvalue", "p",
                                            "sum", {{"sum", ps, sums}}));
  }
  const auto list = exponent_list(c);
  if (list.size() > 1) {
    const auto table = limit_study(n, list, std::min(c.tol, options.eigen_tolerance), c.jobs);
    out.json("limit_table", io::to_json(table));
    out.csv("limit_table", io::limit_csv(table));
    std::vector<double> p, gap;
    for (const auto& r : table.rows) {
      p.push_back(r.p);
      gap.push_back(r.gap);
    }
    out.svg("limit_table", io::svg_line_chart("Gap to -(N-1)", "p", "gap", {{"gap", p, gap}}));
  }
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--N", c.dimension, "space dimension (>= 3)");
  sub->add_option("--p", c.p, "exponent in (1, (N+2)/(N-2))");
  sub->add_option("--p-from", c.p_from, "sweep start");
  sub->add_option("--p-to", c.p_to, "sweep end");
  sub->add_option("--p-steps", c.p_steps, "sweep points");
  sub->add_option("--theta0", c.theta0, "cap half-angle in radians");
  sub->add_option("--spectrum", c.spectrum, "external Neumann spectrum (JSON)");
  sub->add_option("--lambda-max", c.lambda_max, "angular enumeration cutoff");
  sub->add_option("--tol", c.tol, "eigenvalue / threshold tolerance");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.formats, "comma list of csv,json,svg")->delimiter(',');
  sub->add_flag("--verify", c.verify, "cross-check against independent oracles");
  sub->add_option("--jobs", c.jobs, "worker threads for sweeps");
}

int run(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"Morse indices of radial Lane-Emden solutions on cones and sectors"};
  app.set_config("--config", "", "configuration file (TOML/INI; flags override)");
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-radial", "positive radial solution in the unit ball"},
      {"radial-spectrum", "negative singular radial eigenvalues"},
      {"cap-spectrum", "Neumann spectrum of a cap or an external domain"},
      {"morse", "Morse index from the separated spectra"},
      {"bubble", "bubble Morse index, limit eigenpair and test functions"},
      {"threshold", "symmetry-breaking exponent and limit study"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, config);
    if (name == "radial-spectrum" || name == "morse") {
      sub->add_option("--k-max", config.k_max, "largest radial index sought");
    }
    if (name == "morse") {
      sub->add_option("--radial-spectrum", config.radial_spectrum,
                      "use this radial spectrum (JSON) instead of solving");
    }
    if (name == "bubble") sub->add_option("--area", config.area, "area of an external domain");
  }

  // --config is accepted before or after the subcommand.
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  for (std::size_t i = args.size(); i-- > 0;) {
    const bool split = args[i] == "--config" && i > 0;
    if (split || args[i].rfind("--config=", 0) == 0) {
      std::vector<std::string> moved(args.begin() + static_cast<std::ptrdiff_t>(i - split),
                                     args.begin() + static_cast<std::ptrdiff_t>(i + 1));
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i - split),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 1));
      args.insert(args.end(), moved.begin(), moved.end());
      break;
    }
  }

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    const auto record = io::error_record("InvalidArgument", "cli", e.what(), "");
    std::cerr << record.dump(2) << '\n';
    return 2;
  }

  for (auto* sub : app.get_subcommands()) config.command = sub->get_name();
  if (config.out.empty()) {
    const char* env = std::getenv("MORSECONE_OUT");
    config.out = env && *env ? env : ".";
  }

  try {
    validate(config);
    if (needs_angular(config.command) && !config.theta0 && config.spectrum.empty()) {
      config_error(config.command + " needs --theta0 or --spectrum");
    }
    std::filesystem::create_directories(config.out);
    Outputs outputs(config);
    if (config.command == "solve-radial") cmd_solve_radial(config, outputs);
    if (config.command == "radial-spectrum") cmd_radial_spectrum(config, outputs);
    if (config.command == "cap-spectrum") cmd_cap_spectrum(config, outputs);
    if (config.command == "morse") cmd_morse(config, outputs);
    if (config.command == "bubble") cmd_bubble(config, outputs);
    if (config.command == "threshold") cmd_threshold(config, outputs);
    for (const auto& path : outputs.written()) std::cout << path << '\n';
    return 0;
  } catch (const Error& e) {
    const auto record = io::error_record(e, config.command);
    std::cerr << record.dump(2) << '\n';
    try {
      std::filesystem::create_directories(config.out);
      io::write_text((std::filesystem::path(config.out) / "error.json").string(),
                     record.dump(2) + "\n");
    } catch (...) {
    }
    return 2;
  } catch (const std::exception& e) {
    const auto record = io::error_record("InternalError", "cli", e.what(), config.command);
    std::cerr << record.dump(2) << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
