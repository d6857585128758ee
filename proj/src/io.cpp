#include "morsecone/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace morsecone::io {

namespace {

constexpr const char* kModule = "io";

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

Json radial_header(const RadialSolution& solution) {
  const auto& opt = solution.options();
  Json j;
  j["kind"] = "radial_solution";
  j["N"] = solution.dimension();
  j["p"] = solution.exponent();
  j["M_p"] = solution.peak();
  j["R"] = solution.unscaled_zero();
  j["grid_size"] = solution.r().size();
  j["ode_residual"] = ode_residual(solution);
  j["tolerances"] = {{"relative", opt.step.relative},
                     {"absolute", opt.step.absolute},
                     {"zero", opt.zero_tolerance},
                     {"r_start", opt.r_start}};
  return j;
}

std::string radial_csv(const RadialSolution& solution) {
  std::ostringstream out;
  out << "r,u,du,a\n";
  const double p = solution.exponent();
  for (std::size_t i = 0; i < solution.r().size(); ++i) {
    const double u = solution.u()[i];
    out << number(solution.r()[i]) << ',' << number(u) << ',' << number(solution.du()[i]) << ','
        << number(p * std::pow(std::max(u, 0.0), p - 1.0)) << '\n';
  }
  return out.str();
}

Json to_json(const SingularSpectrum& spectrum) {
  Json j;
  j["kind"] = "singular_spectrum";
  j["N"] = spectrum.dimension;
  j["p"] = optional_number(spectrum.exponent);
  j["tolerances"] = {{"eigenvalue", spectrum.tolerance}};
  j["radial_morse_index"] = spectrum.radial_morse_index();
  Json list = Json::array();
  for (const auto& e : spectrum.eigenpairs) {
    list.push_back({{"k", e.index},
                    {"value", e.value},
                    {"zeros", e.zeros},
                    {"weak_residual", e.weak_residual}});
  }
  j["eigenvalues"] = std::move(list);
  return j;
}

SingularSpectrum singular_spectrum_from_json(const nlohmann::json& document) {
  try {
    SingularSpectrum spectrum;
    spectrum.dimension = document.at("N").get<int>();
    if (document.contains("p") && !document.at("p").is_null()) {
      spectrum.exponent = document.at("p").get<double>();
    }
    if (document.contains("tolerances")) {
      spectrum.tolerance = document.at("tolerances").value("eigenvalue", spectrum.tolerance);
    }
    double previous = -std::numeric_limits<double>::infinity();
    int index = 0;
    for (const auto& e : document.at("eigenvalues")) {
      RadialEigenpair pair;
      pair.index = ++index;
      pair.value = e.at("value").get<double>();
      pair.zeros = e.value("zeros", index - 1);
      if (!(pair.value < 0.0) || !(pair.value > previous)) {
        throw Error(ErrorKind::SpectrumFormat, kModule,
                    "radial eigenvalues must be negative and strictly increasing",
                    {{"k", std::to_string(index)}});
      }
      previous = pair.value;
      spectrum.eigenpairs.push_back(std::move(pair));
    }
    return spectrum;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SpectrumFormat, kModule,
                std::string("bad radial spectrum document: ") + e.what());
  }
}

std::string eigenfunctions_csv(const SingularSpectrum& spectrum) {
  std::ostringstream out;
  out << 'r';
  for (const auto& e : spectrum.eigenpairs) out << ",psi_" << e.index;
  out << '\n';
  if (spectrum.eigenpairs.empty()) return out.str();
  const auto& r = spectrum.eigenpairs.front().r;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << number(r[i]);
    for (const auto& e : spectrum.eigenpairs) out << ',' << number(e.psi[i]);
    out << '\n';
  }
  return out.str();
}

Json to_json(const CapSpectrum& spectrum) {
  Json j;
  j["kind"] = "cap_spectrum";
  j["N"] = spectrum.dimension;
  j["theta0"] = spectrum.theta0 ? Json(*spectrum.theta0) : Json("external");
  j["lambda_max"] = finite_or_null(spectrum.lambda_max);
  Json list = Json::array();
  for (const auto& e : spectrum.entries) {
    Json entry;
    entry["lambda"] = e.lambda;
    if (e.ell) entry["ell"] = *e.ell;
    if (e.mode) entry["mode"] = *e.mode;
    entry["multiplicity"] = e.multiplicity;
    list.push_back(std::move(entry));
  }
  j["entries"] = std::move(list);
  return j;
}

std::string cap_csv(const CapSpectrum& spectrum) {
  std::ostringstream out;
  out << "lambda,ell,mode,multiplicity\n";
  for (const auto& e : spectrum.entries) {
    out << number(e.lambda) << ',' << (e.ell ? std::to_string(*e.ell) : "") << ','
        << (e.mode ? std::to_string(*e.mode) : "") << ',' << e.multiplicity << '\n';
  }
  return out.str();
}

Json to_json(const MorseReport& report) {
  Json j;
  j["kind"] = "morse_report";
  j["N"] = report.dimension;
  j["p"] = optional_number(report.exponent);
  j["theta0"] = report.theta0 ? Json(*report.theta0) : Json("external");
  j["angular_cutoff"] = finite_or_null(report.angular_cutoff);
  j["m_rad"] = report.m_rad;
  j["m"] = report.m;
  j["formula_m"] = report.formula_m;
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    Json entry{{"k", p.k},
               {"j", p.j},
               {"lambda_hat", p.lambda_hat},
               {"lambda", p.lambda},
               {"sum", p.sum},
               {"multiplicity", p.multiplicity}};
    if (p.ell) entry["ell"] = *p.ell;
    if (p.mode) entry["mode"] = *p.mode;
    pairs.push_back(std::move(entry));
  }
  j["pairs"] = std::move(pairs);
  j["warnings"] = report.warnings;
  return j;
}

Json to_json(const CountEquality& counts) {
  Json j;
  j["k_a"] = counts.k_a;
  j["k_hat_a"] = counts.k_hat_a;
  j["equal"] = counts.equal();
  j["cutoff"] = counts.cutoff;
  Json shifts = Json::array();
  for (const auto& s : counts.shifts) {
    shifts.push_back({{"lambda", s.lambda},
                      {"multiplicity", s.multiplicity},
                      {"standard_negative", s.standard_negative},
                      {"singular_negative", s.singular_negative}});
  }
  j["shifts"] = std::move(shifts);
  return j;
}

Json to_json(const ThresholdResult& result) {
  const auto bracket_json = [](const ThresholdBracket& b) {
    return Json{{"p_lo", b.p_lo}, {"p_hi", b.p_hi}, {"sum_lo", b.sum_lo}, {"sum_hi", b.sum_hi},
                {"p0", b.p0}};
  };
  Json j;
  j["kind"] = "threshold_result";
  j["status"] = result.status;
  j["N"] = result.dimension;
  j["theta0"] = result.theta0 ? Json(*result.theta0) : Json("external");
  j["lambda1"] = result.lambda1;
  j["tolerance"] = result.tolerance;
  j["p0"] = optional_number(result.p0);
  j["bracket"] = result.bracket ? bracket_json(*result.bracket) : Json(nullptr);
  Json brackets = Json::array();
  for (const auto& b : result.brackets) brackets.push_back(bracket_json(b));
  j["brackets"] = std::move(brackets);
  Json samples = Json::array();
  for (const auto& s : result.samples) {
    samples.push_back({{"p", s.p}, {"lambda_hat_1_rad", s.lambda_hat_1}, {"sum", s.sum}});
  }
  j["samples"] = std::move(samples);
  return j;
}

std::string threshold_csv(const ThresholdResult& result) {
  std::ostringstream out;
  out << "p,lambda_hat_1_rad,lambda1_plus_lambda_hat_1\n";
  for (const auto& s : result.samples) {
    out << number(s.p) << ',' << number(s.lambda_hat_1) << ',' << number(s.sum) << '\n';
  }
  return out.str();
}

Json to_json(const LimitTable& table) {
  Json j;
  j["kind"] = "limit_table";
  j["N"] = table.dimension;
  j["tolerance"] = table.tolerance;
  j["ball_radius"] = table.ball_radius;
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"p", r.p},
                    {"lambda_hat_1_rad", r.lambda_hat_1},
                    {"gap", r.gap},
                    {"Vp_diagnostic", r.vp_diagnostic}});
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string limit_csv(const LimitTable& table) {
  std::ostringstream out;
  out << "p,lambda_hat_1_rad,gap,Vp_diagnostic\n";
  for (const auto& r : table.rows) {
    out << number(r.p) << ',' << number(r.lambda_hat_1) << ',' << number(r.gap) << ','
        << number(r.vp_diagnostic) << '\n';
  }
  return out.str();
}

Json to_json(const Step1Form& form) {
  return Json{{"lambda", form.lambda},
              {"radial_energy", form.radial_energy},
              {"radial_weight", form.radial_weight},
              {"angular_norm", form.angular_norm},
              {"angular_energy", form.angular_energy},
              {"value", form.value}};
}

Json error_record(const Error& error, const std::string& command) {
  Json j = error_record(std::string(error.class_name()), error.module(), error.what(), command);
  Json params = Json::object();
  for (const auto& [k, v] : error.parameters()) params[k] = v;
  j["parameters"] = std::move(params);
  return j;
}

Json error_record(const std::string& error_class, const std::string& module,
                  const std::string& message, const std::string& command) {
  Json j;
  j["kind"] = "error";
  j["error_class"] = error_class;
  j["module"] = module;
  j["command"] = command;
  j["message"] = message;
  j["parameters"] = Json::object();
  return j;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           bool log_x) {
  constexpr double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 60;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b"};
  const auto tx = [log_x](double x) { return log_x ? std::log10(x) : x; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_x && !(s.x[i] > 0.0))) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  const auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
  const auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  const auto fmt = [](double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = x0 + (x1 - x0) * t / 4.0;
    const double fy = y0 + (y1 - y0) * t / 4.0;
    const double sx = left + pw * t / 4.0;
    const double sy = top + ph * (1.0 - t / 4.0);
    out << "<text x=\"" << sx << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
        << (log_x ? "1e" + fmt(fx) : fmt(fx)) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << fmt(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(16," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = palette[k % std::size(palette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_x && !(s.x[i] > 0.0))) continue;
      out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << left + pw - 8 << "\" y=\"" << top + 16 + 16 * k
        << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, kModule, "cannot open output file", {{"path", path}});
  out << text;
  if (!out) throw Error(ErrorKind::Io, kModule, "write failed", {{"path", path}});
}

}  // namespace morsecone::io
