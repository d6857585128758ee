#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "morsecone/bubble.hpp"
#include "morsecone/cap_spectrum.hpp"
#include "morsecone/errors.hpp"
#include "morsecone/morse.hpp"
#include "morsecone/radial_solver.hpp"
#include "morsecone/singular_spectrum.hpp"

namespace morsecone::io {

using Json = nlohmann::ordered_json;

// Every document carries "kind" naming its schema in schemas/.
Json radial_header(const RadialSolution& solution);
std::string radial_csv(const RadialSolution& solution);

Json to_json(const SingularSpectrum& spectrum);
SingularSpectrum singular_spectrum_from_json(const nlohmann::json& document);
std::string eigenfunctions_csv(const SingularSpectrum& spectrum);

Json to_json(const CapSpectrum& spectrum);
std::string cap_csv(const CapSpectrum& spectrum);

Json to_json(const MorseReport& report);
Json to_json(const CountEquality& counts);

Json to_json(const ThresholdResult& result);
std::string threshold_csv(const ThresholdResult& result);

Json to_json(const LimitTable& table);
std::string limit_csv(const LimitTable& table);

Json to_json(const Step1Form& form);

Json error_record(const Error& error, const std::string& command);
Json error_record(const std::string& error_class, const std::string& module,
                  const std::string& message, const std::string& command);

// Shortest round-trip decimal form, so output is byte-stable.
std::string number(double value);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal SVG line chart; axes, ticks and a legend, nothing else.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           bool log_x = false);

void write_text(const std::string& path, const std::string& text);

}  // namespace morsecone::io
