#include <numbers>

#include <doctest.h>

#include "morsecone/io.hpp"

using namespace morsecone;

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(io::number(0.1) == "0.1");
  CHECK(io::number(2.0) == "2");
  CHECK(io::number(-1.8024279912599188) == "-1.8024279912599188");
}

TEST_CASE("singular spectrum JSON round trip") {
  const auto a = linearized_potential(solve_lane_emden(3, 3.0));
  const auto s = negative_singular_eigenvalues(3, a, 4);
  const auto j = nlohmann::json::parse(io::to_json(s).dump());
  const auto back = io::singular_spectrum_from_json(j);
  REQUIRE(back.eigenpairs.size() == s.eigenpairs.size());
  CHECK(back.eigenpairs[0].value == s.eigenpairs[0].value);
}

TEST_CASE("cap spectrum JSON is loadable as an external spectrum") {
  const auto s = cap_neumann_eigenvalues(3, std::numbers::pi / 2, 6.5);
  const auto back = load_spectrum(io::to_json(s).dump());
  CHECK(back.entries.size() == s.entries.size());
  CHECK(back.lambda_max == s.lambda_max);
}

TEST_CASE("error records name the class") {
  const Error e(ErrorKind::CutoffInsufficient, "morse", "too short", {{"needed", "2"}});
  const auto j = io::error_record(e, "morse");
  CHECK(j["kind"] == "error");
  CHECK(j["error_class"] == "CutoffInsufficient");
  CHECK(j["parameters"]["needed"] == "2");
}

TEST_CASE("svg chart is well formed") {
  const auto svg = io::svg_line_chart("t", "x", "y", {{"s", {0.0, 1.0, 2.0}, {1.0, 0.0, 4.0}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}
