#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "driftdet/io.hpp"
#include "fixtures.hpp"

using namespace driftdet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "driftdet_unit";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("boundaries artifact round trip is lossless") {
    BoundariesArtifact a;
    a.boundaries = fixture::coarse_boundaries();
    a.config = fixture::coarse_config();
    fixed_point_residuals(a.boundaries, a.config, a.report);
    const fs::path p = scratch("b.json");
    save_boundaries(p, a);
    const BoundariesArtifact r = load_boundaries(p);
    CHECK(r.boundaries.b1 == a.boundaries.b1);
    CHECK(r.boundaries.b0 == a.boundaries.b0);
    CHECK(r.boundaries.gamma == a.boundaries.gamma);
    CHECK(r.boundaries.params == a.boundaries.params);
    CHECK(r.config.quad == a.config.quad);
    CHECK(dump(to_json(r)) == dump(to_json(a)));
    const auto j = read_json(p);
    CHECK(j.at("format_version") == kArtifactFormatVersion);
}

TEST_CASE("malformed artifacts are rejected") {
    const fs::path p = scratch("bad.json");
    write_text(p, "{\"format_version\": 1, \"kind\": \"boundaries\"}\n");
    CHECK_THROWS_AS(load_boundaries(p), ArtifactError);
    write_text(p, "not json");
    CHECK_THROWS_AS(read_json(p), ArtifactError);
    CHECK_THROWS_AS(read_json(scratch("missing.json")), ArtifactError);
    auto j = to_json(BoundariesArtifact{fixture::coarse_boundaries(), fixture::coarse_config(), {}});
    j["format_version"] = 99;
    CHECK_THROWS_AS(boundaries_from_json(j), ArtifactError);
}

TEST_CASE("solver config overrides") {
    const auto c = solver_config_from_json(nlohmann::json::parse(R"({"n0": 11, "quad": {"n_hermite": 24}})"));
    CHECK(c.n0 == 11);
    CHECK(c.n1 == SolverConfig{}.n1);
    CHECK(c.quad.n_hermite == 24);
    CHECK(c.quad.time_nodes == QuadratureSpec{}.time_nodes);
    CHECK_THROWS(solver_config_from_json(nlohmann::json::parse(R"({"n_zero": 11})")));
    CHECK_THROWS(solver_config_from_json(nlohmann::json::parse(R"({"n0": "many"})")));
}

TEST_CASE("csv writers and readers") {
    const std::string csv = boundaries_csv(fixture::coarse_boundaries());
    CHECK(csv.rfind("phi,b0,b1\n", 0) == 0);
    const fs::path p = scratch("pts.csv");
    write_text(p, "phi1,phi2\n0.5,1.0\n2,0.25\n");
    const auto pts = read_points_csv(p);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1] == PhiPoint{2.0, 0.25});
    write_text(p, "0.5,1.0\n3,x\n");
    CHECK_THROWS(read_points_csv(p));
    CHECK(measure_from_name("p0") == Measure::P_ZERO);
    CHECK(std::string(measure_name(Measure::P_PI)) == "p_pi");
    CHECK_THROWS(measure_from_name("q"));
}
