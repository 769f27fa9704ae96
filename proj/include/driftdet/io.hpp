#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "driftdet/boundaries.hpp"
#include "driftdet/simulator.hpp"
#include "driftdet/solver.hpp"
#include "driftdet/value.hpp"

namespace driftdet {

/// Thrown for unreadable or malformed artifacts.
class ArtifactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a solve produces. Timing is kept out so the file is reproducible.
struct BoundariesArtifact {
    Boundaries boundaries;
    SolverConfig config;
    SolveReport report;
};

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const QuadratureSpec& q);
nlohmann::json to_json(const SolverConfig& cfg);
nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const BoundariesArtifact& a);
nlohmann::json to_json(const RiskReport& r);

ModelParams params_from_json(const nlohmann::json& j);
/// Missing keys keep their defaults, so partial override files work.
SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base = {});
BoundariesArtifact boundaries_from_json(const nlohmann::json& j);

/// Serialized text; stable given equal inputs.
std::string dump(const nlohmann::json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);

void save_boundaries(const std::filesystem::path& path, const BoundariesArtifact& a);
BoundariesArtifact load_boundaries(const std::filesystem::path& path);

/// CSV with columns phi,b0,b1 over the union of both grids; b0 is blank past gamma and
/// b1 is interpolated where the union point is not a grid1 node.
std::string boundaries_csv(const Boundaries& b);

std::string value_reports_csv(const std::vector<ValueReport>& rows);
std::string trace_csv(const std::vector<TraceRow>& rows);

/// Reads phi points from CSV: two numeric columns, optional header line.
std::vector<PhiPoint> read_points_csv(const std::filesystem::path& path);

const char* measure_name(Measure m) noexcept;
Measure measure_from_name(const std::string& s);
const char* execution_name(Execution e) noexcept;

inline constexpr int kArtifactFormatVersion = 1;

}  // namespace driftdet
