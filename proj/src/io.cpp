#include "driftdet/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace driftdet {

using nlohmann::json;

namespace {

template <class T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

const char* measure_name(Measure m) noexcept { return m == Measure::P_PI ? "p_pi" : "p0"; }

Measure measure_from_name(const std::string& s) {
    if (s == "p_pi" || s == "ppi" || s == "P_PI") return Measure::P_PI;
    if (s == "p0" || s == "p_zero" || s == "P_ZERO") return Measure::P_ZERO;
    throw std::invalid_argument("unknown measure '" + s + "' (use p_pi or p0)");
}

const char* execution_name(Execution e) noexcept { return e == Execution::Serial ? "serial" : "parallel"; }

json to_json(const ModelParams& p) { return {{"mu", p.mu}, {"c", p.c}}; }

json to_json(const QuadratureSpec& q) {
    return {{"n_hermite", q.n_hermite}, {"time_panels", q.time_panels}, {"t_max", q.t_max},
            {"tail_tol", q.tail_tol}, {"time_nodes", q.time_nodes}};
}

json to_json(const SolverConfig& cfg) {
    return {{"n0", cfg.n0},
            {"n1", cfg.n1},
            {"phi_max", cfg.phi_max},
            {"damping", cfg.damping},
            {"tol_sup", cfg.tol_sup},
            {"stop_fraction", cfg.stop_fraction},
            {"max_sweeps", cfg.max_sweeps},
            {"quad", to_json(cfg.quad)},
            {"root_tol", cfg.root_tol},
            {"init_scale", cfg.init_scale},
            {"anderson_depth", cfg.anderson_depth}};
}

json to_json(const SimConfig& cfg) {
    return {{"dt", cfg.dt},         {"n_paths", cfg.n_paths},
            {"seed", cfg.seed},     {"t_cap", cfg.t_cap},
            {"measure", measure_name(cfg.measure)}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    j.at("mu").get_to(p.mu);
    j.at("c").get_to(p.c);
    return p;
}

SolverConfig solver_config_from_json(const json& j, SolverConfig base) {
    if (!j.is_object()) throw ArtifactError("solver config must be a JSON object");
    static const std::set<std::string> known{"n0", "n1", "phi_max", "damping", "tol_sup", "stop_fraction",
                                             "max_sweeps", "quad", "root_tol", "init_scale",
                                             "anderson_depth", "threads"};
    for (const auto& [k, _] : j.items()) {
        if (!known.contains(k)) throw ArtifactError("unknown solver config key '" + k + "'");
    }
    get_if(j, "n0", base.n0);
    get_if(j, "n1", base.n1);
    get_if(j, "phi_max", base.phi_max);
    get_if(j, "damping", base.damping);
    get_if(j, "tol_sup", base.tol_sup);
    get_if(j, "stop_fraction", base.stop_fraction);
    get_if(j, "max_sweeps", base.max_sweeps);
    get_if(j, "root_tol", base.root_tol);
    get_if(j, "init_scale", base.init_scale);
    get_if(j, "anderson_depth", base.anderson_depth);
    get_if(j, "threads", base.threads);
    if (j.contains("quad")) {
        const json& q = j.at("quad");
        get_if(q, "n_hermite", base.quad.n_hermite);
        get_if(q, "time_panels", base.quad.time_panels);
        get_if(q, "t_max", base.quad.t_max);
        get_if(q, "tail_tol", base.quad.tail_tol);
        get_if(q, "time_nodes", base.quad.time_nodes);
    }
    return base;
}

json to_json(const BoundariesArtifact& a) {
    const Boundaries& b = a.boundaries;
    const SolveReport& r = a.report;
    return {{"format_version", kArtifactFormatVersion},
            {"kind", "boundaries"},
            {"boundaries_version", kBoundariesFormatVersion},
            {"params", to_json(b.params)},
            {"beta", b.beta},
            {"gamma", b.gamma},
            {"grid0", b.grid0},
            {"b0", b.b0},
            {"grid1", b.grid1},
            {"b1", b.b1},
            {"asym_slope", b.asym_slope},
            {"asym_intercept", b.asym_intercept},
            {"tail_slope_fit", b.tail_slope_fit},
            {"iteration_log", b.iteration_log},
            {"converged", b.converged},
            {"solver_config", to_json(a.config)},
            {"residuals",
             {{"sweeps", r.sweeps},
              {"final_change", r.final_change},
              {"projection_change", r.projection_change},
              {"clamped_points", r.clamped_points},
              {"residual_b0", r.residual_b0},
              {"residual_b1", r.residual_b1},
              {"max_residual", r.max_residual}}}};
}

BoundariesArtifact boundaries_from_json(const json& j) {
    try {
        if (j.at("format_version").get<int>() != kArtifactFormatVersion || j.at("kind") != "boundaries") {
            throw ArtifactError("not a boundaries artifact of a supported format_version");
        }
        BoundariesArtifact a;
        Boundaries& b = a.boundaries;
        b.params = params_from_json(j.at("params"));
        j.at("beta").get_to(b.beta);
        j.at("gamma").get_to(b.gamma);
        j.at("grid0").get_to(b.grid0);
        j.at("b0").get_to(b.b0);
        j.at("grid1").get_to(b.grid1);
        j.at("b1").get_to(b.b1);
        j.at("asym_slope").get_to(b.asym_slope);
        j.at("asym_intercept").get_to(b.asym_intercept);
        j.at("tail_slope_fit").get_to(b.tail_slope_fit);
        j.at("iteration_log").get_to(b.iteration_log);
        j.at("converged").get_to(b.converged);
        a.config = solver_config_from_json(j.at("solver_config"));
        const json& r = j.at("residuals");
        r.at("sweeps").get_to(a.report.sweeps);
        r.at("final_change").get_to(a.report.final_change);
        r.at("projection_change").get_to(a.report.projection_change);
        r.at("clamped_points").get_to(a.report.clamped_points);
        r.at("residual_b0").get_to(a.report.residual_b0);
        r.at("residual_b1").get_to(a.report.residual_b1);
        r.at("max_residual").get_to(a.report.max_residual);
        b.validate();
        return a;
    } catch (const json::exception& e) {
        throw ArtifactError(std::string("malformed boundaries artifact: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ArtifactError(std::string("inconsistent boundaries artifact: ") + e.what());
    }
}

json to_json(const RiskReport& r) {
    return {{"format_version", kArtifactFormatVersion},
            {"kind", "risk_report"},
            {"measure", measure_name(r.measure)},
            {"n_paths", r.n_paths},
            {"mean_loss", r.mean_loss},
            {"std_err", r.std_err},
            {"mean_tau", r.mean_tau},
            {"std_err_tau", r.std_err_tau},
            {"error_rate_by_hypothesis", r.error_rate_by_hypothesis},
            {"count_by_hypothesis", r.count_by_hypothesis},
            {"capped_fraction", r.capped_fraction},
            {"cap_warning", r.cap_warning},
            {"absorption_fraction", r.absorption_fraction}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ArtifactError("cannot open '" + path.string() + "' for writing");
    os << text;
    if (!os) throw ArtifactError("write to '" + path.string() + "' failed");
}

json read_json(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ArtifactError("cannot open '" + path.string() + "'");
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw ArtifactError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void save_boundaries(const std::filesystem::path& path, const BoundariesArtifact& a) {
    write_text(path, dump(to_json(a)));
}

BoundariesArtifact load_boundaries(const std::filesystem::path& path) {
    return boundaries_from_json(read_json(path));
}

std::string boundaries_csv(const Boundaries& b) {
    std::set<double> xs(b.grid1.begin(), b.grid1.end());
    xs.insert(b.grid0.begin(), b.grid0.end());
    std::ostringstream os;
    os << "phi,b0,b1\n";
    for (double x : xs) {
        os << fmt(x) << ',';
        if (x <= b.gamma) os << fmt(b.b0_at(x));
        os << ',' << fmt(b.b1_at(x)) << '\n';
    }
    return os.str();
}

std::string value_reports_csv(const std::vector<ValueReport>& rows) {
    std::ostringstream os;
    os << "phi1,phi2,v_hat,m_hat,integral,region\n";
    for (const ValueReport& r : rows) {
        os << fmt(r.phi.phi1) << ',' << fmt(r.phi.phi2) << ',' << fmt(r.v_hat) << ',' << fmt(r.m_hat) << ','
           << fmt(r.integral) << ',' << region_name(r.in_region) << '\n';
    }
    return os.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream os;
    os << "path,t,phi1,phi2,region\n";
    for (const TraceRow& r : rows) {
        os << r.path << ',' << fmt(r.t) << ',' << fmt(r.phi1) << ',' << fmt(r.phi2) << ','
           << region_name(r.region) << '\n';
    }
    return os.str();
}

std::vector<PhiPoint> read_points_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ArtifactError("cannot open '" + path.string() + "'");
    std::vector<PhiPoint> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string a, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, c, ',')) {
            throw ArtifactError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        }
        try {
            std::size_t ia = 0, ic = 0;
            const double x = std::stod(a, &ia);
            const double y = std::stod(c, &ic);
            pts.push_back({x, y});
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header
            throw ArtifactError(path.string() + ":" + std::to_string(lineno) + ": not a number");
        }
    }
    return pts;
}

}  // namespace driftdet
