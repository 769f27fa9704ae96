// drift-detect: solve / value / simulate / verify front end.
// Exit codes: 0 ok, 1 usage or bad input, 2 solver non-convergence, 3 artifact mismatch.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "driftdet/errors.hpp"
#include "driftdet/io.hpp"
#include "driftdet/simulator.hpp"
#include "driftdet/solver.hpp"
#include "driftdet/value.hpp"
#include "suite.hpp"

#ifndef DRIFTDET_VERSION
#define DRIFTDET_VERSION "0.0.0"
#endif
#ifndef DRIFTDET_GIT
#define DRIFTDET_GIT "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace driftdet;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNoConvergence = 2, kMismatch = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": '" + item + "' is not a number");
        }
    }
    if (out.size() != n) throw UsageError(std::string(what) + " needs " + std::to_string(n) + " comma-separated values");
    return out;
}

Prior parse_prior(const std::string& s) {
    const auto v = parse_list(s, 3, "--prior");
    Prior p{v[0], v[1], v[2]};
    // Accept priors written with a few decimals, e.g. .34,.33,.33, by renormalizing.
    const double z = p.pi0 + p.pi1 + p.pi2;
    if (!(z > 0.0) || std::abs(z - 1.0) > 1e-3) throw UsageError("--prior must sum to 1");
    p.pi0 /= z;
    p.pi1 /= z;
    p.pi2 /= z;
    p.validate();
    return p;
}

PhiPoint parse_phi(const std::string& s, const char* what) {
    const auto v = parse_list(s, 2, what);
    if (!(v[0] >= 0.0 && v[1] >= 0.0)) throw UsageError(std::string(what) + " must be non-negative");
    return {v[0], v[1]};
}

int default_threads() {
    if (const char* e = std::getenv("DRIFT_DETECT_THREADS")) {
        try {
            const int n = std::stoi(e);
            if (n >= 0) return n;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring DRIFT_DETECT_THREADS='" << e << "'\n";
    }
    return 0;
}

struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    json params = json::object();
    json config = json::object();
    std::vector<std::string> inputs, outputs;
    json residuals = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const fs::path& path) {
        outputs.push_back(path.string());
        const json j{{"format_version", kArtifactFormatVersion},
                     {"kind", "run_manifest"},
                     {"command", command},
                     {"argv", argv},
                     {"params", params},
                     {"config", config},
                     {"inputs", inputs},
                     {"outputs", outputs},
                     {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
                     {"version", std::string("drift-detect ") + DRIFTDET_VERSION + " (" + DRIFTDET_GIT + ")"},
                     {"residual_summary", residuals}};
        write_text(path, dump(j));
    }
};

json residual_summary(const BoundariesArtifact& a) {
    return {{"converged", a.boundaries.converged},
            {"sweeps", a.report.sweeps},
            {"final_change", a.report.final_change},
            {"max_residual", a.report.max_residual}};
}

// Loads boundaries and checks them against --mu/--c when those were given.
BoundariesArtifact load_checked(const std::string& path, std::optional<double> mu, std::optional<double> c) {
    if (!fs::exists(path)) throw UsageError("boundaries file '" + path + "' does not exist");
    BoundariesArtifact a = load_boundaries(path);
    ModelParams want = a.boundaries.params;
    if (mu) want.mu = *mu;
    if (c) want.c = *c;
    want.validate();
    require_matching(want, a.boundaries);
    return a;
}

fs::path sibling(const std::string& file, const std::string& name) {
    const fs::path p(file);
    return p.has_parent_path() ? p.parent_path() / name : fs::path(name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal detection of the drifting coordinate of a 3D Brownian motion"};
    app.require_subcommand(1);
    Manifest man;
    for (int i = 0; i < argc; ++i) man.argv.emplace_back(argv[i]);
    int threads = default_threads();

    // solve
    auto* solve = app.add_subcommand("solve", "Compute the optimal stopping boundaries");
    double s_mu = 0, s_c = 0, s_init = 1.0;
    std::string s_config, s_out = "out";
    bool s_serial = false;
    solve->add_option("--mu", s_mu, "Drift magnitude")->required();
    solve->add_option("--c", s_c, "Cost of a wrong decision")->required();
    solve->add_option("--config", s_config, "JSON file overriding solver defaults")->check(CLI::ExistingFile);
    solve->add_option("-o,--out", s_out, "Output directory");
    solve->add_option("--init-scale", s_init, "Start b1 at init_scale * beta * (1 + phi)");
    solve->add_flag("--serial", s_serial, "Use the serial reference kernels");
    solve->add_option("--threads", threads, "Worker cap (results do not depend on it)");

    // value
    auto* value = app.add_subcommand("value", "Evaluate the value function");
    std::string v_b, v_phi, v_prior, v_points, v_out, v_manifest;
    std::optional<double> v_mu, v_c;
    value->add_option("-b,--boundaries", v_b, "Boundaries JSON")->required();
    auto* o_phi = value->add_option("--phi", v_phi, "Point phi1,phi2");
    auto* o_prior = value->add_option("--prior", v_prior, "Prior p0,p1,p2");
    auto* o_points = value->add_option("--points", v_points, "CSV of phi1,phi2 rows")->check(CLI::ExistingFile);
    o_phi->excludes(o_prior)->excludes(o_points);
    o_prior->excludes(o_points);
    value->add_option("-o,--out", v_out, "Write the CSV here instead of stdout");
    value->add_option("--mu", v_mu, "Expected mu (checked against the file)");
    value->add_option("--c", v_c, "Expected c (checked against the file)");
    value->add_option("--manifest", v_manifest, "Manifest path");
    value->add_option("--threads", threads, "Worker cap");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of the Bayes risk");
    std::string m_b, m_prior, m_phi0, m_measure = "p_pi", m_out, m_trace, m_manifest;
    std::optional<double> m_mu, m_c;
    SimConfig sc;
    sim->add_option("-b,--boundaries", m_b, "Boundaries JSON")->required();
    auto* o_mprior = sim->add_option("--prior", m_prior, "Prior p0,p1,p2");
    auto* o_mphi = sim->add_option("--phi0", m_phi0, "Start phi1,phi2");
    o_mprior->excludes(o_mphi);
    sim->add_option("--measure", m_measure, "p_pi (simulate theta and X) or p0 (simulate Phi under P0)");
    sim->add_option("--paths", sc.n_paths, "Number of paths");
    sim->add_option("--dt", sc.dt, "Time step");
    sim->add_option("--seed", sc.seed, "Seed");
    sim->add_option("--t-cap", sc.t_cap, "Horizon guard (default 50/mu^2)");
    sim->add_option("-o,--out", m_out, "Report JSON (default: risk_report.json next to the boundaries)");
    sim->add_option("--trace", m_trace, "Per-path trace CSV");
    sim->add_option("--trace-paths", sc.trace_paths, "Paths to trace (at most 100)");
    sim->add_option("--mu", m_mu, "Expected mu (checked against the file)");
    sim->add_option("--c", m_c, "Expected c (checked against the file)");
    sim->add_option("--manifest", m_manifest, "Manifest path");
    sim->add_option("--threads", threads, "Worker cap");

    // verify
    auto* ver = app.add_subcommand("verify", "Run the acceptance checks");
    double r_mu = 0, r_c = 0;
    bool r_full = false, r_quick = false;
    std::string r_manifest = "manifest_verify.json";
    ver->add_option("--mu", r_mu, "Drift magnitude")->required();
    ver->add_option("--c", r_c, "Cost of a wrong decision")->required();
    auto* f_full = ver->add_flag("--full", r_full, "Include the Picard solve and Monte Carlo agreement");
    ver->add_flag("--quick", r_quick, "Closed forms, density, generator, reproducibility (default)")->excludes(f_full);
    ver->add_option("--manifest", r_manifest, "Manifest path");
    ver->add_option("--threads", threads, "Worker cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (threads < 0) {
        std::cerr << "error: --threads must be >= 0\n";
        return kUsage;
    }

    try {
        if (*solve) {
            man.command = "solve";
            const ModelParams params{s_mu, s_c};
            params.validate();
            SolverConfig cfg;
            if (!s_config.empty()) {
                cfg = solver_config_from_json(read_json(s_config));
                man.inputs.push_back(s_config);
            }
            if (solve->count("--init-scale")) cfg.init_scale = s_init;
            if (s_serial) cfg.execution = Execution::Serial;
            cfg.threads = threads;
            cfg.validate(params);
            man.params = to_json(params);
            man.config = to_json(cfg);

            BoundariesArtifact art;
            art.config = cfg;
            int code = kOk;
            try {
                art.boundaries = picard_solve(params, cfg, &art.report);
            } catch (const NonConvergence& e) {
                art.boundaries = e.partial();
                art.report = e.report();
                std::cerr << "error: " << e.what() << " after " << e.report().sweeps << " sweeps (change "
                          << e.report().final_change << "); writing partial result with converged=false\n";
                code = kNoConvergence;
            }
            const fs::path dir(s_out);
            save_boundaries(dir / "boundaries.json", art);
            write_text(dir / "boundaries.csv", boundaries_csv(art.boundaries));
            man.outputs = {(dir / "boundaries.json").string(), (dir / "boundaries.csv").string()};
            man.residuals = residual_summary(art);
            man.residuals["seconds"] = art.report.seconds;
            man.write(dir / "manifest.json");
            std::cout << "beta " << art.boundaries.beta << "  b1(0) " << art.boundaries.b1.front() << "  b0(0) "
                      << art.boundaries.b0.front() << "  gamma " << art.boundaries.gamma << "  sweeps "
                      << art.report.sweeps << "  max residual " << art.report.max_residual << "\n";
            return code;
        }

        if (*value) {
            man.command = "value";
            if (!*o_phi && !*o_prior && !*o_points) throw UsageError("value needs one of --phi, --prior, --points");
            const BoundariesArtifact art = load_checked(v_b, v_mu, v_c);
            man.inputs.push_back(v_b);
            man.params = to_json(art.boundaries.params);
            SolverConfig cfg = art.config;
            cfg.threads = threads;
            man.config = to_json(cfg);
            man.residuals = residual_summary(art);
            std::string text;
            if (*o_prior) {
                const Prior pr = parse_prior(v_prior);
                const double v = value_original(pr, art.boundaries.params, art.boundaries, cfg);
                std::ostringstream os;
                os.precision(17);
                os << "pi0,pi1,pi2,value\n" << pr.pi0 << ',' << pr.pi1 << ',' << pr.pi2 << ',' << v << '\n';
                text = os.str();
            } else {
                std::vector<PhiPoint> pts;
                if (*o_phi) {
                    pts.push_back(parse_phi(v_phi, "--phi"));
                } else {
                    pts = read_points_csv(v_points);
                    man.inputs.push_back(v_points);
                }
                text = value_reports_csv(value_batch(pts, art.boundaries, cfg));
            }
            if (!v_out.empty()) {
                write_text(v_out, text);
                man.outputs.push_back(v_out);
            } else {
                std::cout << text;
            }
            man.write(v_manifest.empty() ? (v_out.empty() ? sibling(v_b, "manifest_value.json")
                                                          : sibling(v_out, "manifest_value.json"))
                                         : fs::path(v_manifest));
            return kOk;
        }

        if (*sim) {
            man.command = "simulate";
            if (!*o_mprior && !*o_mphi) throw UsageError("simulate needs --prior or --phi0");
            sc.measure = measure_from_name(m_measure);
            sc.threads = threads;
            sc.validate();
            const BoundariesArtifact art = load_checked(m_b, m_mu, m_c);
            man.inputs.push_back(m_b);
            const ModelParams& params = art.boundaries.params;
            man.params = to_json(params);
            man.config = to_json(sc);
            man.residuals = residual_summary(art);
            RiskReport rep;
            if (sc.measure == Measure::P_PI) {
                Prior pr;
                if (*o_mprior) {
                    pr = parse_prior(m_prior);
                } else {
                    const PhiPoint f = parse_phi(m_phi0, "--phi0");
                    const double z = 1.0 + f.phi1 + f.phi2;
                    pr = {1.0 / z, f.phi1 / z, f.phi2 / z};
                }
                rep = simulate_risk_ppi(pr, params, art.boundaries, sc);
            } else {
                const PhiPoint f = *o_mprior ? prior_to_phi(parse_prior(m_prior)) : parse_phi(m_phi0, "--phi0");
                rep = simulate_value_p0(f, params, art.boundaries, sc);
            }
            if (rep.cap_warning) {
                std::cerr << "warning: " << rep.capped_fraction * 100.0 << "% of paths reached t_cap\n";
            }
            const std::string out = m_out.empty() ? sibling(m_b, "risk_report.json").string() : m_out;
            const std::string text = dump(to_json(rep));
            write_text(out, text);
            man.outputs.push_back(out);
            if (!m_trace.empty()) {
                write_text(m_trace, trace_csv(rep.trace));
                man.outputs.push_back(m_trace);
            }
            man.write(m_manifest.empty() ? sibling(out, "manifest_simulate.json") : fs::path(m_manifest));
            std::cout << text;
            return kOk;
        }

        if (*ver) {
            man.command = "verify";
            const ModelParams params{r_mu, r_c};
            params.validate();
            man.params = to_json(params);
            verify::SuiteOptions opt;
            opt.params = params;
            opt.full = r_full;
            opt.threads = threads;
            opt.progress = &std::cout;
            const auto results = verify::run_suite(opt);
            int failed = 0;
            json table = json::array();
            for (const auto& r : results) {
                failed += r.pass ? 0 : 1;
                table.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
            }
            std::cout << results.size() - std::size_t(failed) << "/" << results.size() << " criteria passed\n";
            man.config = {{"full", r_full}};
            man.residuals = {{"checks", table}};
            man.write(r_manifest);
            return failed == 0 ? kOk : kUsage;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
        return kUsage;
    } catch (const BoundaryMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMismatch;
    } catch (const DegeneratePrior& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ArtifactError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
