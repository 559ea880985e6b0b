#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "mfp/config.hpp"
#include "mfp/ensemble.hpp"
#include "mfp/io.hpp"
#include "mfp/suites.hpp"

namespace fs = std::filesystem;
using mfp::Json;

namespace {

Json model_json(const mfp::ExperimentConfig& cfg) {
    Json j;
    j["seed"] = cfg.seed;
    j["ensemble"] = cfg.ensemble;
    j["times"] = cfg.times;
    j["q_grid"] = cfg.q_grid;
    if (cfg.lmf) {
        Json m;
        m["levy"] = cfg.lmf->levy.name();
        std::visit(
            [&m](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, mfp::BrownianWithDrift>) {
                    m["drift"] = p.drift;
                    m["volatility"] = p.volatility;
                } else if constexpr (std::is_same_v<T, mfp::DeterministicDrift>) {
                    m["hurst"] = p.hurst;
                } else if constexpr (std::is_same_v<T, mfp::CompoundPoissonNormal>) {
                    m["rate"] = p.rate;
                    m["jump_mean"] = p.jump_mean;
                    m["jump_sd"] = p.jump_sd;
                } else {
                    m["shape"] = p.shape;
                    m["rate"] = p.rate;
                }
            },
            cfg.lmf->levy.kind());
        m["stationary"] = cfg.lmf->stationary.name();
        if (const auto* ou = std::get_if<mfp::OrnsteinUhlenbeck>(&cfg.lmf->stationary.kind())) {
            m["ou_rate"] = ou->rate;
            m["ou_variance"] = ou->variance;
        }
        m["time_scale"] = cfg.lmf->time_scale;
        j["lmf"] = m;
    }
    if (cfg.cascade) {
        Json c;
        c["T"] = cfg.cascade->integral_scale;
        c["l"] = cfg.cascade->truncation;
        c["variance"] = cfg.cascade->variance;
        c["n"] = cfg.cascade->resolution;
        j["cascade"] = c;
    }
    return j;
}

int run_simulate_lmf(const mfp::ExperimentConfig& cfg, const fs::path& out, int workers) {
    const auto ensemble =
        mfp::sample_lmf_ensemble(cfg.lmf_model(), cfg.times, cfg.ensemble, cfg.seed, workers);
    mfp::CsvWriter csv({"path_id", "t", "X"});
    for (Eigen::Index i = 0; i < ensemble.rows(); ++i)
        for (std::size_t j = 0; j < cfg.times.size(); ++j) {
            const double rest[2] = {cfg.times[j], ensemble(i, static_cast<Eigen::Index>(j))};
            csv.add_row(static_cast<std::uint64_t>(i), rest);
        }
    csv.write(out / "lmf_paths.csv");
    std::cout << "wrote " << (out / "lmf_paths.csv").string() << "\n";
    return 0;
}

int run_simulate_cascade(const mfp::ExperimentConfig& cfg, const fs::path& out, int workers) {
    const auto& spec = cfg.cascade_spec();
    const auto ensemble = mfp::sample_cascade_ensemble(spec, cfg.ensemble, cfg.seed, workers);
    const double dt = spec.integral_scale / static_cast<double>(spec.resolution);
    mfp::CsvWriter csv({"replica_id", "t", "Q"});
    for (Eigen::Index i = 0; i < ensemble.rows(); ++i)
        for (Eigen::Index j = 0; j < ensemble.cols(); ++j) {
            const double rest[2] = {static_cast<double>(j + 1) * dt, ensemble(i, j)};
            csv.add_row(static_cast<std::uint64_t>(i), rest);
        }
    csv.write(out / "cascade_paths.csv");
    std::cout << "wrote " << (out / "cascade_paths.csv").string() << "\n";
    return 0;
}

int run_moments(const mfp::ExperimentConfig& cfg, const fs::path& out, int workers) {
    const auto& model = cfg.lmf_model();
    for (const double t : cfg.times)
        if (t > model.time_scale)
            throw mfp::ConfigError("moments: time grid must stay within (0, T]");
    std::vector<double> theory;
    for (const double q : cfg.q_grid) theory.push_back(-model.psi(q));
    const auto ensemble =
        mfp::sample_lmf_ensemble(model, cfg.times, cfg.ensemble, cfg.seed, workers);
    const mfp::Interval q_range{
        std::max(model.levy.psi_domain().lo, model.stationary.moment_range().lo),
        std::min(model.levy.psi_domain().hi, model.stationary.moment_range().hi)};
    const auto report =
        mfp::fit_scaling_function(ensemble, cfg.times, cfg.q_grid, theory, q_range, 0.05);

    Json body;
    body["config"] = model_json(cfg);
    body["report"] = mfp::to_json(report);
    mfp::write_report_json(out / "moments.json", body);

    mfp::CsvWriter csv({"q", "tau_hat", "se", "theory", "pass"});
    for (std::size_t i = 0; i < report.q_grid.size(); ++i) {
        const double row[5] = {report.q_grid[i], report.slopes[i], report.slope_ses[i],
                               report.theory[i], report.pass[i] ? 1.0 : 0.0};
        csv.add_row(row);
    }
    csv.write(out / "moments.csv");
    std::cout << "wrote " << (out / "moments.json").string() << " and moments.csv\n";
    for (std::size_t i = 0; i < report.q_grid.size(); ++i)
        std::cout << "  q=" << report.q_grid[i] << " tau_hat=" << report.slopes[i]
                  << " (theory " << report.theory[i] << ") "
                  << (report.pass[i] ? "pass" : "FAIL") << "\n";
    return report.all_pass() ? 0 : 1;
}

int run_verify(const mfp::ExperimentConfig& cfg, const std::vector<std::string>& suites,
               const fs::path& out, int workers) {
    const auto results = mfp::run_suites(suites.empty() ? cfg.suites : suites, cfg, workers);
    bool all_pass = true;
    std::vector<std::string> failing;
    for (const auto& result : results) {
        Json body;
        body["suite"] = result.suite;
        body["seed"] = cfg.seed;
        body["config"] = model_json(cfg);
        Json reports = Json::array();
        for (const auto& r : result.reports) reports.push_back(mfp::to_json(r));
        body["reports"] = reports;
        body["pass"] = result.pass();
        mfp::write_report_json(out / ("verify_" + result.suite + ".json"), body);

        for (const auto& r : result.reports) {
            std::cout << (r.pass ? "  pass  " : "  FAIL  ") << result.suite << "/" << r.name
                      << "\n";
            if (!r.pass) failing.push_back(result.suite + "/" + r.name);
        }
        all_pass = all_pass && result.pass();
    }
    if (!all_pass) {
        std::cout << "FAILED:";
        for (const auto& name : failing) std::cout << " " << name;
        std::cout << "\n";
        return 1;
    }
    std::cout << "all verdicts pass\n";
    return 0;
}

int run_report(const fs::path& out) {
    Json suites = Json::array();
    bool all_pass = true;
    std::vector<fs::path> files;
    if (fs::exists(out))
        for (const auto& entry : fs::directory_iterator(out)) {
            const auto name = entry.path().filename().string();
            if (entry.is_regular_file() && name.ends_with(".json") && name != "summary.json" &&
                (name.starts_with("verify_") || name == "moments.json"))
                files.push_back(entry.path());
        }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        Json j = Json::parse(in);
        j.erase("generated_at");
        suites.push_back(std::move(j));
        const auto& added = suites.back();
        if (added.contains("pass") && !added["pass"].get<bool>()) all_pass = false;
        if (added.contains("report") && !added["report"]["all_pass"].get<bool>()) all_pass = false;
    }
    Json body;
    body["merged"] = suites;
    body["overall_pass"] = all_pass;
    mfp::write_report_json(out / "summary.json", body);
    std::cout << "wrote " << (out / "summary.json").string() << " (overall "
              << (all_pass ? "pass" : "FAIL") << ")\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfp: multifractal process construction, simulation and verification"};
    app.fallthrough(true);

    std::string config_path, out_flag;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    app.add_option("--config", config_path, "experiment config file (JSON)");
    auto* seed_opt = app.add_option("--seed", seed, "master seed override");
    app.add_option("--workers", workers, "worker threads (0 = hardware)");
    app.add_option("--out", out_flag, "output directory");

    auto* sim_lmf = app.add_subcommand("simulate-lmf", "sample L-multifractal paths to CSV");
    auto* sim_cascade =
        app.add_subcommand("simulate-cascade", "sample log-normal cascade measures to CSV");
    auto* moments = app.add_subcommand("moments", "estimate the moment scaling function");
    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::vector<std::string> suite_args;
    verify->add_option("suite", suite_args, "suites to run (or 'all')");
    auto* report = app.add_subcommand("report", "merge verdict JSON files into a summary");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    seed_given = seed_opt->count() > 0;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    try {
        mfp::ExperimentConfig cfg;
        if (!config_path.empty())
            cfg = mfp::parse_config_file(config_path);
        else
            cfg = mfp::default_config();
        if (seed_given) cfg.seed = seed;

        fs::path out = "out";
        if (const char* env = std::getenv("MFP_OUT"); env != nullptr && *env) out = env;
        if (!cfg.out_dir.empty()) out = cfg.out_dir;
        if (!out_flag.empty()) out = out_flag;
        fs::create_directories(out);

        if (sim_lmf->parsed()) return run_simulate_lmf(cfg, out, workers);
        if (sim_cascade->parsed()) return run_simulate_cascade(cfg, out, workers);
        if (moments->parsed()) return run_moments(cfg, out, workers);
        if (verify->parsed()) return run_verify(cfg, suite_args, out, workers);
        if (report->parsed()) return run_report(out);
    } catch (const mfp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
