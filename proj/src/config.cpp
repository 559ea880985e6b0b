#include "mfp/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mfp {

namespace {

using nlohmann::json;

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 1 : line_of_byte(text, pos);
}

[[noreturn]] void fail(const std::string& text, const std::string& origin, const std::string& key,
                       const std::string& message) {
    std::ostringstream os;
    os << origin << ":" << line_of_key(text, key) << ": " << message;
    throw ConfigError(os.str());
}

double require_number(const json& j, const std::string& text, const std::string& origin,
                      const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        fail(text, origin, key, "missing or non-numeric field '" + key + "'");
    return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

LevyModel parse_levy(const json& j, const std::string& text, const std::string& origin) {
    const std::string kind = j.value("kind", "");
    if (kind == "brownian")
        return LevyModel{BrownianWithDrift{require_number(j, text, origin, "drift"),
                                           require_number(j, text, origin, "volatility")}};
    if (kind == "deterministic")
        return LevyModel{DeterministicDrift{require_number(j, text, origin, "hurst")}};
    if (kind == "compound_poisson_normal")
        return LevyModel{CompoundPoissonNormal{require_number(j, text, origin, "rate"),
                                               require_number(j, text, origin, "jump_mean"),
                                               require_number(j, text, origin, "jump_sd")}};
    if (kind == "gamma")
        return LevyModel{GammaProcess{require_number(j, text, origin, "shape"),
                                      require_number(j, text, origin, "rate")}};
    fail(text, origin, "kind", "unknown levy kind '" + kind + "'");
}

StationaryModel parse_stationary(const json& j, const std::string& text,
                                 const std::string& origin) {
    const std::string kind = j.value("kind", "");
    if (kind == "constant")
        return StationaryModel{ConstantValue{require_number(j, text, origin, "value")}};
    if (kind == "ou")
        return StationaryModel{OrnsteinUhlenbeck{require_number(j, text, origin, "rate"),
                                                 require_number(j, text, origin, "variance")}};
    if (kind == "matched_gamma") {
        const double psi1 = require_number(j, text, origin, "psi1");
        const double psi2 = require_number(j, text, origin, "psi2");
        const double ey0_sq = require_number(j, text, origin, "ey0_sq");
        return StationaryModel{GaussianFromCovariance{
            [psi1, psi2, ey0_sq](double h) { return gamma_from_psi(psi1, psi2, ey0_sq, std::abs(h)); }}};
    }
    fail(text, origin, "kind", "unknown stationary kind '" + kind + "'");
}

std::vector<double> parse_times(const json& j, const std::string& text, const std::string& origin) {
    const std::string kind = j.value("kind", "dyadic");
    std::vector<double> times;
    if (kind == "dyadic") {
        const int lo = static_cast<int>(number_or(j, "min_exp", -8));
        const int hi = static_cast<int>(number_or(j, "max_exp", 0));
        if (lo >= hi) fail(text, origin, "min_exp", "dyadic grid needs min_exp < max_exp");
        for (int k = lo; k <= hi; ++k) times.push_back(std::ldexp(1.0, k));
    } else if (kind == "linear") {
        const double start = require_number(j, text, origin, "start");
        const double stop = require_number(j, text, origin, "stop");
        const auto count = static_cast<std::size_t>(require_number(j, text, origin, "count"));
        if (!(start > 0.0) || !(stop > start) || count < 2)
            fail(text, origin, "start", "linear grid needs 0 < start < stop and count >= 2");
        for (std::size_t k = 0; k < count; ++k)
            times.push_back(start + (stop - start) * static_cast<double>(k) /
                                        static_cast<double>(count - 1));
    } else if (kind == "explicit") {
        if (!j.contains("values") || !j.at("values").is_array())
            fail(text, origin, "values", "explicit grid needs a 'values' array");
        for (const auto& v : j.at("values")) times.push_back(v.get<double>());
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1])))
                fail(text, origin, "values", "times must be positive and strictly increasing");
        }
    } else {
        fail(text, origin, "kind", "unknown time grid kind '" + kind + "'");
    }
    return times;
}

}  // namespace

const LmfModel& ExperimentConfig::lmf_model() const {
    if (!lmf) throw ConfigError("config: no lmf model specified");
    return *lmf;
}

const CascadeSpec& ExperimentConfig::cascade_spec() const {
    if (!cascade) throw ConfigError("config: no cascade spec specified");
    return *cascade;
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.lmf = mbm_analog_preset(0.5, 1.0);
    cfg.cascade = CascadeSpec{1.0, 1.0 / 256.0, 0.2, 512, 4.0};
    for (int k = -8; k <= 0; ++k) cfg.times.push_back(std::ldexp(1.0, k));
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << origin << ":" << line_of_byte(text, e.byte) << ": " << e.what();
        throw ConfigError(os.str());
    }

    ExperimentConfig cfg = default_config();
    cfg.times.clear();

    if (!j.contains("seed") || !j.at("seed").is_number_unsigned())
        fail(text, origin, "seed", "config must carry an unsigned 'seed'");
    cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("model")) {
        const auto& m = j.at("model");
        const std::string type = m.value("type", "");
        if (type == "preset") {
            const std::string name = m.value("name", "mbm");
            if (name != "mbm") fail(text, origin, "name", "unknown preset '" + name + "'");
            try {
                cfg.lmf = mbm_analog_preset(require_number(m, text, origin, "sigma"),
                                            number_or(m, "T", 1.0));
            } catch (const std::domain_error& e) {
                fail(text, origin, "sigma", e.what());
            }
        } else if (type == "pair") {
            if (!m.contains("levy") || !m.contains("stationary"))
                fail(text, origin, "model", "pair model needs 'levy' and 'stationary'");
            LmfModel model{parse_levy(m.at("levy"), text, origin),
                           parse_stationary(m.at("stationary"), text, origin)};
            if (m.contains("horizon")) model.horizon_a = m.at("horizon").get<double>();
            model.time_scale = number_or(m, "time_scale", 1.0);
            if (!(model.time_scale > 0.0))
                fail(text, origin, "time_scale", "time_scale must be > 0");
            cfg.lmf = std::move(model);
        } else {
            fail(text, origin, "type", "model.type must be 'preset' or 'pair'");
        }
    }

    if (j.contains("cascade")) {
        const auto& c = j.at("cascade");
        CascadeSpec spec{require_number(c, text, origin, "T"),
                         require_number(c, text, origin, "l"),
                         require_number(c, text, origin, "variance"),
                         static_cast<std::size_t>(number_or(c, "n", 512)),
                         number_or(c, "q_max", 4.0)};
        try {
            validate(spec);
        } catch (const std::domain_error& e) {
            fail(text, origin, "cascade", e.what());
        }
        cfg.cascade = spec;
    }

    cfg.times = j.contains("times") ? parse_times(j.at("times"), text, origin)
                                    : default_config().times;

    if (j.contains("ensemble")) {
        if (!j.at("ensemble").is_number_unsigned() || j.at("ensemble").get<std::uint64_t>() < 1)
            fail(text, origin, "ensemble", "ensemble size must be >= 1");
        cfg.ensemble = j.at("ensemble").get<std::size_t>();
    }
    if (j.contains("q_grid")) {
        cfg.q_grid.clear();
        for (const auto& v : j.at("q_grid")) cfg.q_grid.push_back(v.get<double>());
        if (cfg.q_grid.empty()) fail(text, origin, "q_grid", "q_grid must be nonempty");
    }
    if (j.contains("suites")) {
        cfg.suites.clear();
        for (const auto& v : j.at("suites")) cfg.suites.push_back(v.get<std::string>());
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ":1: cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.string());
}

}  // namespace mfp
