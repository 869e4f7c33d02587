#include "iwsk/config.hpp"

#include <fstream>

#include "iwsk/util.hpp"

namespace iwsk {

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "b")
                c.b = value.get<double>();
            else if (key == "sigma")
                c.sigma = value.get<int>();
            else if (key == "lambda")
                c.lambda = value.get<std::string>();
            else if (key == "epsilon")
                c.epsilon = value.get<double>();
            else if (key == "epsilons")
                c.epsilons = value.get<std::vector<double>>();
            else if (key == "n_hermite")
                c.n_hermite = value.get<int>();
            else if (key == "n_y")
                c.n_y = value.get<int>();
            else if (key == "l_y")
                c.l_y = value.get<double>();
            else if (key == "t_final")
                c.t_final = value.get<double>();
            else if (key == "dt")
                c.dt = value.get<double>();
            else if (key == "out_every")
                c.out_every = value.get<int>();
            else if (key == "initial")
                c.initial = value.get<std::string>();
            else if (key == "alpha0")
                c.alpha0 = value.get<std::string>();
            else if (key == "theta_nodes")
                c.theta_nodes = value.get<int>();
            else if (key == "experiment")
                c.experiment = value.get<std::string>();
            else
                throw ConfigError("config: unknown key '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config: bad value for '" + key + "': " + e.what());
        }
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: JSON parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["b"] = b;
    j["sigma"] = sigma;
    j["lambda"] = lambda;
    j["epsilon"] = epsilon;
    j["epsilons"] = epsilons;
    j["n_hermite"] = n_hermite;
    j["n_y"] = n_y;
    j["l_y"] = l_y;
    j["t_final"] = t_final;
    j["dt"] = dt;
    j["out_every"] = out_every;
    j["initial"] = initial;
    j["alpha0"] = alpha0;
    j["theta_nodes"] = theta_nodes;
    j["experiment"] = experiment;
    return j;
}

void RunConfig::validate() const {
    if (b <= 0.0) throw ConfigError("config: b must be positive");
    if (sigma < 1) throw ConfigError("config: sigma must be >= 1");
    if (n_hermite < 1) throw ConfigError("config: n_hermite must be positive");
    if (n_y < 4 || n_y % 2 != 0) throw ConfigError("config: n_y must be even and >= 4");
    if (l_y <= 0.0) throw ConfigError("config: l_y must be positive");
    if (t_final <= 0.0) throw ConfigError("config: t_final must be positive");
    if (dt <= 0.0) throw ConfigError("config: dt must be positive");
    if (out_every < 0) throw ConfigError("config: out_every must be >= 0");
    if (epsilon < 0.0) throw ConfigError("config: epsilon must be >= 0");
    for (double e : epsilons)
        if (e <= 0.0) throw ConfigError("config: epsilons must be positive");
    if (theta_nodes < 0) throw ConfigError("config: theta_nodes must be >= 0");
    parse_initial(initial);
}

InitialSpec parse_initial(const std::string& descriptor) {
    InitialSpec spec;
    if (descriptor == "standard") {
        spec.kind = InitialSpec::Kind::Standard;
        return spec;
    }
    auto parse_arg = [&](const std::string& prefix) -> std::string {
        if (descriptor.size() < prefix.size() + 2 || descriptor.compare(0, prefix.size(), prefix) != 0 ||
            descriptor[prefix.size()] != '(' || descriptor.back() != ')')
            return {};
        return descriptor.substr(prefix.size() + 1,
                                 descriptor.size() - prefix.size() - 2);
    };
    if (std::string arg = parse_arg("polarized"); !arg.empty()) {
        spec.kind = InitialSpec::Kind::Polarized;
        try {
            spec.mode_n = std::stoi(arg);
        } catch (...) {
            throw ConfigError("config: bad polarized mode in '" + descriptor + "'");
        }
        if (spec.mode_n < 0) throw ConfigError("config: polarized mode must be >= 0");
        return spec;
    }
    if (std::string arg = parse_arg("random"); !arg.empty()) {
        spec.kind = InitialSpec::Kind::Random;
        try {
            spec.seed = std::stoull(arg);
        } catch (...) {
            throw ConfigError("config: bad random seed in '" + descriptor + "'");
        }
        return spec;
    }
    throw ConfigError("config: unknown initial descriptor '" + descriptor + "'");
}

}  // namespace iwsk
