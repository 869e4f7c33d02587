#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace iwsk {

/// Flat JSON run configuration. Unknown keys are rejected.
struct RunConfig {
    // model
    double b = 1.0;
    int sigma = 1;
    std::string lambda = "1";
    double epsilon = 0.0;           // single-run experiments
    std::vector<double> epsilons;   // sweep experiments
    // grid
    int n_hermite = 32;
    int n_y = 64;
    double l_y = 16.0;
    // time
    double t_final = 0.5;
    double dt = 1e-3;               // target step; runs shrink it to divide the
                                    // output interval exactly
    int out_every = 0;              // snapshot stride in steps; 0 = auto
    // data / experiment
    std::string initial = "standard";  // standard | polarized(n) | random(seed)
    std::string alpha0;                // optional amplitude expression (y only)
    int theta_nodes = 0;               // 0 = auto: 2 N_h (sigma + 1) + 1
    std::string experiment;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
    void validate() const;
};

struct InitialSpec {
    enum class Kind { Standard, Polarized, Random } kind = Kind::Standard;
    int mode_n = 0;
    std::uint64_t seed = 0;
};

InitialSpec parse_initial(const std::string& descriptor);

}  // namespace iwsk
