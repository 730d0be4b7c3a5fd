// config.hpp — experiment configuration: presets baked into the binary plus
// flat key = value config files (diffable, zero-dependency parsing).

#pragma once

#include "nmqsd/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nmqsd {

struct ExperimentConfig {
    std::string experiment;

    // two-level model parameters
    double omega{1.0}, lambda{1.0};
    // kernel
    double gamma{10.0};
    // QBM parameters
    double eta{0.1}, cutoff{20.0}, kT{0.0}, omega0{1.0};
    int n_levels{30};

    std::string scheme{"first"};  // first | second | zeroth | exact | markov | linear
    double dt{5e-3};
    double t_max{5.0};
    int n_traj{2000};
    std::uint64_t seed{1};
    int stride{10};
    int threads{1};
    int n_modes{6};  // oracle experiments
    std::string out_dir{"."};
    std::vector<Complex> psi0;  // empty = experiment default

    static const std::vector<std::string>& preset_names();
    static ExperimentConfig preset(const std::string& name);
    static ExperimentConfig parse_file(const std::string& path);
    void set(const std::string& key, const std::string& value);

    // returns messages prefixed "error:" or "warning:"
    std::vector<std::string> validate() const;
};

}  // namespace nmqsd
