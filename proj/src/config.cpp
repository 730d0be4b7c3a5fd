// Experiment presets and config-file parsing.

#include "nmqsd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nmqsd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<Complex> parse_state(const std::string& v) {
    // comma-separated re,im pairs: "re0,im0,re1,im1,..."
    std::vector<double> nums;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) nums.push_back(std::stod(trim(tok)));
    if (nums.size() % 2 != 0 || nums.empty())
        throw std::invalid_argument("config: psi0 needs an even number of values (re,im pairs)");
    std::vector<Complex> out;
    for (std::size_t i = 0; i + 1 < nums.size(); i += 2) out.emplace_back(nums[i], nums[i + 1]);
    return out;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::preset_names() {
    static const std::vector<std::string> names = {
        "fig1", "fig2", "fig3", "fig4", "markov-limit", "oracle-check", "novikov", "qbm"};
    return names;
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
    ExperimentConfig c;
    c.experiment = name;
    const double r2 = 1.0 / std::sqrt(2.0);
    if (name == "fig1") {
        c.gamma = 10.0;
        c.n_traj = 2000;
        c.dt = 5e-3;
        c.t_max = 5.0;
        c.stride = 20;
        c.psi0 = {Complex{0.0, r2}, Complex{r2, 0.0}};  // (|-> + i|+>)/sqrt2
    } else if (name == "fig2") {
        c.gamma = 1.0;
        c.n_traj = 1000;
        c.dt = 5e-3;
        c.t_max = 5.0;
        c.stride = 20;
        const double r10 = 1.0 / std::sqrt(10.0);
        c.psi0 = {Complex{3.0 * r10, 0.0}, Complex{r10, 0.0}};  // (|-> + 3|+>)/sqrt10
    } else if (name == "fig3") {
        c.gamma = 0.5;
        c.dt = 2.5e-3;
        c.t_max = 10.0;
        c.stride = 4;
        c.n_traj = 0;  // master-only experiment
        c.psi0 = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};  // |+>
    } else if (name == "fig4") {
        c.gamma = 10.0;
        c.n_traj = 500;
        c.dt = 5e-3;
        c.t_max = 5.0;
        c.stride = 20;
        c.psi0 = {Complex{std::sqrt(3.0) / 2.0, 0.0}, Complex{0.5, 0.0}};  // (|-> + sqrt3|+>)/2
    } else if (name == "markov-limit") {
        c.gamma = 100.0;
        c.n_traj = 2000;
        c.dt = 5e-3;
        c.t_max = 5.0;
        c.stride = 20;
        c.psi0 = {Complex{0.0, r2}, Complex{r2, 0.0}};
    } else if (name == "oracle-check") {
        c.gamma = 10.0;
        c.dt = 1e-3;
        c.t_max = 2.0;
        c.stride = 10;
        c.n_traj = 0;
        c.n_modes = 6;
        c.psi0 = {Complex{0.0, r2}, Complex{r2, 0.0}};
    } else if (name == "novikov") {
        c.gamma = 10.0;
        c.lambda = 0.3;
        c.dt = 5e-3;
        c.t_max = 2.0;
        c.n_traj = 4000;
        c.psi0 = {Complex{0.0, r2}, Complex{r2, 0.0}};
    } else if (name == "qbm") {
        c.eta = 0.1;
        c.cutoff = 20.0;
        c.kT = 50.0;
        c.omega0 = 1.0;
        c.n_levels = 30;
        c.dt = 2.5e-4;
        c.t_max = 0.2;
        c.stride = 40;
        c.n_traj = 0;
    } else {
        throw std::invalid_argument("config: unknown preset '" + name + "'");
    }
    return c;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "experiment") experiment = value;
    else if (key == "omega") omega = std::stod(value);
    else if (key == "lambda") lambda = std::stod(value);
    else if (key == "gamma") gamma = std::stod(value);
    else if (key == "eta") eta = std::stod(value);
    else if (key == "cutoff") cutoff = std::stod(value);
    else if (key == "kT") kT = std::stod(value);
    else if (key == "omega0") omega0 = std::stod(value);
    else if (key == "n_levels") n_levels = std::stoi(value);
    else if (key == "scheme") scheme = value;
    else if (key == "dt") dt = std::stod(value);
    else if (key == "t_max") t_max = std::stod(value);
    else if (key == "n_traj") n_traj = std::stoi(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "stride") stride = std::stoi(value);
    else if (key == "threads") threads = std::stoi(value);
    else if (key == "n_modes") n_modes = std::stoi(value);
    else if (key == "out_dir") out_dir = value;
    else if (key == "psi0") psi0 = parse_state(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ExperimentConfig c;
    bool have_experiment = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: " + path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "experiment") {
            // start from the preset so file keys override preset defaults
            const std::string keep_out = c.out_dir;
            c = preset(value);
            c.out_dir = keep_out;
            have_experiment = true;
            continue;
        }
        try {
            c.set(key, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config: " + path + ":" + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    if (!have_experiment)
        throw std::invalid_argument("config: " + path + ": missing 'experiment = <name>'");
    return c;
}

std::vector<std::string> ExperimentConfig::validate() const {
    std::vector<std::string> msgs;
    const bool qbm = experiment == "qbm";
    if (experiment.empty()) msgs.push_back("error: experiment name is required");
    if (std::find(preset_names().begin(), preset_names().end(), experiment) ==
        preset_names().end())
        msgs.push_back("error: unknown experiment '" + experiment + "'");
    if (dt <= 0.0) msgs.push_back("error: dt must be > 0");
    if (t_max <= 0.0) msgs.push_back("error: t_max must be > 0");
    if (!qbm && gamma <= 0.0)
        msgs.push_back("error: gamma is required (> 0) for the OU kernel");
    if (qbm) {
        if (cutoff <= 0.0) msgs.push_back("error: cutoff must be > 0");
        if (kT < 0.0) msgs.push_back("error: kT must be >= 0");
        if (n_levels < 4) msgs.push_back("error: n_levels must be >= 4");
    }
    if (!qbm && gamma * dt > 0.2)
        msgs.push_back("warning: gamma*dt = " + std::to_string(gamma * dt) +
                       " > 0.2; reduce dt for a stable bath resolution");
    if (omega * dt > 0.2 || lambda * lambda * dt > 0.2)
        msgs.push_back("warning: dt does not resolve the system scales");
    if (n_traj > 0 && n_traj < 100)
        msgs.push_back("warning: n_traj < 100 gives large Monte Carlo error bars");
    return msgs;
}

}  // namespace nmqsd
