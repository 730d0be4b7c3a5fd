// experiments.hpp — named experiments (fig1..fig4, markov-limit, oracle-check,
// novikov, qbm) with their numeric gates; shared by the CLI and the
// acceptance suite.

#pragma once

#include "nmqsd/config.hpp"
#include "nmqsd/ensemble.hpp"
#include "nmqsd/oracle.hpp"

#include <string>
#include <vector>

namespace nmqsd {

struct GateResult {
    std::string name;
    bool pass{false};
    std::string detail;
};

struct ExperimentOutput {
    std::string experiment;
    std::vector<GateResult> gates;
    std::vector<std::string> files;  // CSVs written

    bool all_pass() const {
        for (const auto& g : gates)
            if (!g.pass) return false;
        return true;
    }
};

// Runs the named experiment: writes its CSVs into cfg.out_dir and evaluates
// its numeric gates.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// individual experiments (cfg fields beyond the preset are honored)
ExperimentOutput run_fig1(const ExperimentConfig& cfg);
ExperimentOutput run_fig2(const ExperimentConfig& cfg);
ExperimentOutput run_fig3(const ExperimentConfig& cfg);
ExperimentOutput run_fig4(const ExperimentConfig& cfg);
ExperimentOutput run_markov_limit(const ExperimentConfig& cfg);
ExperimentOutput run_oracle_check(const ExperimentConfig& cfg);
ExperimentOutput run_novikov(const ExperimentConfig& cfg);
ExperimentOutput run_qbm_experiment(const ExperimentConfig& cfg);

// helpers reused by tests
Vector state_from(const std::vector<Complex>& amplitudes);
std::vector<Matrix> reference_on_grid(const MasterSeries& series, const std::vector<double>& t);

}  // namespace nmqsd
