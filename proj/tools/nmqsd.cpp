// nmqsd — command-line front end for the non-Markovian QSD simulator.
//
// Subcommands:
//   run <preset|config-file>   run a named experiment, write CSVs
//   validate <preset|config>   check a configuration, print warnings/errors
//   qbm-coeffs                 export the Ohmic coefficient table
//   oracle-check               bath-discretization cross-check
//   novikov                    statistical Novikov-relation check
//
// Exit codes in --check mode: 0 pass, 1 numeric gate failed, 2 config error.

#include "nmqsd/csv.hpp"
#include "nmqsd/experiments.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>

namespace {

nmqsd::ExperimentConfig load_config(const std::string& arg) {
    const auto& names = nmqsd::ExperimentConfig::preset_names();
    if (std::find(names.begin(), names.end(), arg) != names.end())
        return nmqsd::ExperimentConfig::preset(arg);
    return nmqsd::ExperimentConfig::parse_file(arg);
}

void apply_overrides(nmqsd::ExperimentConfig& cfg, std::uint64_t seed, bool seed_set,
                     int threads, const std::string& out_dir) {
    if (seed_set) cfg.seed = seed;
    if (threads > 0) cfg.threads = threads;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (const char* env = std::getenv("NMQSD_OUT_DIR"); env && out_dir.empty())
        cfg.out_dir = env;
}

int report(const nmqsd::ExperimentOutput& out, bool check) {
    for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
    for (const auto& g : out.gates)
        std::cout << (g.pass ? "[PASS] " : "[FAIL] ") << g.name << ": " << g.detail << "\n";
    if (check) return out.all_pass() ? 0 : 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Markovian quantum state diffusion simulator"};
    app.require_subcommand(1);

    std::string target, out_dir;
    std::uint64_t seed = 1;
    bool seed_set = false, check = false;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed (default 1)")->each([&](std::string) {
            seed_set = true;
        });
        cmd->add_option("--threads", threads, "worker threads for ensembles");
        cmd->add_option("--out", out_dir, "output directory (or NMQSD_OUT_DIR)");
        cmd->add_flag("--check", check, "exit nonzero when a numeric gate fails");
    };

    auto* run = app.add_subcommand("run", "run an experiment");
    run->add_option("experiment", target, "preset name or config file")->required();
    add_common(run);

    auto* val = app.add_subcommand("validate", "validate a configuration");
    val->add_option("experiment", target, "preset name or config file")->required();

    auto* qbm = app.add_subcommand("qbm-coeffs", "export Ohmic g0/g1 coefficient table");
    add_common(qbm);
    double qbm_eta = 0.1, qbm_cutoff = 20.0, qbm_kT = 0.0, qbm_tmax = 2.0;
    qbm->add_option("--eta", qbm_eta, "friction coefficient");
    qbm->add_option("--cutoff", qbm_cutoff, "cutoff frequency");
    qbm->add_option("--kT", qbm_kT, "temperature (energy units)");
    qbm->add_option("--t-max", qbm_tmax, "table end time");

    auto* orc = app.add_subcommand("oracle-check", "bath-discretization cross-check");
    add_common(orc);
    auto* nov = app.add_subcommand("novikov", "statistical Novikov check");
    add_common(nov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = load_config(target);
            apply_overrides(cfg, seed, seed_set, threads, out_dir);
            const auto msgs = cfg.validate();
            bool bad = false;
            for (const auto& m : msgs) {
                std::cerr << m << "\n";
                bad = bad || m.rfind("error:", 0) == 0;
            }
            if (bad) return 2;
            return report(nmqsd::run_experiment(cfg), check);
        }
        if (val->parsed()) {
            const auto cfg = load_config(target);
            const auto msgs = cfg.validate();
            for (const auto& m : msgs) std::cout << m << "\n";
            for (const auto& m : msgs)
                if (m.rfind("error:", 0) == 0) return 2;
            std::cout << "ok\n";
            return 0;
        }
        if (qbm->parsed()) {
            auto cfg = nmqsd::ExperimentConfig::preset("qbm");
            cfg.eta = qbm_eta;
            cfg.cutoff = qbm_cutoff;
            cfg.kT = qbm_kT;
            cfg.t_max = qbm_tmax;
            // table-only invocation: skip the propagator runs
            apply_overrides(cfg, seed, seed_set, threads, out_dir);
            std::vector<double> grid;
            for (int i = 0; i < 401; ++i) grid.push_back(cfg.t_max * i / 400.0);
            const auto table = nmqsd::Kernel::ohmic(cfg.eta, cfg.cutoff, cfg.kT).qbm_coeff_table(grid);
            const std::string path =
                (cfg.out_dir == "." ? std::string("qbm_coeffs.csv")
                                    : cfg.out_dir + "/qbm_coeffs.csv");
            nmqsd::CsvWriter w(path, {"t", "g0R", "g0I", "g1R", "g1I"});
            for (const auto& r : table) w.row({r.t, r.g0R, r.g0I, r.g1R, r.g1I});
            std::cout << "wrote " << path << "\n";
            return 0;
        }
        if (orc->parsed()) {
            auto cfg = nmqsd::ExperimentConfig::preset("oracle-check");
            apply_overrides(cfg, seed, seed_set, threads, out_dir);
            return report(nmqsd::run_oracle_check(cfg), check);
        }
        if (nov->parsed()) {
            auto cfg = nmqsd::ExperimentConfig::preset("novikov");
            apply_overrides(cfg, seed, seed_set, threads, out_dir);
            return report(nmqsd::run_novikov(cfg), check);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
