#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clab/diagnostics.hpp"
#include "clab/mild.hpp"

namespace clab {

enum class Solver { direct, split_perturbed, mollified };
enum class RunStatus { completed, blowup_suspected, numerical_failure };
const char* status_name(RunStatus s);

struct ExperimentConfig {
    int dim = 3;
    int n = 32;
    double box = 6.283185307179586;
    // initial data: a CLF1 file, or a named family
    std::string file;
    std::string family = "taylor-green";
    double amplitude = 1;
    std::uint64_t seed = 1;
    double alpha = 2;

    double horizon = 1;
    Solver solver = Solver::direct;
    SolverConfig solver_cfg;          // T is overwritten by the horizon
    double rho = 0.1;                 // mollified solver
    double split_p = 4, split_q = 8, split_lambda = 1;
    double min_step_fraction = 1.0 / 64;  // continuation floor relative to the horizon

    std::vector<double> lp_set{4, 6, kInf};
    double besov_p = 4, besov_q = 4;
    std::string out;                  // empty: no archive

    double residual_gate = 10;        // integral residual <= gate * tolerance
    double divergence_gate = 1e-10;
};

// Parses the versioned JSON ("clab_config": 1); unknown keys are refused.
ExperimentConfig parse_config(const std::string& json_text);
std::string config_json(const ExperimentConfig& c);

struct ExperimentResult {
    RunStatus status = RunStatus::completed;
    std::string message;
    Trajectory trajectory;
    DiagnosticsReport report;
    double integral_residual = 0;
    double max_divergence = 0;
    std::vector<std::vector<double>> increments;  // Picard history per solve
    std::vector<double> steps;                    // accepted continuation steps
    double taylor_green_error = -1;               // max relative error, taylor-green only
    double energy_ledger_residual = -1;           // mollified solver only
};

Field initial_data(const ExperimentConfig& c);
ExperimentResult run_experiment(const ExperimentConfig& c);

// Directory of u_NNNN.clf1 files plus manifest.json, each file written
// atomically. The manifest records times, config, residuals and Picard history.
void write_archive(const std::string& dir, const ExperimentConfig& c, const ExperimentResult& r);
std::string manifest_json(const ExperimentConfig& c, const ExperimentResult& r);
Trajectory load_archive(const std::string& dir);

} // namespace clab
