#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "snoc/energy.hpp"
#include "snoc/selector.hpp"
#include "snoc/sim.hpp"
#include "snoc/traffic.hpp"

namespace snoc {

struct ExperimentVariant {
    int snakes = 1;
    int stride = 1;
    std::string name() const {
        return "K" + std::to_string(snakes) + "S" + std::to_string(stride);
    }
};

// The standard fourteen (K, S) design points.
std::vector<ExperimentVariant> standard_variants();

struct ExperimentPlan {
    std::vector<ExperimentVariant> variants; // empty: standard set
    std::vector<PatternSpec> patterns;       // empty: the five shipped synthetic patterns
    bool include_baseline = true;
    int workers = 1;
    unsigned long long seed = 1;

    void validate(const MeshSpec& mesh, const SelectionConstraints& constraints) const;
};

std::vector<PatternSpec> standard_patterns(double injection_rate, long long duration,
                                           unsigned long long seed);

struct ExperimentCell {
    std::string pattern;
    int snakes = 0; // 0 marks the baseline mesh
    int stride = 0;
    bool ok = false;
    std::string error;

    double mean_latency = 0.0;
    double p95_latency = 0.0;
    double latency_vs_baseline = 0.0; // mean / baseline mean
    EnergyReport energy;
    StaticPowerSummary photonic_static;
    long long packets = 0;
};

struct ExperimentInputs {
    MeshSpec mesh;
    PhotonicTechParams tech;
    ElectricalCoefficients coef;
    SelectionConstraints constraints;
    CostModel cost;
    SimConfig sim;
    double dse_injection_rate = 0.1;
};

// Runs every (variant x pattern) cell plus baseline rows; cell failures are
// recorded and do not abort the sweep. Results are ordered by plan order
// regardless of worker scheduling.
std::vector<ExperimentCell> run_experiment(const ExperimentPlan& plan,
                                           const ExperimentInputs& inputs);

void write_experiment_csv(std::ostream& os, const std::vector<ExperimentCell>& cells);

// Manifest with the resolved inputs so outputs can be regenerated.
nlohmann::json experiment_manifest(const ExperimentPlan& plan, const ExperimentInputs& inputs,
                                   const KeyValueConfig& resolved_config);

} // namespace snoc
