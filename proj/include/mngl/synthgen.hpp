#pragma once

#include "mngl/core.hpp"

#include <functional>
#include <string>

namespace mngl {

enum class EntrySign { Mixed, Negative };

struct GeneratorOptions {
    double within_density = 0.8;
    double cross_density = 0.05;
    double entry_lo = 0.2;
    double entry_hi = 0.6;
    EntrySign sign = EntrySign::Mixed;
    // Probability that a pair of blocks may carry cross entries at all. At
    // least one pair is always active when k >= 2, and every active pair gets
    // at least one entry. 1.0 fills every off-diagonal block.
    double block_link_prob = 0.4;
    double pd_margin = 0.1;
};

struct GroundTruth {
    std::vector<Mat> thetas;                   // p x p precisions
    std::vector<Mat> Hs;                       // p x k 0/1 indicators
    std::vector<std::vector<int>> boundaries;  // k + 1 cut points per component
    Vec phi;
    std::uint64_t seed = 0;

    int m() const { return static_cast<int>(thetas.size()); }
    int p() const { return static_cast<int>(thetas.front().rows()); }
    int k() const { return static_cast<int>(Hs.front().cols()); }
    std::vector<int> labels(int j) const;  // block label per variable
    Mat node_theta(int j) const;           // H_j^T theta_j H_j
};

GroundTruth generate_truth(int p, int k, int m, std::uint64_t seed, const GeneratorOptions& options = {});

struct Sample {
    Mat X;
    std::vector<int> labels;  // generating component per row
};

Sample sample(const GroundTruth& truth, int n, double sigma, std::uint64_t seed);

enum class ScenarioId { S1, S2, S3, S4 };

struct ScenarioSpec {
    ScenarioId id = ScenarioId::S1;
    int n = 2000;
    int p = 70;
    int k = 5;
    int m = 2;
    double sigma = 0.0;
    std::vector<double> sweep;  // values of the swept parameter
    int repeats = 10;
    std::uint64_t seed = 0;
    GeneratorOptions generator;

    void validate() const;
};

// Fixed values and default sweep for a scenario:
// S1 n in {200,...,2000}, S2 sigma in {2,...,5}, S3 p in {70,...,350},
// S4 k in {3,...,11}.
ScenarioSpec default_scenario(ScenarioId id);
ScenarioId parse_scenario(const std::string& s);
std::string scenario_name(ScenarioId id);
std::string swept_parameter(ScenarioId id);

struct InstanceSpec {
    int index = 0;  // position in the stream
    int sweep_index = 0;
    int repeat = 0;
    double swept_value = 0.0;
    int n = 0, p = 0, k = 0, m = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct Instance {
    InstanceSpec spec;
    GroundTruth truth;
    Sample data;
};

// repeats x |sweep| instance descriptors, sweep-major, with derived seeds.
std::vector<InstanceSpec> scenario_instances(const ScenarioSpec& spec);
Instance make_instance(const InstanceSpec& inst, const GeneratorOptions& options = {});
void for_each_instance(const ScenarioSpec& spec, const std::function<void(const Instance&)>& fn);

}  // namespace mngl
