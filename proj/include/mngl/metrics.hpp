#pragma once

#include "mngl/baselines.hpp"
#include "mngl/core.hpp"
#include "mngl/glasso.hpp"
#include "mngl/synthgen.hpp"

namespace mngl {

struct EdgeScore {
    int n_d = 0;  // true edges detected
    int n_g = 0;  // ground-truth edges
    int n_a = 0;  // detected edges
    double accuracy = 0.0;
    double f1 = 0.0;
};

struct ClusterScore {
    double nmi = 0.0;
    double purity = 0.0;
};

// accuracy = n_d / n_g, f1 = 2 n_d^2 / (n_a n_d + n_g n_d) (0 when n_d = 0).
// Throws ValueError when the truth is empty.
EdgeScore edge_score(const EdgeSet& detected, const EdgeSet& truth);

double purity(const std::vector<int>& pred, const std::vector<int>& truth);

// I(pred; truth) / sqrt(H(pred) H(truth)), natural logs, 0 if either side
// has a single cluster.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Maximum-weight perfect matching on a square matrix (Hungarian method).
// Returns col[i] assigned to row i.
std::vector<int> max_assignment(const Mat& weight);

// Maps estimated node labels onto true node labels by maximum overlap.
std::vector<int> match_nodes(const std::vector<int>& pred, const std::vector<int>& truth, int k);

// A fitted model reduced to what scoring needs.
struct Estimate {
    std::vector<Mat> H;
    std::vector<Mat> theta;        // precision, or S_mid for ONMtF
    std::vector<int> assignment;   // state label per observation, may be empty
};

Estimate estimate_from_state(const MixtureState& state, const Mat& responsibilities);
Estimate estimate_from_pipeline(const PipelineResult& result);

struct ComponentScore {
    int truth_index = 0;
    EdgeScore edges;
    ClusterScore cluster;
};

// Node labels from row argmax (ties low, all-zero rows to 0), nodes matched
// to true blocks, edges compared at node level.
ComponentScore score_component(const Mat& H, const Mat& theta, const GroundTruth& truth, int j, double edge_threshold);

// Permutation pi (estimated j -> truth pi[j]) maximizing summed edge F1, ties
// broken by summed NMI then lexicographically smallest pi.
std::vector<int> align_components(const Estimate& est, const GroundTruth& truth, double edge_threshold);

struct RunScore {
    std::vector<int> permutation;
    std::vector<ComponentScore> components;
    double accuracy = 0.0;
    double f1 = 0.0;
    double nmi = 0.0;
    double purity = 0.0;
    double state_nmi = 0.0;  // NaN when no assignment is available
};

RunScore score_run(const Estimate& est, const GroundTruth& truth, const std::vector<int>& labels, double edge_threshold);

}  // namespace mngl
