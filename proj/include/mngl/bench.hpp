#pragma once

#include "mngl/metrics.hpp"
#include "mngl/mngl.hpp"
#include "mngl/synthgen.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>

namespace mngl {

// mngl-frozen is the EM variant with every H_j held at its initial value.
enum class Method { Mngl, MnglFrozen, Cgl, Onmtf, KmeansCgl, KmeansOnmtf };

Method parse_method(const std::string& s);
std::string method_name(Method m);
std::vector<Method> parse_methods(const std::string& list);  // comma separated

struct BenchConfig {
    ScenarioSpec scenario = default_scenario(ScenarioId::S1);
    std::vector<Method> methods{Method::Mngl, Method::KmeansCgl, Method::KmeansOnmtf};
    MnglConfig mngl;  // m and k are taken from each instance
    int workers = 0;  // 0: hardware concurrency
};

struct Metrics {
    double accuracy = 0.0;
    double f1 = 0.0;
    double nmi = 0.0;
    double purity = 0.0;
    std::optional<double> state_nmi;
};

struct ResultRecord {
    std::string method;
    std::string scenario;
    std::string swept_parameter;
    double swept_value = 0.0;
    int instance = 0;
    int repeat = 0;
    std::uint64_t seed = 0;
    std::optional<Metrics> metrics;  // absent when the fit failed
    std::optional<double> nll;       // absent for methods without a likelihood
    int iterations = 0;
    bool converged = false;
    std::string error;
    double wall_time_seconds = 0.0;
};

// A fit of any method expressed as mixture components. For single-state
// methods the one estimate stands for every true state when scoring.
struct MethodFit {
    Estimate estimate;
    MixtureState state;         // phi, H and theta (S_mid for ONMtF) per component
    Mat responsibilities;       // n x m; one-hot for pipelines
    std::vector<double> nll_trace;
    std::optional<double> nll;
    int iterations = 0;
    bool converged = false;
};

MethodFit fit_method(Method method, const DataMatrix& X, const MnglConfig& config);

ResultRecord run_method(Method method, const Instance& inst, const BenchConfig& config);

// Every instance x method, scheduled on a bounded worker pool; records are
// ordered by (instance index, method order).
std::vector<ResultRecord> run_scenario(const BenchConfig& config,
                                       const std::function<void(const ResultRecord&)>& on_record = {});

nlohmann::json record_to_json(const ResultRecord& r, bool include_timing = true);
ResultRecord record_from_json(const nlohmann::json& j);
void write_records(const std::string& path, const std::vector<ResultRecord>& records, bool include_timing = true);
std::vector<ResultRecord> read_records(const std::string& path);

struct AggregateRow {
    std::string scenario;
    std::string metric;
    double swept_value = 0.0;
    std::string method;
    double mean = 0.0;  // NaN when no run succeeded
    double std = 0.0;   // sample standard deviation, 0 for a single run
    int count = 0;
};

inline const std::vector<std::string> kPlotMetrics{"accuracy", "f1", "nmi", "purity"};

// Rows grouped by (scenario, metric, swept value, method) in first-seen order
// of swept values and methods.
std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records,
                                    const std::vector<std::string>& metrics = kPlotMetrics);
void write_aggregate(const std::string& path, const std::vector<AggregateRow>& rows);

// One CSV per (scenario, metric): swept_value,method,mean,std. Returns paths.
std::vector<std::string> emit_plot_data(const std::vector<ResultRecord>& records, const std::string& dir);

// Writes per-component H, theta and edge lists plus phi, responsibilities,
// nll trace and a summary for a fitted model.
void write_fit_artifacts(const std::string& dir, const MethodFit& fit, double edge_threshold,
                         const nlohmann::json& summary);

}  // namespace mngl
