#include "mngl/bench.hpp"

#include "mngl/baselines.hpp"
#include "mngl/io.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace mngl {

namespace {

using nlohmann::json;

Mat one_hot(const std::vector<int>& labels, int m) {
    Mat r = Mat::Zero(static_cast<Eigen::Index>(labels.size()), m);
    for (std::size_t i = 0; i < labels.size(); ++i) r(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    return r;
}

MethodFit from_pipeline(const PipelineResult& pr, const DataMatrix& X, int m, bool has_likelihood) {
    MethodFit f;
    f.estimate = estimate_from_pipeline(pr);
    f.responsibilities = one_hot(pr.assignment, m);
    const Vec phi = f.responsibilities.colwise().mean().transpose();
    for (int j = 0; j < m; ++j)
        f.state.components.push_back(Component{phi(j), f.estimate.H[static_cast<std::size_t>(j)],
                                               f.estimate.theta[static_cast<std::size_t>(j)]});
    f.converged = true;
    for (const auto& s : pr.cgl) {
        f.converged = f.converged && s.converged;
        f.iterations = std::max(f.iterations, s.iterations);
    }
    for (const auto& s : pr.onmtf) {
        f.converged = f.converged && s.converged;
        f.iterations = std::max(f.iterations, s.iterations);
    }
    if (has_likelihood) {
        f.nll = mixture_nll(X.values(), f.state);
        f.nll_trace.push_back(*f.nll);
    }
    return f;
}

MethodFit single_state(const Mat& H, const Mat& theta, const DataMatrix& X, bool has_likelihood) {
    MethodFit f;
    f.state.components.push_back(Component{1.0, H, theta});
    f.estimate.H.push_back(H);
    f.estimate.theta.push_back(theta);
    f.responsibilities = Mat::Ones(X.n(), 1);
    if (has_likelihood) {
        f.nll = mixture_nll(X.values(), f.state);
        f.nll_trace.push_back(*f.nll);
    }
    return f;
}

std::optional<double> opt_double(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

double metric_value(const Metrics& m, const std::string& name) {
    if (name == "accuracy") return m.accuracy;
    if (name == "f1") return m.f1;
    if (name == "nmi") return m.nmi;
    if (name == "purity") return m.purity;
    if (name == "state_nmi") return m.state_nmi.value_or(std::nan(""));
    throw ValueError("unknown metric " + name);
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Method parse_method(const std::string& s) {
    if (s == "mngl") return Method::Mngl;
    if (s == "mngl-frozen") return Method::MnglFrozen;
    if (s == "cgl") return Method::Cgl;
    if (s == "onmtf") return Method::Onmtf;
    if (s == "kmeans-cgl") return Method::KmeansCgl;
    if (s == "kmeans-onmtf") return Method::KmeansOnmtf;
    throw ConfigError("unknown method '" + s + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Mngl: return "mngl";
        case Method::MnglFrozen: return "mngl-frozen";
        case Method::Cgl: return "cgl";
        case Method::Onmtf: return "onmtf";
        case Method::KmeansCgl: return "kmeans-cgl";
        case Method::KmeansOnmtf: return "kmeans-onmtf";
    }
    return "?";
}

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_method(item));
    if (out.empty()) throw ConfigError("no methods given");
    return out;
}

MethodFit fit_method(Method method, const DataMatrix& X, const MnglConfig& config) {
    config.validate();
    const auto& st = config.settings;
    switch (method) {
        case Method::Mngl:
        case Method::MnglFrozen: {
            MnglConfig c = config;
            c.update_h = method == Method::Mngl;
            MnglResult r = mngl_fit(X, c);
            MethodFit f;
            f.estimate = estimate_from_state(r.state, r.responsibilities);
            f.state = r.state;
            f.responsibilities = std::move(r.responsibilities);
            f.nll_trace = std::move(r.nll_trace);
            f.nll = r.state.nll;
            f.iterations = r.state.iterations;
            f.converged = r.state.converged;
            return f;
        }
        case Method::Cgl: {
            const CglSolution s = standalone_cgl(empirical_covariance(X.values()), config.k, st);
            MethodFit f = single_state(s.H, s.theta, X, true);
            f.iterations = s.iterations;
            f.converged = s.converged;
            return f;
        }
        case Method::Onmtf: {
            const OnmtfSolution s = standalone_onmtf(empirical_covariance(X.values()), config.k, st);
            MethodFit f = single_state(s.H, s.S_mid, X, false);
            f.iterations = s.iterations;
            f.converged = s.converged;
            return f;
        }
        case Method::KmeansCgl: return from_pipeline(pipeline_cgl(X, config.m, config.k, st), X, config.m, true);
        case Method::KmeansOnmtf: return from_pipeline(pipeline_onmtf(X, config.m, config.k, st), X, config.m, false);
    }
    throw ConfigError("unknown method");
}

ResultRecord run_method(Method method, const Instance& inst, const BenchConfig& config) {
    ResultRecord rec;
    rec.method = method_name(method);
    rec.scenario = scenario_name(config.scenario.id);
    rec.swept_parameter = swept_parameter(config.scenario.id);
    rec.swept_value = inst.spec.swept_value;
    rec.instance = inst.spec.index;
    rec.repeat = inst.spec.repeat;
    rec.seed = inst.spec.seed;

    MnglConfig mc = config.mngl;
    mc.m = inst.spec.m;
    mc.k = inst.spec.k;
    mc.settings.seed = derive_seed(inst.spec.seed, 3);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const DataMatrix X(inst.data.X);
        MethodFit fit = fit_method(method, X, mc);
        Estimate est = fit.estimate;
        if (est.H.size() == 1 && inst.truth.m() > 1) {
            est.H.assign(static_cast<std::size_t>(inst.truth.m()), est.H.front());
            est.theta.assign(static_cast<std::size_t>(inst.truth.m()), est.theta.front());
            est.assignment.assign(inst.data.labels.size(), 0);
        }
        const RunScore sc = score_run(est, inst.truth, inst.data.labels, mc.settings.edge_threshold);
        Metrics m;
        m.accuracy = sc.accuracy;
        m.f1 = sc.f1;
        m.nmi = sc.nmi;
        m.purity = sc.purity;
        if (!std::isnan(sc.state_nmi)) m.state_nmi = sc.state_nmi;
        rec.metrics = m;
        rec.nll = fit.nll;
        rec.iterations = fit.iterations;
        rec.converged = fit.converged;
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.converged = false;
    }
    rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::vector<ResultRecord> run_scenario(const BenchConfig& config, const std::function<void(const ResultRecord&)>& on_record) {
    config.mngl.settings.validate();
    if (config.methods.empty()) throw ConfigError("no methods given");
    const auto instances = scenario_instances(config.scenario);
    std::vector<std::vector<ResultRecord>> slots(instances.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink;
    std::exception_ptr failure;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next++;
            if (i >= instances.size()) return;
            try {
                const Instance inst = make_instance(instances[i], config.scenario.generator);
                for (Method m : config.methods) {
                    slots[i].push_back(run_method(m, inst, config));
                    if (on_record) {
                        std::lock_guard<std::mutex> lock(sink);
                        on_record(slots[i].back());
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(sink);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    int n_workers = config.workers > 0 ? config.workers : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::max(1, std::min<int>(n_workers, static_cast<int>(instances.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<ResultRecord> out;
    for (auto& s : slots)
        for (auto& r : s) out.push_back(std::move(r));
    return out;
}

json record_to_json(const ResultRecord& r, bool include_timing) {
    json j;
    j["method"] = r.method;
    j["scenario"] = r.scenario;
    j["swept_parameter"] = r.swept_parameter;
    j["swept_value"] = r.swept_value;
    j["instance"] = r.instance;
    j["repeat"] = r.repeat;
    j["seed"] = r.seed;
    if (r.metrics) {
        json m;
        m["accuracy"] = r.metrics->accuracy;
        m["f1"] = r.metrics->f1;
        m["nmi"] = r.metrics->nmi;
        m["purity"] = r.metrics->purity;
        m["state_nmi"] = r.metrics->state_nmi ? json(*r.metrics->state_nmi) : json(nullptr);
        j["metrics"] = m;
    } else {
        j["metrics"] = nullptr;
    }
    j["nll"] = r.nll ? json(*r.nll) : json(nullptr);
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    if (include_timing) j["wall_time_seconds"] = r.wall_time_seconds;
    return j;
}

ResultRecord record_from_json(const json& j) {
    try {
        ResultRecord r;
        r.method = j.at("method").get<std::string>();
        r.scenario = j.at("scenario").get<std::string>();
        r.swept_parameter = j.value("swept_parameter", "");
        r.swept_value = j.at("swept_value").get<double>();
        r.instance = j.at("instance").get<int>();
        r.repeat = j.at("repeat").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("metrics") && !j.at("metrics").is_null()) {
            const auto& m = j.at("metrics");
            Metrics x;
            x.accuracy = m.at("accuracy").get<double>();
            x.f1 = m.at("f1").get<double>();
            x.nmi = m.at("nmi").get<double>();
            x.purity = m.at("purity").get<double>();
            x.state_nmi = opt_double(m, "state_nmi");
            r.metrics = x;
        }
        r.nll = opt_double(j, "nll");
        r.iterations = j.value("iterations", 0);
        r.converged = j.value("converged", false);
        if (j.contains("error") && j.at("error").is_string()) r.error = j.at("error").get<std::string>();
        r.wall_time_seconds = j.value("wall_time_seconds", 0.0);
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("record: ") + e.what());
    }
}

void write_records(const std::string& path, const std::vector<ResultRecord>& records, bool include_timing) {
    std::ostringstream os;
    for (const auto& r : records) os << record_to_json(r, include_timing).dump() << '\n';
    write_text(path, os.str());
}

std::vector<ResultRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<ResultRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records, const std::vector<std::string>& metrics) {
    std::vector<std::string> scenarios, methods;
    std::vector<double> values;
    auto note = [](auto& v, const auto& x) {
        if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    };
    for (const auto& r : records) {
        note(scenarios, r.scenario);
        note(methods, r.method);
        note(values, r.swept_value);
    }
    std::vector<AggregateRow> out;
    for (const auto& sc : scenarios)
        for (const auto& metric : metrics)
            for (double v : values)
                for (const auto& meth : methods) {
                    std::vector<double> xs;
                    bool seen = false;
                    for (const auto& r : records) {
                        if (r.scenario != sc || r.method != meth || r.swept_value != v) continue;
                        seen = true;
                        if (!r.metrics) continue;
                        const double x = metric_value(*r.metrics, metric);
                        if (!std::isnan(x)) xs.push_back(x);
                    }
                    if (!seen) continue;
                    AggregateRow row{sc, metric, v, meth, std::nan(""), 0.0, static_cast<int>(xs.size())};
                    if (!xs.empty()) {
                        double s = 0.0;
                        for (double x : xs) s += x;
                        row.mean = s / static_cast<double>(xs.size());
                        if (xs.size() > 1) {
                            double ss = 0.0;
                            for (double x : xs) ss += (x - row.mean) * (x - row.mean);
                            row.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
                        }
                    }
                    out.push_back(row);
                }
    return out;
}

void write_aggregate(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ostringstream os;
    os << "scenario,metric,swept_value,method,mean,std,count\n";
    for (const auto& r : rows)
        os << r.scenario << ',' << r.metric << ',' << fmt(r.swept_value) << ',' << r.method << ',' << fmt(r.mean) << ','
           << fmt(r.std) << ',' << r.count << '\n';
    write_text(path, os.str());
}

std::vector<std::string> emit_plot_data(const std::vector<ResultRecord>& records, const std::string& dir) {
    if (records.empty()) throw ValueError("emit_plot_data: no records");
    std::filesystem::create_directories(dir);
    const auto rows = aggregate(records, kPlotMetrics);
    std::map<std::pair<std::string, std::string>, std::ostringstream> files;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.scenario, r.metric);
        if (!files.count(key)) {
            order.push_back(key);
            files[key] << "swept_value,method,mean,std\n";
        }
        files[key] << fmt(r.swept_value) << ',' << r.method << ',' << fmt(r.mean) << ',' << fmt(r.std) << '\n';
    }
    std::vector<std::string> paths;
    for (const auto& key : order) {
        const std::string path = (std::filesystem::path(dir) / ("plot_" + key.first + "_" + key.second + ".csv")).string();
        write_text(path, files[key].str());
        paths.push_back(path);
    }
    return paths;
}

void write_fit_artifacts(const std::string& dir, const MethodFit& fit, double edge_threshold, const json& summary) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
    const auto m = fit.state.components.size();
    Vec phi(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
        const auto& c = fit.state.components[j];
        phi(static_cast<Eigen::Index>(j)) = c.phi;
        std::vector<std::string> nodes;
        for (Eigen::Index a = 0; a < c.theta.cols(); ++a) nodes.push_back("node" + std::to_string(a));
        write_matrix(at("H_" + std::to_string(j) + ".csv"), c.H, nodes);
        write_matrix(at("theta_" + std::to_string(j) + ".csv"), c.theta, nodes);
        write_edges(at("edges_" + std::to_string(j) + ".csv"), c.theta, edge_threshold);
    }
    write_matrix(at("phi.csv"), phi, {"phi"});
    std::vector<std::string> rcols;
    for (std::size_t j = 0; j < m; ++j) rcols.push_back("r" + std::to_string(j));
    write_matrix(at("responsibilities.csv"), fit.responsibilities, rcols);
    if (!fit.nll_trace.empty())
        write_matrix(at("nll_trace.csv"),
                     Eigen::Map<const Vec>(fit.nll_trace.data(), static_cast<Eigen::Index>(fit.nll_trace.size())),
                     {"nll"});
    write_text(at("summary.json"), summary.dump(2) + "\n");
}

}  // namespace mngl
