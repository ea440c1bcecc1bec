#include "mngl/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mngl {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '"' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '"' || s[b - 1] == '\r')) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (*b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

char delimiter_for(const std::string& path, TextFormat format) {
    if (format == TextFormat::Csv) return ',';
    if (format == TextFormat::Tsv) return '\t';
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    return (ext == "tsv" || ext == "tab") ? '\t' : ',';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    return os;
}

}  // namespace

MatrixFile read_matrix(const std::string& path, TextFormat format, bool transpose) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    const char delim = delimiter_for(path, format);
    MatrixFile mf;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0, width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(line, delim);
        if (rows.empty() && mf.header.empty()) {
            bool numeric = true;
            double tmp;
            for (const auto& c : cells) numeric = numeric && parse_double(c, tmp);
            if (!numeric) {
                mf.header = cells;
                width = cells.size();
                continue;
            }
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (!parse_double(cells[c], row[c]))
                throw ParseError(path + ":" + std::to_string(lineno) + ":" + std::to_string(c + 1) +
                                 ": non-numeric cell '" + cells[c] + "'");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no numeric rows");
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    if (!m.allFinite()) throw ParseError(path + ": non-finite value");
    mf.values = transpose ? Mat(m.transpose()) : m;
    return mf;
}

DataMatrix ingest_matrix(const std::string& path, TextFormat format, bool transpose) {
    return DataMatrix(read_matrix(path, format, transpose).values);
}

void write_matrix(const std::string& path, const Mat& values, const std::vector<std::string>& header, char delimiter) {
    auto os = open_out(path);
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) os << (c ? std::string(1, delimiter) : "") << header[c];
        os << '\n';
    }
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) os << (c ? std::string(1, delimiter) : "") << fmt(values(r, c));
        os << '\n';
    }
}

void write_labels(const std::string& path, const std::vector<int>& labels, const std::string& name) {
    auto os = open_out(path);
    os << name << '\n';
    for (int l : labels) os << l << '\n';
}

std::vector<int> read_labels(const std::string& path) {
    const Mat v = read_matrix(path, TextFormat::Csv).values;
    if (v.cols() != 1) throw ParseError(path + ": expected a single label column");
    std::vector<int> out(static_cast<std::size_t>(v.rows()));
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = static_cast<int>(v(i, 0));
        if (out[static_cast<std::size_t>(i)] != v(i, 0) || v(i, 0) < 0)
            throw ParseError(path + ":" + std::to_string(i + 2) + ": label must be a non-negative integer");
    }
    return out;
}

void write_edges(const std::string& path, const Mat& theta, double threshold) {
    auto os = open_out(path);
    os << "i,j,value\n";
    for (const auto& [a, b] : edge_set(theta, threshold)) os << a << ',' << b << ',' << fmt(theta(a, b)) << '\n';
}

EdgeSet read_edges(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    EdgeSet out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        double a, b;
        if (cells.size() != 3 || !parse_double(cells[0], a) || !parse_double(cells[1], b))
            throw ParseError(path + ":" + std::to_string(lineno) + ": malformed edge row");
        out.emplace(static_cast<int>(a), static_cast<int>(b));
    }
    return out;
}

nlohmann::json truth_to_json(const GroundTruth& t) {
    using nlohmann::json;
    json j;
    j["seed"] = t.seed;
    j["p"] = t.p();
    j["k"] = t.k();
    j["phi"] = std::vector<double>(t.phi.data(), t.phi.data() + t.phi.size());
    j["boundaries"] = t.boundaries;
    json thetas = json::array();
    for (const auto& T : t.thetas) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < T.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(T.cols()));
            for (Eigen::Index c = 0; c < T.cols(); ++c) row[static_cast<std::size_t>(c)] = T(r, c);
            rows.push_back(row);
        }
        thetas.push_back(rows);
    }
    j["thetas"] = thetas;
    return j;
}

GroundTruth truth_from_json(const nlohmann::json& j) {
    try {
        GroundTruth t;
        t.seed = j.at("seed").get<std::uint64_t>();
        const auto phi = j.at("phi").get<std::vector<double>>();
        t.phi = Eigen::Map<const Vec>(phi.data(), static_cast<Eigen::Index>(phi.size()));
        t.boundaries = j.at("boundaries").get<std::vector<std::vector<int>>>();
        const int p = j.at("p").get<int>(), k = j.at("k").get<int>();
        for (const auto& rows : j.at("thetas")) {
            Mat T(p, p);
            for (int r = 0; r < p; ++r)
                for (int c = 0; c < p; ++c) T(r, c) = rows.at(r).at(c).get<double>();
            t.thetas.push_back(T);
        }
        if (t.thetas.size() != t.boundaries.size() || t.thetas.size() != phi.size())
            throw ParseError("truth: component counts disagree");
        for (std::size_t c = 0; c < t.boundaries.size(); ++c) {
            const auto& b = t.boundaries[c];
            if (static_cast<int>(b.size()) != k + 1 || b.front() != 0 || b.back() != p)
                throw ParseError("truth: malformed block boundaries");
            Mat H = Mat::Zero(p, k);
            for (int blk = 0; blk < k; ++blk)
                for (int v = b[blk]; v < b[blk + 1]; ++v) H(v, blk) = 1.0;
            t.Hs.push_back(H);
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("truth: ") + e.what());
    }
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    auto os = open_out(path);
    os << text;
}

}  // namespace mngl
