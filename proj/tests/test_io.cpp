#include "helpers.hpp"

#include "mngl/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace mngl;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("mngl_io_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& body = "") const {
        const auto p = (path / name).string();
        if (!body.empty()) std::ofstream(p) << body;
        return p;
    }
};

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("three-line CSV") {
    TempDir d("csv");
    const auto mf = read_matrix(d.file("a.csv", "1,2\n3,4\n5,6\n"));
    REQUIRE(mf.values.rows() == 3);
    REQUIRE(mf.values.cols() == 2);
    CHECK(mf.values(2, 1) == 6.0);
    CHECK(mf.header.empty());
}

TEST_CASE("transpose flag") {
    TempDir d("tr");
    const auto m = read_matrix(d.file("a.csv", "1,2\n3,4\n5,6\n"), TextFormat::Csv, true).values;
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 3);
    CHECK(m(1, 2) == 6.0);
}

TEST_CASE("header row is detected and skipped") {
    TempDir d("hdr");
    const auto mf = read_matrix(d.file("a.csv", "a,b\n1,2\n3,4\n"));
    CHECK(mf.values.rows() == 2);
    CHECK(mf.header == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tab separated files") {
    TempDir d("tsv");
    const auto m = read_matrix(d.file("a.tsv", "1\t2\t3\n4\t5\t6\n")).values;
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(read_matrix(d.file("b.txt", "1\t2\n"), TextFormat::Tsv).values.cols() == 2);
}

TEST_CASE("ragged rows report the line") {
    TempDir d("rag");
    const auto path = d.file("a.csv", "x,y\n1,2\n3\n");
    const auto msg = error_of([&] { read_matrix(path); });
    CHECK(msg.find(":3:") != std::string::npos);
}

TEST_CASE("non-numeric cells report line and column") {
    TempDir d("nan");
    const auto path = d.file("a.csv", "1,2,3\n4,oops,6\n");
    const auto msg = error_of([&] { read_matrix(path); });
    CHECK(msg.find(":2:2") != std::string::npos);
    CHECK(msg.find("oops") != std::string::npos);
}

TEST_CASE("missing and empty files are parse errors") {
    TempDir d("miss");
    CHECK_THROWS_AS(read_matrix((d.path / "none.csv").string()), ParseError);
    CHECK_THROWS_AS(read_matrix(d.file("e.csv", "a,b\n")), ParseError);
}

TEST_CASE("ingest validates the data matrix") {
    TempDir d("ing");
    CHECK(ingest_matrix(d.file("a.csv", "1,2\n3,4\n")).n() == 2);
    CHECK_THROWS_AS(ingest_matrix(d.file("b.csv", "1\n2\n")), ShapeError);
}

TEST_CASE("matrices round trip exactly") {
    TempDir d("rt");
    std::mt19937_64 rng(71);
    const Mat a = gaussian(13, 7, rng) * 1e3;
    const auto path = d.file("m.csv");
    write_matrix(path, a, {"c0", "c1", "c2", "c3", "c4", "c5", "c6"});
    const auto mf = read_matrix(path);
    CHECK(mf.values == a);
    CHECK(mf.header.size() == 7);
    write_matrix(d.file("m.tsv"), a, {}, '\t');
    CHECK(read_matrix(d.file("m.tsv")).values == a);
}

TEST_CASE("labels round trip") {
    TempDir d("lab");
    const std::vector<int> labels{0, 1, 1, 0, 2};
    write_labels(d.file("l.csv"), labels, "state");
    CHECK(read_labels(d.file("l.csv")) == labels);
    CHECK_THROWS_AS(read_labels(d.file("bad.csv", "state\n0.5\n")), ParseError);
}

TEST_CASE("edge lists round trip") {
    TempDir d("edge");
    Mat T = Mat::Identity(4, 4);
    T(0, 2) = T(2, 0) = 0.3;
    T(1, 3) = T(3, 1) = -0.2;
    T(0, 1) = T(1, 0) = 1e-6;
    write_edges(d.file("e.csv"), T, 1e-4);
    CHECK(read_edges(d.file("e.csv")) == edge_set(T, 1e-4));
}

TEST_CASE("ground truth round trips through JSON") {
    const auto t = generate_truth(14, 3, 2, 72);
    const auto back = truth_from_json(nlohmann::json::parse(truth_to_json(t).dump()));
    REQUIRE(back.m() == 2);
    CHECK(back.seed == t.seed);
    CHECK(back.boundaries == t.boundaries);
    for (int j = 0; j < 2; ++j) {
        CHECK(back.thetas[static_cast<std::size_t>(j)] == t.thetas[static_cast<std::size_t>(j)]);
        CHECK(back.Hs[static_cast<std::size_t>(j)] == t.Hs[static_cast<std::size_t>(j)]);
    }
    CHECK(back.phi == t.phi);
}

TEST_CASE("malformed truth is a parse error") {
    CHECK_THROWS_AS(truth_from_json(nlohmann::json::parse(R"({"seed": 1})")), ParseError);
    TempDir d("js");
    CHECK_THROWS_AS(read_json_file(d.file("x.json", "{not json")), ParseError);
}

}  // TEST_SUITE
