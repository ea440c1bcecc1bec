#pragma once

#include "mngl/core.hpp"
#include "mngl/glasso.hpp"
#include "mngl/synthgen.hpp"

#include <json.hpp>

#include <string>

namespace mngl {

enum class TextFormat { Auto, Csv, Tsv };

struct MatrixFile {
    Mat values;
    std::vector<std::string> header;  // empty when the file had none
};

// Rectangular numeric table. A first row with any non-numeric cell is taken
// as a header. Ragged rows and non-numeric cells raise ParseError with the
// 1-based line (and column) number. Auto picks TSV for .tsv/.tab files.
MatrixFile read_matrix(const std::string& path, TextFormat format = TextFormat::Auto, bool transpose = false);

DataMatrix ingest_matrix(const std::string& path, TextFormat format = TextFormat::Auto, bool transpose = false);

// Values written with 17 significant digits so they read back exactly.
void write_matrix(const std::string& path, const Mat& values, const std::vector<std::string>& header = {},
                  char delimiter = ',');

void write_labels(const std::string& path, const std::vector<int>& labels, const std::string& name = "label");
std::vector<int> read_labels(const std::string& path);

// i,j,value rows for the edges of theta above threshold.
void write_edges(const std::string& path, const Mat& theta, double threshold);
EdgeSet read_edges(const std::string& path);

nlohmann::json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace mngl
