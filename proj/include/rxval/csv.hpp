#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rxval/dataset.hpp"

namespace rxval {

// Shortest round-trip decimal form (std::to_chars); "nan"/"inf" spelled out.
std::string format_double(double value);

double parse_double(std::string_view text, const std::string& context);
long long parse_int(std::string_view text, const std::string& context);
unsigned long long parse_uint(std::string_view text, const std::string& context);

// Naive comma split; fields in these formats never contain quotes or commas.
std::vector<std::string> split_csv_line(const std::string& line);

// Dataset CSV: header sample_id,label,f0,f1,...; labels parsed as integers.
LabeledDataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset);

// Predictions CSV: header sample_id,label,score.
struct PredictionFile {
    std::vector<std::string> sample_ids;
    std::vector<int> labels;
    std::vector<double> scores;
};
PredictionFile read_predictions_csv(std::istream& in);
void write_predictions_csv(std::ostream& out, const PredictionFile& predictions);

}  // namespace rxval
