#include "rxval/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace rxval {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Config,
                    context + ": cannot parse '" + std::string(text) + "' as a number");
    }
    return value;
}

long long parse_int(std::string_view text, const std::string& context) {
    long long value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Config,
                    context + ": cannot parse '" + std::string(text) + "' as an integer");
    }
    return value;
}

unsigned long long parse_uint(std::string_view text, const std::string& context) {
    unsigned long long value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Config,
                    context + ": cannot parse '" + std::string(text) + "' as an unsigned integer");
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
        fields.back().pop_back();
    }
    return fields;
}

LabeledDataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::Config, "dataset CSV is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "sample_id" || header[1] != "label") {
        throw Error(ErrorKind::Config, "dataset CSV header must start with sample_id,label");
    }
    const std::size_t d = header.size() - 2;

    LabeledDataset dataset;
    dataset.features.cols = d;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string context = "dataset CSV line " + std::to_string(line_no);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::ShapeMismatch,
                        context + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        dataset.sample_ids.push_back(fields[0]);
        long long label = 0;
        try {
            label = parse_int(fields[1], context);
        } catch (const Error&) {
            throw Error(ErrorKind::NonBinaryLabel,
                        context + ": label '" + fields[1] + "' is not an integer");
        }
        dataset.labels.push_back(static_cast<int>(label));
        for (std::size_t c = 0; c < d; ++c) {
            dataset.features.values.push_back(parse_double(fields[2 + c], context));
        }
        ++dataset.features.rows;
    }
    return dataset;
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset) {
    out << "sample_id,label";
    for (std::size_t c = 0; c < dataset.features.cols; ++c) {
        out << ",f" << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        out << (dataset.sample_ids.empty() ? "s" + std::to_string(r) : dataset.sample_ids[r]);
        out << ',' << dataset.labels[r];
        for (std::size_t c = 0; c < dataset.features.cols; ++c) {
            out << ',' << format_double(dataset.features.at(r, c));
        }
        out << '\n';
    }
}

PredictionFile read_predictions_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::Config, "predictions CSV is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "sample_id" || header[1] != "label" ||
        header[2] != "score") {
        throw Error(ErrorKind::Config, "predictions CSV header must be sample_id,label,score");
    }
    PredictionFile file;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const std::string context = "predictions CSV line " + std::to_string(line_no);
        if (fields.size() != 3) {
            throw Error(ErrorKind::ShapeMismatch, context + ": expected 3 fields");
        }
        file.sample_ids.push_back(fields[0]);
        file.labels.push_back(static_cast<int>(parse_int(fields[1], context)));
        file.scores.push_back(parse_double(fields[2], context));
    }
    return file;
}

void write_predictions_csv(std::ostream& out, const PredictionFile& predictions) {
    out << "sample_id,label,score\n";
    for (std::size_t i = 0; i < predictions.scores.size(); ++i) {
        out << predictions.sample_ids[i] << ',' << predictions.labels[i] << ','
            << format_double(predictions.scores[i]) << '\n';
    }
}

}  // namespace rxval
