#pragma once

// CSV emission and ingestion. Every file starts with a `# qrsim-csv v1 <kind>`
// version line followed by a header row; readers reject files whose version
// line does not match. Numeric fields are written with 17 significant digits
// so a file identifies a run bit-for-bit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qrsim/errors.hpp"
#include "qrsim/tasks.hpp"

namespace qrsim {

inline constexpr const char* kTraceCsvVersion = "# qrsim-csv v1 trace";
inline constexpr const char* kMetricsCsvVersion = "# qrsim-csv v1 metrics";
inline constexpr const char* kPredictionsCsvVersion = "# qrsim-csv v1 predictions";
inline constexpr const char* kWeightsCsvVersion = "# qrsim-csv v1 weights";
inline constexpr const char* kPlotCsvVersion = "# qrsim-csv v1 plot";

inline std::string csv_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// One `k,l,m,t_seconds,signal` row per sample; indices are 1-based and
/// t = m * tau within each injection block.
inline void write_trace_csv(std::ostream& out, const std::vector<ReservoirTrace>& traces)
{
    out << kTraceCsvVersion << "\n";
    out << "k,l,m,t_seconds,signal\n";
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const ReservoirTrace& t = traces[k];
        for (Eigen::Index l = 0; l < t.signals.rows(); ++l)
            for (Eigen::Index m = 0; m < t.signals.cols(); ++m)
                out << (k + 1) << ',' << (l + 1) << ',' << (m + 1) << ','
                    << csv_double(static_cast<double>(m + 1) *
                                  t.params.sample_interval_seconds)
                    << ',' << csv_double(t.signals(l, m)) << "\n";
    }
}

struct MetricsRow {
    std::string task;
    int m_used = 0;
    double mse = 0.0;
    std::optional<long> digitized_errors;
};

inline void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows)
{
    out << kMetricsCsvVersion << "\n";
    out << "task,M,mse,digitized_errors\n";
    for (const MetricsRow& r : rows) {
        out << r.task << ',' << r.m_used << ',' << csv_double(r.mse) << ',';
        if (r.digitized_errors)
            out << *r.digitized_errors;
        else
            out << "n/a";
        out << "\n";
    }
}

inline void write_predictions_csv(std::ostream& out,
                                  const std::vector<BenchmarkReport>& reports)
{
    out << kPredictionsCsvVersion << "\n";
    out << "task,M,instance,input,target,prediction\n";
    for (const BenchmarkReport& report : reports) {
        for (std::size_t i = 0; i < report.per_instance.size(); ++i) {
            const BenchmarkInstance& inst = report.per_instance[i];
            out << report.task.name() << ',' << report.m_used << ',' << (i + 1) << ','
                << inst.input << ',' << csv_double(inst.target) << ','
                << csv_double(inst.prediction) << "\n";
        }
    }
}

/// Trained readout weights in flattened feature order; reports without a
/// single trained model (leave-one-out runs) contribute no rows.
inline void write_weights_csv(std::ostream& out, const std::vector<BenchmarkReport>& reports)
{
    out << kWeightsCsvVersion << "\n";
    out << "task,M,feature,weight\n";
    for (const BenchmarkReport& report : reports) {
        if (!report.weights)
            continue;
        for (Eigen::Index i = 0; i < report.weights->size(); ++i)
            out << report.task.name() << ',' << report.m_used << ',' << (i + 1) << ','
                << csv_double((*report.weights)(i)) << "\n";
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    return fields;
}

}  // namespace detail

/// Reads a metrics CSV, checking the version line. Missing file -> IoError;
/// malformed content or wrong version -> ConfigError.
inline std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open metrics file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kMetricsCsvVersion)
        throw ConfigError(path.string() + ": unknown or missing version line");
    if (!std::getline(in, line) || line != "task,M,mse,digitized_errors")
        throw ConfigError(path.string() + ": unexpected metrics header");

    std::vector<MetricsRow> rows;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 4)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 4 fields");
        MetricsRow row;
        try {
            row.task = fields[0];
            row.m_used = std::stoi(fields[1]);
            row.mse = std::stod(fields[2]);
            if (fields[3] != "n/a")
                row.digitized_errors = std::stol(fields[3]);
        } catch (const std::logic_error&) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": malformed numeric field");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct PredictionRow {
    std::string task;
    int m_used = 0;
    long instance = 0;
    std::string input;
    double target = 0.0;
    double prediction = 0.0;
};

inline std::vector<PredictionRow> read_predictions_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open predictions file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kPredictionsCsvVersion)
        throw ConfigError(path.string() + ": unknown or missing version line");
    if (!std::getline(in, line) || line != "task,M,instance,input,target,prediction")
        throw ConfigError(path.string() + ": unexpected predictions header");

    std::vector<PredictionRow> rows;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 6)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 6 fields");
        PredictionRow row;
        try {
            row.task = fields[0];
            row.m_used = std::stoi(fields[1]);
            row.instance = std::stol(fields[2]);
            row.input = fields[3];
            row.target = std::stod(fields[4]);
            row.prediction = std::stod(fields[5]);
        } catch (const std::logic_error&) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": malformed numeric field");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Sniffs the version line of a CSV so `report` can accept mixed file lists.
inline std::string csv_kind(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open file: " + path.string());
    std::string line;
    std::getline(in, line);
    if (line == kMetricsCsvVersion)
        return "metrics";
    if (line == kPredictionsCsvVersion)
        return "predictions";
    if (line == kTraceCsvVersion)
        return "trace";
    throw ConfigError(path.string() + ": unknown or missing version line");
}

}  // namespace qrsim
