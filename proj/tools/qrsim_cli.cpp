// qrsim command-line runner: configuration-driven simulation, benchmark, and
// report generation. Subcommands:
//   simulate   write the reservoir trace CSV for the configured input set
//   benchmark  train/evaluate one task, a task family, a sweep, or --all
//   report     summarize metrics CSVs and emit plot-ready data
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "qrsim/qrsim.hpp"

namespace fs = std::filesystem;
using namespace qrsim;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig load_config(const CommonArgs& args)
{
    ExperimentConfig config;
    if (!args.config_path.empty())
        config = parse_config(args.config_path);
    if (args.seed)
        config.seed = *args.seed;
    if (!args.out_dir.empty())
        config.out_dir = args.out_dir;
    return config;
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

void write_config_echo(const ExperimentConfig& config, const fs::path& dir)
{
    auto out = open_out(dir / "config_echo.json");
    out << config_to_json(config).dump(2) << "\n";
}

fs::path ensure_out_dir(const ExperimentConfig& config)
{
    const fs::path dir = config.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

/// Signed input streams for `simulate`: explicit config streams win, then the
/// task family decides between the binary enumeration and the injection grid.
std::vector<std::vector<double>> simulate_streams(const ExperimentConfig& config)
{
    if (config.streams)
        return *config.streams;
    const TaskSpec probe_task = expand_task_name(config.task, config.input_length).front();
    if (probe_task.binary_input()) {
        std::vector<std::vector<double>> streams;
        for (const auto& bits : binary_streams(config.input_length))
            streams.push_back(to_signed_stream(bits));
        return streams;
    }
    std::vector<std::vector<double>> streams;
    const auto grid = continuous_grid(config.grid_step, -1.0, 1.0);
    for (const double s1 : grid)
        for (const double s2 : grid)
            streams.push_back({s1, s2});
    return streams;
}

int cmd_simulate(const CommonArgs& args)
{
    const ExperimentConfig config = load_config(args);
    const fs::path dir = ensure_out_dir(config);

    SpinSystem system = resolve_system(config.system);
    if (const auto warning = system.usability_warning())
        std::cerr << "warning: " << *warning << "\n";

    const auto streams = simulate_streams(config);
    SequenceParams params{config.input_length, config.samples_per_input,
                          config.tau_seconds, parse_axis(config.rotation_axis),
                          config.probe_residual};
    if (!streams.empty())
        params.input_length = static_cast<int>(streams.front().size());

    std::vector<ReservoirTrace> traces(streams.size());
    detail::parallel_for(static_cast<Eigen::Index>(streams.size()), [&](Eigen::Index k) {
        traces[static_cast<std::size_t>(k)] =
            run_sequence(system, streams[static_cast<std::size_t>(k)], params, config.epsilon);
    });

    auto out = open_out(dir / "trace.csv");
    write_trace_csv(out, traces);
    write_config_echo(config, dir);
    std::cout << "wrote " << (dir / "trace.csv").string() << " (" << streams.size()
              << " streams)\n";
    return 0;
}

std::vector<int> parse_sweep(const std::string& sweep)
{
    std::vector<int> values;
    std::istringstream in(sweep);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            values.push_back(std::stoi(tok));
        } catch (const std::logic_error&) {
            throw ConfigError("--sweep-m: cannot parse '" + tok + "'");
        }
    }
    if (values.empty())
        throw ConfigError("--sweep-m: empty list");
    return values;
}

int cmd_benchmark(const CommonArgs& args, const std::string& task_override, bool all,
                  const std::string& sweep)
{
    ExperimentConfig config = load_config(args);
    // Flag overrides become part of the config so the echo reproduces the run.
    if (!task_override.empty())
        config.task = task_override;
    if (all)
        config.task = "battery";
    if (!sweep.empty())
        config.sweep_m = parse_sweep(sweep);
    validate_config(config);
    const fs::path dir = ensure_out_dir(config);

    std::vector<TaskSpec> tasks;
    const Scheme continuous_scheme =
        parse_scheme(config.scheme) == Scheme::C ? Scheme::C : Scheme::B;
    try {
        tasks = expand_task_name(config.task, config.input_length);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (TaskSpec& t : tasks)
        if (!t.binary_input())
            t.scheme = continuous_scheme;

    const std::vector<int> m_values =
        config.sweep_m.value_or(std::vector<int>{config.samples_per_input});

    Harness harness(make_harness_config(config));
    if (const auto warning = harness.config().system.usability_warning())
        std::cerr << "warning: " << *warning << "\n";
    const std::uint64_t run_seed = mix_seed(config.seed, config.noise.seed);

    std::vector<MetricsRow> metrics;
    std::vector<BenchmarkReport> reports;
    for (const TaskSpec& task : tasks) {
        for (const int m_used : m_values) {
            BenchmarkReport report;
            try {
                report = harness.run(task, m_used, config.noise, run_seed);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(task.name() + ": " + e.what());
            }
            metrics.push_back({task.name(), m_used, report.metrics.mse,
                               report.metrics.digitized_errors});
            std::cout << task.name() << " M=" << m_used << " mse=" << report.metrics.mse;
            if (report.metrics.digitized_errors)
                std::cout << " errors=" << *report.metrics.digitized_errors;
            std::cout << "\n";
            reports.push_back(std::move(report));
        }
    }

    {
        auto out = open_out(dir / "metrics.csv");
        write_metrics_csv(out, metrics);
    }
    {
        auto out = open_out(dir / "predictions.csv");
        write_predictions_csv(out, reports);
    }
    {
        auto out = open_out(dir / "weights.csv");
        write_weights_csv(out, reports);
    }
    write_config_echo(config, dir);
    std::cout << "wrote " << (dir / "metrics.csv").string() << ", "
              << (dir / "predictions.csv").string() << ", "
              << (dir / "weights.csv").string() << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& out_dir)
{
    std::vector<MetricsRow> metrics;
    std::vector<PredictionRow> predictions;
    for (const std::string& path : paths) {
        const std::string kind = csv_kind(path);
        if (kind == "metrics") {
            const auto rows = read_metrics_csv(path);
            metrics.insert(metrics.end(), rows.begin(), rows.end());
        } else if (kind == "predictions") {
            const auto rows = read_predictions_csv(path);
            predictions.insert(predictions.end(), rows.begin(), rows.end());
        } else {
            throw ConfigError(path + ": report accepts metrics and predictions CSVs");
        }
    }

    if (metrics.empty() && predictions.empty()) {
        std::cout << "no data\n";
        return 1;
    }

    if (!metrics.empty()) {
        std::cout << std::left << std::setw(24) << "task" << std::setw(6) << "M"
                  << std::setw(14) << "mse" << "errors\n";
        for (const MetricsRow& row : metrics) {
            std::cout << std::left << std::setw(24) << row.task << std::setw(6) << row.m_used
                      << std::setw(14) << row.mse
                      << (row.digitized_errors ? std::to_string(*row.digitized_errors)
                                               : std::string("n/a"))
                      << "\n";
        }
    }

    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    if (!metrics.empty()) {
        // Long-format MSE-vs-M data, merged across input files.
        auto out = open_out(dir / "plot_mse_vs_m.csv");
        out << kPlotCsvVersion << "\n" << "task,M,mse\n";
        for (const MetricsRow& row : metrics)
            out << row.task << ',' << row.m_used << ',' << csv_double(row.mse) << "\n";
        std::cout << "wrote " << (dir / "plot_mse_vs_m.csv").string() << "\n";
    }

    // Surface data per continuous task: input "s1;s2" splits into x, y.
    std::map<std::string, std::vector<const PredictionRow*>> surfaces;
    for (const PredictionRow& row : predictions)
        if (row.input.find(';') != std::string::npos)
            surfaces[row.task].push_back(&row);
    for (const auto& [task, rows] : surfaces) {
        auto out = open_out(dir / ("plot_surface_" + task + ".csv"));
        out << kPlotCsvVersion << "\n" << "s1,s2,target,prediction\n";
        for (const PredictionRow* row : rows) {
            std::string input = row->input;
            input[input.find(';')] = ',';
            out << input << ',' << csv_double(row->target) << ','
                << csv_double(row->prediction) << "\n";
        }
        std::cout << "wrote " << (dir / ("plot_surface_" + task + ".csv")).string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"quantum-reservoir learning simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string task_override;
    std::string sweep;
    bool all = false;
    std::vector<std::string> report_paths;

    auto* simulate = app.add_subcommand("simulate", "write reservoir trace CSV");
    simulate->add_option("--config", args.config_path, "JSON config file");
    simulate->add_option("--seed", args.seed, "override the global seed");
    simulate->add_option("--out", args.out_dir, "output directory");

    auto* benchmark = app.add_subcommand("benchmark", "train and evaluate tasks");
    benchmark->add_option("--config", args.config_path, "JSON config file");
    benchmark->add_option("--task", task_override, "task name (see README for the list)");
    benchmark->add_flag("--all", all, "run the full function battery");
    benchmark->add_option("--sweep-m", sweep, "comma-separated sampling-point counts");
    benchmark->add_option("--seed", args.seed, "override the global seed");
    benchmark->add_option("--out", args.out_dir, "output directory");

    auto* report = app.add_subcommand("report", "summarize metrics CSVs");
    report->add_option("paths", report_paths, "metrics/predictions CSV files")->required();
    report->add_option("--out", args.out_dir, "plot-data output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(args);
        if (benchmark->parsed())
            return cmd_benchmark(args, task_override, all, sweep);
        return cmd_report(report_paths, args.out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
