#pragma once

// Benchmark battery: binary stream enumeration, target functions, continuous
// input grids with spatial multiplexing, the three evaluation schemes, and
// the dataset -> training -> metrics pipeline.

#include <array>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qrsim/readout.hpp"

namespace qrsim {

/// Evaluation protocols.
///  A: two noisy realizations of the binary dataset; train on one (augmented),
///     evaluate on the other.
///  B: leave-one-out over the continuous input grid; train on the remaining
///     augmented instances, evaluate on the held-out clean instance.
///  C: train on all instances augmented, evaluate on all clean instances.
enum class Scheme { A, B, C };

inline const char* scheme_name(Scheme s)
{
    switch (s) {
        case Scheme::A: return "A";
        case Scheme::B: return "B";
        default: return "C";
    }
}

enum class TaskKind {
    InputRecognition,  ///< reconstruct stream bit `index`
    Parity,            ///< XOR of stream bits `index` and `index2`
    Xor,               ///< XOR of the first `index` stream bits
    Nand,              ///< NAND of the first two stream bits
    Adder1,            ///< bit `index` of the 1-bit sum of positions (1, 2)
    Adder2,            ///< bit `index` of the 2-bit sum of (1,2) and (3,4), MSB first
    Multiply,          ///< s1 * s2
    Divide,            ///< s1 / (1 + s2)
    Nonlinear1,        ///< s1 * s2 * (1 - s1)
    Nonlinear2         ///< s1^2 + s2^2
};

struct TaskSpec {
    TaskKind kind = TaskKind::InputRecognition;
    int index = 1;   ///< bit position / parity first bit / xor width / adder output order
    int index2 = 0;  ///< parity second bit
    Scheme scheme = Scheme::A;

    bool binary_input() const
    {
        switch (kind) {
            case TaskKind::Multiply:
            case TaskKind::Divide:
            case TaskKind::Nonlinear1:
            case TaskKind::Nonlinear2:
                return false;
            default:
                return true;
        }
    }

    /// Binary tasks have {0,1} targets and get digitized error counts.
    bool binary_target() const { return binary_input(); }

    /// Number of leading stream positions the target reads (binary tasks).
    int arity() const
    {
        switch (kind) {
            case TaskKind::InputRecognition: return index;
            case TaskKind::Parity: return std::max(index, index2);
            case TaskKind::Xor: return index;
            case TaskKind::Nand: return 2;
            case TaskKind::Adder1: return 2;
            case TaskKind::Adder2: return 4;
            default: return 2;  // continuous: (s1, s2)
        }
    }

    std::string name() const
    {
        switch (kind) {
            case TaskKind::InputRecognition:
                return "input_recognition_" + std::to_string(index);
            case TaskKind::Parity:
                return "parity_" + std::to_string(index) + std::to_string(index2);
            case TaskKind::Xor: return "xor_" + std::to_string(index);
            case TaskKind::Nand: return "nand";
            case TaskKind::Adder1: return "adder1_" + std::to_string(index);
            case TaskKind::Adder2: return "adder2_" + std::to_string(index);
            case TaskKind::Multiply: return "multiply";
            case TaskKind::Divide: return "divide";
            case TaskKind::Nonlinear1: return "nonlinear_1";
            case TaskKind::Nonlinear2: return "nonlinear_2";
        }
        return "?";
    }

    void validate() const
    {
        switch (kind) {
            case TaskKind::InputRecognition:
                if (index < 1)
                    throw std::invalid_argument("task: input_recognition bit must be >= 1");
                break;
            case TaskKind::Parity:
                if (index < 1 || index2 < 1 || index == index2)
                    throw std::invalid_argument("task: parity needs two distinct bits >= 1");
                break;
            case TaskKind::Xor:
                if (index < 2 || index > 4)
                    throw std::invalid_argument("task: xor width must be in {2, 3, 4}");
                break;
            case TaskKind::Adder1:
                if (index < 0 || index > 1)
                    throw std::invalid_argument("task: adder1 order must be in {0, 1}");
                break;
            case TaskKind::Adder2:
                if (index < 0 || index > 2)
                    throw std::invalid_argument("task: adder2 order must be in {0, 1, 2}");
                break;
            default:
                break;
        }
        if (binary_input() && scheme != Scheme::A)
            throw std::invalid_argument("task: binary tasks run under scheme A");
        if (!binary_input() && scheme == Scheme::A)
            throw std::invalid_argument("task: continuous tasks run under scheme B or C");
    }

    /// Parses canonical task names such as "parity_13", "xor_2", "adder2_1",
    /// "multiply". The scheme defaults to A for binary tasks and B otherwise.
    static TaskSpec parse(const std::string& name)
    {
        TaskSpec t;
        const auto tail_int = [&name](std::size_t prefix_len) {
            return std::stoi(name.substr(prefix_len));
        };
        try {
            if (name.rfind("input_recognition_", 0) == 0) {
                t.kind = TaskKind::InputRecognition;
                t.index = tail_int(18);
            } else if (name.rfind("parity_", 0) == 0 && name.size() == 9) {
                t.kind = TaskKind::Parity;
                t.index = name[7] - '0';
                t.index2 = name[8] - '0';
            } else if (name.rfind("xor_", 0) == 0) {
                t.kind = TaskKind::Xor;
                t.index = tail_int(4);
            } else if (name == "nand") {
                t.kind = TaskKind::Nand;
            } else if (name.rfind("adder1_", 0) == 0) {
                t.kind = TaskKind::Adder1;
                t.index = tail_int(7);
            } else if (name.rfind("adder2_", 0) == 0) {
                t.kind = TaskKind::Adder2;
                t.index = tail_int(7);
            } else if (name == "multiply") {
                t.kind = TaskKind::Multiply;
            } else if (name == "divide") {
                t.kind = TaskKind::Divide;
            } else if (name == "nonlinear_1") {
                t.kind = TaskKind::Nonlinear1;
            } else if (name == "nonlinear_2") {
                t.kind = TaskKind::Nonlinear2;
            } else {
                throw std::invalid_argument("task: unknown task name '" + name + "'");
            }
        } catch (const std::logic_error&) {
            throw std::invalid_argument("task: cannot parse task name '" + name + "'");
        }
        t.scheme = t.binary_input() ? Scheme::A : Scheme::B;
        t.validate();
        return t;
    }

    /// The full function battery: XOR widths, NAND, both adders by output
    /// order, and the four continuous functions (13 tasks).
    static std::vector<TaskSpec> battery(Scheme continuous_scheme = Scheme::B)
    {
        std::vector<TaskSpec> tasks;
        for (const char* name : {"xor_2", "xor_3", "xor_4", "nand", "adder1_0", "adder1_1",
                                 "adder2_0", "adder2_1", "adder2_2"})
            tasks.push_back(parse(name));
        for (const char* name : {"multiply", "divide", "nonlinear_1", "nonlinear_2"}) {
            TaskSpec t = parse(name);
            t.scheme = continuous_scheme;
            tasks.push_back(t);
        }
        return tasks;
    }
};

/// Names accepted by the CLI that expand to several related tasks:
/// "input_recognition" covers every stream position, "parity" the pairs
/// (1,3) and (2,3), "battery" the full thirteen-task battery.
inline std::vector<TaskSpec> expand_task_name(const std::string& name, int input_length)
{
    if (name == "input_recognition") {
        std::vector<TaskSpec> tasks;
        for (int l = 1; l <= input_length; ++l)
            tasks.push_back(TaskSpec::parse("input_recognition_" + std::to_string(l)));
        return tasks;
    }
    if (name == "parity")
        return {TaskSpec::parse("parity_13"), TaskSpec::parse("parity_23")};
    if (name == "battery")
        return TaskSpec::battery();
    return {TaskSpec::parse(name)};
}

/// All 2^L bit patterns in lexicographic order (all-zeros first, the last
/// position varying fastest).
inline std::vector<std::vector<int>> binary_streams(int input_length)
{
    if (input_length < 1 || input_length > 20)
        throw std::invalid_argument("binary_streams: input_length outside [1, 20]");
    const std::size_t count = std::size_t{1} << input_length;
    std::vector<std::vector<int>> streams(count, std::vector<int>(input_length));
    for (std::size_t p = 0; p < count; ++p)
        for (int l = 0; l < input_length; ++l)
            streams[p][static_cast<std::size_t>(l)] =
                static_cast<int>((p >> (input_length - 1 - l)) & 1u);
    return streams;
}

/// Bit b -> signed injection input s' = 2b - 1.
inline std::vector<double> to_signed_stream(const std::vector<int>& bits)
{
    std::vector<double> s;
    s.reserve(bits.size());
    for (const int b : bits)
        s.push_back(2.0 * b - 1.0);
    return s;
}

/// Target of a binary task for one bit pattern (positions are 1-based,
/// most significant first for the adders).
inline double target_for(const TaskSpec& task, const std::vector<int>& bits)
{
    task.validate();
    if (!task.binary_input())
        throw std::invalid_argument("target_for: task takes continuous inputs");
    if (static_cast<int>(bits.size()) < task.arity())
        throw std::invalid_argument("target_for: stream shorter than task arity");
    const auto bit = [&bits](int position) { return bits[static_cast<std::size_t>(position - 1)]; };

    switch (task.kind) {
        case TaskKind::InputRecognition:
            return bit(task.index);
        case TaskKind::Parity:
            return bit(task.index) ^ bit(task.index2);
        case TaskKind::Xor: {
            int acc = 0;
            for (int l = 1; l <= task.index; ++l)
                acc ^= bit(l);
            return acc;
        }
        case TaskKind::Nand:
            return 1 - (bit(1) & bit(2));
        case TaskKind::Adder1: {
            const int sum = bit(1) + bit(2);
            return (sum >> task.index) & 1;
        }
        case TaskKind::Adder2: {
            const int sum = (2 * bit(1) + bit(2)) + (2 * bit(3) + bit(4));
            return (sum >> task.index) & 1;
        }
        default:
            throw std::invalid_argument("target_for: unreachable");
    }
}

/// Target of a continuous task for a functional input pair.
inline double target_for(const TaskSpec& task, double s1, double s2)
{
    task.validate();
    switch (task.kind) {
        case TaskKind::Multiply: return s1 * s2;
        case TaskKind::Divide: return s1 / (1.0 + s2);
        case TaskKind::Nonlinear1: return s1 * s2 * (1.0 - s1);
        case TaskKind::Nonlinear2: return s1 * s1 + s2 * s2;
        default:
            throw std::invalid_argument("target_for: task takes binary inputs");
    }
}

/// Half-open grid {lo + k*step : k = 0 .. floor((hi-lo)/step) - 1}; the upper
/// endpoint is excluded so 0.125 steps give 8 values on [0,1) and 16 on [-1,1).
inline std::vector<double> continuous_grid(double step, double lo, double hi)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("continuous_grid: step must be > 0");
    if (!(lo < hi))
        throw std::invalid_argument("continuous_grid: need lo < hi");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (count < 1)
        throw std::invalid_argument("continuous_grid: degenerate range");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k)
        values.push_back(lo + static_cast<double>(k) * step);
    return values;
}

struct SignedPair {
    double s1 = 0.0;
    double s2 = 0.0;
};

/// The four sign patterns of a functional input; the function argument is
/// recovered as s_l = |s'_l|. Duplicates (zeros) are retained.
inline std::array<SignedPair, 4> multiplex_expand(double s1, double s2)
{
    if (!(s1 >= 0.0 && s1 < 1.0) || !(s2 >= 0.0 && s2 < 1.0))
        throw std::invalid_argument("multiplex_expand: inputs must lie in [0, 1)");
    return {SignedPair{s1, s2}, SignedPair{-s1, s2}, SignedPair{s1, -s2},
            SignedPair{-s1, -s2}};
}

/// Adds i.i.d. Gaussian measurement noise (std = relative_std * max |signal|
/// over the whole set) to every sample of every trace. Models the shot-level
/// difference between two experimental realizations of the same dataset.
inline std::vector<ReservoirTrace> add_measurement_noise(std::vector<ReservoirTrace> traces,
                                                         double relative_std,
                                                         std::uint64_t seed)
{
    double max_signal = 0.0;
    for (const ReservoirTrace& t : traces)
        max_signal = std::max(max_signal, max_abs(RealMatrix(t.signals)));
    const double noise_std = relative_std * max_signal;
    if (noise_std == 0.0)
        return traces;
    Rng rng(seed);
    for (ReservoirTrace& t : traces)
        for (Eigen::Index l = 0; l < t.signals.rows(); ++l)
            for (Eigen::Index m = 0; m < t.signals.cols(); ++m)
                t.signals(l, m) += noise_std * rng.gaussian();
    return traces;
}

struct BenchmarkInstance {
    std::string input;
    double target = 0.0;
    double prediction = 0.0;
};

struct BenchmarkReport {
    TaskSpec task;
    int m_used = 0;
    Metrics metrics;
    std::vector<BenchmarkInstance> per_instance;
    /// Trained readout weights; absent for scheme B, which fits one model per
    /// leave-one-out fold.
    std::optional<RealVector> weights;
};

namespace detail {

inline void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index)>& body)
{
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<Eigen::Index>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(n), hw));
    if (workers <= 1) {
        for (Eigen::Index i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<Eigen::Index> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Eigen::Index w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const Eigen::Index i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

inline DesignMatrix erase_row(const DesignMatrix& design, Eigen::Index row)
{
    DesignMatrix out;
    out.blocks = design.blocks;
    out.input_length = design.input_length;
    out.samples_per_input = design.samples_per_input;
    out.values.resize(design.rows() - 1, design.cols());
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < design.rows(); ++k) {
        if (k == row)
            continue;
        out.values.row(r++) = design.values.row(k);
        out.row_labels.push_back(design.row_labels[static_cast<std::size_t>(k)]);
    }
    return out;
}

inline RealVector erase_entry(const RealVector& v, Eigen::Index entry)
{
    RealVector out(v.size() - 1);
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (k != entry)
            out(r++) = v(k);
    return out;
}

inline std::string format_value(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace detail

struct HarnessConfig {
    SpinSystem system;
    double epsilon = 3e-5;
    double tau_seconds = 2e-6;
    int input_length = 4;       ///< L for binary streams
    int samples_per_input = 11; ///< M at acquisition time
    Axis rotation_axis = Axis::Y;
    double probe_residual = kDefaultProbeResidual;
    double grid_step = 0.125;   ///< continuous input grid increment
    TrainOptions readout;
};

/// Simulates traces once per input set and runs task benchmarks against them.
/// Trace banks are cached, so a battery or an M-sweep re-trains readouts
/// without re-simulating the dynamics.
class Harness {
public:
    explicit Harness(HarnessConfig config) : config_(std::move(config))
    {
        config_.system.validate();
        binary_params_ = SequenceParams{config_.input_length, config_.samples_per_input,
                                        config_.tau_seconds, config_.rotation_axis,
                                        config_.probe_residual};
        binary_params_.validate();
        continuous_params_ = binary_params_;
        continuous_params_.input_length = 2;  // one injection per function argument
    }

    const HarnessConfig& config() const { return config_; }

    /// Clean traces for all 2^L binary streams, in stream order.
    const std::vector<ReservoirTrace>& binary_bank()
    {
        if (binary_bank_.empty()) {
            const auto streams = binary_streams(config_.input_length);
            binary_bank_.resize(streams.size());
            detail::parallel_for(static_cast<Eigen::Index>(streams.size()),
                                 [&](Eigen::Index k) {
                                     binary_bank_[static_cast<std::size_t>(k)] = run_sequence(
                                         config_.system,
                                         to_signed_stream(streams[static_cast<std::size_t>(k)]),
                                         binary_params_, config_.epsilon);
                                 });
        }
        return binary_bank_;
    }

    /// Clean traces for every signed pair of the full injection grid
    /// ([-1, 1) in grid_step increments on both axes), row-major by s1'.
    const std::vector<ReservoirTrace>& continuous_bank()
    {
        if (continuous_bank_.empty()) {
            signed_grid_ = continuous_grid(config_.grid_step, -1.0, 1.0);
            const auto n = static_cast<Eigen::Index>(signed_grid_.size());
            continuous_bank_.resize(static_cast<std::size_t>(n * n));
            detail::parallel_for(n * n, [&](Eigen::Index idx) {
                const double s1 = signed_grid_[static_cast<std::size_t>(idx / n)];
                const double s2 = signed_grid_[static_cast<std::size_t>(idx % n)];
                continuous_bank_[static_cast<std::size_t>(idx)] = run_sequence(
                    config_.system, {s1, s2}, continuous_params_, config_.epsilon);
            });
        }
        return continuous_bank_;
    }

    /// Runs one benchmark. m_used selects how many of the acquired samples
    /// per injection feed the readout (column subsampling, not re-simulation).
    /// All noise draws derive from `seed`, the task name, and m_used, so a
    /// report is a pure function of (config, task, m_used, noise, seed).
    BenchmarkReport run(const TaskSpec& task, int m_used, const NoiseSpec& noise,
                        std::uint64_t seed)
    {
        task.validate();
        noise.validate();
        const std::uint64_t base =
            mix_seed(mix_seed(seed, hash64(task.name())), static_cast<std::uint64_t>(m_used));
        if (task.binary_input())
            return run_scheme_a(task, m_used, noise, base);
        return run_continuous(task, m_used, noise, base);
    }

private:
    BenchmarkReport run_scheme_a(const TaskSpec& task, int m_used, const NoiseSpec& noise,
                                 std::uint64_t base)
    {
        if (task.arity() > config_.input_length)
            throw std::invalid_argument("run: task arity exceeds the stream length L");

        const auto streams = binary_streams(config_.input_length);
        const auto& clean = binary_bank();

        RealVector targets(static_cast<Eigen::Index>(streams.size()));
        for (std::size_t k = 0; k < streams.size(); ++k)
            targets(static_cast<Eigen::Index>(k)) = target_for(task, streams[k]);

        const auto realization_train =
            add_measurement_noise(clean, noise.relative_std, mix_seed(base, 1));
        const auto realization_eval =
            add_measurement_noise(clean, noise.relative_std, mix_seed(base, 2));

        const DesignMatrix train_design =
            subsample_design(assemble_design_matrix(realization_train), m_used);
        NoiseSpec augment = noise;
        augment.seed = mix_seed(base, 3);
        const auto [aug_design, aug_targets] = augment_noise(train_design, targets, augment);
        const ReadoutModel model = train(aug_design, aug_targets, config_.readout);

        const DesignMatrix eval_design =
            subsample_design(assemble_design_matrix(realization_eval), m_used);
        RealVector predictions(eval_design.rows());
        for (Eigen::Index k = 0; k < eval_design.rows(); ++k)
            predictions(k) = predict_features(model, eval_design.values.row(k).transpose());

        BenchmarkReport report;
        report.task = task;
        report.m_used = m_used;
        report.metrics = evaluate(predictions, targets, task.binary_target());
        report.weights = model.weights;
        for (std::size_t k = 0; k < streams.size(); ++k) {
            std::string label;
            for (const int b : streams[k])
                label += static_cast<char>('0' + b);
            report.per_instance.push_back(
                {label, targets(static_cast<Eigen::Index>(k)),
                 predictions(static_cast<Eigen::Index>(k))});
        }
        return report;
    }

    BenchmarkReport run_continuous(const TaskSpec& task, int m_used, const NoiseSpec& noise,
                                   std::uint64_t base)
    {
        const auto& bank = continuous_bank();
        const auto grid = continuous_grid(config_.grid_step, 0.0, 1.0);
        const auto n_signed = static_cast<Eigen::Index>(signed_grid_.size());

        // One row per functional input: the four sign-variant traces side by side.
        std::vector<std::vector<ReservoirTrace>> groups;
        RealVector targets(static_cast<Eigen::Index>(grid.size() * grid.size()));
        std::vector<std::string> labels;
        for (const double s1 : grid) {
            for (const double s2 : grid) {
                std::vector<ReservoirTrace> group;
                for (const SignedPair& p : multiplex_expand(s1, s2))
                    group.push_back(bank[static_cast<std::size_t>(
                        signed_index(p.s1) * n_signed + signed_index(p.s2))]);
                targets(static_cast<Eigen::Index>(groups.size())) = target_for(task, s1, s2);
                labels.push_back(detail::format_value(s1) + ";" + detail::format_value(s2));
                groups.push_back(std::move(group));
            }
        }

        const DesignMatrix design = subsample_design(assemble_design_matrix(groups), m_used);
        const Eigen::Index count = design.rows();
        RealVector predictions(count);
        std::optional<RealVector> trained_weights;

        if (task.scheme == Scheme::C) {
            NoiseSpec augment = noise;
            augment.seed = mix_seed(base, 4);
            const auto [aug_design, aug_targets] = augment_noise(design, targets, augment);
            const ReadoutModel model = train(aug_design, aug_targets, config_.readout);
            for (Eigen::Index k = 0; k < count; ++k)
                predictions(k) = predict_features(model, design.values.row(k).transpose());
            trained_weights = model.weights;
        } else {
            // Scheme B: one train/evaluate round per held-out input.
            detail::parallel_for(count, [&](Eigen::Index k) {
                NoiseSpec augment = noise;
                augment.seed = mix_seed(base, 1000 + static_cast<std::uint64_t>(k));
                const DesignMatrix fold_design = detail::erase_row(design, k);
                const RealVector fold_targets = detail::erase_entry(targets, k);
                const auto [aug_design, aug_targets] =
                    augment_noise(fold_design, fold_targets, augment);
                const ReadoutModel model = train(aug_design, aug_targets, config_.readout);
                predictions(k) = predict_features(model, design.values.row(k).transpose());
            });
        }

        BenchmarkReport report;
        report.task = task;
        report.m_used = m_used;
        report.metrics = evaluate(predictions, targets, task.binary_target());
        report.weights = std::move(trained_weights);
        for (Eigen::Index k = 0; k < count; ++k)
            report.per_instance.push_back(
                {labels[static_cast<std::size_t>(k)], targets(k), predictions(k)});
        return report;
    }

    /// Index of a signed grid value in the [-1, 1) injection grid.
    Eigen::Index signed_index(double value) const
    {
        const double pos = (value - (-1.0)) / config_.grid_step;
        const auto idx = static_cast<Eigen::Index>(std::llround(pos));
        if (idx < 0 || idx >= static_cast<Eigen::Index>(signed_grid_.size()) ||
            std::abs(pos - static_cast<double>(idx)) > 1e-9)
            throw std::invalid_argument("harness: signed input off the injection grid");
        return idx;
    }

    HarnessConfig config_;
    SequenceParams binary_params_;
    SequenceParams continuous_params_;
    std::vector<ReservoirTrace> binary_bank_;
    std::vector<ReservoirTrace> continuous_bank_;
    std::vector<double> signed_grid_;
};

/// Control experiment: the same pseudoinverse readout trained directly on the
/// raw bit patterns (no reservoir), trained and evaluated on all 2^L
/// patterns. Nonlinearly separable targets must leave errors here.
inline long raw_input_control_errors(const TaskSpec& task, int input_length,
                                     const TrainOptions& options = {})
{
    const auto streams = binary_streams(input_length);
    DesignMatrix design;
    design.blocks = 1;
    design.input_length = input_length;
    design.samples_per_input = 1;
    design.values.resize(static_cast<Eigen::Index>(streams.size()), input_length);
    RealVector targets(static_cast<Eigen::Index>(streams.size()));
    for (std::size_t k = 0; k < streams.size(); ++k) {
        for (int l = 0; l < input_length; ++l)
            design.values(static_cast<Eigen::Index>(k), l) =
                streams[k][static_cast<std::size_t>(l)];
        design.row_labels.push_back("k" + std::to_string(k + 1));
        targets(static_cast<Eigen::Index>(k)) = target_for(task, streams[k]);
    }
    const ReadoutModel model = train(design, targets, options);
    RealVector predictions(design.rows());
    for (Eigen::Index k = 0; k < design.rows(); ++k)
        predictions(k) = predict_features(model, design.values.row(k).transpose());
    return *evaluate(predictions, targets, /*digitize=*/true).digitized_errors;
}

}  // namespace qrsim
