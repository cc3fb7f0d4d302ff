#pragma once

// Linear readout over reservoir signals: design-matrix assembly, Gaussian
// noise augmentation, pseudoinverse training, prediction, and error metrics.

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qrsim/linalg.hpp"
#include "qrsim/reservoir.hpp"
#include "qrsim/rng.hpp"

namespace qrsim {

/// K x (blocks*L*M) matrix of signals, one row per training instance.
/// Column index = ((block*L + (l-1))*M + (m-1)); `blocks` > 1 appears when
/// spatially multiplexed traces are concatenated into one row.
struct DesignMatrix {
    RealMatrix values;
    std::vector<std::string> row_labels;
    int blocks = 1;
    int input_length = 0;       ///< L
    int samples_per_input = 0;  ///< M

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

struct NoiseSpec {
    long copies = 10000;
    /// Noise standard deviation as a fraction of the dataset's max |signal|.
    double relative_std = 1e-4;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (copies < 1)
            throw std::invalid_argument("NoiseSpec: copies must be >= 1");
        if (!(relative_std >= 0.0) || !std::isfinite(relative_std))
            throw std::invalid_argument("NoiseSpec: relative_std must be >= 0");
    }
};

struct TrainOptions {
    /// Singular-value cutoff; automatic when unset (see least_squares_pinv).
    std::optional<double> tolerance;
    /// Append a constant feature column (off by default; predictions are then
    /// pure weighted sums of the signals).
    bool bias = false;
};

struct ReadoutModel {
    RealVector weights;  ///< length blocks*L*M, plus trailing bias slot if enabled
    bool has_bias = false;
    double tolerance_used = 0.0;
    Eigen::Index effective_rank = 0;
    double training_mse = 0.0;

    Eigen::Index feature_count() const
    {
        return weights.size() - (has_bias ? 1 : 0);
    }
};

struct Metrics {
    double mse = 0.0;
    long count = 0;
    std::optional<long> digitized_errors;
};

/// Threshold-0.5 digitization; a tie at exactly 0.5 rounds to 1.
inline int digitize_at_half(double value)
{
    return value >= 0.5 ? 1 : 0;
}

/// Stacks flattened traces as rows. All traces must share (L, M).
inline DesignMatrix assemble_design_matrix(const std::vector<ReservoirTrace>& traces)
{
    if (traces.empty())
        throw std::invalid_argument("assemble_design_matrix: no traces");
    const int L = traces.front().params.input_length;
    const int M = traces.front().params.samples_per_input;

    DesignMatrix design;
    design.blocks = 1;
    design.input_length = L;
    design.samples_per_input = M;
    design.values.resize(static_cast<Eigen::Index>(traces.size()),
                         static_cast<Eigen::Index>(L) * M);
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const ReservoirTrace& t = traces[k];
        if (t.params.input_length != L || t.params.samples_per_input != M) {
            std::ostringstream msg;
            msg << "assemble_design_matrix: trace " << k << " has shape "
                << t.params.input_length << "x" << t.params.samples_per_input
                << ", expected " << L << "x" << M;
            throw std::invalid_argument(msg.str());
        }
        design.values.row(static_cast<Eigen::Index>(k)) = t.flattened().transpose();
        design.row_labels.push_back("k" + std::to_string(k + 1));
    }
    if (!design.values.allFinite())
        throw std::invalid_argument("assemble_design_matrix: non-finite signal value");
    return design;
}

/// Stacks groups of traces; each row is the concatenation of one group
/// (spatial multiplexing). Every group must have the same size and all
/// traces the same (L, M).
inline DesignMatrix assemble_design_matrix(
    const std::vector<std::vector<ReservoirTrace>>& groups)
{
    if (groups.empty() || groups.front().empty())
        throw std::invalid_argument("assemble_design_matrix: no traces");
    const int blocks = static_cast<int>(groups.front().size());
    const int L = groups.front().front().params.input_length;
    const int M = groups.front().front().params.samples_per_input;

    DesignMatrix design;
    design.blocks = blocks;
    design.input_length = L;
    design.samples_per_input = M;
    design.values.resize(static_cast<Eigen::Index>(groups.size()),
                         static_cast<Eigen::Index>(blocks) * L * M);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        if (static_cast<int>(groups[k].size()) != blocks)
            throw std::invalid_argument("assemble_design_matrix: ragged trace groups");
        for (int b = 0; b < blocks; ++b) {
            const ReservoirTrace& t = groups[k][static_cast<std::size_t>(b)];
            if (t.params.input_length != L || t.params.samples_per_input != M)
                throw std::invalid_argument("assemble_design_matrix: trace shape mismatch");
            design.values.block(static_cast<Eigen::Index>(k),
                                static_cast<Eigen::Index>(b) * L * M, 1,
                                static_cast<Eigen::Index>(L) * M) =
                t.flattened().transpose();
        }
        design.row_labels.push_back("k" + std::to_string(k + 1));
    }
    if (!design.values.allFinite())
        throw std::invalid_argument("assemble_design_matrix: non-finite signal value");
    return design;
}

/// Keeps only the first m_used samples of each injection block: columns with
/// m <= m_used survive. Used for the sampling-point sweep.
inline DesignMatrix subsample_design(const DesignMatrix& design, int m_used)
{
    if (m_used < 1 || m_used > design.samples_per_input) {
        std::ostringstream msg;
        msg << "subsample_design: m_used = " << m_used << " outside [1, "
            << design.samples_per_input << "]";
        throw std::invalid_argument(msg.str());
    }
    if (m_used == design.samples_per_input)
        return design;

    DesignMatrix out;
    out.blocks = design.blocks;
    out.input_length = design.input_length;
    out.samples_per_input = m_used;
    out.row_labels = design.row_labels;
    const Eigen::Index group_count =
        static_cast<Eigen::Index>(design.blocks) * design.input_length;
    out.values.resize(design.rows(), group_count * m_used);
    for (Eigen::Index g = 0; g < group_count; ++g)
        out.values.middleCols(g * m_used, m_used) =
            design.values.middleCols(g * design.samples_per_input, m_used);
    return out;
}

/// Replicates every row `copies` times with i.i.d. Gaussian noise of standard
/// deviation relative_std * max|design|; targets are replicated unchanged.
/// Row order: all copies of row 0, then row 1, ... Deterministic in the seed.
inline std::pair<DesignMatrix, RealVector> augment_noise(const DesignMatrix& design,
                                                         const RealVector& targets,
                                                         const NoiseSpec& spec)
{
    spec.validate();
    if (design.rows() != targets.size())
        throw std::invalid_argument("augment_noise: row/target count mismatch");

    const double noise_std = spec.relative_std * max_abs(design.values);
    Rng rng(spec.seed);

    DesignMatrix out;
    out.blocks = design.blocks;
    out.input_length = design.input_length;
    out.samples_per_input = design.samples_per_input;
    out.values.resize(design.rows() * spec.copies, design.cols());
    RealVector out_targets(design.rows() * spec.copies);
    out.row_labels.reserve(static_cast<std::size_t>(design.rows() * spec.copies));

    for (Eigen::Index k = 0; k < design.rows(); ++k) {
        for (long c = 0; c < spec.copies; ++c) {
            const Eigen::Index row = k * spec.copies + c;
            out.values.row(row) = design.values.row(k);
            if (noise_std > 0.0)
                for (Eigen::Index j = 0; j < design.cols(); ++j)
                    out.values(row, j) += noise_std * rng.gaussian();
            out_targets(row) = targets(k);
            out.row_labels.push_back(design.row_labels[static_cast<std::size_t>(k)] + ":" +
                                     std::to_string(c));
        }
    }
    return {std::move(out), std::move(out_targets)};
}

/// Fits readout weights W = R^+ y by minimum-norm least squares and records
/// the training MSE (mean over rows).
inline ReadoutModel train(const DesignMatrix& design, const RealVector& targets,
                          const TrainOptions& options = {})
{
    if (design.rows() != targets.size())
        throw std::invalid_argument("train: row/target count mismatch");

    const RealMatrix* x = &design.values;
    RealMatrix with_bias;
    if (options.bias) {
        with_bias.resize(design.rows(), design.cols() + 1);
        with_bias.leftCols(design.cols()) = design.values;
        with_bias.col(design.cols()).setOnes();
        x = &with_bias;
    }

    const LeastSquaresSolution sol = least_squares_pinv(*x, targets, options.tolerance);

    ReadoutModel model;
    model.weights = sol.weights;
    model.has_bias = options.bias;
    model.tolerance_used = sol.tolerance_used;
    model.effective_rank = sol.effective_rank;
    const RealVector residual = (*x) * sol.weights - targets;
    model.training_mse = residual.squaredNorm() / static_cast<double>(design.rows());
    return model;
}

/// Weighted sum of an explicit feature row.
inline double predict_features(const ReadoutModel& model, const RealVector& features)
{
    if (features.size() != model.feature_count()) {
        std::ostringstream msg;
        msg << "predict: " << features.size() << " features, model expects "
            << model.feature_count();
        throw std::invalid_argument(msg.str());
    }
    double y = model.weights.head(features.size()).dot(features);
    if (model.has_bias)
        y += model.weights(model.weights.size() - 1);
    return y;
}

/// Weighted sum over one trace's flattened signals.
inline double predict(const ReadoutModel& model, const ReservoirTrace& trace)
{
    return predict_features(model, trace.flattened());
}

/// MSE (normalized by instance count) and, when digitize is set, the number
/// of threshold-0.5 misclassifications.
inline Metrics evaluate(const RealVector& predictions, const RealVector& targets,
                        bool digitize)
{
    if (predictions.size() != targets.size())
        throw std::invalid_argument("evaluate: prediction/target length mismatch");
    if (predictions.size() == 0)
        throw std::invalid_argument("evaluate: empty vectors");

    Metrics metrics;
    metrics.count = static_cast<long>(predictions.size());
    metrics.mse = (predictions - targets).squaredNorm() /
                  static_cast<double>(predictions.size());
    if (digitize) {
        long errors = 0;
        for (Eigen::Index i = 0; i < predictions.size(); ++i)
            if (digitize_at_half(predictions(i)) != digitize_at_half(targets(i)))
                ++errors;
        metrics.digitized_errors = errors;
    }
    return metrics;
}

}  // namespace qrsim
