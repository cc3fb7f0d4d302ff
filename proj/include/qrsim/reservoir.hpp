#pragma once

// Reservoir dynamics: partially-polarized initial state, input injection by
// global rotation of the input spins, unitary evolution, probe readout, and
// the (L x M)-sample trace produced by one input stream.

#include <cmath>
#include <sstream>
#include <vector>

#include "qrsim/spin_system.hpp"

namespace qrsim {

/// Density operator stored as its deviation from the maximally mixed state:
/// rho = I/2^n + deviation. The identity part is carried analytically and is
/// never pushed through a floating-point conjugation, so normalized probe
/// signals carry no epsilon-scale roundoff from it.
class DensityState {
public:
    /// Wraps a traceless Hermitian deviation; rho = I/dim + deviation.
    static DensityState from_deviation(ComplexMatrix deviation, double polarization_epsilon)
    {
        check_deviation(deviation);
        return DensityState(std::move(deviation), polarization_epsilon);
    }

    /// Accepts a full unit-trace Hermitian density matrix.
    static DensityState from_matrix(const ComplexMatrix& rho, double polarization_epsilon)
    {
        if (rho.rows() != rho.cols())
            throw std::invalid_argument("DensityState: matrix must be square");
        const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (!(trace_err < 1e-12)) {
            std::ostringstream msg;
            msg << "DensityState: trace deviates from 1 by " << trace_err;
            throw std::invalid_argument(msg.str());
        }
        ComplexMatrix dev = rho;
        dev.diagonal().array() -= Complex(1.0 / static_cast<double>(rho.rows()), 0.0);
        return from_deviation(std::move(dev), polarization_epsilon);
    }

    Eigen::Index dim() const { return deviation_.rows(); }

    const ComplexMatrix& deviation() const { return deviation_; }

    /// Assembled density matrix I/dim + deviation.
    ComplexMatrix matrix() const
    {
        ComplexMatrix rho = deviation_;
        rho.diagonal().array() += Complex(1.0 / static_cast<double>(dim()), 0.0);
        return rho;
    }

    /// Polarization the state was constructed with; 0 means unpolarized.
    double polarization_epsilon() const { return epsilon_; }

private:
    DensityState(ComplexMatrix deviation, double epsilon)
        : deviation_(std::move(deviation)), epsilon_(epsilon)
    {
    }

    static void check_deviation(const ComplexMatrix& dev)
    {
        if (dev.rows() != dev.cols())
            throw std::invalid_argument("DensityState: matrix must be square");
        const double herr = hermiticity_error(dev);
        if (!(herr < kHermitianTol)) {
            std::ostringstream msg;
            msg << "DensityState: not Hermitian, ||A - A^H||_max = " << herr;
            throw std::invalid_argument(msg.str());
        }
    }

    ComplexMatrix deviation_;
    double epsilon_ = 0.0;
};

/// Acquisition schedule for one input stream.
struct SequenceParams {
    int input_length = 4;                   ///< L, injections per stream
    int samples_per_input = 11;             ///< M, samples after each injection
    double sample_interval_seconds = 2e-6;  ///< tau
    Axis rotation_axis = Axis::Y;           ///< transverse injection axis
    /// Residual probe polarization after saturation, as a fraction of the
    /// input-spin polarization: <2 IZ_C>(0) = probe_residual * epsilon.
    /// Zero means a perfectly saturated probe; then a pi injection negates
    /// the deviation exactly and streams differing in their first bit give
    /// sign-flipped signals, unresolvable by a linear readout.
    double probe_residual = 0.0;

    void validate() const
    {
        if (input_length < 1)
            throw std::invalid_argument("SequenceParams: input_length must be >= 1");
        if (samples_per_input < 1)
            throw std::invalid_argument("SequenceParams: samples_per_input must be >= 1");
        if (!(sample_interval_seconds > 0.0) || !std::isfinite(sample_interval_seconds))
            throw std::invalid_argument("SequenceParams: sample_interval must be > 0");
        if (rotation_axis == Axis::Z)
            throw std::invalid_argument("SequenceParams: rotation axis must be transverse (X or Y)");
        if (!(std::abs(probe_residual) < 1.0))
            throw std::invalid_argument("SequenceParams: |probe_residual| must be < 1");
    }
};

/// Normalized probe signals x_{l,m} for one input stream.
struct ReservoirTrace {
    RealMatrix signals;                ///< L x M, signals(l-1, m-1) = x_{l,m}
    std::vector<double> input_stream;  ///< signed inputs s' in [-1, 1]
    SequenceParams params;

    /// Row-major flattening: index (l-1)*M + (m-1).
    RealVector flattened() const
    {
        RealVector out(signals.size());
        Eigen::Index idx = 0;
        for (Eigen::Index l = 0; l < signals.rows(); ++l)
            for (Eigen::Index m = 0; m < signals.cols(); ++m)
                out(idx++) = signals(l, m);
        return out;
    }
};

/// Largest |epsilon| for which the thermal state stays positive semidefinite.
inline double psd_epsilon_bound(const SpinSystem& system, double probe_residual = 0.0)
{
    const double weight = static_cast<double>(system.n_input_spins) + std::abs(probe_residual);
    if (weight == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / weight;
}

/// Thermal state rho = (1/2^n)(I + 2*eps * sum_i IZ_i) over the input spins;
/// each input spin carries <2 IZ_i> = eps. With the default probe_residual = 0
/// the probe spin is saturated exactly; a nonzero residual leaves
/// <2 IZ_C> = probe_residual * eps behind, modelling imperfect saturation.
inline DensityState thermal_initial_state(const SpinSystem& system, double epsilon,
                                          double probe_residual = 0.0)
{
    system.validate();
    if (!(std::abs(probe_residual) < 1.0))
        throw std::invalid_argument("thermal_initial_state: |probe_residual| must be < 1");
    const double bound = psd_epsilon_bound(system, probe_residual);
    if (!(std::abs(epsilon) < bound)) {
        std::ostringstream msg;
        msg << "thermal_initial_state: |epsilon| = " << std::abs(epsilon)
            << " violates the positivity bound " << bound
            << (probe_residual == 0.0 ? " = 1/n_input_spins" : "");
        throw std::invalid_argument(msg.str());
    }
    const double scale = 2.0 * epsilon / static_cast<double>(system.dim());
    ComplexMatrix dev = scale * total_input_operator(system, Axis::Z);
    if (probe_residual != 0.0)
        dev += (probe_residual * scale) *
               site_operator(system.spin_count(), system.probe_site(), Axis::Z);
    return DensityState::from_deviation(std::move(dev), epsilon);
}

/// Global input rotation U = exp(-i theta sum_i I_axis^i) with
/// theta = arccos(s') for a signed input s' in [-1, 1]. Unit-interval task
/// inputs s in [0, 1] are mapped by the caller as s' = 2s - 1.
inline ComplexMatrix input_unitary(const SpinSystem& system, double s_signed,
                                   Axis axis = Axis::Y)
{
    if (!(s_signed >= -1.0 && s_signed <= 1.0)) {
        std::ostringstream msg;
        msg << "input_unitary: signed input " << s_signed << " outside [-1, 1]";
        throw std::invalid_argument(msg.str());
    }
    if (axis == Axis::Z)
        throw std::invalid_argument("input_unitary: rotation axis must be transverse (X or Y)");
    const double theta = std::acos(s_signed);
    // exp(-i * theta * G) reuses the Hamiltonian exponential with t = theta.
    return unitary_from_hamiltonian(total_input_operator(system, axis), theta);
}

/// Unitary conjugation U rho U^H; trace and spectrum are preserved.
inline DensityState evolve(const DensityState& state, const ComplexMatrix& u)
{
    if (u.rows() != u.cols() || u.rows() != state.dim()) {
        std::ostringstream msg;
        msg << "evolve: unitary is " << u.rows() << "x" << u.cols() << ", state dim is "
            << state.dim();
        throw std::invalid_argument(msg.str());
    }
    const double uerr = unitarity_error(u);
    if (!(uerr < 1e-10)) {
        std::ostringstream msg;
        msg << "evolve: matrix is not unitary, ||U^H U - I||_max = " << uerr;
        throw std::invalid_argument(msg.str());
    }
    ComplexMatrix dev = u * state.deviation() * u.adjoint();
    // Conjugation keeps Hermiticity up to roundoff; re-symmetrize exactly.
    dev = 0.5 * (dev + dev.adjoint()).eval();
    return DensityState::from_deviation(std::move(dev), state.polarization_epsilon());
}

/// Residual probe polarization of the stock configuration. Frozen alongside
/// the default coupling seed; the shipped benchmark numbers assume it.
inline constexpr double kDefaultProbeResidual = 0.05;

struct ProbeReading {
    double value = 0.0;
    /// False when epsilon was 0 and the raw expectation is returned instead.
    bool normalized = true;
};

/// Probe signal x = Tr(rho * 2 IZ_C) / epsilon. The identity part of rho
/// contributes exactly zero, so only the deviation enters. Reading is an
/// ensemble expectation; the state is untouched.
inline ProbeReading measure_probe_z(const DensityState& state, const SpinSystem& system)
{
    if (state.dim() != system.dim())
        throw std::invalid_argument("measure_probe_z: state/system dimension mismatch");
    const ComplexMatrix obs =
        2.0 * site_operator(system.spin_count(), system.probe_site(), Axis::Z);
    const double raw = trace_product(state.deviation(), obs);
    const double eps = state.polarization_epsilon();
    if (eps == 0.0)
        return {raw, false};
    return {raw / eps, true};
}

/// Runs one full acquisition: fresh thermal state, then for each stream
/// element inject, evolve M times by U = e^{-iH tau}, and record the probe
/// after every step. Deterministic for fixed inputs.
inline ReservoirTrace run_sequence(const SpinSystem& system, const std::vector<double>& stream,
                                   const SequenceParams& params, double epsilon)
{
    params.validate();
    if (static_cast<int>(stream.size()) != params.input_length) {
        std::ostringstream msg;
        msg << "run_sequence: stream length " << stream.size() << " != input_length "
            << params.input_length;
        throw std::invalid_argument(msg.str());
    }

    const EigDecomposition eig = herm_eig(build_hamiltonian(system));
    const ComplexMatrix u_step = unitary_from_eig(eig, params.sample_interval_seconds);
    const ComplexMatrix obs =
        2.0 * site_operator(system.spin_count(), system.probe_site(), Axis::Z);

    DensityState state = thermal_initial_state(system, epsilon, params.probe_residual);
    const double eps = state.polarization_epsilon();

    ReservoirTrace trace;
    trace.params = params;
    trace.input_stream = stream;
    trace.signals.resize(params.input_length, params.samples_per_input);
    for (int l = 0; l < params.input_length; ++l) {
        const ComplexMatrix u_in =
            input_unitary(system, stream[static_cast<std::size_t>(l)], params.rotation_axis);
        state = evolve(state, u_in);
        for (int m = 0; m < params.samples_per_input; ++m) {
            state = evolve(state, u_step);
            const double raw = trace_product(state.deviation(), obs);
            trace.signals(l, m) = eps == 0.0 ? raw : raw / eps;
        }
    }
    if (!trace.signals.allFinite())
        throw NumericError("run_sequence: non-finite signal produced");
    return trace;
}

}  // namespace qrsim
