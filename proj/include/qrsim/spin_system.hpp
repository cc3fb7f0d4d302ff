#pragma once

// Spin-1/2 ensemble definition and construction of the effective dipolar
// Hamiltonian: heteronuclear flip-flop terms toward the probe spin plus
// homonuclear secular terms among the input spins.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qrsim/linalg.hpp"
#include "qrsim/rng.hpp"

namespace qrsim {

enum class Axis { X, Y, Z };

inline const char* axis_name(Axis a)
{
    switch (a) {
        case Axis::X: return "X";
        case Axis::Y: return "Y";
        default: return "Z";
    }
}

inline ComplexMatrix pauli(Axis a)
{
    ComplexMatrix m(2, 2);
    switch (a) {
        case Axis::X:
            m << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
            break;
        case Axis::Y:
            m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
            break;
        case Axis::Z:
            m << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
            break;
    }
    return m;
}

/// A register of input spins plus a single probe spin, all spin-1/2.
/// Site order: input spins occupy 0 .. n_input_spins-1, the probe sits last.
/// Couplings are plain frequencies in Hz; the Hamiltonian builder applies
/// the 2*pi conversion to angular units.
struct SpinSystem {
    int n_input_spins = 0;
    std::vector<double> couplings_ic_hz;  ///< d_{i,C}, one per input spin
    std::vector<double> couplings_ij_hz;  ///< d_{i,j} for pairs i<j, lexicographic

    int spin_count() const { return n_input_spins + 1; }
    int probe_site() const { return n_input_spins; }
    Eigen::Index dim() const { return Eigen::Index{1} << spin_count(); }

    /// Symmetric lookup of the homonuclear coupling between input spins i, j.
    double coupling_ij(int i, int j) const
    {
        if (i == j || i < 0 || j < 0 || i >= n_input_spins || j >= n_input_spins)
            throw std::invalid_argument("SpinSystem::coupling_ij: index out of range");
        if (i > j)
            std::swap(i, j);
        // Flattened index of pair (i, j) in lexicographic order over i<j.
        const int idx = i * n_input_spins - i * (i + 1) / 2 + (j - i - 1);
        return couplings_ij_hz[static_cast<std::size_t>(idx)];
    }

    void validate() const
    {
        if (n_input_spins < 0)
            throw std::invalid_argument("SpinSystem: n_input_spins must be >= 0");
        if (spin_count() > 12)
            throw std::invalid_argument("SpinSystem: more than 12 spins is not supported");
        const auto expect_ic = static_cast<std::size_t>(n_input_spins);
        const auto expect_ij =
            static_cast<std::size_t>(n_input_spins) * (n_input_spins - 1) / 2;
        if (couplings_ic_hz.size() != expect_ic) {
            std::ostringstream msg;
            msg << "SpinSystem: expected " << expect_ic << " probe couplings, got "
                << couplings_ic_hz.size();
            throw std::invalid_argument(msg.str());
        }
        if (couplings_ij_hz.size() != expect_ij) {
            std::ostringstream msg;
            msg << "SpinSystem: expected " << expect_ij << " pair couplings, got "
                << couplings_ij_hz.size();
            throw std::invalid_argument(msg.str());
        }
        for (const double d : couplings_ic_hz)
            if (!std::isfinite(d))
                throw std::invalid_argument("SpinSystem: non-finite probe coupling");
        for (const double d : couplings_ij_hz)
            if (!std::isfinite(d))
                throw std::invalid_argument("SpinSystem: non-finite pair coupling");
    }

    /// Degenerate-but-legal configurations are reported, not rejected.
    std::optional<std::string> usability_warning() const
    {
        bool any_probe_path = false;
        for (const double d : couplings_ic_hz)
            if (d != 0.0)
                any_probe_path = true;
        if (!any_probe_path)
            return "all probe couplings d_{i,C} are zero; no signal can reach the probe spin";
        return std::nullopt;
    }
};

/// Spin-a operator (1/2 * Pauli) embedded at `site` of an n-spin register.
/// Site 0 is the leftmost Kronecker factor.
inline ComplexMatrix site_operator(int n_spins, int site, Axis axis)
{
    if (site < 0 || site >= n_spins)
        throw std::invalid_argument("site_operator: site index out of range");
    const ComplexMatrix half_pauli = 0.5 * pauli(axis);
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < n_spins; ++k)
        out = kron(out, k == site ? half_pauli : ComplexMatrix::Identity(2, 2));
    return out;
}

/// Sum of I_a over the input spins only (the globally rotated species).
inline ComplexMatrix total_input_operator(const SpinSystem& system, Axis axis)
{
    const int n = system.spin_count();
    ComplexMatrix out = ComplexMatrix::Zero(system.dim(), system.dim());
    for (int i = 0; i < system.n_input_spins; ++i)
        out += site_operator(n, i, axis);
    return out;
}

/// Sum of I_Z over every spin including the probe.
inline ComplexMatrix total_z_operator(int n_spins)
{
    const Eigen::Index d = Eigen::Index{1} << n_spins;
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < n_spins; ++i)
        out += site_operator(n_spins, i, Axis::Z);
    return out;
}

/// Effective interaction-frame Hamiltonian in rad/s:
///   H = sum_i 2*pi*d_{i,C} (IX_i IX_C + IY_i IY_C)
///     + sum_{i<j} 2*pi*d_{i,j} (2 IZ_i IZ_j - IX_i IX_j - IY_i IY_j).
/// Traceless and Hermitian by construction.
inline ComplexMatrix build_hamiltonian(const SpinSystem& system)
{
    system.validate();
    const int n = system.spin_count();
    const int probe = system.probe_site();

    std::vector<ComplexMatrix> ix(n), iy(n), iz(n);
    for (int k = 0; k < n; ++k) {
        ix[k] = site_operator(n, k, Axis::X);
        iy[k] = site_operator(n, k, Axis::Y);
        iz[k] = site_operator(n, k, Axis::Z);
    }

    constexpr double two_pi = 2.0 * std::numbers::pi;
    ComplexMatrix h = ComplexMatrix::Zero(system.dim(), system.dim());
    for (int i = 0; i < system.n_input_spins; ++i) {
        const double w = two_pi * system.couplings_ic_hz[static_cast<std::size_t>(i)];
        if (w != 0.0)
            h += w * (ix[i] * ix[probe] + iy[i] * iy[probe]);
    }
    for (int i = 0; i < system.n_input_spins; ++i) {
        for (int j = i + 1; j < system.n_input_spins; ++j) {
            const double w = two_pi * system.coupling_ij(i, j);
            if (w != 0.0)
                h += w * (2.0 * iz[i] * iz[j] - iy[i] * iy[j] - ix[i] * ix[j]);
        }
    }
    return h;
}

/// Draws a coupling set with magnitudes uniform in [2, 30] kHz and fair-coin
/// signs. Draw order: d_{i,C} by site, then d_{i,j} by (i, j) lexicographic.
/// The values are a stand-in for orientation-dependent crystal couplings, not
/// a fit to any molecule.
inline SpinSystem random_spin_system(int n_input_spins, std::uint64_t coupling_seed)
{
    if (n_input_spins < 0)
        throw std::invalid_argument("random_spin_system: n_input_spins must be >= 0");
    Rng rng(coupling_seed);
    constexpr double lo_hz = 2.0e3;
    constexpr double hi_hz = 30.0e3;
    const auto draw = [&rng] {
        const double magnitude = rng.uniform(lo_hz, hi_hz);
        return rng.coin() ? magnitude : -magnitude;
    };

    SpinSystem system;
    system.n_input_spins = n_input_spins;
    for (int i = 0; i < n_input_spins; ++i)
        system.couplings_ic_hz.push_back(draw());
    for (int i = 0; i < n_input_spins; ++i)
        for (int j = i + 1; j < n_input_spins; ++j)
            system.couplings_ij_hz.push_back(draw());
    system.validate();
    return system;
}

/// Coupling seed for the stock 4+1 system. Frozen so that the shipped
/// benchmark results are reproducible; see the default config echo.
inline constexpr std::uint64_t kDefaultCouplingSeed = 2;

inline constexpr int kDefaultInputSpins = 4;

inline SpinSystem default_spin_system()
{
    return random_spin_system(kDefaultInputSpins, kDefaultCouplingSeed);
}

}  // namespace qrsim
