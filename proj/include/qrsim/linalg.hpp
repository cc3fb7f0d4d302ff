#pragma once

// Dense complex-matrix kernels shared by the rest of the library: Kronecker
// products, Hermitian eigendecomposition, matrix exponentials of Hamiltonians,
// and minimum-norm least squares through a singular-value pseudoinverse.
//
// Everything here is a pure function of its inputs; values can be shared
// freely across threads.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qrsim/errors.hpp"

namespace qrsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Hermiticity acceptance threshold on ||A - A^H||_max.
inline constexpr double kHermitianTol = 1e-12;

/// Max-norm max|a_ij| of any real or complex matrix expression.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// ||A - A^H||_max; zero for exactly Hermitian matrices.
inline double hermiticity_error(const ComplexMatrix& a)
{
    return max_abs(a - a.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol)
{
    return a.rows() == a.cols() && hermiticity_error(a) < tol;
}

/// ||U^H U - I||_max, the departure from unitarity.
inline double unitarity_error(const ComplexMatrix& u)
{
    return max_abs(ComplexMatrix(u.adjoint() * u) -
                   ComplexMatrix::Identity(u.cols(), u.cols()));
}

struct EigDecomposition {
    RealVector eigenvalues;      ///< real, ascending
    ComplexMatrix eigenvectors;  ///< unitary; column i pairs with eigenvalue i
};

/// Standard Kronecker product; result is (r_a*r_b) x (c_a*c_b).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues come out ascending
/// and the decomposition is deterministic for a fixed input.
inline EigDecomposition herm_eig(const ComplexMatrix& a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("herm_eig: matrix must be square");
    const double herr = hermiticity_error(a);
    if (!(herr < kHermitianTol)) {
        std::ostringstream msg;
        msg << "herm_eig: matrix is not Hermitian, ||A - A^H||_max = " << herr;
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw NumericError("herm_eig: eigendecomposition did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// U = V exp(-i diag(lambda) t) V^H from a precomputed decomposition, so one
/// decomposition serves many evolution times.
inline ComplexMatrix unitary_from_eig(const EigDecomposition& eig, double t_seconds)
{
    const Eigen::Index n = eig.eigenvalues.size();
    ComplexVector phases(n);
    for (Eigen::Index i = 0; i < n; ++i)
        phases(i) = std::exp(Complex(0.0, -eig.eigenvalues(i) * t_seconds));
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

/// U = e^{-iHt} for Hermitian H (angular-frequency units) and time t in
/// seconds; t may be zero or negative.
inline ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t_seconds)
{
    if (!std::isfinite(t_seconds))
        throw std::invalid_argument("unitary_from_hamiltonian: time must be finite");
    return unitary_from_eig(herm_eig(h), t_seconds);
}

struct LeastSquaresSolution {
    RealVector weights;
    Eigen::Index effective_rank = 0;
    RealVector singular_values;  ///< descending
    double tolerance_used = 0.0;
};

/// Minimum-norm least-squares solution of design * w ~= targets via SVD of
/// the design matrix. Singular values at or below the cutoff contribute
/// nothing; the automatic cutoff is max(rows, cols) * sigma_max * 1e-12.
/// An all-zero design yields zero weights and rank 0.
inline LeastSquaresSolution least_squares_pinv(const RealMatrix& design,
                                               const RealVector& targets,
                                               std::optional<double> tolerance = std::nullopt)
{
    if (design.rows() < 1 || design.cols() < 1)
        throw std::invalid_argument("least_squares_pinv: design matrix must be non-empty");
    if (design.rows() != targets.size()) {
        std::ostringstream msg;
        msg << "least_squares_pinv: design has " << design.rows() << " rows but "
            << targets.size() << " targets";
        throw std::invalid_argument(msg.str());
    }

    Eigen::BDCSVD<RealMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;

    LeastSquaresSolution out;
    out.singular_values = sv;
    out.tolerance_used = tolerance.value_or(
        static_cast<double>(std::max(design.rows(), design.cols())) * sigma_max * 1e-12);

    const RealVector uty = svd.matrixU().transpose() * targets;
    RealVector scaled = RealVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > out.tolerance_used) {
            scaled(i) = uty(i) / sv(i);
            ++out.effective_rank;
        }
    }
    out.weights = svd.matrixV() * scaled;
    return out;
}

/// Re(Tr(rho * obs)) for Hermitian rho and obs. The imaginary part of the
/// trace must vanish below 1e-10 or the call fails.
inline double trace_product(const ComplexMatrix& rho, const ComplexMatrix& obs)
{
    if (rho.rows() != obs.rows() || rho.cols() != obs.cols() || rho.rows() != rho.cols()) {
        std::ostringstream msg;
        msg << "trace_product: dimension mismatch (" << rho.rows() << "x" << rho.cols()
            << " vs " << obs.rows() << "x" << obs.cols() << ")";
        throw std::invalid_argument(msg.str());
    }
    // Tr(AB) = sum_{ij} A_ij B_ji without forming the product.
    const Complex tr = rho.cwiseProduct(obs.transpose()).sum();
    if (!(std::abs(tr.imag()) < 1e-10)) {
        std::ostringstream msg;
        msg << "trace_product: trace has non-negligible imaginary part " << tr.imag();
        throw NumericError(msg.str());
    }
    return tr.real();
}

}  // namespace qrsim
