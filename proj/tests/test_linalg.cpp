#include <catch2/catch.hpp>

#include "test_helpers.hpp"

using namespace qrsim;
using testutil::random_complex;
using testutil::random_hermitian;
using testutil::random_real;
using testutil::random_real_vector;

TEST_CASE("kron basics")
{
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);

    SECTION("identity times identity")
    {
        REQUIRE(max_abs(kron(i2, i2) - ComplexMatrix::Identity(4, 4)) == 0.0);
    }

    SECTION("sigma_z tensor sigma_z is diag(1,-1,-1,1)")
    {
        const ComplexMatrix zz = kron(pauli(Axis::Z), pauli(Axis::Z));
        ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
        expected.diagonal() << Complex(1, 0), Complex(-1, 0), Complex(-1, 0), Complex(1, 0);
        REQUIRE(max_abs(zz - expected) == 0.0);
    }

    SECTION("dimension arithmetic")
    {
        const ComplexMatrix a = random_complex(2, 2, 11);
        const ComplexMatrix b = random_complex(4, 4, 12);
        const ComplexMatrix k = kron(a, b);
        REQUIRE(k.rows() == 8);
        REQUIRE(k.cols() == 8);
    }
}

TEST_CASE("kron mixed-product property")
{
    const ComplexMatrix a = random_complex(2, 2, 21);
    const ComplexMatrix b = random_complex(4, 4, 22);
    const ComplexMatrix c = random_complex(2, 2, 23);
    const ComplexMatrix d = random_complex(4, 4, 24);

    const ComplexMatrix lhs = kron(a, b) * kron(c, d);
    const ComplexMatrix rhs = kron(ComplexMatrix(a * c), ComplexMatrix(b * d));
    REQUIRE(max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("herm_eig on simple matrices")
{
    SECTION("diagonal")
    {
        ComplexMatrix a = ComplexMatrix::Zero(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = 3.0;
        const EigDecomposition eig = herm_eig(a);
        REQUIRE(eig.eigenvalues(0) == Approx(1.0));
        REQUIRE(eig.eigenvalues(1) == Approx(3.0));
    }

    SECTION("sigma_x")
    {
        const EigDecomposition eig = herm_eig(pauli(Axis::X));
        REQUIRE(eig.eigenvalues(0) == Approx(-1.0));
        REQUIRE(eig.eigenvalues(1) == Approx(1.0));
    }
}

TEST_CASE("herm_eig reconstruction and orthonormality on random 32x32")
{
    const ComplexMatrix a = random_hermitian(32, 31);
    const EigDecomposition eig = herm_eig(a);

    REQUIRE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));

    const ComplexMatrix reconstructed = eig.eigenvectors *
                                        eig.eigenvalues.cast<Complex>().asDiagonal() *
                                        eig.eigenvectors.adjoint();
    REQUIRE(max_abs(reconstructed - a) < 1e-10 * max_abs(a));

    const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
    REQUIRE(max_abs(gram - ComplexMatrix::Identity(32, 32)) < 1e-10);

    // Eigenvalue sum equals the trace.
    REQUIRE(eig.eigenvalues.sum() == Approx(a.trace().real()).margin(1e-10 * 32));
}

TEST_CASE("herm_eig rejects non-Hermitian input with a diagnostic norm")
{
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = Complex(1.0, 0.0);  // missing the conjugate partner
    REQUIRE_THROWS_WITH(herm_eig(a), Catch::Contains("not Hermitian"));
    REQUIRE_THROWS_AS(herm_eig(random_complex(3, 4, 7)), std::invalid_argument);
}

TEST_CASE("unitary_from_hamiltonian special cases")
{
    SECTION("t = 0 gives the identity")
    {
        const ComplexMatrix h = random_hermitian(8, 41);
        REQUIRE(max_abs(unitary_from_hamiltonian(h, 0.0) - ComplexMatrix::Identity(8, 8)) <
                1e-14);
    }

    SECTION("diagonal Hamiltonian gives diagonal phases")
    {
        const double omega = 2.0 * std::numbers::pi * 5.0e3;
        const double t = 1.7e-5;
        ComplexMatrix h = ComplexMatrix::Zero(2, 2);
        h(0, 0) = 0.5 * omega;
        h(1, 1) = -0.5 * omega;
        const ComplexMatrix u = unitary_from_hamiltonian(h, t);
        REQUIRE(std::abs(u(0, 0) - std::exp(Complex(0, -omega * t / 2))) < 1e-12);
        REQUIRE(std::abs(u(1, 1) - std::exp(Complex(0, omega * t / 2))) < 1e-12);
        REQUIRE(std::abs(u(0, 1)) < 1e-15);
    }

    SECTION("rejects non-finite time")
    {
        REQUIRE_THROWS_AS(
            unitary_from_hamiltonian(pauli(Axis::X), std::numeric_limits<double>::infinity()),
            std::invalid_argument);
    }
}

TEST_CASE("unitary_from_hamiltonian matches the Taylor-series oracle")
{
    // Couplings on the tens-of-kHz scale like the stock system.
    const ComplexMatrix h = 2.0 * std::numbers::pi * 2.0e4 * random_hermitian(32, 51);
    const double t = 10.0e-6;

    const ComplexMatrix u = unitary_from_hamiltonian(h, t);
    REQUIRE(max_abs(u - testutil::taylor_expm(h, t)) < 1e-8);
    REQUIRE(unitarity_error(u) < 1e-10);
}

TEST_CASE("unitary composition U(t1) U(t2) = U(t1 + t2)")
{
    const ComplexMatrix h = 2.0 * std::numbers::pi * 1.0e4 * random_hermitian(16, 61);
    const double t1 = 3.0e-6;
    const double t2 = 8.0e-6;
    const EigDecomposition eig = herm_eig(h);
    const ComplexMatrix lhs = unitary_from_eig(eig, t1) * unitary_from_eig(eig, t2);
    REQUIRE(max_abs(lhs - unitary_from_eig(eig, t1 + t2)) < 1e-9);
}

TEST_CASE("least_squares_pinv exact and minimum-norm cases")
{
    SECTION("identity design returns the targets")
    {
        const RealMatrix design = RealMatrix::Identity(3, 3);
        RealVector targets(3);
        targets << 1.0, 2.0, 3.0;
        const LeastSquaresSolution sol = least_squares_pinv(design, targets);
        REQUIRE(max_abs(RealMatrix(sol.weights - targets)) < 1e-12);
        REQUIRE(sol.effective_rank == 3);
    }

    SECTION("rank-1 design yields the minimum-norm solution")
    {
        // Any w with w1 + w2 = 1 fits exactly; (0.5, 0.5) has minimum norm.
        RealMatrix design(2, 2);
        design << 1.0, 1.0, 2.0, 2.0;
        RealVector targets(2);
        targets << 1.0, 2.0;
        const LeastSquaresSolution sol = least_squares_pinv(design, targets);
        REQUIRE(sol.weights(0) == Approx(0.5).margin(1e-12));
        REQUIRE(sol.weights(1) == Approx(0.5).margin(1e-12));
        REQUIRE(sol.effective_rank == 1);
    }

    SECTION("all-zero design gives zero weights and rank 0")
    {
        const RealMatrix design = RealMatrix::Zero(4, 3);
        const RealVector targets = random_real_vector(4, 71);
        const LeastSquaresSolution sol = least_squares_pinv(design, targets);
        REQUIRE(sol.effective_rank == 0);
        REQUIRE(sol.weights.norm() == 0.0);
    }

    SECTION("singular values come out descending")
    {
        const RealMatrix design = random_real(20, 8, 72);
        const LeastSquaresSolution sol =
            least_squares_pinv(design, random_real_vector(20, 73));
        for (Eigen::Index i = 1; i < sol.singular_values.size(); ++i)
            REQUIRE(sol.singular_values(i) <= sol.singular_values(i - 1));
    }

    SECTION("row/target mismatch is rejected")
    {
        REQUIRE_THROWS_AS(
            least_squares_pinv(random_real(4, 2, 74), random_real_vector(5, 75)),
            std::invalid_argument);
    }
}

TEST_CASE("pseudoinverse satisfies all four Penrose conditions")
{
    for (const auto& [rows, cols, seed] :
         {std::tuple{12, 7, 81}, std::tuple{44, 16, 82}, std::tuple{64, 44, 83}}) {
        const RealMatrix r = random_real(rows, cols, static_cast<std::uint64_t>(seed));
        const RealMatrix p = testutil::pinv_from_solver(r);

        REQUIRE(testutil::max_abs_real(r * p * r - r) < 1e-8);
        REQUIRE(testutil::max_abs_real(p * r * p - p) < 1e-8);
        REQUIRE(testutil::max_abs_real(RealMatrix(r * p) - RealMatrix((r * p).transpose())) <
                1e-8);
        REQUIRE(testutil::max_abs_real(RealMatrix(p * r) - RealMatrix((p * r).transpose())) <
                1e-8);
    }
}

TEST_CASE("rank-deficient design: RR+R recovers R")
{
    // Duplicate columns force rank deficiency.
    RealMatrix r(6, 4);
    r.leftCols(2) = random_real(6, 2, 91);
    r.col(2) = r.col(0);
    r.col(3) = 2.0 * r.col(1);
    const RealMatrix p = testutil::pinv_from_solver(r);
    REQUIRE(testutil::max_abs_real(r * p * r - r) < 1e-8);
}

TEST_CASE("trace_product")
{
    SECTION("maximally mixed state against sigma_z")
    {
        const ComplexMatrix rho = 0.5 * ComplexMatrix::Identity(2, 2);
        REQUIRE(trace_product(rho, pauli(Axis::Z)) == Approx(0.0).margin(1e-15));
    }

    SECTION("pure up state against sigma_z")
    {
        ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
        rho(0, 0) = 1.0;
        REQUIRE(trace_product(rho, pauli(Axis::Z)) == Approx(1.0));
    }

    SECTION("dimension mismatch is rejected")
    {
        REQUIRE_THROWS_AS(
            trace_product(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(4, 4)),
            std::invalid_argument);
    }
}
