#include "core/encoding.hpp"
#include "core/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace symqfi;
using namespace symqfi::encoding;
using oracle::max_abs;
using Eigen::MatrixXcd;

namespace {

const double kPi = 3.14159265358979323846;

std::vector<double> random_thetas(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    std::vector<double> out;
    for(int i = 0; i < count; ++i) out.push_back(u(rng));
    return out;
}

std::vector<GeneratorModel> generators() {
    return {GeneratorModel::linear_phase(), GeneratorModel::rotating(), GeneratorModel::constant(0.3, 0.2, -0.7, 0.4)};
}

} // namespace

TEST_CASE("generator names") {
    CHECK(GeneratorModel::from_name("rotating").name() == "rotating");
    CHECK(GeneratorModel::from_name("linear-phase").coefficients(0.8).g[0] == doctest::Approx(0.4));
    CHECK(GeneratorModel::from_name("linear_phase").coefficients(0.8).dg[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)GeneratorModel::from_name("sideways"), InvalidArgument);
}

TEST_CASE("single-qubit unitary matches the matrix exponential") {
    for(const auto &gen : generators())
        for(double t : random_thetas(1, 20)) {
            const auto c = gen.coefficients(t);
            Eigen::Matrix2cd g = c.g0 * oracle::pauli('i') + c.g[0] * oracle::pauli('x') + c.g[1] * oracle::pauli('y') +
                                 c.g[2] * oracle::pauli('z');
            const auto [u, du] = single_qubit_unitary(gen, t);
            CHECK(max_abs(u - oracle::expm_minus_i(g)) < 1e-13);
            CHECK(max_abs(u.adjoint() * u - Eigen::Matrix2cd::Identity()) < 1e-14);
        }
}

TEST_CASE("analytic dU against central differences") {
    std::vector<double> thetas = random_thetas(2, 20);
    thetas.push_back(0.0);    // |g| = 0 for linear phase
    thetas.push_back(2e-4);   // inside the small-angle series
    thetas.push_back(1.5e-3); // just outside it
    for(const auto &gen : generators())
        for(double t : thetas) {
            const auto du = single_qubit_unitary(gen, t).du;
            const MatrixXcd fd = oracle::central_difference(
                [&](double x) { return MatrixXcd(single_qubit_unitary(gen, x).u); }, t, 1e-6);
            CAPTURE(gen.name());
            CAPTURE(t);
            CHECK(max_abs(du - fd) < 1e-8);
        }
}

TEST_CASE("local K_theta examples") {
    const Eigen::Matrix2cd k = local_k_theta(GeneratorModel::linear_phase(), 1.3);
    CHECK(max_abs(k - 0.5 * oracle::pauli('x')) < 1e-14);

    // Rotating: traceless with seminorm 2 sin(1) for every theta.
    for(double t : random_thetas(3, 10)) {
        const Eigen::Matrix2cd kr = local_k_theta(GeneratorModel::rotating(), t);
        CHECK(max_abs(kr - kr.adjoint()) < 1e-14);
        CHECK(kr.trace().real() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(seminorm(kr) == doctest::Approx(2.0 * std::sin(1.0)).epsilon(1e-12));
    }

    const GeneratorModel c = GeneratorModel::constant(0.2, 0.0, 0.0, 0.9);
    CHECK(max_abs(local_k_theta(c, 0.2)) == 0.0);
    CHECK(max_abs(single_qubit_unitary(c, 0.2).du) == 0.0);
}

TEST_CASE("seminorm and bounds") {
    MatrixXcd d = MatrixXcd::Zero(3, 3);
    d.diagonal() << -1.0, 0.5, 2.0;
    CHECK(seminorm(d) == doctest::Approx(3.0));
    MatrixXcd bad = MatrixXcd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS((void)seminorm(bad), InvalidArgument);

    CHECK(qfi_upper_bound(GeneratorModel::linear_phase(), 0.4, 10) == doctest::Approx(100.0));
    CHECK(qfi_upper_bound(GeneratorModel::rotating(), 2.2, 7) == doctest::Approx(rotating_envelope(7)).epsilon(1e-12));
    CHECK(rotating_envelope(3) == doctest::Approx(std::pow(6.0 * std::sin(1.0), 2)));
}

TEST_CASE("collective operator is the projected site sum") {
    Eigen::Matrix2cd a;
    a << 0.3, Complex(0.1, -0.4), Complex(0.1, 0.4), -0.6;
    for(int n = 1; n <= 6; ++n) {
        MatrixXcd full = MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
        for(int q = 0; q < n; ++q) full += oracle::site_operator(a, q, n);
        CHECK(max_abs(collective_operator(a, n).matrix() - oracle::project(full, n)) < 1e-13);
    }
}

TEST_CASE("partition sum equals the projected generator exponential") {
    for(const auto &gen : {GeneratorModel::linear_phase(), GeneratorModel::rotating()})
        for(int n = 1; n <= 8; ++n)
            for(double t : random_thetas(4 + n, 20)) {
                const CollectiveEncoding e = collective_encoding(gen, t, n);
                CHECK(e.theta == t);
                CHECK(max_abs(e.c - oracle::encoding_by_expm(gen, t, n)) < 1e-12);
            }
}

TEST_CASE("partition sum against the full tensor product") {
    for(double t : random_thetas(5, 3)) {
        const auto [u, du] = single_qubit_unitary(GeneratorModel::rotating(), t);
        for(int n = 1; n <= 6; ++n) {
            MatrixXcd full = MatrixXcd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
            for(int q = 0; q < n; ++q) full = full * oracle::site_operator(u, q, n);
            const CollectiveEncoding e = collective_matrix_elements(u, du, n);
            CHECK(max_abs(e.c - oracle::project(full, n)) < 1e-13);
        }
    }
}

TEST_CASE("collective block is unitary up to N = 100") {
    for(const auto &gen : {GeneratorModel::linear_phase(), GeneratorModel::rotating()})
        for(int n : {1, 2, 10, 33, 64, 100})
            for(double t : random_thetas(6, 2)) {
                const CollectiveEncoding e = collective_encoding(gen, t, n);
                CAPTURE(n);
                CHECK(max_abs(e.c.adjoint() * e.c - MatrixXcd::Identity(n + 1, n + 1)) < 1e-10);
                CHECK(std::abs(e.c(0, 0) - std::pow(single_qubit_unitary(gen, t).u(0, 0), n)) < 1e-10);
            }
}

TEST_CASE("analytic dC against central differences") {
    for(const auto &gen : {GeneratorModel::linear_phase(), GeneratorModel::rotating()})
        for(int n : {1, 3, 12, 25, 40})
            for(double t : random_thetas(7, 3)) {
                const CollectiveEncoding e = collective_encoding(gen, t, n);
                const MatrixXcd fd =
                    oracle::central_difference([&](double x) { return collective_encoding(gen, x, n).c; }, t, 1e-6);
                CAPTURE(n);
                CHECK(max_abs(e.dc - fd) < 1e-7);
            }
}

TEST_CASE("double and quad evaluation agree where double is safe") {
    for(double t : random_thetas(8, 5)) {
        const auto [u, du] = single_qubit_unitary(GeneratorModel::rotating(), t);
        for(int n : {5, 20, 30}) {
            const auto d = collective_matrix_elements(u, du, n, SumPrecision::double_precision);
            const auto q = collective_matrix_elements(u, du, n, SumPrecision::quad_precision);
            CHECK(max_abs(d.c - q.c) < 1e-12);
            CHECK(max_abs(d.dc - q.dc) < 1e-11);
        }
    }
}

TEST_CASE("non-unitary input is rejected") {
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity() * 1.001;
    CHECK_THROWS_AS((void)collective_matrix_elements(u, Eigen::Matrix2cd::Zero(), 3), InvalidArgument);
    CHECK_THROWS_AS((void)collective_matrix_elements(Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Zero(), 0),
                    InvalidArgument);
}
