#include "core/error.hpp"
#include "core/qfi.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace symqfi;
using namespace symqfi::encoding;
using oracle::max_abs;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

const double kPi = 3.14159265358979323846;

SymState ghz_z(int n) {
    VectorXcd v = VectorXcd::Zero(n + 1);
    v(0) = v(n) = 1.0 / std::sqrt(2.0);
    return SymState(n, v);
}

// GHZ along x: the z-GHZ rotated by exp(-i pi/2 S_y), built from test-side spins.
SymState ghz_x(int n) {
    const MatrixXcd sy = oracle::project(oracle::collective_full('y', n), n);
    const VectorXcd v = oracle::expm_minus_i(0.5 * kPi * sy) * ghz_z(n).amplitudes();
    return SymState::normalized(n, v);
}

double linear_phase_qfi(const SymState &s, double theta = 0.7) {
    return qfi::qfi_symmetric(s, collective_encoding(GeneratorModel::linear_phase(), theta, s.n_qubits())).value;
}

double full_fd(const SymState &s, const GeneratorModel &gen, double theta) {
    return oracle::qfi_full_finite_difference(symspace::embed_full(s), gen, theta, s.n_qubits());
}

} // namespace

TEST_CASE("Dicke and product-state examples") {
    const SymState d42 = SymState::dicke(4, 2);
    CHECK(linear_phase_qfi(d42) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(qfi::qfi_variance(d42, symspace::one_body_operator(Axis::x, 4)).value == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(full_fd(d42, GeneratorModel::linear_phase(), 0.7) == doctest::Approx(12.0).epsilon(1e-7));

    const SymState zeros = SymState::dicke(6, 0);
    CHECK(linear_phase_qfi(zeros, 2.1) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(full_fd(zeros, GeneratorModel::linear_phase(), 2.1) == doctest::Approx(6.0).epsilon(1e-7));

    // An S_z eigenstate is stationary under S_z.
    CHECK(qfi::qfi_variance(SymState::dicke(5, 1), symspace::one_body_operator(Axis::z, 5)).value == 0.0);
}

TEST_CASE("GHZ states") {
    // Along the generator axis: Heisenberg limit N^2.
    CHECK(linear_phase_qfi(ghz_x(4)) == doctest::Approx(16.0).epsilon(1e-10));
    const auto r = qfi::qfi_full_oracle(ghz_x(6), GeneratorModel::linear_phase(), 0.3);
    CHECK(r.route == qfi::Route::full_oracle);
    CHECK(r.value == doctest::Approx(36.0).epsilon(1e-10));

    // Along z, S_x sees only the single-excitation variance N/4.
    CHECK(linear_phase_qfi(ghz_z(4)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(full_fd(ghz_z(4), GeneratorModel::linear_phase(), 0.7) == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("Dicke closed form N(N/2+1)") {
    for(int n = 2; n <= 100; n += 2) {
        const SymState d = SymState::dicke(n, n / 2);
        const double expected = n * (n / 2.0 + 1.0);
        CHECK(std::abs(qfi::qfi_variance(d, symspace::one_body_operator(Axis::x, n)).value - expected) <= 1e-10 * expected);
        CHECK(std::abs(linear_phase_qfi(d) - expected) <= 1e-8 * expected);
    }
    for(int n = 2; n <= 8; n += 2)
        CHECK(full_fd(SymState::dicke(n, n / 2), GeneratorModel::linear_phase(), 1.1) ==
              doctest::Approx(n * (n / 2.0 + 1.0)).epsilon(1e-7));
}

TEST_CASE("three routes agree on random states") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for(const auto &gen : {GeneratorModel::linear_phase(), GeneratorModel::rotating()})
        for(int n = 1; n <= 8; ++n)
            for(int rep = 0; rep < 10; ++rep) {
                const SymState s(n, oracle::random_amplitudes(n, rng));
                const double t = angle(rng);
                const CollectiveEncoding enc = collective_encoding(gen, t, n);
                const double sym = qfi::qfi_symmetric(s, enc).value;
                const SymState evolved = SymState::normalized(n, enc.c * s.amplitudes());
                const double var = qfi::qfi_variance(evolved, collective_operator(local_k_theta(gen, t), n)).value;
                const double full = qfi::qfi_full_oracle(s, gen, t).value;
                CAPTURE(n);
                CAPTURE(gen.name());
                CHECK(std::abs(sym - var) <= 1e-9 * std::max(1.0, var));
                CHECK(std::abs(sym - full) <= 1e-9 * std::max(1.0, full));
                CHECK(sym <= qfi_upper_bound(gen, t, n) * (1 + 1e-12));
                if(n <= 5) CHECK(std::abs(sym - full_fd(s, gen, t)) <= 1e-6 * std::max(1.0, sym));
            }
}

TEST_CASE("result metadata and argument checks") {
    const SymState s = SymState::dicke(3, 1);
    const auto r = qfi::qfi_symmetric(s, collective_encoding(GeneratorModel::rotating(), 0.25, 3));
    CHECK(r.theta == 0.25);
    CHECK(r.n_qubits == 3);
    CHECK(r.route == qfi::Route::symmetric);
    CHECK(std::string(qfi::route_name(qfi::Route::variance)) == "variance");

    CHECK_THROWS_AS((void)qfi::qfi_symmetric(s, collective_encoding(GeneratorModel::rotating(), 0.25, 4)), InvalidArgument);
    CHECK_THROWS_AS((void)qfi::qfi_variance(s, symspace::one_body_operator(Axis::x, 2)), InvalidArgument);
    CHECK_THROWS_AS((void)qfi::qfi_full_oracle(SymState::dicke(11, 0), GeneratorModel::rotating(), 0.1), InvalidArgument);
}

TEST_CASE("negative rounding residuals") {
    const SymState s = SymState::dicke(2, 0);
    const MatrixXcd id = MatrixXcd::Identity(3, 3);
    // F = 4 (1 - (1+eps)^2) for C = (1+eps) I, dC = i I.
    CollectiveEncoding tiny{(1.0 + 1e-11) * id, Complex(0.0, 1.0) * id, 0.0};
    const auto r = qfi::qfi_symmetric(s, tiny);
    CHECK(r.value == 0.0);
    CHECK(r.clamped_residual > 0.0);
    CHECK(r.clamped_residual < 1e-9);

    CollectiveEncoding large{1.0001 * id, Complex(0.0, 1.0) * id, 0.0};
    CHECK_THROWS_AS((void)qfi::qfi_symmetric(s, large), NumericalError);
}

TEST_CASE("Cramer-Rao and tradeoff bounds") {
    CHECK(qfi::cramer_rao(4.0) == doctest::Approx(0.5));
    CHECK(qfi::cramer_rao(100.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS((void)qfi::cramer_rao(0.0), InvalidArgument);
    CHECK_THROWS_AS((void)qfi::cramer_rao(-1.0), InvalidArgument);

    CHECK(qfi::tradeoff_bound(10, 0.0) == doctest::Approx(100.0));
    CHECK(qfi::tradeoff_bound(10, 0.1) == doctest::Approx(60.0));
    // The LMG-type state sits on the bound: gap 12/(N(N+2)), QFI N(N/2+1).
    for(int n = 4; n <= 40; n += 2)
        CHECK(qfi::tradeoff_bound(n, 12.0 / (n * (n + 2.0))) == doctest::Approx(n * (n / 2.0 + 1.0)).epsilon(1e-12));
    CHECK(qfi::tradeoff_bound(4, 10.0) < 0.0);
    CHECK_THROWS_AS((void)qfi::tradeoff_bound(0, 0.1), InvalidArgument);
    CHECK_THROWS_AS((void)qfi::tradeoff_bound(4, -0.1), InvalidArgument);
}
