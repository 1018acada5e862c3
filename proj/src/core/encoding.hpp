#pragma once

#include "core/symspace.hpp"

#include <array>
#include <functional>
#include <string>
#include <string_view>

namespace symqfi::encoding {

using Matrix2c = Eigen::Matrix2cd;

// G_theta = g0 I + g . sigma, together with its theta-derivative.
struct GeneratorCoefficients {
    double g0 = 0.0;
    std::array<double, 3> g{};
    double dg0 = 0.0;
    std::array<double, 3> dg{};
};

// Single-qubit parameter-dependent generator. Hermitian by construction since
// all coefficients are real.
class GeneratorModel {
public:
    using Function = std::function<GeneratorCoefficients(double theta)>;

    GeneratorModel(std::string name, Function coefficients);

    // G = theta sigma_x / 2.
    static GeneratorModel linear_phase();
    // G = cos(theta) sigma_z + sin(theta) sigma_x.
    static GeneratorModel rotating();
    // theta-independent G, so dU = 0.
    static GeneratorModel constant(double g0, double gx, double gy, double gz);
    // "linear-phase" (or "linear_phase") and "rotating".
    static GeneratorModel from_name(std::string_view name);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] GeneratorCoefficients coefficients(double theta) const { return coefficients_(theta); }

private:
    std::string name_;
    Function coefficients_;
};

struct SingleQubitUnitary {
    Matrix2c u;
    Matrix2c du;
};

// Closed-form exp(-i G_theta) and its analytic theta-derivative.
[[nodiscard]] SingleQubitUnitary single_qubit_unitary(const GeneratorModel &gen, double theta);

// K_theta = i (dU) U^dagger.
[[nodiscard]] Matrix2c local_k_theta(const GeneratorModel &gen, double theta);

// lambda_max - lambda_min of a Hermitian matrix. Throws InvalidArgument otherwise.
[[nodiscard]] double seminorm(const Eigen::MatrixXcd &a);

// N^2 ||K_theta||_sn^2.
[[nodiscard]] double qfi_upper_bound(const GeneratorModel &gen, double theta, int n_qubits);

// theta-independent envelope [2 sin(1) N]^2 of the rotating generator.
[[nodiscard]] double rotating_envelope(int n_qubits);

// Projection of sum_i A^(i) on the symmetric subspace for a 2x2 Hermitian A =
// a0 I + a . sigma, i.e. N a0 I + 2 (a_x S_x + a_y S_y + a_z S_z).
[[nodiscard]] SymOperator collective_operator(const Matrix2c &local, int n_qubits);

// Dicke-basis block of U^{(x)N} and its theta-derivative.
struct CollectiveEncoding {
    Eigen::MatrixXcd c;
    Eigen::MatrixXcd dc;
    double theta = 0.0;
};

// C_mn = <D^m| U^{(x)N} |D^n> by the partition sum over occupation vectors
// (w0, w1, w2, w3) of the four matrix entries (U_00, U_01, U_10, U_11):
//
//     C_mn = sum_w  N! / (w0! w1! w2! w3!) / sqrt(binom(N,m) binom(N,n))
//                   U_00^w0 U_01^w1 U_10^w2 U_11^w3
//
// restricted to w2 + w3 = m and w1 + w3 = n, so w3 is the only free index.
// dC follows from the product rule. 0^0 is taken as 1.
//
// Entries are evaluated in double first; if the terms of any entry are large
// enough for cancellation to cost more than ~1e-13 absolute, the matrix is
// re-evaluated in quad precision.
//
// Throws InvalidArgument if U is not unitary within 1e-9.
[[nodiscard]] CollectiveEncoding collective_matrix_elements(const Matrix2c &u, const Matrix2c &du, int n_qubits);

[[nodiscard]] CollectiveEncoding collective_encoding(const GeneratorModel &gen, double theta, int n_qubits);

// Diagnostics of the last evaluation route (for tests and benchmarks).
enum class SumPrecision { double_precision, quad_precision };
[[nodiscard]] CollectiveEncoding collective_matrix_elements(const Matrix2c &u, const Matrix2c &du, int n_qubits,
                                                            SumPrecision forced);

} // namespace symqfi::encoding
