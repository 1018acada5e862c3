#pragma once

// Reference constructions used only by tests. They deliberately avoid the
// library's own shortcuts: explicit 2^N matrices, ordered site tuples, and
// eigendecomposition-based matrix exponentials.

#include "core/encoding.hpp"
#include "core/symspace.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline Eigen::Matrix2cd pauli(char axis) {
    Eigen::Matrix2cd s;
    const Complex i{0.0, 1.0};
    if(axis == 'x') s << 0.0, 1.0, 1.0, 0.0;
    else if(axis == 'y') s << 0.0, -i, i, 0.0;
    else if(axis == 'z') s << 1.0, 0.0, 0.0, -1.0;
    else s = Eigen::Matrix2cd::Identity();
    return s;
}

// Kronecker product with qubit q at bit q of the basis index (qubit 0 least significant).
inline MatrixXcd site_operator(const Eigen::Matrix2cd &op, int q, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for(Eigen::Index col = 0; col < dim; ++col) {
        const int bit = static_cast<int>((col >> q) & 1);
        for(int r = 0; r < 2; ++r) {
            const Eigen::Index row = (col & ~(Eigen::Index{1} << q)) | (Eigen::Index{r} << q);
            out(row, col) += op(r, bit);
        }
    }
    return out;
}

inline int popcount(unsigned long long x) { return __builtin_popcountll(x); }

inline double binomial(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

// |D_N^n>: uniform superposition of basis states with n set bits.
inline VectorXcd dicke_full(int n, int exc) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    VectorXcd v = VectorXcd::Zero(dim);
    for(Eigen::Index j = 0; j < dim; ++j)
        if(popcount(static_cast<unsigned long long>(j)) == exc) v(j) = 1.0;
    return v / std::sqrt(binomial(n, exc));
}

// V: (N+1) x 2^N isometry with rows <D_N^n|.
inline MatrixXcd dicke_isometry(int n) {
    MatrixXcd v(n + 1, Eigen::Index{1} << n);
    for(int e = 0; e <= n; ++e) v.row(e) = dicke_full(n, e).adjoint();
    return v;
}

inline MatrixXcd project(const MatrixXcd &full, int n) {
    const MatrixXcd v = dicke_isometry(n);
    return v * full * v.adjoint();
}

// Collective S_axis in the full space.
inline MatrixXcd collective_full(char axis, int n) {
    MatrixXcd out = MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for(int q = 0; q < n; ++q) out += 0.5 * site_operator(pauli(axis), q, n);
    return out;
}

// S_abc from its definition: sum over ordered k-tuples of distinct sites, the
// first a carrying sigma_x/2, the next b sigma_y/2 and the last c sigma_z/2,
// divided by k!. Each unordered placement is counted a! b! c! times.
inline MatrixXcd correlator_full(int n, int a, int b, int c) {
    const int k = a + b + c;
    const Eigen::Index dim = Eigen::Index{1} << n;
    MatrixXcd total = MatrixXcd::Zero(dim, dim);
    std::vector<int> sites;
    std::vector<bool> used(n, false);
    std::function<void()> rec = [&] {
        if(static_cast<int>(sites.size()) == k) {
            MatrixXcd term = MatrixXcd::Identity(dim, dim);
            for(int t = 0; t < k; ++t) {
                const char axis = t < a ? 'x' : (t < a + b ? 'y' : 'z');
                term = term * site_operator(0.5 * pauli(axis), sites[t], n);
            }
            total += term;
            return;
        }
        for(int q = 0; q < n; ++q) {
            if(used[q]) continue;
            used[q] = true;
            sites.push_back(q);
            rec();
            sites.pop_back();
            used[q] = false;
        }
    };
    rec();
    return total / std::tgamma(k + 1.0);
}

// exp(-i H) for Hermitian H through its eigendecomposition.
inline MatrixXcd expm_minus_i(const MatrixXcd &h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es((h + h.adjoint()) * 0.5);
    VectorXcd phases(es.eigenvalues().size());
    for(Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// N g0 I + 2 (g . S) on the symmetric subspace, built from test-side collective spins.
inline MatrixXcd projected_generator(const symqfi::encoding::GeneratorModel &gen, double theta, int n) {
    const auto k = gen.coefficients(theta);
    MatrixXcd g = n * k.g0 * MatrixXcd::Identity(n + 1, n + 1);
    const char axes[3] = {'x', 'y', 'z'};
    for(int mu = 0; mu < 3; ++mu)
        if(k.g[mu] != 0.0) g += 2.0 * k.g[mu] * project(collective_full(axes[mu], n), n);
    return g;
}

inline MatrixXcd encoding_by_expm(const symqfi::encoding::GeneratorModel &gen, double theta, int n) {
    return expm_minus_i(projected_generator(gen, theta, n));
}

// Central difference of a matrix-valued function of theta.
template <class F>
MatrixXcd central_difference(F &&f, double theta, double h) {
    return (f(theta + h) - f(theta - h)) / (2.0 * h);
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline VectorXcd random_amplitudes(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    VectorXcd v(n + 1);
    for(Eigen::Index i = 0; i <= n; ++i) v(i) = {normal(rng), normal(rng)};
    return v / v.norm();
}

// Pure-state QFI 4 (<d psi|d psi> - |<psi|d psi>|^2) with |psi(theta)> = U^{(x)N} |psi0>,
// where the derivative is taken by central differences on the full 2^N vector.
inline double qfi_full_finite_difference(const VectorXcd &psi0_full, const symqfi::encoding::GeneratorModel &gen,
                                         double theta, int n, double h = 1e-5) {
    auto evolve = [&](double t) {
        const auto [u, du] = symqfi::encoding::single_qubit_unitary(gen, t);
        MatrixXcd full = MatrixXcd::Identity(1, 1);
        for(int q = n - 1; q >= 0; --q) {
            MatrixXcd next(full.rows() * 2, full.cols() * 2);
            for(int r = 0; r < 2; ++r)
                for(int c = 0; c < 2; ++c) next.block(r * full.rows(), c * full.cols(), full.rows(), full.cols()) = u(r, c) * full;
            full = next;
        }
        return VectorXcd(full * psi0_full);
    };
    const VectorXcd psi = evolve(theta);
    const VectorXcd dpsi = (evolve(theta + h) - evolve(theta - h)) / (2.0 * h);
    return 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
}

} // namespace oracle
