#include "core/qfi.hpp"

#include "core/error.hpp"

#include <cmath>
#include <string>

namespace symqfi::qfi {

namespace {

QfiResult finish(double raw, Route route, double theta, int n_qubits) {
    if(!std::isfinite(raw)) throw NumericalError("non-finite QFI");
    QfiResult r{raw, route, theta, n_qubits, 0.0};
    if(raw < 0.0) {
        if(raw < -kClampTolerance)
            throw NumericalError("QFI evaluated to " + std::to_string(raw) + ", below the clamping tolerance");
        r.value = 0.0;
        r.clamped_residual = -raw;
    }
    return r;
}

// Applies the 2x2 matrix m to qubit q of a 2^N state vector in place.
void apply_site(Eigen::VectorXcd &psi, const encoding::Matrix2c &m, int q) {
    const Eigen::Index stride = Eigen::Index{1} << q;
    for(Eigen::Index base = 0; base < psi.size(); base += 2 * stride) {
        for(Eigen::Index j = base; j < base + stride; ++j) {
            const Complex a0 = psi(j), a1 = psi(j + stride);
            psi(j) = m(0, 0) * a0 + m(0, 1) * a1;
            psi(j + stride) = m(1, 0) * a0 + m(1, 1) * a1;
        }
    }
}

} // namespace

const char *route_name(Route route) noexcept {
    switch(route) {
    case Route::symmetric: return "symmetric";
    case Route::variance: return "variance";
    case Route::full_oracle: return "full_oracle";
    }
    return "unknown";
}

QfiResult qfi_symmetric(const SymState &state, const encoding::CollectiveEncoding &enc) {
    const Eigen::VectorXcd &alpha = state.amplitudes();
    if(enc.c.rows() != alpha.size() || enc.c.cols() != alpha.size() || enc.dc.rows() != alpha.size() ||
       enc.dc.cols() != alpha.size())
        throw InvalidArgument("qfi_symmetric: state of dimension " + std::to_string(alpha.size()) +
                              " does not match encoding of dimension " + std::to_string(enc.c.rows()));
    const Eigen::VectorXcd psi = enc.c * alpha;
    const Eigen::VectorXcd dpsi = enc.dc * alpha;
    const double raw = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
    return finish(raw, Route::symmetric, enc.theta, state.n_qubits());
}

QfiResult qfi_variance(const SymState &state, const SymOperator &k_collective) {
    const Eigen::VectorXcd &alpha = state.amplitudes();
    if(k_collective.dim() != alpha.size())
        throw InvalidArgument("qfi_variance: state of dimension " + std::to_string(alpha.size()) +
                              " does not match operator of dimension " + std::to_string(k_collective.dim()));
    const Eigen::VectorXcd k_alpha = k_collective.matrix() * alpha;
    const double mean = alpha.dot(k_alpha).real();
    const double raw = 4.0 * (k_alpha.squaredNorm() - mean * mean);
    return finish(raw, Route::variance, 0.0, state.n_qubits());
}

QfiResult qfi_full_oracle(const SymState &state, const encoding::GeneratorModel &gen, double theta) {
    const int n = state.n_qubits();
    if(n > kFullOracleMaxQubits)
        throw InvalidArgument("qfi_full_oracle supports N <= " + std::to_string(kFullOracleMaxQubits) + ", got " +
                              std::to_string(n));
    const auto [u, du] = encoding::single_qubit_unitary(gen, theta);
    const Eigen::VectorXcd psi0 = symspace::embed_full(state);

    Eigen::VectorXcd psi = psi0;
    for(int q = 0; q < n; ++q) apply_site(psi, u, q);

    Eigen::VectorXcd dpsi = Eigen::VectorXcd::Zero(psi0.size());
    for(int hit = 0; hit < n; ++hit) {
        Eigen::VectorXcd term = psi0;
        for(int q = 0; q < n; ++q) apply_site(term, q == hit ? du : u, q);
        dpsi += term;
    }
    const double raw = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
    return finish(raw, Route::full_oracle, theta, n);
}

double cramer_rao(double fisher) {
    if(!(fisher > 0.0)) throw InvalidArgument("Cramer-Rao bound needs a positive Fisher information");
    return 1.0 / std::sqrt(fisher);
}

double tradeoff_bound(int n_qubits, double gap) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    if(!(gap >= 0.0)) throw InvalidArgument("gap must be non-negative");
    const double n2 = static_cast<double>(n_qubits) * n_qubits;
    return n2 - n2 * (n2 - 4.0) * gap / 24.0;
}

} // namespace symqfi::qfi
