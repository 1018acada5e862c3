#include "core/hamiltonian.hpp"

#include "core/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace symqfi::hamiltonian {

namespace {

void phase_fix(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index best = 0;
    for(Eigen::Index i = 1; i < v.size(); ++i)
        if(std::abs(v(i)) > std::abs(v(best))) best = i;
    const double mag = std::abs(v(best));
    if(mag > 0.0) v *= std::conj(v(best)) / mag;
    v(best) = Complex{std::abs(v(best)), 0.0};
}

void check_not_flat(double lowest, double highest, double mean) {
    const double width = highest - lowest;
    const double magnitude = std::max({1.0, std::abs(lowest), std::abs(highest)});
    if(!(width > 1e-12 * magnitude) || !(mean - lowest > 1e-12 * width))
        throw NumericalError("flat spectrum: cannot normalize an operator proportional to the identity");
}

} // namespace

void PiHamiltonianSpec::validate() const {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    if(k < 1 || k > n_qubits)
        throw InvalidArgument("interaction order k = " + std::to_string(k) + " outside [1, N = " + std::to_string(n_qubits) +
                              "]");
    if(static_cast<std::int64_t>(coeffs.size()) != symspace::count_correlators(k))
        throw InvalidArgument("spec has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                              std::to_string(symspace::count_correlators(k)));
    for(const auto &[idx, gamma] : coeffs) {
        if(idx.a < 0 || idx.b < 0 || idx.c < 0 || idx.order() != k)
            throw InvalidArgument("coefficient key (" + std::to_string(idx.a) + "," + std::to_string(idx.b) + "," +
                                  std::to_string(idx.c) + ") is not of order k = " + std::to_string(k));
        if(!std::isfinite(gamma)) throw InvalidArgument("non-finite coefficient");
    }
}

PiHamiltonianSpec zero_spec(int n_qubits, int k) {
    PiHamiltonianSpec spec{n_qubits, k, {}, std::nullopt};
    if(k >= 0)
        for(const auto &idx : symspace::indices_of_order(k)) spec.coeffs.emplace(idx, 0.0);
    spec.validate();
    return spec;
}

PiHamiltonianSpec sample_spec(int n_qubits, int k, std::mt19937_64 &rng) {
    PiHamiltonianSpec spec = zero_spec(n_qubits, k);
    std::normal_distribution<double> normal(0.0, 1.0);
    // std::map iterates in lexicographic (a, b, c) order.
    for(auto &entry : spec.coeffs) entry.second = normal(rng);
    return spec;
}

SymOperator assemble(const PiHamiltonianSpec &spec, symspace::CorrelatorCache &cache) {
    spec.validate();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec.n_qubits + 1, spec.n_qubits + 1);
    for(const auto &[idx, gamma] : spec.coeffs)
        if(gamma != 0.0) h += gamma * symspace::correlator(spec.n_qubits, idx, cache).matrix();
    return {spec.n_qubits, std::move(h)};
}

SymOperator symmetrize(const SymOperator &h) {
    return {h.n_qubits(), h.matrix() - symspace::total_spin_squared(h.n_qubits()).matrix()};
}

Eigensystem eigendecompose(const SymOperator &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    if(solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigensystem eigendecompose(const Eigen::MatrixXcd &h) {
    if(h.rows() != h.cols()) throw InvalidArgument("eigendecompose: matrix is not square");
    if(!is_hermitian(h, 1e-10 * std::max(1.0, max_abs(h)))) throw InvalidArgument("eigendecompose: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver((h + h.adjoint()) * 0.5);
    if(solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

GroundStateResult ground_state(const SymOperator &h, double degeneracy_tol) {
    if(!(degeneracy_tol > 0.0)) throw InvalidArgument("degeneracy tolerance must be positive");
    Eigensystem es = eigendecompose(h);
    const Eigen::Index dim = es.values.size();
    Eigen::VectorXcd ground = es.vectors.col(0);
    phase_fix(ground);

    const double gap = dim > 1 ? std::max(0.0, es.values(1) - es.values(0)) : 0.0;
    const double width = es.values(dim - 1) - es.values(0);
    return {SymState::normalized(h.n_qubits(), std::move(ground)), es.values(0), gap, gap <= degeneracy_tol * width,
            std::move(es.values)};
}

Eigen::VectorXd normalize_spectrum(const Eigen::VectorXd &spectrum) {
    if(spectrum.size() == 0) throw InvalidArgument("empty spectrum");
    const double lowest = spectrum.minCoeff();
    const double scale = spectrum.mean() - lowest;
    check_not_flat(lowest, spectrum.maxCoeff(), spectrum.mean());
    return (spectrum.array() - lowest) / scale;
}

SymOperator normalize_energy(const SymOperator &h) {
    const Eigen::VectorXd spectrum = eigendecompose(h).values;
    const double lowest = spectrum(0);
    const double mean = h.matrix().trace().real() / static_cast<double>(h.dim());
    const double scale = mean - lowest;
    check_not_flat(lowest, spectrum(spectrum.size() - 1), mean);
    Eigen::MatrixXcd m = h.matrix();
    m.diagonal().array() -= lowest;
    return {h.n_qubits(), m / scale};
}

} // namespace symqfi::hamiltonian
