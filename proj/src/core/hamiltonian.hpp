#pragma once

#include "core/symspace.hpp"

#include <map>
#include <optional>
#include <random>

namespace symqfi::hamiltonian {

// Coefficients Gamma_abc of H = sum_{a+b+c=k} Gamma_abc S_abc.
struct PiHamiltonianSpec {
    int n_qubits = 0;
    int k = 0;
    std::map<CorrelatorIndex, double> coeffs;
    std::optional<std::uint64_t> seed;

    // Throws InvalidArgument on a wrong key set or non-finite coefficient.
    void validate() const;
};

// Spec with every coefficient zero, keys in place.
[[nodiscard]] PiHamiltonianSpec zero_spec(int n_qubits, int k);

// Gamma_abc i.i.d. N(0, 1), drawn in lexicographic (a, b, c) order.
[[nodiscard]] PiHamiltonianSpec sample_spec(int n_qubits, int k, std::mt19937_64 &rng);

[[nodiscard]] SymOperator assemble(const PiHamiltonianSpec &spec, symspace::CorrelatorCache &cache);

// -S^2 + H.
[[nodiscard]] SymOperator symmetrize(const SymOperator &h);

struct Eigensystem {
    Eigen::VectorXd values; // ascending
    Eigen::MatrixXcd vectors;
};

[[nodiscard]] Eigensystem eigendecompose(const SymOperator &h);
// Raw-matrix entry point; rejects non-Hermitian input (1e-10 * max(1, maxabs)).
[[nodiscard]] Eigensystem eigendecompose(const Eigen::MatrixXcd &h);

inline constexpr double kDefaultDegeneracyTol = 1e-8;

struct GroundStateResult {
    SymState state;
    double energy0 = 0.0;
    double gap = 0.0;
    bool degenerate = false;
    Eigen::VectorXd spectrum;
};

// Ground eigenpair of `h`. The state's largest-modulus amplitude is made real
// positive. Flags degeneracy when gap <= tol * (lambda_max - lambda_min).
[[nodiscard]] GroundStateResult ground_state(const SymOperator &h, double degeneracy_tol = kDefaultDegeneracyTol);

// (H - lambda_min) / (Tr H / (N+1) - lambda_min): ground energy 0, mean eigenvalue 1.
// Throws NumericalError when the spectrum is flat.
[[nodiscard]] SymOperator normalize_energy(const SymOperator &h);

// Same map applied to an ascending spectrum.
[[nodiscard]] Eigen::VectorXd normalize_spectrum(const Eigen::VectorXd &spectrum);

} // namespace symqfi::hamiltonian
