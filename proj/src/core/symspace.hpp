#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace symqfi {

using Complex = std::complex<double>;

// Exponent triple (a, b, c) of the permutation-invariant correlator S_abc:
// a factors of sigma_x/2, b of sigma_y/2, c of sigma_z/2.
struct CorrelatorIndex {
    int a = 0;
    int b = 0;
    int c = 0;

    [[nodiscard]] int order() const noexcept { return a + b + c; }

    friend bool operator==(const CorrelatorIndex &, const CorrelatorIndex &) = default;
    friend auto operator<=>(const CorrelatorIndex &, const CorrelatorIndex &) = default;
};

// Hermitian operator on the (N+1)-dimensional symmetric subspace. Row/column n
// labels the Dicke state |D_N^n> with n excitations, i.e. magnetic number N/2 - n.
class SymOperator {
public:
    // Throws InvalidArgument unless the matrix is (N+1)x(N+1) and Hermitian to
    // 1e-12 * max(1, maxabs). The stored matrix is the exact Hermitian part.
    SymOperator(int n_qubits, Eigen::MatrixXcd matrix);

    static SymOperator identity(int n_qubits);
    static SymOperator zero(int n_qubits);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] const Eigen::MatrixXcd &matrix() const noexcept { return matrix_; }

private:
    int n_qubits_;
    Eigen::MatrixXcd matrix_;
};

// Normalized pure state on the symmetric subspace, amplitudes in Dicke order.
class SymState {
public:
    // Throws InvalidArgument unless the norm is 1 within 1e-12.
    SymState(int n_qubits, Eigen::VectorXcd amplitudes);

    // Rescales to unit norm; throws on a zero vector.
    static SymState normalized(int n_qubits, Eigen::VectorXcd amplitudes);
    static SymState dicke(int n_qubits, int excitations);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const noexcept { return amplitudes_; }

private:
    int n_qubits_;
    Eigen::VectorXcd amplitudes_;
};

enum class Axis { x, y, z };

[[nodiscard]] bool is_hermitian(const Eigen::MatrixXcd &m, double tol);
[[nodiscard]] double max_abs(const Eigen::MatrixXcd &m);

namespace symspace {

// Collective spin S_axis = sum_i sigma_axis^(i)/2 in the spin-N/2 representation.
[[nodiscard]] SymOperator one_body_operator(Axis axis, int n_qubits);

// Memo table for correlators keyed by (N, a, b, c). Safe for concurrent use:
// lookups take a shared lock, insertion an exclusive one. References returned
// by `correlator` stay valid for the cache's lifetime.
class CorrelatorCache {
public:
    CorrelatorCache() = default;
    CorrelatorCache(const CorrelatorCache &) = delete;
    CorrelatorCache &operator=(const CorrelatorCache &) = delete;

    [[nodiscard]] const SymOperator *find(int n_qubits, const CorrelatorIndex &idx) const;
    const SymOperator &insert(int n_qubits, const CorrelatorIndex &idx, SymOperator op);
    [[nodiscard]] std::size_t size() const;

private:
    struct Key {
        int n, a, b, c;
        friend bool operator==(const Key &, const Key &) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key &k) const noexcept;
    };

    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, std::unique_ptr<const SymOperator>, KeyHash> table_;
};

/// Permutation-invariant k-body correlator
///
///     S_abc = (1/k!) sum_{distinct sites} (sigma_x/2)^a (sigma_y/2)^b (sigma_z/2)^c
///
/// projected on the symmetric subspace, built by the lower-order recursion
/// (c eliminated first, then b, then a) and memoized in `cache`.
///
/// Convention: every Pauli factor carries 1/2. A correlator written with bare
/// Pauli matrices, sigma^{(x)a} sigma^{(y)b} sigma^{(z)c} + perms over k!, equals
/// 2^k * S_abc.
///
/// Throws InvalidArgument for negative exponents or a+b+c > N.
const SymOperator &correlator(int n_qubits, const CorrelatorIndex &idx, CorrelatorCache &cache);

// Cold-cache convenience overload.
[[nodiscard]] SymOperator correlator(int n_qubits, const CorrelatorIndex &idx);

// Reference construction in the full 2^N space, projected with the Dicke
// isometry. Exponential cost; N <= 12.
[[nodiscard]] SymOperator brute_force_correlator(int n_qubits, const CorrelatorIndex &idx);

inline constexpr int kBruteForceMaxQubits = 12;

// S_x^2 + S_y^2 + S_z^2; equals (N/2)(N/2+1) I on the symmetric subspace.
[[nodiscard]] SymOperator total_spin_squared(int n_qubits);

// Number of distinct S_abc with a+b+c = k, and with a+b+c <= N.
[[nodiscard]] std::int64_t count_correlators(int k);
[[nodiscard]] std::int64_t total_terms(int n_qubits);

// All indices with a+b+c = k in lexicographic (a, b, c) order.
[[nodiscard]] std::vector<CorrelatorIndex> indices_of_order(int k);

// Dicke state |D_N^n> in the 2^N computational basis (bit q of the index is qubit q).
[[nodiscard]] Eigen::VectorXcd dicke_vector_full(int n_qubits, int excitations);

// V^dagger alpha: embed Dicke-basis amplitudes in the 2^N space.
[[nodiscard]] Eigen::VectorXcd embed_full(const SymState &state);

} // namespace symspace
} // namespace symqfi
