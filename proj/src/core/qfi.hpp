#pragma once

#include "core/encoding.hpp"
#include "core/symspace.hpp"

namespace symqfi::qfi {

enum class Route { symmetric, variance, full_oracle };

[[nodiscard]] const char *route_name(Route route) noexcept;

struct QfiResult {
    double value = 0.0;
    Route route = Route::symmetric;
    double theta = 0.0;
    int n_qubits = 0;
    // Magnitude of a negative rounding residual that was clamped to zero (0 if none).
    double clamped_residual = 0.0;
};

// Raw values in [-1e-9, 0) are clamped to 0; anything more negative throws NumericalError.
inline constexpr double kClampTolerance = 1e-9;

// 4 [ ||dC a||^2 - |<C a, dC a>|^2 ].
[[nodiscard]] QfiResult qfi_symmetric(const SymState &state, const encoding::CollectiveEncoding &enc);

// 4 Var_psi(K) for a collective generator K on the symmetric subspace.
[[nodiscard]] QfiResult qfi_variance(const SymState &state, const SymOperator &k_collective);

// Embeds the state in the 2^N space, applies U^{(x)N} and its product-rule
// derivative site by site. N <= 10.
[[nodiscard]] QfiResult qfi_full_oracle(const SymState &state, const encoding::GeneratorModel &gen, double theta);

inline constexpr int kFullOracleMaxQubits = 10;

// 1 / sqrt(F); F <= 0 rejected.
[[nodiscard]] double cramer_rao(double fisher);

// N^2 - N^2 (N^2 - 4) gap / 24. May be negative for large gaps.
[[nodiscard]] double tradeoff_bound(int n_qubits, double gap);

} // namespace symqfi::qfi
