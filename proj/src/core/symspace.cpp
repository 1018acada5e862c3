#include "core/symspace.hpp"

#include "core/error.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <string>

namespace symqfi {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_qubits(int n_qubits) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits) + " (need N >= 1)");
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd &m) { return (m + m.adjoint()) * 0.5; }

std::string describe(const CorrelatorIndex &idx) {
    return "S_(" + std::to_string(idx.a) + "," + std::to_string(idx.b) + "," + std::to_string(idx.c) + ")";
}

void validate_index(int n_qubits, const CorrelatorIndex &idx) {
    require_qubits(n_qubits);
    if(idx.a < 0 || idx.b < 0 || idx.c < 0) throw InvalidArgument("negative exponent in " + describe(idx));
    if(idx.order() > n_qubits)
        throw InvalidArgument(describe(idx) + " undefined: order " + std::to_string(idx.order()) + " exceeds N = " +
                              std::to_string(n_qubits));
}

// Off-diagonal ladder amplitude <D^{n-1}| S_+ |D^n> = sqrt(n (N - n + 1)).
double ladder(int n_qubits, int n) { return std::sqrt(static_cast<double>(n) * (n_qubits - n + 1)); }

// A * S_axis, exploiting that one-body operators are tridiagonal in the Dicke basis.
Eigen::MatrixXcd times_one_body(const Eigen::MatrixXcd &lhs, Axis axis, int n_qubits) {
    const Eigen::Index dim = lhs.cols();
    Eigen::MatrixXcd out(lhs.rows(), dim);
    if(axis == Axis::z) {
        for(Eigen::Index n = 0; n < dim; ++n) out.col(n) = lhs.col(n) * (0.5 * n_qubits - static_cast<double>(n));
        return out;
    }
    out.setZero();
    for(Eigen::Index n = 1; n < dim; ++n) {
        const double amp = 0.5 * ladder(n_qubits, static_cast<int>(n));
        // S(n-1, n) and S(n, n-1)
        const Complex upper = axis == Axis::x ? Complex{amp, 0.0} : Complex{0.0, -amp};
        const Complex lower = std::conj(upper);
        out.col(n) += lhs.col(n - 1) * upper;
        out.col(n - 1) += lhs.col(n) * lower;
    }
    return out;
}

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

double factorial(int n) {
    double f = 1.0;
    for(int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

bool is_hermitian(const Eigen::MatrixXcd &m, double tol) {
    if(m.rows() != m.cols()) return false;
    for(Eigen::Index i = 0; i < m.rows(); ++i)
        for(Eigen::Index j = i; j < m.cols(); ++j)
            if(std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

double max_abs(const Eigen::MatrixXcd &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

SymOperator::SymOperator(int n_qubits, Eigen::MatrixXcd matrix) : n_qubits_(n_qubits) {
    require_qubits(n_qubits);
    if(matrix.rows() != n_qubits + 1 || matrix.cols() != n_qubits + 1)
        throw InvalidArgument("operator dimension " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                              " does not match N + 1 = " + std::to_string(n_qubits + 1));
    if(!is_hermitian(matrix, 1e-12 * std::max(1.0, max_abs(matrix))))
        throw InvalidArgument("operator is not Hermitian");
    matrix_ = hermitian_part(matrix);
}

SymOperator SymOperator::identity(int n_qubits) {
    require_qubits(n_qubits);
    return {n_qubits, Eigen::MatrixXcd::Identity(n_qubits + 1, n_qubits + 1)};
}

SymOperator SymOperator::zero(int n_qubits) {
    require_qubits(n_qubits);
    return {n_qubits, Eigen::MatrixXcd::Zero(n_qubits + 1, n_qubits + 1)};
}

SymState::SymState(int n_qubits, Eigen::VectorXcd amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    require_qubits(n_qubits);
    if(amplitudes_.size() != n_qubits + 1)
        throw InvalidArgument("state has " + std::to_string(amplitudes_.size()) + " amplitudes, expected N + 1 = " +
                              std::to_string(n_qubits + 1));
    if(std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12) throw InvalidArgument("state is not normalized");
}

SymState SymState::normalized(int n_qubits, Eigen::VectorXcd amplitudes) {
    const double norm = amplitudes.norm();
    if(!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("cannot normalize a zero or non-finite state");
    amplitudes /= norm;
    return {n_qubits, std::move(amplitudes)};
}

SymState SymState::dicke(int n_qubits, int excitations) {
    require_qubits(n_qubits);
    if(excitations < 0 || excitations > n_qubits)
        throw InvalidArgument("Dicke excitation number " + std::to_string(excitations) + " outside [0, N]");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_qubits + 1);
    amps(excitations) = 1.0;
    return {n_qubits, std::move(amps)};
}

namespace symspace {

SymOperator one_body_operator(Axis axis, int n_qubits) {
    require_qubits(n_qubits);
    return {n_qubits, times_one_body(Eigen::MatrixXcd::Identity(n_qubits + 1, n_qubits + 1), axis, n_qubits)};
}

std::size_t CorrelatorCache::KeyHash::operator()(const Key &k) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(k.n);
    h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.a);
    h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.b);
    h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(k.c);
    return static_cast<std::size_t>(h ^ (h >> 29));
}

const SymOperator *CorrelatorCache::find(int n_qubits, const CorrelatorIndex &idx) const {
    std::shared_lock lock(mutex_);
    auto it = table_.find(Key{n_qubits, idx.a, idx.b, idx.c});
    return it == table_.end() ? nullptr : it->second.get();
}

const SymOperator &CorrelatorCache::insert(int n_qubits, const CorrelatorIndex &idx, SymOperator op) {
    std::unique_lock lock(mutex_);
    // First writer wins; a concurrent duplicate is bit-identical anyway.
    auto [it, inserted] = table_.try_emplace(Key{n_qubits, idx.a, idx.b, idx.c}, nullptr);
    if(inserted) it->second = std::make_unique<const SymOperator>(std::move(op));
    return *it->second;
}

std::size_t CorrelatorCache::size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
}

namespace {

// One recursion step. The last axis with a nonzero exponent is peeled off
// (z, then y, then x), giving (k-1)- and (k-2)-body operators.
Eigen::MatrixXcd build_correlator(int n, const CorrelatorIndex &idx, CorrelatorCache &cache) {
    const int k = idx.order();
    const auto [a, b, c] = idx;
    if(k == 0) return Eigen::MatrixXcd::Identity(n + 1, n + 1);

    const double inv_k = 1.0 / k;
    auto contraction = [&](int repeats) { return (n - k + 2.0) * (repeats - 1) / (4.0 * k * (k - 1)); };

    Eigen::MatrixXcd m;
    if(c > 0) {
        m = times_one_body(correlator(n, {a, b, c - 1}, cache).matrix(), Axis::z, n) * inv_k;
        if(c >= 2) m -= contraction(c) * correlator(n, {a, b, c - 2}, cache).matrix();
        if(a > 0) m += (kI * (a * 0.5 * inv_k)) * correlator(n, {a - 1, b + 1, c - 1}, cache).matrix();
        if(b > 0) m -= (kI * (b * 0.5 * inv_k)) * correlator(n, {a + 1, b - 1, c - 1}, cache).matrix();
    } else if(b > 0) {
        m = times_one_body(correlator(n, {a, b - 1, 0}, cache).matrix(), Axis::y, n) * inv_k;
        if(b >= 2) m -= contraction(b) * correlator(n, {a, b - 2, 0}, cache).matrix();
        if(a > 0) m -= (kI * (a * 0.5 * inv_k)) * correlator(n, {a - 1, b - 1, 1}, cache).matrix();
    } else {
        m = times_one_body(correlator(n, {a - 1, 0, 0}, cache).matrix(), Axis::x, n) * inv_k;
        if(a >= 2) m -= contraction(a) * correlator(n, {a - 2, 0, 0}, cache).matrix();
    }
    return m;
}

} // namespace

const SymOperator &correlator(int n_qubits, const CorrelatorIndex &idx, CorrelatorCache &cache) {
    validate_index(n_qubits, idx);
    if(const SymOperator *hit = cache.find(n_qubits, idx)) return *hit;
    Eigen::MatrixXcd m = build_correlator(n_qubits, idx, cache);
    // The recursion is Hermitian only up to rounding; keep the exact Hermitian part.
    return cache.insert(n_qubits, idx, SymOperator(n_qubits, hermitian_part(m)));
}

SymOperator correlator(int n_qubits, const CorrelatorIndex &idx) {
    CorrelatorCache cache;
    return correlator(n_qubits, idx, cache);
}

SymOperator brute_force_correlator(int n_qubits, const CorrelatorIndex &idx) {
    validate_index(n_qubits, idx);
    if(n_qubits > kBruteForceMaxQubits)
        throw InvalidArgument("brute-force correlator limited to N <= " + std::to_string(kBruteForceMaxQubits) +
                              " (2^N state space), got N = " + std::to_string(n_qubits));

    const int n = n_qubits;
    const std::uint32_t dim = 1U << n;
    const int k = idx.order();
    const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

    // acc(m, n) = sum over Pauli placements P and |j| = n of <j ^ flip(P)| P |j>.
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    auto accumulate = [&](std::uint32_t xmask, std::uint32_t ymask, std::uint32_t zmask) {
        const std::uint32_t flip = xmask | ymask;
        const std::uint32_t sign_mask = ymask | zmask;
        const Complex phase = i_pow[std::popcount(ymask) % 4];
        for(std::uint32_t j = 0; j < dim; ++j) {
            const double sign = (std::popcount(j & sign_mask) & 1) ? -1.0 : 1.0;
            acc(std::popcount(j ^ flip), std::popcount(j)) += phase * sign;
        }
    };

    // Every way of placing a x's, b y's and c z's on distinct sites.
    auto place = [&](auto &&self, int site, int ra, int rb, int rc, std::uint32_t xm, std::uint32_t ym,
                     std::uint32_t zm) -> void {
        const int remaining = ra + rb + rc;
        if(remaining == 0) {
            accumulate(xm, ym, zm);
            return;
        }
        if(n - site < remaining) return;
        const std::uint32_t bit = 1U << site;
        self(self, site + 1, ra, rb, rc, xm, ym, zm);
        if(ra > 0) self(self, site + 1, ra - 1, rb, rc, xm | bit, ym, zm);
        if(rb > 0) self(self, site + 1, ra, rb - 1, rc, xm, ym | bit, zm);
        if(rc > 0) self(self, site + 1, ra, rb, rc - 1, xm, ym, zm | bit);
    };
    place(place, 0, idx.a, idx.b, idx.c, 0U, 0U, 0U);

    // Ordered distinct tuples count each placement a! b! c! times; then 1/(k! 2^k).
    const double weight = factorial(idx.a) * factorial(idx.b) * factorial(idx.c) / (factorial(k) * std::ldexp(1.0, k));
    Eigen::MatrixXcd out(n + 1, n + 1);
    for(int m = 0; m <= n; ++m)
        for(int col = 0; col <= n; ++col)
            out(m, col) = acc(m, col) * weight * std::exp(-0.5 * (log_binomial(n, m) + log_binomial(n, col)));
    return {n, std::move(out)};
}

SymOperator total_spin_squared(int n_qubits) {
    require_qubits(n_qubits);
    Eigen::MatrixXcd s2 = Eigen::MatrixXcd::Zero(n_qubits + 1, n_qubits + 1);
    for(Axis axis : {Axis::x, Axis::y, Axis::z}) {
        const Eigen::MatrixXcd s = one_body_operator(axis, n_qubits).matrix();
        s2 += s * s;
    }
    return {n_qubits, hermitian_part(s2)};
}

std::int64_t count_correlators(int k) {
    if(k < 0) throw InvalidArgument("interaction order must be non-negative");
    return static_cast<std::int64_t>(k + 2) * (k + 1) / 2;
}

std::int64_t total_terms(int n_qubits) {
    if(n_qubits < 0) throw InvalidArgument("system size must be non-negative");
    const std::int64_t n = n_qubits;
    return (n + 3) * (n + 2) * (n + 1) / 6;
}

std::vector<CorrelatorIndex> indices_of_order(int k) {
    if(k < 0) throw InvalidArgument("interaction order must be non-negative");
    std::vector<CorrelatorIndex> out;
    out.reserve(static_cast<std::size_t>(count_correlators(k)));
    for(int a = 0; a <= k; ++a)
        for(int b = 0; a + b <= k; ++b) out.push_back({a, b, k - a - b});
    return out;
}

Eigen::VectorXcd dicke_vector_full(int n_qubits, int excitations) {
    require_qubits(n_qubits);
    if(n_qubits > 24) throw InvalidArgument("full-space Dicke vector limited to N <= 24");
    if(excitations < 0 || excitations > n_qubits) throw InvalidArgument("Dicke excitation number outside [0, N]");
    const std::uint32_t dim = 1U << n_qubits;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    const double amp = std::exp(-0.5 * log_binomial(n_qubits, excitations));
    for(std::uint32_t j = 0; j < dim; ++j)
        if(std::popcount(j) == excitations) v(j) = amp;
    return v;
}

Eigen::VectorXcd embed_full(const SymState &state) {
    const int n = state.n_qubits();
    if(n > 24) throw InvalidArgument("full-space embedding limited to N <= 24");
    const std::uint32_t dim = 1U << n;
    std::vector<Complex> per_weight(n + 1);
    for(int w = 0; w <= n; ++w) per_weight[w] = state.amplitudes()(w) * std::exp(-0.5 * log_binomial(n, w));
    Eigen::VectorXcd v(dim);
    for(std::uint32_t j = 0; j < dim; ++j) v(j) = per_weight[std::popcount(j)];
    return v;
}

} // namespace symspace
} // namespace symqfi
