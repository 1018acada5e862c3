#include "core/encoding.hpp"

#include "core/error.hpp"

#include <Eigen/Eigenvalues>

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace symqfi::encoding {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix2c pauli(int axis) {
    Matrix2c s;
    switch(axis) {
    case 0: s << 0.0, 1.0, 1.0, 0.0; break;
    case 1: s << 0.0, -kI, kI, 0.0; break;
    default: s << 1.0, 0.0, 0.0, -1.0; break;
    }
    return s;
}

Matrix2c sigma_dot(const std::array<double, 3> &v) { return v[0] * pauli(0) + v[1] * pauli(1) + v[2] * pauli(2); }

// sin(r)/r and (r cos r - sin r)/r^3, with series below r = 1e-3.
double sinc(double r) {
    if(r < 1e-3) {
        const double r2 = r * r;
        return 1.0 - r2 / 6.0 + r2 * r2 / 120.0 - r2 * r2 * r2 / 5040.0;
    }
    return std::sin(r) / r;
}

double sinc_slope(double r) {
    if(r < 1e-3) {
        const double r2 = r * r;
        return -1.0 / 3.0 + r2 / 30.0 - r2 * r2 / 840.0 + r2 * r2 * r2 / 45360.0;
    }
    return (r * std::cos(r) - std::sin(r)) / (r * r * r);
}

// ---- partition sum -------------------------------------------------------

inline double r_exp(double x) { return std::exp(x); }
inline __float128 r_exp(__float128 x) { return expq(x); }
inline double r_log(double x) { return std::log(x); }
inline __float128 r_log(__float128 x) { return logq(x); }
inline double r_abs(double x) { return std::fabs(x); }
inline __float128 r_abs(__float128 x) { return fabsq(x); }

template <class Real>
struct Cx {
    Real re{0}, im{0};

    Cx() = default;
    Cx(Real r, Real i) : re(r), im(i) {}
    explicit Cx(const Complex &z) : re(static_cast<Real>(z.real())), im(static_cast<Real>(z.imag())) {}

    friend Cx operator+(const Cx &x, const Cx &y) { return {x.re + y.re, x.im + y.im}; }
    friend Cx operator*(const Cx &x, const Cx &y) { return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re}; }
    friend Cx operator*(Real s, const Cx &x) { return {s * x.re, s * x.im}; }
    Cx &operator+=(const Cx &y) {
        re += y.re;
        im += y.im;
        return *this;
    }
    [[nodiscard]] Real l1() const { return r_abs(re) + r_abs(im); }
    [[nodiscard]] Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

struct SumOutcome {
    CollectiveEncoding enc;
    double magnitude = 0.0; // largest per-entry sum of |term| relative to the result scale
};

template <class Real>
SumOutcome partition_sum(const Matrix2c &u, const Matrix2c &du, int n) {
    using C = Cx<Real>;
    // Entry order matches the occupation vector: (i, j) = (0,0), (0,1), (1,0), (1,1).
    const Complex ue[4] = {u(0, 0), u(0, 1), u(1, 0), u(1, 1)};
    const Complex de[4] = {du(0, 0), du(0, 1), du(1, 0), du(1, 1)};

    std::vector<Real> log_fact(n + 1, Real(0));
    for(int i = 2; i <= n; ++i) log_fact[i] = log_fact[i - 1] + r_log(static_cast<Real>(i));

    // pow[e][w] = U_e^w, zeroth power 1 even for a zero base.
    std::vector<std::vector<C>> pow(4, std::vector<C>(n + 1));
    C d[4];
    for(int e = 0; e < 4; ++e) {
        const C base(ue[e]);
        d[e] = C(de[e]);
        pow[e][0] = C(Real(1), Real(0));
        for(int w = 1; w <= n; ++w) pow[e][w] = pow[e][w - 1] * base;
    }
    auto power = [&](int e, int w) { return pow[e][w]; };
    // w * dU_e * U_e^(w-1)
    auto dpower = [&](int e, int w) { return w == 0 ? C() : static_cast<Real>(w) * (d[e] * pow[e][w - 1]); };

    const double du_scale = std::max(1e-300, du.cwiseAbs().maxCoeff());
    SumOutcome out;
    out.enc.c.resize(n + 1, n + 1);
    out.enc.dc.resize(n + 1, n + 1);

    for(int m = 0; m <= n; ++m) {
        for(int col = 0; col <= n; ++col) {
            const int t_lo = std::max(0, m + col - n);
            const int t_hi = std::min(m, col);
            // coef(t) = sqrt(m!(N-m)! n!(N-n)!) / (w0! w1! w2! w3!), advanced by exact ratios in t.
            const int w0_lo = n - m - col + t_lo;
            Real coef = r_exp(Real(0.5) * (log_fact[m] + log_fact[n - m] + log_fact[col] + log_fact[n - col]) -
                              log_fact[w0_lo] - log_fact[col - t_lo] - log_fact[m - t_lo] - log_fact[t_lo]);
            C sum, dsum;
            Real abs_sum(0), dabs_sum(0);
            for(int t = t_lo; t <= t_hi; ++t) {
                const int w3 = t, w2 = m - t, w1 = col - t, w0 = n - m - col + t;
                const C p0 = power(0, w0), p1 = power(1, w1), p2 = power(2, w2), p3 = power(3, w3);
                const C p23 = p2 * p3;
                const C p123 = p1 * p23;
                const C term = coef * (p0 * p123);
                const C dterm =
                    coef * (dpower(0, w0) * p123 +
                            p0 * (dpower(1, w1) * p23 + p1 * (dpower(2, w2) * p3 + p2 * dpower(3, w3))));
                sum += term;
                dsum += dterm;
                abs_sum += term.l1();
                dabs_sum += dterm.l1();
                if(t < t_hi) coef = coef * static_cast<Real>(w1) * static_cast<Real>(w2) /
                                    (static_cast<Real>(w0 + 1) * static_cast<Real>(w3 + 1));
            }
            out.enc.c(m, col) = sum.to_complex();
            out.enc.dc(m, col) = dsum.to_complex();
            out.magnitude = std::max({out.magnitude, static_cast<double>(abs_sum), static_cast<double>(dabs_sum) / du_scale});
        }
    }
    return out;
}

// Below this per-entry term mass the double-precision sum keeps ~1e-13 absolute accuracy.
constexpr double kDoubleSafeMagnitude = 1e3;

void require_unitary(const Matrix2c &u) {
    const double err = (u * u.adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff();
    if(!(err <= 1e-9)) throw InvalidArgument("single-qubit matrix is not unitary (|UU^+ - I| = " + std::to_string(err) + ")");
}

} // namespace

GeneratorModel::GeneratorModel(std::string name, Function coefficients)
    : name_(std::move(name)), coefficients_(std::move(coefficients)) {
    if(!coefficients_) throw InvalidArgument("generator '" + name_ + "' has no coefficient function");
}

GeneratorModel GeneratorModel::linear_phase() {
    return {"linear_phase", [](double theta) { return GeneratorCoefficients{0.0, {theta / 2, 0.0, 0.0}, 0.0, {0.5, 0.0, 0.0}}; }};
}

GeneratorModel GeneratorModel::rotating() {
    return {"rotating", [](double theta) {
                const double s = std::sin(theta), c = std::cos(theta);
                return GeneratorCoefficients{0.0, {s, 0.0, c}, 0.0, {c, 0.0, -s}};
            }};
}

GeneratorModel GeneratorModel::constant(double g0, double gx, double gy, double gz) {
    return {"constant", [=](double) { return GeneratorCoefficients{g0, {gx, gy, gz}, 0.0, {0.0, 0.0, 0.0}}; }};
}

GeneratorModel GeneratorModel::from_name(std::string_view name) {
    if(name == "linear-phase" || name == "linear_phase") return linear_phase();
    if(name == "rotating") return rotating();
    throw InvalidArgument("unknown generator '" + std::string(name) + "' (expected \"linear-phase\" or \"rotating\")");
}

SingleQubitUnitary single_qubit_unitary(const GeneratorModel &gen, double theta) {
    const GeneratorCoefficients k = gen.coefficients(theta);
    const auto &g = k.g;
    const auto &dg = k.dg;
    const double r = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    const double g_dot_dg = g[0] * dg[0] + g[1] * dg[1] + g[2] * dg[2];
    const double s = sinc(r);
    const Complex phase = std::exp(-kI * k.g0);

    // U = e^{-i g0} (cos r - i sinc(r) g.sigma)
    const Matrix2c inner = std::cos(r) * Matrix2c::Identity() - kI * s * sigma_dot(g);
    const Matrix2c u = phase * inner;
    // d/dtheta of the closed form; d(cos r) = -sinc(r) (g.dg), d(sinc r) = sinc_slope(r) (g.dg).
    const Matrix2c dinner =
        -s * g_dot_dg * Matrix2c::Identity() - kI * (sinc_slope(r) * g_dot_dg * sigma_dot(g) + s * sigma_dot(dg));
    const Matrix2c du = -kI * k.dg0 * u + phase * dinner;
    return {u, du};
}

Matrix2c local_k_theta(const GeneratorModel &gen, double theta) {
    const auto [u, du] = single_qubit_unitary(gen, theta);
    const Matrix2c k = kI * du * u.adjoint();
    return (k + k.adjoint()) * 0.5;
}

double seminorm(const Eigen::MatrixXcd &a) {
    if(a.rows() == 0 || !is_hermitian(a, 1e-10 * std::max(1.0, max_abs(a))))
        throw InvalidArgument("seminorm requires a non-empty Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver((a + a.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd &ev = solver.eigenvalues();
    return ev(ev.size() - 1) - ev(0);
}

double qfi_upper_bound(const GeneratorModel &gen, double theta, int n_qubits) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    const double sn = seminorm(local_k_theta(gen, theta));
    const double n = n_qubits;
    return n * n * sn * sn;
}

double rotating_envelope(int n_qubits) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    const double v = 2.0 * std::sin(1.0) * n_qubits;
    return v * v;
}

SymOperator collective_operator(const Matrix2c &local, int n_qubits) {
    if(!is_hermitian(local, 1e-10 * std::max(1.0, max_abs(local))))
        throw InvalidArgument("collective_operator requires a Hermitian single-qubit operator");
    const double a0 = 0.5 * local.trace().real();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(n_qubits + 1, n_qubits + 1) * (n_qubits * a0);
    const Axis axes[3] = {Axis::x, Axis::y, Axis::z};
    for(int mu = 0; mu < 3; ++mu) {
        const double a_mu = 0.5 * (local * pauli(mu)).trace().real();
        if(a_mu != 0.0) out += (2.0 * a_mu) * symspace::one_body_operator(axes[mu], n_qubits).matrix();
    }
    return {n_qubits, std::move(out)};
}

CollectiveEncoding collective_matrix_elements(const Matrix2c &u, const Matrix2c &du, int n_qubits, SumPrecision forced) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    require_unitary(u);
    if(forced == SumPrecision::quad_precision) return partition_sum<__float128>(u, du, n_qubits).enc;
    return partition_sum<double>(u, du, n_qubits).enc;
}

CollectiveEncoding collective_matrix_elements(const Matrix2c &u, const Matrix2c &du, int n_qubits) {
    if(n_qubits < 1) throw InvalidArgument("invalid system size N = " + std::to_string(n_qubits));
    require_unitary(u);
    SumOutcome fast = partition_sum<double>(u, du, n_qubits);
    if(fast.magnitude <= kDoubleSafeMagnitude) return std::move(fast.enc);
    return partition_sum<__float128>(u, du, n_qubits).enc;
}

CollectiveEncoding collective_encoding(const GeneratorModel &gen, double theta, int n_qubits) {
    const auto [u, du] = single_qubit_unitary(gen, theta);
    CollectiveEncoding enc = collective_matrix_elements(u, du, n_qubits);
    enc.theta = theta;
    return enc;
}

} // namespace symqfi::encoding
