#ifndef CAVPROT_TOMOGRAPHY_HPP
#define CAVPROT_TOMOGRAPHY_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "dynamics.hpp"
#include "spectral.hpp"
#include "units.hpp"

namespace cavprot {

// Frequency-bin qubit: |0> on the lower polariton, |1> on the upper.
struct QubitState {
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};

    void validate() const
    {
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
            throw std::invalid_argument("qubit state must be normalized");
    }

    static QubitState zero() { return {1.0, 0.0}; }
    static QubitState plus() { return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}; }
    static QubitState circ() { return {1.0 / std::sqrt(2.0), cplx(0.0, 1.0) / std::sqrt(2.0)}; }
    static QubitState superposition(double rel_phase)
    {
        return {1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), rel_phase)};
    }
};

// Detector count rate for two interfering qubit wavepackets, valid when the
// storage delay satisfies Omega_R * tau_R = 2 pi.
inline double count_rate(const QubitState& p1, const QubitState& p2, double phi)
{
    p1.validate();
    p2.validate();
    const double ov = std::abs(p1.alpha * std::conj(p2.alpha) +
                               p1.beta * std::conj(p2.beta));
    return 2.0 + 2.0 * std::cos(phi) * ov;
}

struct FringeAmplitudeSet {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double c0 = 1.0;
};

// Ideal fringe amplitudes for the four-probe measurement set.
inline FringeAmplitudeSet tomography_amplitudes(const QubitState& psi, double c0 = 1.0)
{
    psi.validate();
    FringeAmplitudeSet a;
    a.c0 = c0;
    const double r2 = std::sqrt(2.0);
    a.a0 = c0 / r2;
    a.a1 = c0 / r2 * std::abs(psi.alpha + psi.beta);
    a.a2 = c0 / r2 * std::abs(psi.alpha - cplx(0.0, 1.0) * psi.beta);
    a.a3 = c0 * std::abs(psi.alpha);
    return a;
}

struct DensityMatrix2 {
    // Row-major [ [m00 m01], [m10 m11] ].
    std::array<cplx, 4> m{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};

    cplx& operator()(int r, int c) { return m[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    double trace() const { return (m[0] + m[3]).real(); }

    // Stokes components (sigma_1, sigma_2, sigma_3) = (X, Y, Z).
    double s1() const { return 2.0 * m[1].real(); }
    double s2() const { return -2.0 * m[1].imag(); }
    double s3() const { return (m[0] - m[3]).real(); }

    std::array<double, 2> eigenvalues() const
    {
        const double t = trace();
        const double r = std::sqrt(s1() * s1() + s2() * s2() + s3() * s3());
        return {0.5 * (t + r), 0.5 * (t - r)};
    }

    bool physical(double tol = 1e-12) const
    {
        return eigenvalues()[1] >= -tol && std::abs(trace() - 1.0) < 1e-9;
    }

    static DensityMatrix2 from_stokes(double x, double y, double z)
    {
        DensityMatrix2 r;
        r.m[0] = 0.5 * (1.0 + z);
        r.m[3] = 0.5 * (1.0 - z);
        r.m[1] = 0.5 * cplx(x, -y);
        r.m[2] = std::conj(r.m[1]);
        return r;
    }
};

// Linear-inversion density matrix from amplitude ratios; may be non-physical
// for noisy inputs.
inline DensityMatrix2 density_matrix(const FringeAmplitudeSet& a)
{
    if (!(a.a0 > 0.0)) throw std::invalid_argument("A0 must be positive");
    const double r1 = a.a1 / a.a0, r2 = a.a2 / a.a0, r3 = a.a3 / a.a0;
    return DensityMatrix2::from_stokes(r1 * r1 - 1.0, r2 * r2 - 1.0, r3 * r3 - 1.0);
}

namespace detail {

// rho = T^dag T / tr(T^dag T), T = [[t0, 0], [t2 + i t3, t1]].
inline DensityMatrix2 rho_from_t(const std::array<double, 4>& t)
{
    const cplx t00(t[0], 0.0), t11(t[1], 0.0), t10(t[2], t[3]);
    DensityMatrix2 r;
    r.m[0] = std::conj(t00) * t00 + std::conj(t10) * t10;
    r.m[1] = std::conj(t10) * t11;
    r.m[2] = std::conj(r.m[1]);
    r.m[3] = std::conj(t11) * t11;
    const double tr = r.trace();
    if (tr <= 0.0) {
        r.m = {cplx(0.5, 0), cplx(0, 0), cplx(0, 0), cplx(0.5, 0)};
        return r;
    }
    for (auto& v : r.m) v /= tr;
    return r;
}

// Small Nelder-Mead minimizer for the 4-parameter MLE search.
inline std::array<double, 4> nelder_mead(std::function<double(const std::array<double, 4>&)> f,
                                         std::array<double, 4> x0, int max_iter,
                                         double tol, double* final_cost)
{
    constexpr int n = 4;
    std::array<std::array<double, 4>, n + 1> pts;
    std::array<double, n + 1> val;
    pts[0] = x0;
    for (int i = 0; i < n; ++i) {
        pts[i + 1] = x0;
        pts[i + 1][i] += (std::abs(x0[i]) > 0.1 ? 0.1 * x0[i] : 0.05);
    }
    for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

    auto order = [&] {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (val[j] < val[i]) { std::swap(val[i], val[j]); std::swap(pts[i], pts[j]); }
    };
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (val[n] - val[0] < tol && val[0] < tol) break;
        std::array<double, 4> cen{};
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < 4; ++d) cen[d] += pts[i][d] / n;
        auto affine = [&](double c) {
            std::array<double, 4> p;
            for (int d = 0; d < 4; ++d) p[d] = cen[d] + c * (pts[n][d] - cen[d]);
            return p;
        };
        auto xr = affine(-1.0);
        const double fr = f(xr);
        if (fr < val[0]) {
            auto xe = affine(-2.0);
            const double fe = f(xe);
            if (fe < fr) { pts[n] = xe; val[n] = fe; }
            else { pts[n] = xr; val[n] = fr; }
        } else if (fr < val[n - 1]) {
            pts[n] = xr; val[n] = fr;
        } else {
            auto xc = affine(0.5);
            const double fc = f(xc);
            if (fc < val[n]) { pts[n] = xc; val[n] = fc; }
            else {
                for (int i = 1; i <= n; ++i) {
                    for (int d = 0; d < 4; ++d)
                        pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    if (final_cost) *final_cost = val[0];
    return pts[0];
}

} // namespace detail

struct MleError : std::runtime_error {
    double final_cost;
    MleError(const std::string& m, double c) : std::runtime_error(m), final_cost(c) {}
};

// Nearest physical state in the squared-Stokes-residual sense.
inline DensityMatrix2 mle_project(const DensityMatrix2& raw, int max_iter = 4000)
{
    if (std::abs(raw.trace() - 1.0) > 1e-9)
        throw std::invalid_argument("input must have unit trace");
    if (raw.physical()) return raw;

    const double sx = raw.s1(), sy = raw.s2(), sz = raw.s3();
    auto cost = [&](const std::array<double, 4>& t) {
        const auto r = detail::rho_from_t(t);
        const double dx = r.s1() - sx, dy = r.s2() - sy, dz = r.s3() - sz;
        return dx * dx + dy * dy + dz * dz;
    };

    // Start from the clipped-eigenvalue state along the raw Bloch direction.
    const double rlen = std::sqrt(sx * sx + sy * sy + sz * sz);
    const double cl = std::min(rlen, 1.0 - 1e-9) / (rlen > 0.0 ? rlen : 1.0);
    const auto start_rho = DensityMatrix2::from_stokes(sx * cl, sy * cl, sz * cl);
    // Cholesky of the start point.
    const double p11 = std::max(start_rho.m[3].real(), 1e-12);
    const double t1 = std::sqrt(p11);
    const cplx t10 = std::conj(start_rho.m[1]) / t1;
    const double t0 = std::sqrt(std::max(start_rho.m[0].real() - std::norm(t10), 1e-12));
    std::array<double, 4> x0{t0, t1, t10.real(), t10.imag()};

    double final_cost = 0.0;
    const auto best = detail::nelder_mead(cost, x0, max_iter, 1e-16, &final_cost);
    const auto rho = detail::rho_from_t(best);
    // The raw state may lie outside the Bloch ball; then the minimum cost is
    // the (squared) distance to the surface, not zero.
    const double outside = std::max(rlen - 1.0, 0.0);
    if (final_cost > outside * outside + 1e-8)
        throw MleError("MLE projection did not converge", final_cost);
    return rho;
}

inline double fidelity(const QubitState& psi, const DensityMatrix2& rho)
{
    psi.validate();
    const cplx a = std::conj(psi.alpha), b = std::conj(psi.beta);
    const cplx v = a * (rho(0, 0) * psi.alpha + rho(0, 1) * psi.beta) +
                   b * (rho(1, 0) * psi.alpha + rho(1, 1) * psi.beta);
    return v.real();
}

// Full simulated tomography: prepare a frequency-bin qubit pulse, store it for
// one Rabi period, interfere with the four probe pulses, reconstruct.
struct TomographyRunResult {
    FringeAmplitudeSet amps;
    DensityMatrix2 rho_raw;
    DensityMatrix2 rho;
    double tau_r_ps = 0.0;
};

inline TomographyRunResult simulated_tomography(const SystemParams& p,
                                                const EmitterBath& bath,
                                                const QubitState& prep,
                                                double width_ps = 4.0)
{
    prep.validate();
    const auto pm = polariton_modes(p);
    const double wm = pm.omega_minus - p.density.center;
    const double wp = pm.omega_plus - p.density.center;
    const double tau_r = pm.rabi_period();

    const double t_end = std::max(0.4, 3.0 * tau_r);
    auto respond = [&](cplx a, cplx b) {
        return simulate(p, bath, make_two_bin_pulse(a, b, wm, wp, width_ps),
                        -0.06, t_end, 8192);
    };

    const double r2 = std::sqrt(2.0);
    const FieldTrace f_prep = respond(prep.alpha, prep.beta);
    const FieldTrace f_plus = respond(1.0 / r2, 1.0 / r2);
    const FieldTrace f_circ = respond(1.0 / r2, cplx(0.0, 1.0) / r2);
    const FieldTrace f_zero = respond(1.0, 0.0);

    TomographyRunResult out;
    out.tau_r_ps = ns_to_ps(tau_r);
    out.amps.c0 = 1.0;
    out.amps.a0 = std::abs(field_overlap(f_prep, f_prep, tau_r)) / r2;
    out.amps.a1 = std::abs(field_overlap(f_prep, f_plus, tau_r));
    out.amps.a2 = std::abs(field_overlap(f_prep, f_circ, tau_r));
    out.amps.a3 = std::abs(field_overlap(f_prep, f_zero, tau_r));
    out.rho_raw = density_matrix(out.amps);
    out.rho = mle_project(out.rho_raw);
    return out;
}

} // namespace cavprot

#endif // CAVPROT_TOMOGRAPHY_HPP
