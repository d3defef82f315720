#ifndef CAVPROT_SPECTRAL_HPP
#define CAVPROT_SPECTRAL_HPP

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "faddeeva.hpp"
#include "quadrature.hpp"
#include "units.hpp"

namespace cavprot {

using cplx = std::complex<double>;

enum class DensityKind { Lorentzian, Gaussian, QGaussian, DoubleGaussian };

// Normalized ensemble lineshape rho(w), symmetric about `center`.
// All frequencies in rad/ns.
struct SpectralDensity {
    DensityKind kind = DensityKind::Gaussian;
    double center = 0.0;        // w_a
    double width = 1.0;         // Delta
    double q = 1.0;             // QGaussian shape, 1 < q < 2
    double half_splitting = 0.0; // DoubleGaussian delta_a

    void validate() const
    {
        if (!(width > 0.0)) throw std::invalid_argument("density width must be > 0");
        if (kind == DensityKind::QGaussian && q >= 2.0)
            throw std::invalid_argument("q-Gaussian with q >= 2 is not normalizable here");
        if (kind == DensityKind::DoubleGaussian && half_splitting < 0.0)
            throw std::invalid_argument("half splitting must be >= 0");
    }

    // Below this, (1 + (q-1) x^2)^(-1/(q-1)) loses all precision in doubles;
    // the Gaussian limit is exact to ~1e-8 here.
    bool q_is_gaussian_limit() const { return q <= 1.0 + 1e-8; }

    // q-Gaussian normalization constant (prefactor of 1/width), 1 < q < 2.
    double q_norm() const
    {
        const double nu = 1.0 / (q - 1.0);
        return std::sqrt(q - 1.0) *
               std::exp(std::lgamma(nu) - std::lgamma(nu - 0.5)) / std::sqrt(pi);
    }

    double operator()(double w) const
    {
        const double x = (w - center) / width;
        switch (kind) {
        case DensityKind::Lorentzian:
            return (1.0 / (pi * width)) / (1.0 + x * x);
        case DensityKind::Gaussian:
            return std::exp(-x * x) / (width * std::sqrt(pi));
        case DensityKind::QGaussian: {
            if (q_is_gaussian_limit()) return std::exp(-x * x) / (width * std::sqrt(pi));
            return (q_norm() / width) * std::pow(1.0 + (q - 1.0) * x * x, -1.0 / (q - 1.0));
        }
        case DensityKind::DoubleGaussian: {
            const double xm = (w - center + half_splitting) / width;
            const double xp = (w - center - half_splitting) / width;
            return 0.5 * (std::exp(-xm * xm) + std::exp(-xp * xp)) / (width * std::sqrt(pi));
        }
        }
        return 0.0;
    }

    // Analytic continuation of rho to complex argument (used for pole finding).
    cplx value_complex(cplx w) const
    {
        const cplx x = (w - center) / width;
        switch (kind) {
        case DensityKind::Lorentzian:
            return (1.0 / (pi * width)) / (1.0 + x * x);
        case DensityKind::Gaussian:
            return std::exp(-x * x) / (width * std::sqrt(pi));
        case DensityKind::QGaussian: {
            if (q_is_gaussian_limit()) return std::exp(-x * x) / (width * std::sqrt(pi));
            return (q_norm() / width) * std::pow(1.0 + (q - 1.0) * x * x, -1.0 / (q - 1.0));
        }
        case DensityKind::DoubleGaussian: {
            const cplx xm = (w - center + half_splitting) / width;
            const cplx xp = (w - center - half_splitting) / width;
            return 0.5 * (std::exp(-xm * xm) + std::exp(-xp * xp)) / (width * std::sqrt(pi));
        }
        }
        return 0.0;
    }

    double fwhm() const
    {
        switch (kind) {
        case DensityKind::Lorentzian:
            return 2.0 * width;
        case DensityKind::Gaussian:
            return 2.0 * std::sqrt(std::log(2.0)) * width;
        case DensityKind::QGaussian: {
            if (q_is_gaussian_limit()) return 2.0 * std::sqrt(std::log(2.0)) * width;
            return 2.0 * width *
                   std::sqrt((std::pow(2.0, q) - 2.0) / (2.0 * q - 2.0));
        }
        case DensityKind::DoubleGaussian: {
            // No closed form; bisect on the half-max level from the peak outward.
            const double peak = (*this)(peak_position());
            double lo = peak_position(), hi = center + half_splitting + 10.0 * width;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                ((*this)(mid) > 0.5 * peak ? lo : hi) = mid;
            }
            return 2.0 * (0.5 * (lo + hi) - center);
        }
        }
        return 0.0;
    }

    // Location of the global maximum (center, except for a well-split double
    // Gaussian whose maxima sit near center +/- half_splitting).
    double peak_position() const
    {
        if (kind != DensityKind::DoubleGaussian) return center;
        if ((*this)(center) >= (*this)(center + half_splitting)) return center;
        double lo = center, hi = center + half_splitting + width;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double h = 1e-6 * width;
            (((*this)(mid + h) - (*this)(mid - h)) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // Quantile transform: maps u in (0,1) to a frequency distributed as rho.
    double inverse_cdf(double u) const
    {
        if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile argument must be in (0,1)");
        switch (kind) {
        case DensityKind::Lorentzian:
            return center + width * std::tan(pi * (u - 0.5));
        case DensityKind::Gaussian:
            return center + width * boost::math::erf_inv(2.0 * u - 1.0);
        case DensityKind::QGaussian: {
            if (q_is_gaussian_limit()) return center + width * boost::math::erf_inv(2.0 * u - 1.0);
            // Scaled Student-t with nu = (3-q)/(q-1): x = t / sqrt(3-q).
            const double nu = (3.0 - q) / (q - 1.0);
            const double t = boost::math::quantile(boost::math::students_t_distribution<double>(nu), u);
            return center + width * t / std::sqrt(3.0 - q);
        }
        case DensityKind::DoubleGaussian: {
            // Equal-weight mixture transform: low/high half of u selects a branch.
            const double sub = (u < 0.5) ? 2.0 * u : 2.0 * u - 1.0;
            const double c = (u < 0.5) ? center - half_splitting : center + half_splitting;
            const double us = std::clamp(sub, 1e-16, 1.0 - 1e-16);
            return c + width * boost::math::erf_inv(2.0 * us - 1.0);
        }
        }
        return center;
    }
};

inline double spectral_density(const SpectralDensity& d, double w)
{
    d.validate();
    return d(w);
}

// Cavity + ensemble constants; all rates rad/ns.
struct SystemParams {
    double kappa = 0.0;   // cavity energy decay rate
    double omega0 = 0.0;  // cavity resonance
    double Omega = 0.0;   // collective coupling
    double gamma_h = 0.0; // homogeneous linewidth
    SpectralDensity density;

    double delta() const { return omega0 - density.center; }

    void validate() const
    {
        if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
        if (Omega < 0.0) throw std::invalid_argument("Omega must be >= 0");
        if (gamma_h < 0.0) throw std::invalid_argument("gamma_h must be >= 0");
        density.validate();
    }
};

namespace detail {

// chi(w) = Omega^2 Int rho(w') dw' / (w - w' + i gamma_h/2), continued
// analytically below the line Im(w) = -gamma_h/2 where needed.
inline cplx susceptibility_impl(const SystemParams& p, cplx w)
{
    const auto& d = p.density;
    const double O2 = p.Omega * p.Omega;
    const cplx ig2(0.0, p.gamma_h / 2.0);

    switch (d.kind) {
    case DensityKind::Lorentzian:
        return O2 / (w - d.center + ig2 + cplx(0.0, d.width));
    case DensityKind::Gaussian: {
        const cplx z = (w - d.center + ig2) / d.width;
        return cplx(0.0, -1.0) * std::sqrt(pi) * O2 * faddeeva(z) / d.width;
    }
    case DensityKind::DoubleGaussian: {
        const cplx zm = (w - d.center + d.half_splitting + ig2) / d.width;
        const cplx zp = (w - d.center - d.half_splitting + ig2) / d.width;
        return cplx(0.0, -0.5) * std::sqrt(pi) * O2 *
               (faddeeva(zm) + faddeeva(zp)) / d.width;
    }
    case DensityKind::QGaussian: {
        if (d.q_is_gaussian_limit()) {
            const cplx z = (w - d.center + ig2) / d.width;
            return cplx(0.0, -1.0) * std::sqrt(pi) * O2 * faddeeva(z) / d.width;
        }
        const double span = 40.0 * d.width;
        const double a = d.center - span, b = d.center + span;
        const cplx c = w + ig2;
        if (std::abs(w.imag()) < 1e-12) {
            // Real axis: subtract the quasi-singular part (value and slope of
            // rho at w) and integrate it analytically.
            const double wr = w.real();
            const double rw = d(wr);
            const double h = 1e-6 * d.width;
            const double rp = (d(wr + h) - d(wr - h)) / (2.0 * h);
            const cplx smooth = integrate_complex(
                [&](double wp) {
                    return (d(wp) - rw - rp * (wp - wr)) / (c - wp);
                },
                a, b, 1e-11);
            const cplx logterm = std::log((c - a) / (c - b));
            return O2 * (smooth + rw * logterm +
                         rp * (ig2 * logterm - (b - a)));
        }
        cplx val = O2 * integrate_complex([&](double wp) { return d(wp) / (c - wp); }, a, b, 1e-13);
        if (c.imag() < 0.0)
            val -= O2 * cplx(0.0, two_pi) * d.value_complex(c);
        return val;
    }
    }
    return 0.0;
}

inline cplx denominator(const SystemParams& p, cplx w)
{
    return p.omega0 - cplx(0.0, p.kappa / 2.0) - w + susceptibility_impl(p, w);
}

} // namespace detail

inline cplx susceptibility(const SystemParams& p, double w)
{
    p.validate();
    if (p.Omega == 0.0) return 0.0;
    return detail::susceptibility_impl(p, cplx(w, 0.0));
}

// Complex transmission t(w) of the two-sided cavity.
inline cplx transmission(const SystemParams& p, double w)
{
    p.validate();
    return cplx(0.0, p.kappa / 2.0) / detail::denominator(p, cplx(w, 0.0));
}

// One polariton branch: complex pole location.
struct PolaritonPair {
    double omega_plus = 0.0, omega_minus = 0.0; // rad/ns
    double gamma_plus = 0.0, gamma_minus = 0.0; // FWHM-type widths, rad/ns
    bool degenerate = false;

    double rabi_splitting() const { return omega_plus - omega_minus; }
    double rabi_period() const { return two_pi / rabi_splitting(); }
};

// Closed-form poles of the Lorentzian transmission denominator.
inline std::pair<cplx, cplx> lorentzian_poles(const SystemParams& p)
{
    const double wa = p.density.center;
    const double delta = p.delta();
    const double D = p.density.width;
    const cplx base = wa + delta / 2.0 -
                      cplx(0.0, (p.kappa + p.gamma_h + 2.0 * D) / 4.0);
    const cplx inner = cplx(0.0, (p.kappa - 2.0 * D - p.gamma_h)) / 4.0 - delta / 2.0;
    const cplx rad = std::sqrt(p.Omega * p.Omega + inner * inner);
    return {base + rad, base - rad};
}

struct RootFindError : std::runtime_error {
    cplx last_iterate;
    RootFindError(const std::string& m, cplx it) : std::runtime_error(m), last_iterate(it) {}
};

namespace detail {

// Newton iteration on the transmission denominator, derivative by central
// difference in the complex plane (analytic, so any direction works).
inline cplx pole_newton(const SystemParams& p, cplx seed)
{
    cplx w = seed;
    const double scale = std::max({std::abs(seed), p.kappa, p.Omega, 1.0});
    for (int it = 0; it < 80; ++it) {
        const cplx f = denominator(p, w);
        const double h = 1e-7 * scale;
        const cplx df = (denominator(p, w + h) - denominator(p, w - h)) / (2.0 * h);
        const cplx step = f / df;
        w -= step;
        if (std::abs(step) < 1e-13 * scale) return w;
    }
    if (std::abs(denominator(p, w)) < 1e-9 * p.kappa) return w;
    throw RootFindError("pole search did not converge", w);
}

} // namespace detail

// Both polariton poles; delta overrides the cavity detuning.
inline PolaritonPair polariton_modes(const SystemParams& params, double delta)
{
    SystemParams p = params;
    p.omega0 = p.density.center + delta;
    p.validate();

    SystemParams lor = p;
    lor.density.kind = DensityKind::Lorentzian;
    auto [s_plus, s_minus] = lorentzian_poles(lor);

    cplx w_plus = s_plus, w_minus = s_minus;
    PolaritonPair out;
    if (p.density.kind != DensityKind::Lorentzian) {
        w_plus = detail::pole_newton(p, s_plus);
        w_minus = detail::pole_newton(p, s_minus);
        // Near the delta = +/- Omega crossover both seeds can fall into the
        // same basin; retry the second root from perturbed seeds.
        const cplx sep = s_plus - s_minus;
        for (int k = 1; k <= 4 && std::abs(w_plus - w_minus) < 1e-6 * p.kappa; ++k) {
            try {
                w_minus = detail::pole_newton(p, w_plus - 0.5 * k * sep -
                                                     cplx(0.0, 0.25 * k * p.kappa));
            } catch (const RootFindError&) {
            }
        }
    }
    out.degenerate = std::abs(w_plus - w_minus) <
                     1e-6 * std::max(p.kappa, std::abs(w_plus - w_minus) + 1e-300);
    if (w_plus.real() < w_minus.real()) std::swap(w_plus, w_minus);
    out.omega_plus = w_plus.real();
    out.omega_minus = w_minus.real();
    out.gamma_plus = -2.0 * w_plus.imag();
    out.gamma_minus = -2.0 * w_minus.imag();
    return out;
}

inline PolaritonPair polariton_modes(const SystemParams& p)
{
    return polariton_modes(p, p.delta());
}

// pi Omega^2 rho(w_a + Omega): residual polariton broadening on resonance.
inline double protection_residual(const SystemParams& p)
{
    p.validate();
    return pi * p.Omega * p.Omega * p.density(p.density.center + p.Omega);
}

inline double protection_limit_linewidth(const SystemParams& p)
{
    return p.kappa / 2.0 + p.gamma_h + protection_residual(p);
}

// |t|^2 peak/width extraction on a uniform grid, mimicking experimental
// spectrum analysis. Returns peaks sorted by frequency.
struct SpectralPeak {
    double omega = 0.0;
    double height = 0.0;
    double fwhm = 0.0;
};

inline std::vector<SpectralPeak> spectrum_peaks(const SystemParams& p, int n_grid = 4096)
{
    p.validate();
    const double wa = p.density.center;
    const double span = 3.0 * p.Omega + 3.0 * p.kappa;
    const double lo = wa - span, hi = wa + span;
    const double dw = (hi - lo) / (n_grid - 1);

    std::vector<double> s(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        const cplx t = transmission(p, lo + i * dw);
        s[i] = std::norm(t);
    }

    std::vector<SpectralPeak> peaks;
    for (int i = 1; i + 1 < n_grid; ++i) {
        if (!(s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
        // Parabolic refinement of the maximum.
        const double d1 = 0.5 * (s[i + 1] - s[i - 1]);
        const double d2 = s[i + 1] - 2.0 * s[i] + s[i - 1];
        const double off = (d2 < 0.0) ? std::clamp(-d1 / d2, -1.0, 1.0) : 0.0;
        SpectralPeak pk;
        pk.omega = lo + (i + off) * dw;
        pk.height = (d2 < 0.0) ? s[i] - 0.5 * d1 * d1 / d2 : s[i];
        const double half = 0.5 * pk.height;
        // Walk to the half-max crossings with linear interpolation.
        int l = i;
        while (l > 0 && s[l] > half) --l;
        int r = i;
        while (r + 1 < n_grid && s[r] > half) ++r;
        if (l == 0 || r == n_grid - 1 || s[l + 1] == s[l] || s[r - 1] == s[r]) continue;
        const double wl = lo + dw * (l + (half - s[l]) / (s[l + 1] - s[l]));
        const double wr = lo + dw * (r - (half - s[r]) / (s[r - 1] - s[r]));
        pk.fwhm = wr - wl;
        peaks.push_back(pk);
    }
    return peaks;
}

struct SweepRow {
    double delta = 0.0;
    double gamma_plus = 0.0, gamma_minus = 0.0;
    double omega_plus = 0.0, omega_minus = 0.0;
};

enum class SweepMethod { Poles, FwhmOfSpectrum };

// Polariton frequency/linewidth versus cavity-ensemble detuning.
// With three spectral peaks the two outermost are taken as the polaritons.
inline std::vector<SweepRow> linewidth_sweep(const SystemParams& params,
                                             const std::vector<double>& delta_grid,
                                             SweepMethod method = SweepMethod::Poles,
                                             int n_grid = 4096)
{
    std::vector<SweepRow> rows;
    rows.reserve(delta_grid.size());
    std::vector<double> sorted = delta_grid;
    std::sort(sorted.begin(), sorted.end());
    for (double delta : sorted) {
        SweepRow row;
        row.delta = delta;
        if (method == SweepMethod::Poles) {
            const auto pm = polariton_modes(params, delta);
            row.gamma_plus = pm.gamma_plus;
            row.gamma_minus = pm.gamma_minus;
            row.omega_plus = pm.omega_plus;
            row.omega_minus = pm.omega_minus;
        } else {
            SystemParams p = params;
            p.omega0 = p.density.center + delta;
            const auto peaks = spectrum_peaks(p, n_grid);
            if (peaks.size() < 2)
                throw std::runtime_error("fewer than two spectral peaks found");
            const auto& lopk = peaks.front();
            const auto& hipk = peaks.back();
            row.omega_minus = lopk.omega;
            row.omega_plus = hipk.omega;
            row.gamma_minus = lopk.fwhm;
            row.gamma_plus = hipk.fwhm;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace cavprot

#endif // CAVPROT_SPECTRAL_HPP
