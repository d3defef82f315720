#ifndef CAVPROT_DYNAMICS_HPP
#define CAVPROT_DYNAMICS_HPP

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "spectral.hpp"
#include "units.hpp"

namespace cavprot {

// Discrete emitter frequencies for the reduced-N time-domain model.
struct EmitterBath {
    std::vector<double> frequencies; // rad/ns, absolute
    double g = 0.0;                  // uniform coupling, g = Omega/sqrt(N_sim)
    std::uint64_t seed = 0;

    std::size_t size() const { return frequencies.size(); }
};

// Stratified quantile-transform sampling: u_k = (k + U_k)/N with U_k uniform.
inline EmitterBath sample_emitters(const SpectralDensity& d, std::size_t n_sim,
                                   double Omega, std::uint64_t seed)
{
    d.validate();
    if (n_sim < 2) throw std::invalid_argument("need at least 2 emitters");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    EmitterBath bath;
    bath.seed = seed;
    bath.g = Omega / std::sqrt(static_cast<double>(n_sim));
    bath.frequencies.resize(n_sim);
    for (std::size_t k = 0; k < n_sim; ++k) {
        const double u = (static_cast<double>(k) + uni(rng)) / static_cast<double>(n_sim);
        bath.frequencies[k] = d.inverse_cdf(std::clamp(u, 1e-15, 1.0 - 1e-15));
    }
    return bath;
}

// Complex envelope on a uniform time grid (rotating frame at the ensemble
// center). Linear interpolation, zero outside the grid.
struct PulseTable {
    double t0 = 0.0, dt = 0.0; // ns
    std::vector<cplx> env;

    cplx operator()(double t) const
    {
        const double x = (t - t0) / dt;
        if (x < 0.0 || x >= static_cast<double>(env.size() - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(x);
        const double f = x - static_cast<double>(i);
        return env[i] * (1.0 - f) + env[i + 1] * f;
    }

    double energy() const
    {
        double e = 0.0;
        for (std::size_t i = 0; i + 1 < env.size(); ++i)
            e += 0.5 * (std::norm(env[i]) + std::norm(env[i + 1]));
        return e * dt;
    }

    void scale(double c)
    {
        for (auto& v : env) v *= c;
    }
};

enum class PulseFilter { None, BandpassLower, BandpassUpper, GTIChirp };

struct PulseSpec {
    double width_ps = 4.0;            // intensity FWHM of the unfiltered pulse
    PulseFilter filter = PulseFilter::None;
    double phi_gti = 0.52 * pi;       // GTI phase step across [w_minus, w_plus]
    double carrier_detuning = 0.0;    // rad/ns offset from the ensemble center
};

// Two consecutive pulses with relative delay and carrier phase.
struct PulsePair {
    PulseSpec first, second;
    double delay_ps = 0.0;
    double phase = 0.0; // rad, applied to the second pulse
};

namespace detail {

struct FreqGrid {
    int n = 1 << 15;
    double span_ns = 4.0;
};

// Physical detuning (rad/ns) of FFT bin i after fftshift; the e^{-i w t}
// component of the envelope lands at FFT frequency -w/2pi.
inline double bin_detuning(int i, const FreqGrid& g)
{
    const double df = 1.0 / g.span_ns;
    const double f = (i - g.n / 2) * df;
    return -two_pi * f;
}

inline std::vector<cplx> base_gaussian(double width_ps, const FreqGrid& g)
{
    const double s = ps_to_ns(width_ps) / (2.0 * std::sqrt(std::log(2.0)));
    std::vector<cplx> env(g.n);
    const double dt = g.span_ns / g.n;
    for (int i = 0; i < g.n; ++i) {
        const double t = (i - g.n / 2) * dt;
        env[i] = std::exp(-t * t / (2.0 * s * s));
    }
    return env;
}

// Apply a frequency-domain multiplier H(w) to a centered time-domain table.
template <class H>
inline void apply_spectral_filter(std::vector<cplx>& env, const FreqGrid& g, H&& h)
{
    fftshift(env);
    fft_inplace(env, false);
    fftshift(env);
    for (int i = 0; i < g.n; ++i) env[i] *= h(bin_detuning(i, g));
    fftshift(env);
    fft_inplace(env, true);
    fftshift(env);
}

inline PulseTable to_table(std::vector<cplx> env, const FreqGrid& g)
{
    PulseTable p;
    p.dt = g.span_ns / g.n;
    p.t0 = -0.5 * g.span_ns;
    p.env = std::move(env);
    const double e = p.energy();
    if (e > 0.0) p.scale(1.0 / std::sqrt(e));
    return p;
}

} // namespace detail

// Synthesize a (possibly filtered) pulse. w_minus/w_plus are the polariton
// frequencies relative to the ensemble center (rad/ns); only used by filters.
inline PulseTable make_pulse(const PulseSpec& spec, double w_minus = 0.0,
                             double w_plus = 0.0)
{
    if (!(spec.width_ps > 0.0)) throw std::invalid_argument("pulse width must be > 0");
    detail::FreqGrid g;
    auto env = detail::base_gaussian(spec.width_ps, g);
    const double rabi = w_plus - w_minus;
    switch (spec.filter) {
    case PulseFilter::None:
        break;
    case PulseFilter::BandpassLower:
        detail::apply_spectral_filter(env, g, [&](double w) {
            return std::abs(w - w_minus) <= rabi / 4.0 ? 1.0 : 0.0;
        });
        break;
    case PulseFilter::BandpassUpper:
        detail::apply_spectral_filter(env, g, [&](double w) {
            return std::abs(w - w_plus) <= rabi / 4.0 ? 1.0 : 0.0;
        });
        break;
    case PulseFilter::GTIChirp:
        detail::apply_spectral_filter(env, g, [&](double w) {
            const double x = std::clamp((w - w_minus) / rabi, 0.0, 1.0);
            return std::polar(1.0, spec.phi_gti * x);
        });
        break;
    }
    if (spec.carrier_detuning != 0.0) {
        const double dt = g.span_ns / g.n;
        for (int i = 0; i < g.n; ++i) {
            const double t = (i - g.n / 2) * dt;
            env[i] *= std::polar(1.0, -spec.carrier_detuning * t);
        }
    }
    return detail::to_table(std::move(env), g);
}

// Frequency-bin qubit pulse: alpha and beta weight identical Gaussian bins
// (FWHM = Omega_R/4) at the lower/upper polariton frequencies.
inline PulseTable make_two_bin_pulse(cplx alpha, cplx beta, double w_minus,
                                     double w_plus, double width_ps = 4.0)
{
    detail::FreqGrid g;
    auto env = detail::base_gaussian(width_ps, g);
    const double rabi = w_plus - w_minus;
    const double sw = (rabi / 4.0) / (2.0 * std::sqrt(std::log(2.0)));
    detail::apply_spectral_filter(env, g, [&](double w) {
        const double xm = (w - w_minus) / sw, xp = (w - w_plus) / sw;
        return alpha * std::exp(-0.5 * xm * xm) + beta * std::exp(-0.5 * xp * xp);
    });
    auto p = detail::to_table(std::move(env), g);
    // Unit-energy tables: rescale so |alpha|^2+|beta|^2 carries the weight.
    p.scale(std::sqrt(std::norm(alpha) + std::norm(beta)));
    return p;
}

// Time-sampled cavity response. c_t = sqrt(kappa/2) a; c_r = c_in + c_t.
struct FieldTrace {
    std::vector<double> t;   // ns
    std::vector<cplx> a;     // intracavity field
    std::vector<cplx> c_t;   // transmitted field
    std::vector<cplx> c_in;  // drive at the same samples
    double stored_final = 0.0; // |a|^2 + sum |b_k|^2 at the last sample

    cplx c_r(std::size_t i) const { return c_in[i] + c_t[i]; }

    double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }

    double energy_transmitted() const
    {
        double e = 0.0;
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
            e += 0.5 * (std::norm(c_t[i]) + std::norm(c_t[i + 1]));
        return e * dt();
    }
};

namespace detail {

using ode_state = std::vector<cplx>;

struct CoupledRhs {
    double kappa, delta_c, gamma_h, g;
    const std::vector<double>* detunings; // emitter offsets from w_a
    const PulseTable* drive;

    void operator()(const ode_state& y, ode_state& dydt, double t) const
    {
        const cplx a = y[0];
        cplx sum = 0.0;
        const auto& dk = *detunings;
        const std::size_t n = dk.size();
        for (std::size_t k = 0; k < n; ++k) sum += y[k + 1];
        dydt[0] = -(cplx(kappa / 2.0, delta_c)) * a -
                  std::sqrt(kappa / 2.0) * (*drive)(t) + g * sum;
        for (std::size_t k = 0; k < n; ++k)
            dydt[k + 1] = -(cplx(gamma_h / 2.0, dk[k])) * y[k + 1] - g * a;
    }
};

} // namespace detail

// Integrate the coupled cavity-bath equations in the frame rotating at the
// ensemble center; all emitters start in the ground state, cavity empty.
inline FieldTrace simulate(const SystemParams& p, const EmitterBath& bath,
                           const PulseTable& drive, double t_start_ns,
                           double t_end_ns, std::size_t n_out = 4096)
{
    p.validate();
    if (!(t_end_ns > t_start_ns)) throw std::invalid_argument("bad time window");

    std::vector<double> det(bath.size());
    for (std::size_t k = 0; k < bath.size(); ++k)
        det[k] = bath.frequencies[k] - p.density.center;

    detail::CoupledRhs rhs{p.kappa, p.delta(), p.gamma_h, bath.g, &det, &drive};

    detail::ode_state y(bath.size() + 1, cplx(0.0, 0.0));
    std::vector<double> times(n_out);
    const double dt = (t_end_ns - t_start_ns) / static_cast<double>(n_out - 1);
    for (std::size_t i = 0; i < n_out; ++i) times[i] = t_start_ns + dt * i;

    FieldTrace trace;
    trace.t = times;
    trace.a.reserve(n_out);
    trace.c_t.reserve(n_out);
    trace.c_in.reserve(n_out);

    namespace od = boost::numeric::odeint;
    auto stepper = od::make_controlled(1e-12, 1e-8,
                                       od::runge_kutta_dopri5<detail::ode_state>());
    const double root_half_kappa = std::sqrt(p.kappa / 2.0);
    od::integrate_times(stepper, rhs, y, times.begin(), times.end(), 1e-4,
                        [&](const detail::ode_state& s, double t) {
                            trace.a.push_back(s[0]);
                            trace.c_t.push_back(root_half_kappa * s[0]);
                            trace.c_in.push_back(drive(t));
                        });
    for (const auto& v : y) trace.stored_final += std::norm(v);
    return trace;
}

// Cross-correlation O(tau) = Int conj(f1(t)) f2(t - tau) dt on the grid of f1.
inline cplx field_overlap(const FieldTrace& f1, const FieldTrace& f2, double tau_ns)
{
    const double dt2 = f2.dt();
    auto sample2 = [&](double t) -> cplx {
        const double x = (t - f2.t.front()) / dt2;
        if (x < 0.0 || x >= static_cast<double>(f2.t.size() - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(x);
        const double fr = x - static_cast<double>(i);
        return f2.c_t[i] * (1.0 - fr) + f2.c_t[i + 1] * fr;
    };
    cplx acc = 0.0;
    for (std::size_t i = 0; i + 1 < f1.t.size(); ++i) {
        const cplx v0 = std::conj(f1.c_t[i]) * sample2(f1.t[i] - tau_ns);
        const cplx v1 = std::conj(f1.c_t[i + 1]) * sample2(f1.t[i + 1] - tau_ns);
        acc += 0.5 * (v0 + v1);
    }
    return acc * f1.dt();
}

struct FringeTrace {
    std::vector<double> tau_ps;
    std::vector<double> amplitude;  // envelope, 4|O(tau)|
    std::vector<double> count_max;  // C at the best-phase extremes
    std::vector<double> count_min;
};

// Two-pulse interference envelope versus delay. Linearity lets us solve each
// pulse once; counts at any delay/phase follow from overlap integrals.
// The envelope uses four carrier phases {0, pi/2, pi, 3pi/2}:
// A = hypot(C(0)-C(pi), C(pi/2)-C(3pi/2)) = 4|O|, which tracks what a
// sub-wavelength delay sweep measures even for single-sided excitation.
inline FringeTrace fringe_scan(const SystemParams& p, const EmitterBath& bath,
                               const PulsePair& pp,
                               const std::vector<double>& tau_grid_ps)
{
    const auto pm = polariton_modes(p);
    const double wm = pm.omega_minus - p.density.center;
    const double wp = pm.omega_plus - p.density.center;

    const PulseTable pulse1 = make_pulse(pp.first, wm, wp);
    const PulseTable pulse2 = make_pulse(pp.second, wm, wp);

    const double tau_max = ps_to_ns(*std::max_element(tau_grid_ps.begin(), tau_grid_ps.end()));
    const double tail = std::max(10.0 / p.kappa, 0.25);
    const double t_end = tau_max + tail;

    const FieldTrace f1 = simulate(p, bath, pulse1, -0.06, t_end, 8192);
    const FieldTrace f2 = simulate(p, bath, pulse2, -0.06, t_end, 8192);

    const double e1 = f1.energy_transmitted();
    const double e2 = f2.energy_transmitted();

    FringeTrace out;
    out.tau_ps = tau_grid_ps;
    out.amplitude.reserve(tau_grid_ps.size());
    out.count_max.reserve(tau_grid_ps.size());
    out.count_min.reserve(tau_grid_ps.size());
    for (double tau_ps : tau_grid_ps) {
        const cplx o = field_overlap(f1, f2, ps_to_ns(tau_ps)) *
                       std::polar(1.0, pp.phase);
        const double amp = 4.0 * std::abs(o);
        out.amplitude.push_back(amp);
        out.count_max.push_back(e1 + e2 + 0.5 * amp);
        out.count_min.push_back(e1 + e2 - 0.5 * amp);
    }
    return out;
}

// Fraction of transmitted energy inside [t_start, t_end] (ps).
inline double retrieval_efficiency(const FieldTrace& trace, double t_start_ps,
                                   double t_end_ps)
{
    if (!(t_end_ps > t_start_ps)) {
        if (t_end_ps == t_start_ps) return 0.0;
        throw std::invalid_argument("empty retrieval window");
    }
    const double a = ps_to_ns(t_start_ps), b = ps_to_ns(t_end_ps);
    double win = 0.0, tot = 0.0;
    for (std::size_t i = 0; i + 1 < trace.t.size(); ++i) {
        const double seg = 0.5 * (std::norm(trace.c_t[i]) + std::norm(trace.c_t[i + 1]));
        tot += seg;
        const double tm = 0.5 * (trace.t[i] + trace.t[i + 1]);
        if (tm >= a && tm <= b) win += seg;
    }
    if (tot == 0.0) return 0.0;
    return win / tot;
}

// Least-squares exponential fit in the field-amplitude convention
// A(tau) = A0 exp(-2 tau / T); returns T in the tau units used.
inline double fit_fringe_decay(const std::vector<double>& tau,
                               const std::vector<double>& amp)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (!(amp[i] > 0.0)) continue;
        const double x = tau[i], y = std::log(amp[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("not enough points for decay fit");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (!(slope < 0.0)) throw std::runtime_error("fringe amplitude does not decay");
    return -2.0 / slope;
}

// Interior local minima/maxima of a sampled curve, parabolic-refined.
inline std::vector<double> local_extrema(const std::vector<double>& x,
                                         const std::vector<double>& y,
                                         bool maxima)
{
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const bool is_ext = maxima ? (y[i] > y[i - 1] && y[i] >= y[i + 1])
                                   : (y[i] < y[i - 1] && y[i] <= y[i + 1]);
        if (!is_ext) continue;
        const double d1 = 0.5 * (y[i + 1] - y[i - 1]);
        const double d2 = y[i + 1] - 2.0 * y[i] + y[i - 1];
        const double off = (d2 != 0.0) ? std::clamp(-d1 / d2, -1.0, 1.0) : 0.0;
        out.push_back(x[i] + off * (x[i] - x[i - 1]));
    }
    return out;
}

} // namespace cavprot

#endif // CAVPROT_DYNAMICS_HPP
