#include <catch2/catch_amalgamated.hpp>

#include <cavprot/cavprot.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace cavprot;
using Catch::Approx;

namespace {

// FWHM of a sample set via histogram with linear interpolation at half max.
double histogram_fwhm(const std::vector<double>& xs, int nbins)
{
    const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *lo_it, hi = *hi_it, w = (hi - lo) / nbins;
    std::vector<double> h(nbins, 0.0);
    for (double x : xs) {
        int i = std::clamp(static_cast<int>((x - lo) / w), 0, nbins - 1);
        h[i] += 1.0;
    }
    const auto pk = std::max_element(h.begin(), h.end());
    const double half = 0.5 * *pk;
    const auto ip = static_cast<int>(pk - h.begin());
    auto cross = [&](int dir) {
        for (int i = ip; i + dir >= 0 && i + dir < nbins; i += dir) {
            if (h[i + dir] < half) {
                const double f = (h[i] - half) / (h[i] - h[i + dir]);
                return lo + w * (i + 0.5 + dir * f);
            }
        }
        return dir < 0 ? lo : hi;
    };
    return cross(+1) - cross(-1);
}

EmitterBath empty_bath()
{
    EmitterBath b;
    b.frequencies = {0.0, 0.0};
    b.g = 0.0;
    return b;
}

} // namespace

TEST_CASE("emitter sampling is deterministic and exactly normalized")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    const auto b1 = sample_emitters(p.density, 500, p.Omega, 42);
    const auto b2 = sample_emitters(p.density, 500, p.Omega, 42);
    REQUIRE(b1.frequencies == b2.frequencies);

    const auto b3 = sample_emitters(p.density, 500, p.Omega, 43);
    REQUIRE(b1.frequencies != b3.frequencies);

    for (std::size_t n : {2ul, 17ul, 500ul}) {
        const auto b = sample_emitters(p.density, n, p.Omega, 1);
        REQUIRE(b.g * b.g * static_cast<double>(n) == Approx(p.Omega * p.Omega).epsilon(1e-15));
    }

    REQUIRE_THROWS_AS(sample_emitters(p.density, 0, p.Omega, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_emitters(p.density, 1, p.Omega, 1), std::invalid_argument);
}

TEST_CASE("sampled ensemble width matches the source density")
{
    SpectralDensity d;
    d.kind = DensityKind::Gaussian;
    d.center = 0.0;
    d.width = ghz_to_radns(14.6);

    // Large-sample histogram width of the two-branch inhomogeneous profile.
    const auto big = sample_emitters(d, 100000, 1.0, 5);
    std::vector<double> ghz(big.frequencies.size());
    std::transform(big.frequencies.begin(), big.frequencies.end(), ghz.begin(),
                   radns_to_ghz);
    REQUIRE(histogram_fwhm(ghz, 200) == Approx(24.0).margin(1.0));

    for (std::size_t n : {1000ul, 4000ul}) {
        const auto b = sample_emitters(d, n, 1.0, 11);
        const double f = histogram_fwhm(b.frequencies, 40);
        REQUIRE(f == Approx(d.fwhm()).epsilon(0.10));
    }
}

TEST_CASE("pulse synthesis: unit energy, carrier ramp, argument checks")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    const auto pm = polariton_modes(p);
    const double wm = pm.omega_minus - p.density.center;
    const double wp = pm.omega_plus - p.density.center;

    for (PulseFilter f : {PulseFilter::None, PulseFilter::BandpassLower,
                          PulseFilter::BandpassUpper, PulseFilter::GTIChirp}) {
        PulseSpec s;
        s.filter = f;
        const auto tab = make_pulse(s, wm, wp);
        REQUIRE(tab.energy() == Approx(1.0).epsilon(1e-12));
    }

    PulseSpec det;
    det.width_ps = 50.0;
    det.carrier_detuning = ghz_to_radns(10.0);
    const auto tab = make_pulse(det);
    const cplx r = tab(0.001) / tab(-0.001);
    REQUIRE(std::arg(r) == Approx(-det.carrier_detuning * 0.002).margin(1e-6));

    PulseSpec bad;
    bad.width_ps = 0.0;
    REQUIRE_THROWS_AS(make_pulse(bad), std::invalid_argument);
}

TEST_CASE("two-bin pulse carries the qubit weights")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    const auto pm = polariton_modes(p);
    const double wm = pm.omega_minus - p.density.center;
    const double wp = pm.omega_plus - p.density.center;

    const auto t1 = make_two_bin_pulse(1.0, 0.0, wm, wp);
    REQUIRE(t1.energy() == Approx(1.0).epsilon(1e-10));
    const auto t2 = make_two_bin_pulse(cplx(0.5, 0.5), cplx(0.0, std::sqrt(0.5)), wm, wp);
    REQUIRE(t2.energy() == Approx(1.0).epsilon(1e-10));
    // Scaling both weights scales the field, not the shape.
    const auto t3 = make_two_bin_pulse(2.0, 0.0, wm, wp);
    REQUIRE(t3.energy() == Approx(4.0).epsilon(1e-10));
}

TEST_CASE("uncoupled cavity rings down at rate kappa")
{
    SystemParams p = preset("nd-yvo-0.1pct");
    PulseSpec s;
    s.width_ps = 2.0;
    const auto drive = make_pulse(s);
    const auto tr = simulate(p, empty_bath(), drive, -0.02, 0.12, 4096);

    // After the drive has passed, |a|^2 decays as exp(-kappa t).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (tr.t[i] < 0.02 || tr.t[i] > 0.08) continue;
        const double y = std::log(std::norm(tr.a[i]));
        sx += tr.t[i]; sy += y; sxx += tr.t[i] * tr.t[i]; sxy += tr.t[i] * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    REQUIRE(-slope == Approx(p.kappa).epsilon(0.01));

    REQUIRE_THROWS_AS(simulate(p, empty_bath(), drive, 0.1, 0.1, 64),
                      std::invalid_argument);
}

TEST_CASE("energy balance: input = output + stored when emitters are lossless")
{
    SystemParams p = preset("nd-yvo-0.1pct");
    p.gamma_h = 0.0;
    const auto bath = sample_emitters(p.density, 2000, p.Omega, 7);
    const auto drive = make_pulse(PulseSpec{});
    const auto tr = simulate(p, bath, drive, -0.05, 1.2, 16384);

    double e_out = 0.0;
    for (std::size_t i = 0; i + 1 < tr.t.size(); ++i)
        e_out += 0.5 * (std::norm(tr.c_t[i]) + std::norm(tr.c_t[i + 1]) +
                        std::norm(tr.c_r(i)) + std::norm(tr.c_r(i + 1)));
    e_out *= tr.dt();

    const double e_in = drive.energy();
    REQUIRE(e_out + tr.stored_final == Approx(e_in).epsilon(1e-3));
    // A lossless bath keeps a sizeable dark-state fraction stored forever.
    REQUIRE(tr.stored_final > 0.05);

    // With dephasing on, the open system can only lose energy.
    SystemParams pl = preset("nd-yvo-1pct");
    const auto bath2 = sample_emitters(pl.density, 2000, pl.Omega, 7);
    const auto tr2 = simulate(pl, bath2, drive, -0.05, 1.2, 16384);
    double e_out2 = 0.0;
    for (std::size_t i = 0; i + 1 < tr2.t.size(); ++i)
        e_out2 += 0.5 * (std::norm(tr2.c_t[i]) + std::norm(tr2.c_t[i + 1]) +
                         std::norm(tr2.c_r(i)) + std::norm(tr2.c_r(i + 1)));
    e_out2 *= tr2.dt();
    REQUIRE(e_out2 + tr2.stored_final <= e_in + 1e-6);
}

TEST_CASE("steady-state response of the sampled bath matches the continuum model")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    const auto bath = sample_emitters(p.density, 4000, p.Omega, 7);
    for (double det_ghz : {0.0, 12.0, 27.25, 40.0}) {
        PulseSpec s;
        s.width_ps = 400.0;
        s.carrier_detuning = ghz_to_radns(det_ghz);
        const auto drive = make_pulse(s);
        const auto tr = simulate(p, bath, drive, -1.9, 1.9, 4096);
        const std::size_t i0 = tr.t.size() / 2;
        const cplx ratio = tr.c_t[i0] / tr.c_in[i0];
        const cplx tw = transmission(p, p.density.center + ghz_to_radns(det_ghz));
        CAPTURE(det_ghz);
        REQUIRE(std::abs(ratio) == Approx(std::abs(tw)).epsilon(0.01));
    }
}

TEST_CASE("uncoupled two-pulse fringes decay with constant 4/kappa")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    PulsePair pp;
    pp.first.width_ps = pp.second.width_ps = 2.0;
    std::vector<double> taus;
    for (int i = 2; i <= 40; ++i) taus.push_back(i * 1.0);
    const auto fr = fringe_scan(p, empty_bath(), pp, taus);
    const double fitted = fit_fringe_decay(fr.tau_ps, fr.amplitude);
    REQUIRE(fitted == Approx(ns_to_ps(4.0 / p.kappa)).epsilon(0.05));

    // Envelope and count extremes are consistent: C_max - C_min = A.
    for (std::size_t i = 0; i < taus.size(); ++i)
        REQUIRE(fr.count_max[i] - fr.count_min[i] ==
                Approx(fr.amplitude[i]).margin(1e-12));
}

TEST_CASE("two-polariton fringes oscillate at the vacuum Rabi period")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    const auto bath = sample_emitters(p.density, 2000, p.Omega, 7);
    const double tau_r = ns_to_ps(polariton_modes(p).rabi_period());

    PulsePair tl; // transform-limited pulses excite both polaritons
    std::vector<double> taus;
    for (int i = 0; i <= 200; ++i) taus.push_back(1.0 + i * 0.25);
    const auto fr = fringe_scan(p, bath, tl, taus);

    const auto mx = local_extrema(fr.tau_ps, fr.amplitude, true);
    const auto mn = local_extrema(fr.tau_ps, fr.amplitude, false);
    REQUIRE(mx.size() >= 3);
    REQUIRE(mn.size() >= 3);
    for (std::size_t i = 0; i + 1 < std::min<std::size_t>(mx.size(), 3); ++i)
        REQUIRE(mx[i + 1] - mx[i] == Approx(tau_r).epsilon(0.05));
    // Node spacing equals the period; absolute positions sit within a quarter
    // period of the odd half-multiples (the finite linewidth skews them early).
    for (std::size_t i = 0; i < std::min<std::size_t>(mn.size(), 3); ++i) {
        const double ideal = (2.0 * i + 1.0) * tau_r / 2.0;
        REQUIRE(std::abs(mn[i] - ideal) < tau_r / 4.0);
    }

    SECTION("an intracavity phase step shifts the interference nodes")
    {
        PulsePair gti = tl;
        gti.first.filter = PulseFilter::GTIChirp; // phase step 0.52 pi
        const auto fr2 = fringe_scan(p, bath, gti, taus);
        const auto mn2 = local_extrema(fr2.tau_ps, fr2.amplitude, false);
        REQUIRE(mn2.size() >= 1);
        REQUIRE(mn2[0] - mn[0] == Approx(tau_r / 4.0).epsilon(0.20));
    }
}

TEST_CASE("fringe envelope is converged in emitter count and seed")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    PulsePair tl;
    std::vector<double> taus;
    for (int i = 0; i <= 30; ++i) taus.push_back(1.0 + i * 2.0);

    const auto a1 = fringe_scan(p, sample_emitters(p.density, 2000, p.Omega, 7),
                                tl, taus).amplitude;
    const auto a2 = fringe_scan(p, sample_emitters(p.density, 4000, p.Omega, 8),
                                tl, taus).amplitude;
    const double amax = *std::max_element(a1.begin(), a1.end());
    for (std::size_t i = 0; i < taus.size(); ++i)
        REQUIRE(std::abs(a2[i] - a1[i]) / amax < 0.01);

    const auto a3 = fringe_scan(p, sample_emitters(p.density, 2000, p.Omega, 99),
                                tl, taus).amplitude;
    double rms = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double d = (a3[i] - a1[i]) / amax;
        rms += d * d;
    }
    REQUIRE(std::sqrt(rms / static_cast<double>(taus.size())) < 0.02);
}

TEST_CASE("retrieval efficiency is a window fraction of transmitted energy")
{
    const SystemParams p = preset("nd-yvo-0.1pct");
    const auto bath = sample_emitters(p.density, 2000, p.Omega, 7);
    const auto tr = simulate(p, bath, make_pulse(PulseSpec{}), -0.05, 0.4, 8192);

    REQUIRE(retrieval_efficiency(tr, -50.0, 400.0) == Approx(1.0).margin(1e-12));
    REQUIRE(retrieval_efficiency(tr, -50.0, -40.0) == Approx(0.0).margin(1e-9));
    REQUIRE(retrieval_efficiency(tr, 10.0, 10.0) == 0.0);
    REQUIRE_THROWS_AS(retrieval_efficiency(tr, 10.0, 5.0), std::invalid_argument);

    // Window sensitivity: the first-revival window captures a strict fraction.
    const double tau_r = ns_to_ps(polariton_modes(p).rabi_period());
    const double frac = retrieval_efficiency(tr, tau_r / 2.0, 3.0 * tau_r / 2.0);
    REQUIRE(frac > 0.0);
    REQUIRE(frac < 1.0);
    const double wider = retrieval_efficiency(tr, tau_r / 2.0, 5.0 * tau_r / 2.0);
    REQUIRE(wider > frac);
}

TEST_CASE("fringe decay fit recovers a known exponential")
{
    std::vector<double> tau, amp;
    for (int i = 0; i < 50; ++i) {
        tau.push_back(i * 0.5);
        amp.push_back(3.0 * std::exp(-2.0 * tau.back() / 14.5));
    }
    REQUIRE(fit_fringe_decay(tau, amp) == Approx(14.5).epsilon(1e-12));
    std::vector<double> up = {0.0, 1.0}, a_up = {1.0, 2.0};
    REQUIRE_THROWS(fit_fringe_decay(up, a_up));
}
