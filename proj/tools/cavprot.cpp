// Command-line harness for the cavity-protection simulator: spectra, sweeps,
// time-domain runs, fringe scans, qubit tomography, and classical bounds.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cavprot/cavprot.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace cavprot;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Shared run plumbing: config file, output path/format.

struct RunContext {
    std::string config_path;
    std::string output_path;
    std::string format = "csv";
    KeyValueConfig cfg;

    CLI::Option* o_output = nullptr;
    CLI::Option* o_format = nullptr;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--config", config_path,
                        "key=value config file (flags override file values)");
        o_output = cmd->add_option("-o,--output", output_path, "output file path");
        o_format = cmd->add_option("--format", format, "output format: csv | json")
                       ->check(CLI::IsMember({"csv", "json"}));
    }

    void load()
    {
        if (!config_path.empty()) cfg = KeyValueConfig::parse_file(config_path);
        if (!*o_format) format = cfg.consume("format", format);
        if (format != "csv" && format != "json")
            throw ConfigError("format must be 'csv' or 'json', got: " + format);
        if (!*o_output) output_path = cfg.consume("output", output_path);
    }

    // <env CAVPROT_OUTPUT_DIR or .>/<stem>.<ext> unless the user chose a path.
    std::string resolve_output(const std::string& stem) const
    {
        if (!output_path.empty()) return output_path;
        const char* dir = std::getenv("CAVPROT_OUTPUT_DIR");
        return std::string(dir ? dir : ".") + "/" + stem +
               (format == "json" ? ".json" : ".csv");
    }

    void write(const CsvTable& t, const std::string& stem) const
    {
        const std::string path = resolve_output(stem);
        if (format == "csv") {
            t.save(path);
        } else {
            json j;
            j["columns"] = t.columns;
            j["rows"] = t.rows;
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot open output file: " + path);
            f << j.dump(2) << "\n";
        }
        std::cout << "wrote " << path << "\n";
    }
};

// ---------------------------------------------------------------------------
// Shared physical-system options (all user units GHz; internal rad/ns).

struct SysOpts {
    std::string preset_name = "nd-yvo-0.1pct";
    std::string density;
    double kappa = 0.0, coupling = 0.0, width = 0.0, gamma_h = 0.0;
    double q = 1.3, splitting = 0.0, cavity_detuning = 0.0;

    CLI::Option *o_preset, *o_density, *o_kappa, *o_coupling, *o_width,
        *o_gamma, *o_q, *o_split, *o_cavdet;

    void add(CLI::App* cmd)
    {
        o_preset = cmd->add_option("--preset", preset_name,
                                   "parameter preset: nd-yvo-0.1pct | "
                                   "nd-yvo-0.1pct-double | nd-yvo-1pct");
        o_density = cmd->add_option("--density", density,
                                    "lineshape: gaussian | lorentzian | "
                                    "q-gaussian | double-gaussian")
                        ->check(CLI::IsMember({"gaussian", "lorentzian",
                                               "q-gaussian", "double-gaussian"}));
        o_kappa = cmd->add_option("--kappa", kappa, "cavity linewidth kappa (GHz)");
        o_coupling = cmd->add_option("--coupling", coupling,
                                     "collective coupling Omega (GHz)");
        o_width = cmd->add_option("--width", width, "inhomogeneous width Delta (GHz)");
        o_gamma = cmd->add_option("--gamma-h", gamma_h, "homogeneous linewidth (GHz)");
        o_q = cmd->add_option("--q", q, "q-Gaussian shape parameter (1 < q < 2)");
        o_split = cmd->add_option("--splitting", splitting,
                                  "double-Gaussian branch half-splitting (GHz)");
        o_cavdet = cmd->add_option("--cavity-detuning", cavity_detuning,
                                   "cavity-ensemble detuning delta (GHz)");
    }

    // Flag > config-file value > preset default.
    SystemParams resolve(KeyValueConfig& cfg) const
    {
        const std::string name =
            *o_preset ? preset_name : cfg.consume("preset", preset_name);
        SystemParams p = preset(name);

        auto num = [&](CLI::Option* o, double flag_val, const char* key,
                       double cur) {
            if (*o) {
                cfg.consume(key, ""); // flags win; drop any file value
                return flag_val;
            }
            return cfg.consume_double(key, cur);
        };
        p.kappa = ghz_to_radns(num(o_kappa, kappa, "kappa_ghz", radns_to_ghz(p.kappa)));
        p.Omega = ghz_to_radns(
            num(o_coupling, coupling, "coupling_ghz", radns_to_ghz(p.Omega)));
        p.gamma_h = ghz_to_radns(
            num(o_gamma, gamma_h, "gamma_h_ghz", radns_to_ghz(p.gamma_h)));
        p.density.width = ghz_to_radns(
            num(o_width, width, "width_ghz", radns_to_ghz(p.density.width)));
        p.density.q = num(o_q, q, "q", p.density.q);
        p.density.half_splitting = ghz_to_radns(
            num(o_split, splitting, "splitting_ghz",
                radns_to_ghz(p.density.half_splitting)));
        p.omega0 = p.density.center +
                   ghz_to_radns(num(o_cavdet, cavity_detuning,
                                    "cavity_detuning_ghz", radns_to_ghz(p.delta())));

        std::string kind = *o_density ? density : cfg.consume("density", "");
        if (!kind.empty()) {
            if (kind == "gaussian") p.density.kind = DensityKind::Gaussian;
            else if (kind == "lorentzian") p.density.kind = DensityKind::Lorentzian;
            else if (kind == "q-gaussian") p.density.kind = DensityKind::QGaussian;
            else if (kind == "double-gaussian") p.density.kind = DensityKind::DoubleGaussian;
            else throw ConfigError("unknown density kind: " + kind);
        }
        p.validate();
        return p;
    }
};

// Emitter-bath options shared by the time-domain subcommands.
struct BathOpts {
    std::size_t n_sim = 2000;
    std::uint64_t seed = 7;
    CLI::Option *o_n, *o_seed;

    void add(CLI::App* cmd)
    {
        o_n = cmd->add_option("--n-sim", n_sim, "number of sampled emitters");
        o_seed = cmd->add_option("--seed", seed, "sampling seed");
    }

    EmitterBath resolve(const SystemParams& p, KeyValueConfig& cfg)
    {
        if (!*o_n) n_sim = static_cast<std::size_t>(
            cfg.consume_double("n_sim", static_cast<double>(n_sim)));
        if (!*o_seed) seed = static_cast<std::uint64_t>(
            cfg.consume_double("seed", static_cast<double>(seed)));
        if (p.Omega == 0.0) {
            EmitterBath b;
            b.frequencies = {p.density.center, p.density.center};
            b.g = 0.0;
            b.seed = seed;
            return b;
        }
        return sample_emitters(p.density, n_sim, p.Omega, seed);
    }
};

PulseFilter parse_filter(const std::string& s)
{
    if (s == "none") return PulseFilter::None;
    if (s == "lower") return PulseFilter::BandpassLower;
    if (s == "upper") return PulseFilter::BandpassUpper;
    if (s == "gti") return PulseFilter::GTIChirp;
    throw ConfigError("unknown pulse filter: " + s);
}

std::vector<double> linspace_step(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo))
        throw ConfigError("bad grid: need min <= max and step > 0");
    std::vector<double> g;
    for (double x = lo; x <= hi + 1e-9 * step; x += step) g.push_back(x);
    return g;
}

// ---------------------------------------------------------------------------
// Result builders shared between plain subcommands and `reproduce`.

CsvTable spectrum_table(const SystemParams& p, double lo_ghz, double hi_ghz, int n)
{
    if (n < 2) throw ConfigError("spectrum needs at least 2 grid points");
    CsvTable t;
    t.columns = {"omega_GHz", "t_re", "t_im", "t_abs2"};
    for (int i = 0; i < n; ++i) {
        const double w_ghz = lo_ghz + (hi_ghz - lo_ghz) * i / (n - 1);
        const cplx tv = transmission(p, p.density.center + ghz_to_radns(w_ghz));
        t.add_row({w_ghz, tv.real(), tv.imag(), std::norm(tv)});
    }
    return t;
}

CsvTable sweep_table(const SystemParams& p, const std::vector<double>& deltas_ghz,
                     SweepMethod method)
{
    std::vector<double> deltas(deltas_ghz.size());
    std::transform(deltas_ghz.begin(), deltas_ghz.end(), deltas.begin(),
                   ghz_to_radns);
    const auto rows = linewidth_sweep(p, deltas, method);
    CsvTable t;
    t.columns = {"delta_GHz", "omega_minus_GHz", "omega_plus_GHz",
                 "gamma_minus_GHz", "gamma_plus_GHz"};
    for (const auto& r : rows)
        t.add_row({radns_to_ghz(r.delta),
                   radns_to_ghz(r.omega_minus - p.density.center),
                   radns_to_ghz(r.omega_plus - p.density.center),
                   radns_to_ghz(r.gamma_minus), radns_to_ghz(r.gamma_plus)});
    return t;
}

CsvTable fringe_table(const SystemParams& p, const EmitterBath& bath,
                      const std::vector<PulsePair>& configs,
                      const std::vector<std::string>& labels,
                      const std::vector<double>& taus)
{
    CsvTable t;
    t.columns = {"tau_ps"};
    for (const auto& l : labels) t.columns.push_back("amplitude_" + l);
    std::vector<std::vector<double>> amps;
    for (const auto& pp : configs)
        amps.push_back(fringe_scan(p, bath, pp, taus).amplitude);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        std::vector<double> row{taus[i]};
        for (const auto& a : amps) row.push_back(a[i]);
        t.add_row(row);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Subcommands.

void run_spectrum(RunContext& ctx, SysOpts& sys, double lo, double hi, int n,
                  bool have_lo, bool have_hi)
{
    ctx.load();
    const SystemParams p = sys.resolve(ctx.cfg);
    if (!have_lo) lo = ctx.cfg.consume_double("omega_min_ghz",
                                              -radns_to_ghz(1.5 * p.Omega + 1.5 * p.kappa));
    if (!have_hi) hi = ctx.cfg.consume_double("omega_max_ghz",
                                              radns_to_ghz(1.5 * p.Omega + 1.5 * p.kappa));
    n = static_cast<int>(ctx.cfg.consume_double("points", n));
    ctx.cfg.reject_unknown();
    ctx.write(spectrum_table(p, lo, hi, n), "spectrum");
}

void run_sweep(RunContext& ctx, SysOpts& sys, double lo, double hi, double step,
               const std::string& method)
{
    ctx.load();
    const SystemParams p = sys.resolve(ctx.cfg);
    lo = ctx.cfg.consume_double("delta_min_ghz", lo);
    hi = ctx.cfg.consume_double("delta_max_ghz", hi);
    step = ctx.cfg.consume_double("delta_step_ghz", step);
    ctx.cfg.reject_unknown();
    const SweepMethod m =
        method == "fwhm" ? SweepMethod::FwhmOfSpectrum : SweepMethod::Poles;
    ctx.write(sweep_table(p, linspace_step(lo, hi, step), m), "sweep");
}

void run_dynamics(RunContext& ctx, SysOpts& sys, BathOpts& bopt, double width_ps,
                  const std::string& filter, double detuning_ghz, double t_end_ps,
                  int points, std::optional<double> win_lo,
                  std::optional<double> win_hi)
{
    ctx.load();
    const SystemParams p = sys.resolve(ctx.cfg);
    const EmitterBath bath = bopt.resolve(p, ctx.cfg);
    width_ps = ctx.cfg.consume_double("pulse_width_ps", width_ps);
    t_end_ps = ctx.cfg.consume_double("t_end_ps", t_end_ps);
    ctx.cfg.reject_unknown();

    const auto pm = polariton_modes(p);
    PulseSpec spec;
    spec.width_ps = width_ps;
    spec.filter = parse_filter(filter);
    spec.carrier_detuning = ghz_to_radns(detuning_ghz);
    const auto pulse = make_pulse(spec, pm.omega_minus - p.density.center,
                                  pm.omega_plus - p.density.center);
    const auto tr = simulate(p, bath, pulse, -0.06, ps_to_ns(t_end_ps),
                             static_cast<std::size_t>(points));

    CsvTable t;
    t.columns = {"t_ps", "c_in_re", "c_in_im", "c_t_re", "c_t_im", "c_t_abs2"};
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        t.add_row({ns_to_ps(tr.t[i]), tr.c_in[i].real(), tr.c_in[i].imag(),
                   tr.c_t[i].real(), tr.c_t[i].imag(), std::norm(tr.c_t[i])});
    ctx.write(t, "dynamics");

    if (win_lo && win_hi)
        std::cout << "retrieval_efficiency "
                  << retrieval_efficiency(tr, *win_lo, *win_hi) << "\n";
}

void run_fringes(RunContext& ctx, SysOpts& sys, BathOpts& bopt, double width_ps,
                 const std::string& f1, const std::string& f2, double gti_phase,
                 double lo, double hi, double step)
{
    ctx.load();
    const SystemParams p = sys.resolve(ctx.cfg);
    const EmitterBath bath = bopt.resolve(p, ctx.cfg);
    width_ps = ctx.cfg.consume_double("pulse_width_ps", width_ps);
    lo = ctx.cfg.consume_double("tau_min_ps", lo);
    hi = ctx.cfg.consume_double("tau_max_ps", hi);
    step = ctx.cfg.consume_double("tau_step_ps", step);
    ctx.cfg.reject_unknown();

    PulsePair pp;
    pp.first.width_ps = pp.second.width_ps = width_ps;
    pp.first.filter = parse_filter(f1);
    pp.second.filter = parse_filter(f2);
    pp.first.phi_gti = pp.second.phi_gti = gti_phase;

    const auto taus = linspace_step(lo, hi, step);
    const auto fr = fringe_scan(p, bath, pp, taus);
    CsvTable t;
    t.columns = {"tau_ps", "amplitude", "count_max", "count_min"};
    for (std::size_t i = 0; i < taus.size(); ++i)
        t.add_row({fr.tau_ps[i], fr.amplitude[i], fr.count_max[i], fr.count_min[i]});
    ctx.write(t, "fringes");
}

void run_tomography(RunContext& ctx, SysOpts& sys, BathOpts& bopt,
                    const std::string& state, double rel_phase, bool have_phase,
                    double width_ps)
{
    ctx.load();
    const SystemParams p = sys.resolve(ctx.cfg);
    const EmitterBath bath = bopt.resolve(p, ctx.cfg);
    width_ps = ctx.cfg.consume_double("pulse_width_ps", width_ps);
    ctx.cfg.reject_unknown();

    QubitState psi;
    if (have_phase) psi = QubitState::superposition(rel_phase);
    else if (state == "zero") psi = QubitState::zero();
    else if (state == "plus") psi = QubitState::plus();
    else if (state == "circ") psi = QubitState::circ();
    else throw ConfigError("unknown state: " + state);

    const auto res = simulated_tomography(p, bath, psi, width_ps);
    const double f = fidelity(psi, res.rho);

    CsvTable t;
    t.columns = {"tau_r_ps", "a0", "a1", "a2", "a3",
                 "rho00", "rho01_re", "rho01_im", "rho11", "fidelity"};
    t.add_row({res.tau_r_ps, res.amps.a0, res.amps.a1, res.amps.a2, res.amps.a3,
               res.rho(0, 0).real(), res.rho(0, 1).real(), res.rho(0, 1).imag(),
               res.rho(1, 1).real(), f});
    ctx.write(t, "tomography");
    std::cout << "fidelity " << f << "\n";
}

void run_classical_bound(RunContext& ctx, double mu, double eta, bool want_file)
{
    ctx.load();
    mu = ctx.cfg.consume_double("mu", mu);
    eta = ctx.cfg.consume_double("eta", eta);
    ctx.cfg.reject_unknown();
    const ClassicalBoundQuery q{mu, eta};
    const double f = classical_fidelity(q);
    std::printf("%.6f\n", f);
    if (want_file) {
        CsvTable t;
        t.columns = {"mu", "eta", "n_min", "classical_fidelity"};
        t.add_row({mu, eta, static_cast<double>(n_min(q)), f});
        ctx.write(t, "classical-bound");
    }
}

void run_reproduce(RunContext& ctx, const std::string& target)
{
    ctx.load();
    ctx.cfg.reject_unknown();

    if (target == "fig2b") {
        // On-resonance transmission of the 0.1% device, split-branch lineshape.
        ctx.write(spectrum_table(preset("nd-yvo-0.1pct-double"), -60.0, 60.0, 2001),
                  "fig2b");
    } else if (target == "fig2e") {
        // Transmission map versus cavity-ensemble detuning.
        const SystemParams base = preset("nd-yvo-0.1pct-double");
        CsvTable t;
        t.columns = {"delta_GHz", "omega_GHz", "t_abs2"};
        for (double d = -40.0; d <= 40.0 + 1e-9; d += 5.0) {
            SystemParams p = base;
            p.omega0 = p.density.center + ghz_to_radns(d);
            for (int i = 0; i < 481; ++i) {
                const double w = -60.0 + 0.25 * i;
                const cplx tv = transmission(p, p.density.center + ghz_to_radns(w));
                t.add_row({d, w, std::norm(tv)});
            }
        }
        ctx.write(t, "fig2e");
    } else if (target == "fig2f-theory") {
        // Polariton linewidths versus detuning: Gaussian model and the
        // Lorentzian reference of equal width.
        const SystemParams pg = preset("nd-yvo-0.1pct");
        SystemParams pl = pg;
        pl.density.kind = DensityKind::Lorentzian;
        const auto deltas = linspace_step(-80.0, 80.0, 2.0);
        const auto tg = sweep_table(pg, deltas, SweepMethod::Poles);
        const auto tl = sweep_table(pl, deltas, SweepMethod::Poles);
        CsvTable t;
        t.columns = {"delta_GHz", "gamma_minus_GHz", "gamma_plus_GHz",
                     "gamma_minus_lorentzian_GHz", "gamma_plus_lorentzian_GHz"};
        for (std::size_t i = 0; i < tg.rows.size(); ++i)
            t.add_row({tg.rows[i][0], tg.rows[i][3], tg.rows[i][4],
                       tl.rows[i][3], tl.rows[i][4]});
        ctx.write(t, "fig2f-theory");
    } else if (target == "fig3") {
        // Two-pulse fringe envelopes: both polaritons, lower polariton only,
        // and the phase-step (GTI) preparation.
        const SystemParams p = preset("nd-yvo-0.1pct");
        const auto bath = sample_emitters(p.density, 2000, p.Omega, 7);
        PulsePair both, lower, gti;
        lower.first.filter = lower.second.filter = PulseFilter::BandpassLower;
        gti.first.filter = PulseFilter::GTIChirp;
        ctx.write(fringe_table(p, bath, {both, lower, gti},
                               {"two_polariton", "single_polariton", "gti"},
                               linspace_step(1.0, 60.0, 0.5)),
                  "fig3");
    } else if (target == "figS1") {
        // Split-branch versus single-Gaussian approximation of the 0.1% device.
        const auto td = spectrum_table(preset("nd-yvo-0.1pct-double"), -60.0, 60.0, 2001);
        const auto ts = spectrum_table(preset("nd-yvo-0.1pct"), -60.0, 60.0, 2001);
        CsvTable t;
        t.columns = {"omega_GHz", "t_abs2_double_gaussian", "t_abs2_single_gaussian"};
        for (std::size_t i = 0; i < td.rows.size(); ++i)
            t.add_row({td.rows[i][0], td.rows[i][3], ts.rows[i][3]});
        ctx.write(t, "figS1");
    } else if (target == "figS2-theory") {
        // On-resonance transmission of the 1% device.
        ctx.write(spectrum_table(preset("nd-yvo-1pct"), -150.0, 150.0, 2001),
                  "figS2-theory");
    } else if (target == "figS3") {
        // Classical storage-fidelity bound versus memory efficiency at mu=0.5.
        CsvTable t;
        t.columns = {"eta", "n_min", "classical_fidelity"};
        for (int i = 1; i <= 100; ++i) {
            const double eta = i / 100.0;
            const ClassicalBoundQuery q{0.5, eta};
            t.add_row({eta, static_cast<double>(n_min(q)), classical_fidelity(q)});
        }
        ctx.write(t, "figS3");
    } else {
        throw ConfigError("unknown reproduce target: " + target);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulator of a cavity strongly coupled to an inhomogeneously "
                 "broadened emitter ensemble"};
    app.require_subcommand(1);

    // --- spectrum ---
    auto* c_spec = app.add_subcommand("spectrum", "transmission spectrum |t(omega)|^2");
    static RunContext ctx_spec;
    static SysOpts sys_spec;
    ctx_spec.add(c_spec);
    sys_spec.add(c_spec);
    static double sp_lo = 0.0, sp_hi = 0.0;
    static int sp_n = 2001;
    auto* o_splo = c_spec->add_option("--omega-min", sp_lo, "grid start (GHz, relative to ensemble center)");
    auto* o_sphi = c_spec->add_option("--omega-max", sp_hi, "grid end (GHz)");
    c_spec->add_option("--points", sp_n, "number of grid points");
    c_spec->callback([&] {
        run_spectrum(ctx_spec, sys_spec, sp_lo, sp_hi, sp_n,
                     static_cast<bool>(*o_splo), static_cast<bool>(*o_sphi));
    });

    // --- sweep ---
    auto* c_sweep = app.add_subcommand("sweep", "polariton modes versus cavity detuning");
    static RunContext ctx_sweep;
    static SysOpts sys_sweep;
    ctx_sweep.add(c_sweep);
    sys_sweep.add(c_sweep);
    static double sw_lo = -80.0, sw_hi = 80.0, sw_step = 2.0;
    static std::string sw_method = "poles";
    c_sweep->add_option("--delta-min", sw_lo, "detuning grid start (GHz)");
    c_sweep->add_option("--delta-max", sw_hi, "detuning grid end (GHz)");
    c_sweep->add_option("--delta-step", sw_step, "detuning grid step (GHz)");
    c_sweep->add_option("--method", sw_method, "linewidth method: poles | fwhm")
        ->check(CLI::IsMember({"poles", "fwhm"}));
    c_sweep->callback([&] { run_sweep(ctx_sweep, sys_sweep, sw_lo, sw_hi, sw_step, sw_method); });

    // --- dynamics ---
    auto* c_dyn = app.add_subcommand("dynamics", "time-domain pulse response");
    static RunContext ctx_dyn;
    static SysOpts sys_dyn;
    static BathOpts bath_dyn;
    ctx_dyn.add(c_dyn);
    sys_dyn.add(c_dyn);
    bath_dyn.add(c_dyn);
    static double dy_width = 4.0, dy_det = 0.0, dy_tend = 400.0;
    static int dy_points = 8192;
    static std::string dy_filter = "none";
    static double dy_wlo = 0.0, dy_whi = 0.0;
    c_dyn->add_option("--pulse-width", dy_width, "pulse intensity FWHM (ps)");
    c_dyn->add_option("--filter", dy_filter, "pulse filter: none | lower | upper | gti")
        ->check(CLI::IsMember({"none", "lower", "upper", "gti"}));
    c_dyn->add_option("--detuning", dy_det, "pulse carrier detuning (GHz)");
    c_dyn->add_option("--t-end", dy_tend, "simulation end time (ps)");
    c_dyn->add_option("--points", dy_points, "number of output samples");
    auto* o_wlo = c_dyn->add_option("--window-start", dy_wlo, "retrieval window start (ps)");
    auto* o_whi = c_dyn->add_option("--window-end", dy_whi, "retrieval window end (ps)");
    c_dyn->callback([&] {
        run_dynamics(ctx_dyn, sys_dyn, bath_dyn, dy_width, dy_filter, dy_det,
                     dy_tend, dy_points,
                     *o_wlo ? std::optional<double>(dy_wlo) : std::nullopt,
                     *o_whi ? std::optional<double>(dy_whi) : std::nullopt);
    });

    // --- fringes ---
    auto* c_fr = app.add_subcommand("fringes", "two-pulse interference envelope A(tau)");
    static RunContext ctx_fr;
    static SysOpts sys_fr;
    static BathOpts bath_fr;
    ctx_fr.add(c_fr);
    sys_fr.add(c_fr);
    bath_fr.add(c_fr);
    static double fr_width = 4.0, fr_gti = 0.52 * pi;
    static double fr_lo = 1.0, fr_hi = 60.0, fr_step = 0.5;
    static std::string fr_f1 = "none", fr_f2 = "none";
    c_fr->add_option("--pulse-width", fr_width, "pulse intensity FWHM (ps)");
    c_fr->add_option("--filter1", fr_f1, "first-pulse filter: none | lower | upper | gti")
        ->check(CLI::IsMember({"none", "lower", "upper", "gti"}));
    c_fr->add_option("--filter2", fr_f2, "second-pulse filter")
        ->check(CLI::IsMember({"none", "lower", "upper", "gti"}));
    c_fr->add_option("--gti-phase", fr_gti, "spectral phase step (rad)");
    c_fr->add_option("--tau-min", fr_lo, "delay grid start (ps)");
    c_fr->add_option("--tau-max", fr_hi, "delay grid end (ps)");
    c_fr->add_option("--tau-step", fr_step, "delay grid step (ps)");
    c_fr->callback([&] {
        run_fringes(ctx_fr, sys_fr, bath_fr, fr_width, fr_f1, fr_f2, fr_gti,
                    fr_lo, fr_hi, fr_step);
    });

    // --- tomography ---
    auto* c_tomo = app.add_subcommand("tomography",
                                      "simulated tomography of a stored frequency-bin qubit");
    static RunContext ctx_tomo;
    static SysOpts sys_tomo;
    static BathOpts bath_tomo;
    ctx_tomo.add(c_tomo);
    sys_tomo.add(c_tomo);
    bath_tomo.add(c_tomo);
    static std::string tomo_state = "zero";
    static double tomo_phase = 0.0, tomo_width = 4.0;
    c_tomo->add_option("--state", tomo_state, "prepared state: zero | plus | circ")
        ->check(CLI::IsMember({"zero", "plus", "circ"}));
    auto* o_phase = c_tomo->add_option(
        "--rel-phase", tomo_phase, "equal-weight superposition with this relative phase (rad)");
    c_tomo->add_option("--pulse-width", tomo_width, "pulse intensity FWHM (ps)");
    c_tomo->callback([&] {
        run_tomography(ctx_tomo, sys_tomo, bath_tomo, tomo_state, tomo_phase,
                       static_cast<bool>(*o_phase), tomo_width);
    });

    // --- classical-bound ---
    auto* c_cb = app.add_subcommand("classical-bound",
                                    "best classical storage fidelity for a coherent qubit");
    static RunContext ctx_cb;
    ctx_cb.add(c_cb);
    static double cb_mu = 0.5, cb_eta = 1.0;
    c_cb->add_option("--mu", cb_mu, "mean photon number");
    c_cb->add_option("--eta", cb_eta, "storage-retrieval efficiency");
    c_cb->callback([&] {
        run_classical_bound(ctx_cb, cb_mu, cb_eta,
                            static_cast<bool>(*ctx_cb.o_output));
    });

    // --- reproduce ---
    auto* c_rep = app.add_subcommand("reproduce", "regenerate a canned result table");
    static RunContext ctx_rep;
    ctx_rep.add(c_rep);
    static std::string rep_target;
    c_rep->add_option("target", rep_target, "one of: fig2b fig2e fig2f-theory fig3 figS1 figS2-theory figS3")
        ->required();
    c_rep->callback([&] { run_reproduce(ctx_rep, rep_target); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
