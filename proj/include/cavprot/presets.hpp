#ifndef CAVPROT_PRESETS_HPP
#define CAVPROT_PRESETS_HPP

#include <stdexcept>
#include <string>

#include "spectral.hpp"
#include "units.hpp"

namespace cavprot {

// Built-in device parameter sets. The 0.1% device can be modeled with either
// a single Gaussian (default) or the double-Gaussian split-branch lineshape.
inline SystemParams preset(const std::string& name)
{
    SystemParams p;
    p.density.center = 0.0;
    p.omega0 = 0.0;
    if (name == "nd-yvo-0.1pct") {
        p.kappa = ghz_to_radns(44.0);
        p.Omega = ghz_to_radns(25.0);
        p.gamma_h = ghz_to_radns(0.82e-3);
        p.density.kind = DensityKind::Gaussian;
        p.density.width = ghz_to_radns(14.6);
    } else if (name == "nd-yvo-0.1pct-double") {
        p.kappa = ghz_to_radns(44.0);
        p.Omega = ghz_to_radns(25.0);
        p.gamma_h = ghz_to_radns(0.82e-3);
        p.density.kind = DensityKind::DoubleGaussian;
        p.density.width = ghz_to_radns(5.0);
        p.density.half_splitting = ghz_to_radns(8.5);
    } else if (name == "nd-yvo-1pct") {
        p.kappa = ghz_to_radns(20.0);
        p.Omega = ghz_to_radns(55.0);
        p.gamma_h = ghz_to_radns(40e-3);
        p.density.kind = DensityKind::Gaussian;
        p.density.width = ghz_to_radns(45.6);
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return p;
}

} // namespace cavprot

#endif // CAVPROT_PRESETS_HPP
