#ifndef CAVPROT_UNITS_HPP
#define CAVPROT_UNITS_HPP

#include <numbers>

namespace cavprot {

// Internal convention: angular frequency in rad/ns, time in ns.
// All user-facing I/O uses ordinary frequency in GHz and time in ps.

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double ghz_to_radns(double f_ghz) { return two_pi * f_ghz; }
constexpr double radns_to_ghz(double w) { return w / two_pi; }
constexpr double ps_to_ns(double t_ps) { return t_ps * 1e-3; }
constexpr double ns_to_ps(double t_ns) { return t_ns * 1e3; }

} // namespace cavprot

#endif // CAVPROT_UNITS_HPP
