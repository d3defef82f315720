#ifndef CAVPROT_QUADRATURE_HPP
#define CAVPROT_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <complex>
#include <stdexcept>

namespace cavprot {

struct QuadratureError : std::runtime_error {
    double achieved_error;
    QuadratureError(const std::string& msg, double err)
        : std::runtime_error(msg), achieved_error(err) {}
};

// Adaptive Gauss-Kronrod integration of a real-valued integrand.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10)
{
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0, l1 = 0.0;
    const double r = gauss_kronrod<double, 15>::integrate(f, a, b, 22, tol, &err, &l1);
    if (err > 1e-6 * (l1 + 1e-300) && err > 1e3 * tol)
        throw QuadratureError("quadrature did not converge", err);
    return r;
}

// Complex integrand: integrates real and imaginary parts independently.
template <class F>
std::complex<double> integrate_complex(F&& f, double a, double b, double tol = 1e-10)
{
    const double re = integrate([&](double x) { return f(x).real(); }, a, b, tol);
    const double im = integrate([&](double x) { return f(x).imag(); }, a, b, tol);
    return {re, im};
}

} // namespace cavprot

#endif // CAVPROT_QUADRATURE_HPP
