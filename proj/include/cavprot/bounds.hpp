#ifndef CAVPROT_BOUNDS_HPP
#define CAVPROT_BOUNDS_HPP

#include <cmath>
#include <stdexcept>

namespace cavprot {

// Classical intercept-resend benchmark for storing a weak coherent qubit.
struct ClassicalBoundQuery {
    double mu = 0.5;  // mean photon number
    double eta = 1.0; // storage-retrieval efficiency

    void validate() const
    {
        if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
        if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0,1]");
    }
};

namespace detail {

inline double poisson_p(double mu, int n)
{
    return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
}

// Sum_{N >= from} f(N) P(N), truncated when terms drop below 1e-15 of the sum.
template <class F>
inline double poisson_tail_sum(double mu, int from, F&& f)
{
    double sum = 0.0;
    for (int n = from; n < from + 10000; ++n) {
        const double term = f(n) * poisson_p(mu, n);
        sum += term;
        if (n > mu && term < 1e-15 * (sum + 1e-300)) break;
    }
    return sum;
}

} // namespace detail

// Threshold photon number: the smallest i whose strict tail fits inside the
// detected fraction eta (1 - P(0)).
inline int n_min(const ClassicalBoundQuery& q)
{
    q.validate();
    const double p0 = detail::poisson_p(q.mu, 0);
    const double budget = (1.0 - p0) * q.eta;
    for (int i = 0; i < 10000; ++i) {
        const double tail = detail::poisson_tail_sum(q.mu, i + 1, [](int) { return 1.0; });
        // Tolerate rounding when the tail equals the budget exactly (eta = 1).
        if (tail <= budget * (1.0 + 1e-12) + 1e-15) return i;
    }
    throw std::runtime_error("n_min search failed");
}

// Best classical input/output fidelity for a coherent-state qubit with mean
// photon number mu through a memory of efficiency eta.
inline double classical_fidelity(const ClassicalBoundQuery& q)
{
    q.validate();
    const int nm = n_min(q);
    const double p0 = detail::poisson_p(q.mu, 0);
    const double tail_p = detail::poisson_tail_sum(q.mu, nm + 1, [](int) { return 1.0; });
    const double p = q.eta * (1.0 - p0) - tail_p; // probability of resending at N_min
    const double tail_f = detail::poisson_tail_sum(
        q.mu, nm + 1, [](int n) { return (n + 1.0) / (n + 2.0); });
    const double fid_nm = (nm + 1.0) / (nm + 2.0);
    return (fid_nm * p + tail_f) / (q.eta * (1.0 - p0));
}

// Massar-Popescu fidelity for a Fock input.
inline double fock_fidelity(int n_ph)
{
    if (n_ph < 0) throw std::invalid_argument("photon number must be >= 0");
    return (n_ph + 1.0) / (n_ph + 2.0);
}

} // namespace cavprot

#endif // CAVPROT_BOUNDS_HPP
