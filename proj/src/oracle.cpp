#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "otsim/harness.hpp"

namespace otsim {

double prime_given_e1(Beta beta)
{
    return (prob_e1(FamilyTag::Prime, beta) / 2.0) /
           ((prob_e1(FamilyTag::Prime, beta) + prob_e1(FamilyTag::DoublePrime, beta)) / 2.0);
}

double prime_given_e0(Beta beta)
{
    return (1.0 - prob_e1(FamilyTag::Prime, beta)) / (2.0 - beta.value());
}

namespace {

std::vector<double> binomial_pmf(std::size_t m, double p)
{
    std::vector<double> pmf(m + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[m] = 1.0;
        return pmf;
    }
    const double n = static_cast<double>(m);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (std::size_t k = 0; k <= m; ++k) {
        const double kk = static_cast<double>(k);
        const double log_choose = std::lgamma(n + 1) - std::lgamma(kk + 1) - std::lgamma(n - kk + 1);
        pmf[k] = std::exp(log_choose + kk * lp + (n - kk) * lq);
    }
    return pmf;
}

}  // namespace

double analytic_accuracy(double p1, double p0, std::size_t m, std::size_t max_set_size)
{
    if (m == 0) throw std::invalid_argument("set size must be at least 1");
    if (m > max_set_size) {
        throw std::invalid_argument("set size " + std::to_string(m) + " exceeds bound " +
                                    std::to_string(max_set_size));
    }
    if (!(p1 >= 0.0 && p1 <= 1.0 && p0 >= 0.0 && p0 <= 1.0)) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    const std::vector<double> px = binomial_pmf(m, p1);
    const std::vector<double> py = binomial_pmf(m, p0);

    // sum_k P(X=k) * (P(Y<k) + P(Y=k)/2)
    double total = 0.0;
    double y_below = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        total += px[k] * (y_below + 0.5 * py[k]);
        y_below += py[k];
    }
    return std::min(1.0, std::max(0.0, total));
}

double analytic_accuracy(Beta beta, std::size_t m, std::size_t max_set_size)
{
    return analytic_accuracy(prime_given_e1(beta), prime_given_e0(beta), m, max_set_size);
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z)
{
    if (n == 0 || successes > n) throw std::invalid_argument("need 0 <= successes <= n, n >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    Interval ci{centre - half, centre + half};
    // Exact endpoints at the boundaries; also keeps rounding from
    // excluding the point estimate.
    if (successes == 0) ci.lo = 0.0;
    if (successes == n) ci.hi = 1.0;
    ci.lo = std::max(0.0, std::min(ci.lo, p));
    ci.hi = std::min(1.0, std::max(ci.hi, p));
    return ci;
}

}  // namespace otsim
