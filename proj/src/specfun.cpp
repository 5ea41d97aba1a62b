#include "decbandit/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace decbandit {

Probability::Probability(double value) : value_(value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::domain_error("probability outside [0, 1]: " + std::to_string(value));
    }
}

namespace specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// zeta(2) .. zeta(40)
constexpr std::array<double, 39> kZeta = {
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915,
    1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
    1.0040773561979443394, 1.0020083928260822144, 1.0009945751278180853,
    1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519,
    1.0000076371976378998, 1.0000038172932649998, 1.0000019082127165539,
    1.0000009539620338728, 1.0000004769329867878, 1.0000002384505027277,
    1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248,
    1.0000000018626597235, 1.0000000009313274324, 1.0000000004656629065,
    1.0000000002328311834, 1.0000000001164155017, 1.0000000000582077209,
    1.0000000000291038504, 1.0000000000145519219, 1.0000000000072759598,
    1.0000000000036379795, 1.0000000000018189897, 1.0000000000009094948,
};

// ln Gamma(1 + z) for |z| <= 0.25 by its Taylor series at 1. Used near the
// roots of ln Gamma where the Lanczos sum loses relative accuracy.
double log_gamma_1p(double z)
{
    double sum = -kEulerGamma * z;
    double power = -z;
    for (std::size_t i = 0; i < kZeta.size(); ++i) {
        const int k = static_cast<int>(i) + 2;
        power *= -z;
        const double term = kZeta[i] * power / k;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

// Lanczos approximation, g = 7, n = 9. Valid for x >= 0.5.
double log_gamma_lanczos(double x)
{
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    const double xm1 = x - 1.0;
    double a = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) {
        a += c[i] / (xm1 + static_cast<double>(i));
    }
    const double t = xm1 + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(a);
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x)
{
    constexpr int kMaxIter = 100000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

void check_shapes(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::domain_error("beta shape parameters must be positive and finite");
    }
}

double beta_log_density(double a, double b, double x, double log_b)
{
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_b;
}

} // namespace

double log_gamma(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma requires x > 0");
    }
    if (std::isinf(x)) {
        return x;
    }
    if (x < 0.5) {
        return log_gamma(x + 1.0) - std::log(x);
    }
    if (std::abs(x - 1.0) <= 0.25) {
        return log_gamma_1p(x - 1.0);
    }
    if (std::abs(x - 2.0) <= 0.25) {
        // ln Gamma(2 + z) = ln Gamma(1 + z) + ln(1 + z)
        const double z = x - 2.0;
        return log_gamma_1p(z) + std::log1p(z);
    }
    return log_gamma_lanczos(x);
}

double log_beta(double a, double b)
{
    check_shapes(a, b);
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double a, double b, Probability xp)
{
    check_shapes(a, b);
    const double x = xp.value();
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::clamp(front * beta_continued_fraction(a, b, x) / a, 0.0, 1.0);
    }
    return std::clamp(1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b, 0.0, 1.0);
}

namespace {

// Root of I_x(a, b) = p for 0 < p < 1, assuming the root lies in the lower
// half so that x carries full relative precision.
double inv_reg_inc_beta_lower(double a, double b, double p, double x)
{
    // Newton iteration safeguarded by a shrinking bracket; any step leaving
    // the bracket is replaced by bisection.
    const double log_b = log_beta(a, b);
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 400; ++iter) {
        const double f = reg_inc_beta(a, b, Probability(x)) - p;
        if (f == 0.0) {
            return x;
        }
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double density = std::exp(beta_log_density(a, b, x, log_b));
        double next = x - f / density;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * x ||
            hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) {
            return next;
        }
        x = next;
    }
    return x;
}

} // namespace

double inv_reg_inc_beta(double a, double b, Probability pp)
{
    check_shapes(a, b);
    const double p = pp.value();
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    // Initial guess (Abramowitz & Stegun 26.5.22 for a, b >= 1; power-law
    // tails otherwise).
    double x;
    if (a >= 1.0 && b >= 1.0) {
        const double q = p < 0.5 ? p : 1.0 - p;
        const double t = std::sqrt(-2.0 * std::log(q));
        double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) z = -z;
        const double al = (z * z - 3.0) / 6.0;
        const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        const double w = z * std::sqrt(al + h) / h -
                         (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        x = a / (a + b * std::exp(2.0 * w));
    } else {
        const double lna = std::log(a / (a + b));
        const double lnb = std::log(b / (a + b));
        const double t = std::exp(a * lna) / a;
        const double u = std::exp(b * lnb) / b;
        const double w = t + u;
        x = p < t / w ? std::pow(a * w * p, 1.0 / a) : 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
    if (!(x > 0.0 && x < 1.0)) {
        x = 0.5;
    }
    if (x <= 0.5) {
        return inv_reg_inc_beta_lower(a, b, p, x);
    }
    // Upper root: solve I_y(b, a) = 1 - p for y = 1 - x.
    return 1.0 - inv_reg_inc_beta_lower(b, a, 1.0 - p, 1.0 - x);
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile requires 0 < p < 1");
    }
    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Refine against the tail that is representable without cancellation.
    const double e = x <= 0.0 ? normal_cdf(x) - p : (1.0 - p) - normal_cdf(-x);
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double gaussian_quantile(double mean, double sd, Probability p)
{
    if (!(sd > 0.0)) {
        throw std::domain_error("gaussian_quantile requires sd > 0");
    }
    return mean + sd * normal_quantile(p.value());
}

double bernoulli_kl(Probability ap, Probability bp)
{
    const double a = ap.value();
    const double b = bp.value();
    if (a == b) {
        return 0.0;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    double result = 0.0;
    if (a > 0.0) {
        if (b == 0.0) return inf;
        result += a * std::log(a / b);
    }
    if (a < 1.0) {
        if (b == 1.0) return inf;
        result += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
    }
    return std::max(result, 0.0);
}

} // namespace specfun
} // namespace decbandit
