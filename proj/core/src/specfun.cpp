/** \file specfun.cpp
 *  \brief Kummer M(a,b,z) power series and the regular Coulomb series.
 */
#include "confinium/specfun.hpp"

#include <cmath>
#include <sstream>

namespace confinium::specfun {

namespace {

constexpr long kTermCap = 100000;
constexpr long double kRelStop = 1e-16L;  // three consecutive terms below this
                                          // relative size stop the sum

bool is_nonpositive_integer(long double x) {
    return x <= 0.0L && x == std::floor(x);
}

void check_finite(double a, double b, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
        std::ostringstream msg;
        msg << "kummer_m: non-finite argument (a=" << a << ", b=" << b
            << ", z=" << z << ")";
        throw ParameterError(msg.str());
    }
}

}  // namespace

namespace detail {

long double kummer_m_ld(long double a, long double b, long double z,
                        long* terms_out, bool* converged_out) {
    if (is_nonpositive_integer(b)) {
        std::ostringstream msg;
        msg << "kummer_m: b = " << static_cast<double>(b)
            << " is a non-positive integer (pole of M)";
        throw ParameterError(msg.str());
    }

    // Kahan-compensated sum, seeded with the k=0 term.
    long double sum = 1.0L;
    long double comp = 0.0L;
    long double term = 1.0L;
    long terms = 1;
    int quiet = 0;  // consecutive terms below the relative stop
    bool converged = false;

    for (long k = 0; k < kTermCap; ++k) {
        term *= (a + static_cast<long double>(k)) /
                ((b + static_cast<long double>(k)) * static_cast<long double>(k + 1)) * z;
        if (term == 0.0L) {
            // a is a non-positive integer: the series is a polynomial and has
            // terminated exactly.
            converged = true;
            break;
        }
        ++terms;
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::fabs(term) <= kRelStop * (std::fabs(sum) + 1e-300L)) {
            if (++quiet >= 3) {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }

    if (terms_out) *terms_out = terms;
    if (converged_out) *converged_out = converged;
    return sum;
}

long double hydrogen_regular_series_ld(int l, long double energy, long double r) {
    if (l < 0) {
        throw ParameterError("hydrogen_regular_series: l must be >= 0");
    }
    if (r < 0.0L) {
        throw ParameterError("hydrogen_regular_series: r must be >= 0");
    }
    if (r == 0.0L) return 0.0L;

    // u = sum_{j >= l+1} c_j r^j; accumulate whole terms t_j = c_j r^j with
    //   [j(j-1) - l(l+1)] t_j = r * (-2 t_{j-1}) - r^2 * (2E t_{j-2}).
    // The common factor r^{l+1} is kept inside the terms: overflow is not a
    // concern on the radii used here (r at most a few tens).
    const long double ll = static_cast<long double>(l) * (l + 1.0L);
    long double t_prev2 = 0.0L;  // j = l
    long double t_prev1 = std::pow(r, static_cast<long double>(l + 1));  // j = l+1
    long double sum = t_prev1;
    long double comp = 0.0L;
    int quiet = 0;
    bool converged = false;
    for (long j = l + 2; j < kTermCap; ++j) {
        const long double jj = static_cast<long double>(j);
        const long double t = (-2.0L * r * t_prev1 - 2.0L * energy * r * r * t_prev2) /
                              (jj * (jj - 1.0L) - ll);
        t_prev2 = t_prev1;
        t_prev1 = t;
        const long double y = t - comp;
        const long double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if (std::fabs(t) <= kRelStop * (std::fabs(sum) + 1e-300L)) {
            if (++quiet >= 3) {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if (!converged) {
        throw SeriesError("hydrogen_regular_series: term cap reached",
                          static_cast<double>(sum), kTermCap);
    }
    return sum;
}

void hydrogen_regular_series_pair_ld(int l, long double energy, long double r,
                                     long double& u, long double& du) {
    if (l < 0) {
        throw ParameterError("hydrogen_regular_series: l must be >= 0");
    }
    if (r <= 0.0L) {
        throw ParameterError("hydrogen_regular_series_pair: r must be > 0");
    }

    // Same term recurrence as above; the derivative series carries j t_j / r.
    const long double ll = static_cast<long double>(l) * (l + 1.0L);
    long double t_prev2 = 0.0L;
    long double t_prev1 = std::pow(r, static_cast<long double>(l + 1));
    long double sum = t_prev1;
    long double dsum = (l + 1.0L) * t_prev1 / r;
    bool converged = false;
    int quiet = 0;
    for (long j = l + 2; j < kTermCap; ++j) {
        const long double jj = static_cast<long double>(j);
        const long double t = (-2.0L * r * t_prev1 - 2.0L * energy * r * r * t_prev2) /
                              (jj * (jj - 1.0L) - ll);
        t_prev2 = t_prev1;
        t_prev1 = t;
        sum += t;
        dsum += jj * t / r;
        if (std::fabs(t) * (jj + 1.0L) <=
            kRelStop * (std::fabs(sum) + std::fabs(dsum) * r + 1e-300L)) {
            if (++quiet >= 3) {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if (!converged) {
        throw SeriesError("hydrogen_regular_series_pair: term cap reached",
                          static_cast<double>(sum), kTermCap);
    }
    u = sum;
    du = dsum;
}

}  // namespace detail

double kummer_m(double a, double b, double z) {
    check_finite(a, b, z);
    long terms = 0;
    bool converged = false;
    const long double v = detail::kummer_m_ld(a, b, z, &terms, &converged);
    if (!converged) {
        std::ostringstream msg;
        msg << "kummer_m(" << a << ", " << b << ", " << z
            << "): series did not converge within " << kTermCap << " terms";
        throw SeriesError(msg.str(), static_cast<double>(v), terms);
    }
    return static_cast<double>(v);
}

double kummer_m_dz(double a, double b, double z) {
    check_finite(a, b, z);
    return (a / b) * kummer_m(a + 1.0, b + 1.0, z);
}

KummerEval kummer_m_eval(const KummerParams& p) {
    check_finite(p.a, p.b, p.z);
    KummerEval out;
    long terms = 0;
    bool converged = false;
    const long double v = detail::kummer_m_ld(p.a, p.b, p.z, &terms, &converged);
    out.value = static_cast<double>(v);
    out.terms = terms;
    out.converged = converged;
    return out;
}

double hydrogen_regular_series(int l, double energy, double r) {
    if (!std::isfinite(energy) || !std::isfinite(r)) {
        throw ParameterError("hydrogen_regular_series: non-finite argument");
    }
    return static_cast<double>(detail::hydrogen_regular_series_ld(l, energy, r));
}

}  // namespace confinium::specfun
