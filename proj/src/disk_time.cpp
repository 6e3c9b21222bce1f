#include "exitlab/disk_time.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

namespace exitlab {

namespace {
constexpr int kTerms = 160;
constexpr int kGrid = 4096;
constexpr double kTMin = 2e-3;
constexpr double kTMax = 9.0;
} // namespace

DiskExitTime::DiskExitTime() {
    coef_.resize(kTerms);
    lambda_.resize(kTerms);
    for (int k = 1; k <= kTerms; ++k) {
        const double j = boost::math::cyl_bessel_j_zero(0.0, k);
        const double j1 = boost::math::cyl_bessel_j(1, j);
        coef_[k - 1] = 2.0 / (j * j1);
        lambda_[k - 1] = 0.5 * j * j;
    }
    t_.resize(kGrid);
    s_.resize(kGrid);
    ds_.resize(kGrid);
    const double lr = std::log(kTMax / kTMin);
    for (int i = 0; i < kGrid; ++i) {
        const double t = kTMin * std::exp(lr * i / (kGrid - 1));
        t_[i] = t;
        s_[i] = survival(t);
        ds_[i] = -density(t);
    }
    // Monotone decreasing table is required by the bisection below.
    for (int i = 1; i < kGrid; ++i) {
        if (!(s_[i] <= s_[i - 1]))
            throw std::logic_error("disk exit-time table not monotone");
    }
}

const DiskExitTime& DiskExitTime::instance() {
    static const DiskExitTime table;
    return table;
}

double DiskExitTime::survival(double t) const {
    double acc = 0.0;
    for (int k = 0; k < kTerms; ++k) {
        const double e = lambda_[k] * t;
        if (e > 708.0) break;
        acc += coef_[k] * std::exp(-e);
    }
    return std::clamp(acc, 0.0, 1.0);
}

double DiskExitTime::density(double t) const {
    double acc = 0.0;
    for (int k = 0; k < kTerms; ++k) {
        const double e = lambda_[k] * t;
        if (e > 708.0) break;
        acc += coef_[k] * lambda_[k] * std::exp(-e);
    }
    return std::max(acc, 0.0);
}

double DiskExitTime::quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0))
        throw std::invalid_argument("DiskExitTime::quantile: u must be in (0,1)");
    if (u <= s_.back()) {
        // Analytic exponential tail: S(t) = a1 * exp(-lambda1 * t) here.
        return (std::log(coef_[0]) - std::log(u)) / lambda_[0];
    }
    if (u >= s_.front()) return t_.front();
    // Bracket by binary search on the decreasing survival table.
    std::size_t lo = 0, hi = s_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (s_[mid] >= u) lo = mid;
        else hi = mid;
    }
    const double t0 = t_[lo], t1 = t_[hi], h = t1 - t0;
    const double y0 = s_[lo], y1 = s_[hi], d0 = ds_[lo] * h, d1 = ds_[hi] * h;
    if (y0 - y1 < 1e-15) return 0.5 * (t0 + t1);
    // Cubic Hermite of S on [t0, t1]; invert by safeguarded Newton.
    auto hermite = [&](double x, double& value, double& slope) {
        const double x2 = x * x, x3 = x2 * x;
        value = (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * d0 +
                (-2 * x3 + 3 * x2) * y1 + (x3 - x2) * d1;
        slope = (6 * x2 - 6 * x) * y0 + (3 * x2 - 4 * x + 1) * d0 +
                (-6 * x2 + 6 * x) * y1 + (3 * x2 - 2 * x) * d1;
    };
    double x = (y0 - u) / (y0 - y1);
    for (int it = 0; it < 4; ++it) {
        double value, slope;
        hermite(x, value, slope);
        if (slope > -1e-300) break;
        x -= (value - u) / slope;
        x = std::clamp(x, 0.0, 1.0);
    }
    return t0 + h * x;
}

} // namespace exitlab
