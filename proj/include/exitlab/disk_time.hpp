#pragma once

#include "exitlab/rng.hpp"

#include <vector>

namespace exitlab {

// First-exit-time law of planar Brownian motion from the unit disk, started
// at the center. The survival function is the Bessel-zero series
//   S(t) = sum_k 2 / (j_k * J1(j_k)) * exp(-j_k^2 t / 2),
// j_k the positive zeros of J0. Sampling inverts a precomputed table of S by
// monotone cubic interpolation; beyond the table the first series term is
// exact to double precision and is inverted analytically.
class DiskExitTime {
public:
    static const DiskExitTime& instance();

    // Inverse CDF: the t > 0 with S(t) = u, u in (0,1).
    double quantile(double u) const;

    double sample(RngStream& rng) const { return quantile(rng.next_double()); }

    // Series evaluation (valid for t >= table_t_min()).
    double survival(double t) const;
    double density(double t) const;

    double table_t_min() const { return t_.front(); }
    double table_t_max() const { return t_.back(); }
    // Tail: log S(t) ~ log(a1) - lambda1 * t.
    double tail_rate() const { return lambda_[0]; }
    double tail_coefficient() const { return coef_[0]; }

private:
    DiskExitTime();

    std::vector<double> coef_, lambda_; // series coefficients and rates
    std::vector<double> t_, s_, ds_;    // grid, survival, dS/dt
};

inline double sample_unit_disk_exit_time(RngStream& rng) {
    return DiskExitTime::instance().sample(rng);
}

} // namespace exitlab
