#pragma once

#include "exitlab/rng.hpp"
#include "exitlab/sampler.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace exitlab {

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct MomentEstimate {
    double p = 0.0;
    std::uint64_t n = 0;
    double mean = 0.0;
    double std_err = 0.0;
    Interval ci95;
    std::uint64_t censored = 0;
    bool divergent = false;
};

// Sufficient statistics for a p-th moment estimate with batch-means errors.
// Batches are keyed by global sample index mod 32, so merging accumulators
// built from disjoint index ranges reproduces the concatenated-pool estimate
// exactly (associative, commutative).
struct MomentAccumulator {
    static constexpr int kBatches = 32;
    double p = 0.0;
    std::array<double, kBatches> batch_sum{};
    std::array<std::uint64_t, kBatches> batch_n{};
    std::uint64_t censored = 0;

    void add(std::uint64_t sample_index, const ExitSample& s);
    MomentAccumulator& merge(const MomentAccumulator& other);
    std::uint64_t count() const;
    // tail_index: point estimate used for the divergence flag; pass nullopt
    // when unavailable (flag then depends on censoring only).
    MomentEstimate estimate(std::optional<double> tail_index) const;
};

// Fraction of escaped-to-cap samples above which an estimate is flagged.
inline constexpr double kCensorFlagFraction = 1e-3;
// Divergence flag when p >= this fraction of the tail index estimate.
inline constexpr double kTailFlagFraction = 0.8;

struct TailIndexEstimate {
    std::size_t k = 0;
    double index = 0.0;
    Interval ci95;
};

// Mean of T^p with batch-means standard error. Requires n >= 100; the tail
// index for the divergence flag is estimated internally when n >= 500.
MomentEstimate estimate_moment(std::span<const ExitSample> samples, double p);

// Hill estimator on the k largest exit times; bootstrap percentile CI from
// 200 resamples. k = 0 selects floor(n^(2/3)) clipped to [50, n/10].
TailIndexEstimate hill_tail_index(std::span<const ExitSample> samples,
                                  std::size_t k = 0, int bootstrap = 200);

// One sample pool evaluated across an ascending grid of exponents.
std::vector<MomentEstimate> moment_sweep(std::span<const ExitSample> samples,
                                         std::span<const double> p_grid);

// Index of the first flagged estimate, or nullopt.
std::optional<std::size_t> first_divergent(std::span<const MomentEstimate> sweep);

struct BurkholderReport {
    double p = 0.0;
    double lhs = 0.0;           // E[(T + |a|^2)^p]
    double mid_lo = 0.0, mid_hi = 0.0; // E[(B*)^{2p}] interval
    double bt = 0.0;            // E[|B_T|^{2p}]
    double ratio_mid_lhs_lo = 0.0, ratio_mid_lhs_hi = 0.0;
    double ratio_bt_mid = 0.0;
    double slack_se = 0.0;      // std error of mean(maxmod_hi^{2p} - |B_T|^{2p})
};

// Empirical two-sided moment comparison; requires p below 0.8x the pool's
// tail index (throws Err::DivergentMoment otherwise).
BurkholderReport burkholder_check(std::span<const ExitSample> samples, double p,
                                  cpx start);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

} // namespace exitlab
