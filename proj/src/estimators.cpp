#include "exitlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace exitlab {

namespace {

double pow_p(double x, double p) {
    if (p == 0.0) return 1.0;
    return std::pow(x, p);
}

std::size_t default_hill_k(std::size_t n) {
    auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    k = std::min(k, n / 10);
    return std::max<std::size_t>(k, 50);
}

double hill_point_estimate(std::vector<double>& values, std::size_t k) {
    // Largest k+1 order statistics; values is scratch and gets reordered.
    std::nth_element(values.begin(), values.begin() + k, values.end(),
                     std::greater<double>());
    const double x_k1 = values[k]; // (k+1)-th largest
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(values[i] / x_k1);
    const double h = acc / static_cast<double>(k);
    return 1.0 / h;
}

} // namespace

void MomentAccumulator::add(std::uint64_t sample_index, const ExitSample& s) {
    const int b = static_cast<int>(sample_index % kBatches);
    batch_sum[b] += pow_p(s.exit_time, p);
    batch_n[b] += 1;
    if (s.termination == Termination::EscapedToCap) ++censored;
}

MomentAccumulator& MomentAccumulator::merge(const MomentAccumulator& other) {
    for (int b = 0; b < kBatches; ++b) {
        batch_sum[b] += other.batch_sum[b];
        batch_n[b] += other.batch_n[b];
    }
    censored += other.censored;
    return *this;
}

std::uint64_t MomentAccumulator::count() const {
    return std::accumulate(batch_n.begin(), batch_n.end(), std::uint64_t{0});
}

MomentEstimate MomentAccumulator::estimate(std::optional<double> tail_index) const {
    const std::uint64_t n = count();
    if (n < 100) throw Error(Err::TooFewSamples, "estimate_moment: need at least 100 samples");
    MomentEstimate e;
    e.p = p;
    e.n = n;
    e.censored = censored;
    double total = 0.0;
    for (int b = 0; b < kBatches; ++b) total += batch_sum[b];
    e.mean = total / static_cast<double>(n);
    // Batch-means standard error over the nonempty batches.
    int nb = 0;
    double msum = 0.0;
    std::array<double, kBatches> bm{};
    for (int b = 0; b < kBatches; ++b) {
        if (batch_n[b] == 0) continue;
        bm[nb] = batch_sum[b] / static_cast<double>(batch_n[b]);
        msum += bm[nb];
        ++nb;
    }
    const double bmean = msum / nb;
    double var = 0.0;
    for (int i = 0; i < nb; ++i) var += (bm[i] - bmean) * (bm[i] - bmean);
    var /= std::max(1, nb - 1);
    e.std_err = std::sqrt(var / nb);
    e.ci95 = {e.mean - 1.96 * e.std_err, e.mean + 1.96 * e.std_err};
    const double censor_frac = static_cast<double>(censored) / static_cast<double>(n);
    e.divergent = censor_frac > kCensorFlagFraction;
    if (tail_index && p > 0.0 && p >= kTailFlagFraction * *tail_index) e.divergent = true;
    return e;
}

MomentEstimate estimate_moment(std::span<const ExitSample> samples, double p) {
    if (samples.size() < 100)
        throw Error(Err::TooFewSamples, "estimate_moment: need at least 100 samples");
    if (!(p >= 0.0)) throw Error(Err::BadSpec, "estimate_moment: p must be nonnegative");
    MomentAccumulator acc;
    acc.p = p;
    for (std::size_t i = 0; i < samples.size(); ++i) acc.add(i, samples[i]);
    std::optional<double> tail;
    if (samples.size() >= 500) tail = hill_tail_index(samples, 0, 0).index;
    return acc.estimate(tail);
}

TailIndexEstimate hill_tail_index(std::span<const ExitSample> samples, std::size_t k,
                                  int bootstrap) {
    const std::size_t n = samples.size();
    if (k == 0) k = default_hill_k(n);
    if (k < 50 || k > n / 10)
        throw Error(Err::TooFewSamples, "hill_tail_index: need 50 <= k <= n/10");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = samples[i].exit_time;

    TailIndexEstimate est;
    est.k = k;
    {
        std::vector<double> scratch = values;
        est.index = hill_point_estimate(scratch, k);
    }
    est.ci95 = {est.index, est.index};
    if (bootstrap > 0) {
        std::vector<double> boots(bootstrap);
        std::vector<double> scratch(n);
        for (int b = 0; b < bootstrap; ++b) {
            RngStream rng(0x48696C6Cu ^ static_cast<std::uint64_t>(n),
                          stream_salt::kBootstrap + static_cast<std::uint64_t>(b));
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = static_cast<std::size_t>(rng.next_u64() % n);
                scratch[i] = values[j];
            }
            boots[b] = hill_point_estimate(scratch, k);
        }
        std::sort(boots.begin(), boots.end());
        const auto q = [&](double f) {
            const double pos = f * (bootstrap - 1);
            const auto i = static_cast<std::size_t>(pos);
            const double w = pos - static_cast<double>(i);
            return i + 1 < boots.size() ? (1.0 - w) * boots[i] + w * boots[i + 1]
                                        : boots.back();
        };
        est.ci95 = {q(0.025), q(0.975)};
    }
    return est;
}

std::vector<MomentEstimate> moment_sweep(std::span<const ExitSample> samples,
                                         std::span<const double> p_grid) {
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] > p_grid[i - 1]))
            throw Error(Err::BadSpec, "moment_sweep: p grid must be sorted ascending");
    std::optional<double> tail;
    if (samples.size() >= 500) tail = hill_tail_index(samples, 0, 0).index;
    std::vector<MomentEstimate> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        MomentAccumulator acc;
        acc.p = p;
        for (std::size_t i = 0; i < samples.size(); ++i) acc.add(i, samples[i]);
        out.push_back(acc.estimate(tail));
    }
    return out;
}

std::optional<std::size_t> first_divergent(std::span<const MomentEstimate> sweep) {
    for (std::size_t i = 0; i < sweep.size(); ++i)
        if (sweep[i].divergent) return i;
    return std::nullopt;
}

BurkholderReport burkholder_check(std::span<const ExitSample> samples, double p,
                                  cpx start) {
    if (samples.size() < 100)
        throw Error(Err::TooFewSamples, "burkholder_check: need at least 100 samples");
    const double tail = hill_tail_index(samples, 0, 0).index;
    if (!(p > 0.0) || p >= kTailFlagFraction * tail)
        throw Error(Err::DivergentMoment,
                    "burkholder_check: p must lie in (0, 0.8 * tail index)");
    BurkholderReport r;
    r.p = p;
    const double a2 = std::norm(start);
    const std::size_t n = samples.size();
    double lhs = 0.0, lo = 0.0, hi = 0.0, bt = 0.0;
    std::array<double, 32> slack_batch{};
    std::array<std::uint64_t, 32> slack_n{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[i];
        lhs += std::pow(s.exit_time + a2, p);
        lo += std::pow(s.max_mod_lo, 2.0 * p);
        const double hi_i = std::pow(s.max_mod_hi, 2.0 * p);
        const double bt_i = std::pow(std::abs(s.exit_point), 2.0 * p);
        hi += hi_i;
        bt += bt_i;
        slack_batch[i % 32] += hi_i - bt_i;
        slack_n[i % 32] += 1;
    }
    const auto dn = static_cast<double>(n);
    r.lhs = lhs / dn;
    r.mid_lo = lo / dn;
    r.mid_hi = hi / dn;
    r.bt = bt / dn;
    r.ratio_mid_lhs_lo = r.mid_lo / r.lhs;
    r.ratio_mid_lhs_hi = r.mid_hi / r.lhs;
    r.ratio_bt_mid = r.bt / r.mid_hi;
    int nb = 0;
    double msum = 0.0;
    std::array<double, 32> bm{};
    for (int b = 0; b < 32; ++b) {
        if (slack_n[b] == 0) continue;
        bm[nb] = slack_batch[b] / static_cast<double>(slack_n[b]);
        msum += bm[nb];
        ++nb;
    }
    const double bmean = msum / nb;
    double var = 0.0;
    for (int i = 0; i < nb; ++i) var += (bm[i] - bmean) * (bm[i] - bmean);
    var /= std::max(1, nb - 1);
    r.slack_se = std::sqrt(var / nb);
    return r;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

} // namespace exitlab
