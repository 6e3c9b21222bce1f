#include "exitlab/sampler.hpp"

#include "exitlab/disk_time.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace exitlab {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::ShellAbsorbed: return "shell-absorbed";
        case Termination::StepExited: return "step-exited";
        case Termination::EscapedToCap: return "escaped-to-cap";
    }
    return "unknown";
}

namespace {

ExitSample wos_exit(const DomainSpec& domain, cpx start, const SamplerConfig& cfg,
                    RngStream& rng) {
    const DiskExitTime& law = DiskExitTime::instance();
    cpx z = start;
    double t = 0.0;
    double lo = std::abs(z), hi = std::abs(z);
    for (std::uint64_t step = 0; step < cfg.max_steps; ++step) {
        const double rho = dist_lower_bound(domain, z);
        if (rho < cfg.eps_shell * std::max(1.0, std::abs(z))) {
            const cpx q = nearest_boundary_point(domain, z);
            lo = std::max(lo, std::abs(q));
            hi = std::max(hi, std::abs(z) + rho);
            return {t, q, lo, hi, Termination::ShellAbsorbed, step};
        }
        hi = std::max(hi, std::abs(z) + rho);
        const double tau = law.sample(rng);
        z += rho * rng.next_unit_circle();
        t += rho * rho * tau;
        lo = std::max(lo, std::abs(z));
        if (std::abs(z) > cfg.modulus_cap)
            return {t, z, lo, hi, Termination::EscapedToCap, step + 1};
    }
    throw Error(Err::MaxStepsExceeded, "sample_exit: walk-on-spheres step budget exhausted");
}

ExitSample euler_exit(const DomainSpec& domain, cpx start, const SamplerConfig& cfg,
                      RngStream& rng) {
    const double h = *cfg.euler_step;
    const double sh = std::sqrt(h);
    cpx z = start;
    double t = 0.0;
    double sup = std::abs(z);
    for (std::uint64_t step = 0; step < cfg.max_steps; ++step) {
        z += cpx(sh * rng.next_gaussian(), sh * rng.next_gaussian());
        t += h;
        sup = std::max(sup, std::abs(z));
        if (!contains(domain, z)) {
            const cpx q = nearest_boundary_point(domain, z);
            return {t, q, sup, sup, Termination::StepExited, step + 1};
        }
        if (std::abs(z) > cfg.modulus_cap)
            return {t, z, sup, sup, Termination::EscapedToCap, step + 1};
    }
    // Budget exhausted: report as censored at the cap rather than failing,
    // matching the heavy-tail policy of the WoS engine.
    return {t, z, sup, sup, Termination::EscapedToCap, cfg.max_steps};
}

} // namespace

ExitSample sample_exit(const DomainSpec& domain, cpx start, const SamplerConfig& cfg,
                       RngStream& rng) {
    if (!contains(domain, start))
        throw Error(Err::PointOutsideDomain, "sample_exit: start point not in domain");
    return cfg.euler_step ? euler_exit(domain, start, cfg, rng)
                          : wos_exit(domain, start, cfg, rng);
}

std::vector<ExitSample> sample_exits(const DomainSpec& domain, cpx start,
                                     const SamplerConfig& cfg, std::uint64_t n,
                                     std::uint64_t seed, std::uint64_t stream_base,
                                     int workers) {
    if (!contains(domain, start))
        throw Error(Err::PointOutsideDomain, "sample_exits: start point not in domain");
    std::vector<ExitSample> out(n);
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            RngStream rng(seed, stream_base + i);
            out[i] = sample_exit(domain, start, cfg, rng);
        }
    };
    workers = std::max(1, workers);
    if (workers == 1 || n < 2) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = std::min<std::uint64_t>(n, w * chunk);
            const std::uint64_t hi = std::min<std::uint64_t>(n, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

std::pair<ExitSample, ExitSample> coupled_exit_pair(const DomainSpec& inner,
                                                    const DomainSpec& outer,
                                                    cpx start,
                                                    const SamplerConfig& cfg,
                                                    RngStream& rng) {
    if (!cfg.euler_step)
        throw Error(Err::BadSpec, "coupled_exit_pair: requires the Euler engine");
    if (!contains(inner, start))
        throw Error(Err::PointOutsideDomain, "coupled_exit_pair: start not in inner domain");
    const double h = *cfg.euler_step;
    const double sh = std::sqrt(h);
    cpx z = start;
    double t = 0.0;
    double sup = std::abs(z);
    ExitSample in_s, out_s;
    bool in_done = false, out_done = false;
    for (std::uint64_t step = 0; step < cfg.max_steps && !(in_done && out_done); ++step) {
        z += cpx(sh * rng.next_gaussian(), sh * rng.next_gaussian());
        t += h;
        sup = std::max(sup, std::abs(z));
        const bool in_in = contains(inner, z);
        const bool in_out = contains(outer, z);
        if (in_in && !in_out)
            throw Error(Err::NotNested, "coupled_exit_pair: point in inner but not outer");
        if (!in_done && !in_in) {
            in_s = {t, nearest_boundary_point(inner, z), sup, sup,
                    Termination::StepExited, step + 1};
            in_done = true;
        }
        if (!out_done && !in_out) {
            out_s = {t, nearest_boundary_point(outer, z), sup, sup,
                     Termination::StepExited, step + 1};
            out_done = true;
        }
        if (std::abs(z) > cfg.modulus_cap) break;
    }
    if (!in_done) in_s = {t, z, sup, sup, Termination::EscapedToCap, cfg.max_steps};
    if (!out_done) out_s = {t, z, sup, sup, Termination::EscapedToCap, cfg.max_steps};
    return {in_s, out_s};
}

} // namespace exitlab
