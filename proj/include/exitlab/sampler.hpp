#pragma once

#include "exitlab/geometry.hpp"
#include "exitlab/rng.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace exitlab {

enum class Termination { ShellAbsorbed, StepExited, EscapedToCap };

const char* termination_name(Termination t);

// One Monte Carlo exit realization. max_mod_lo/hi sandwich the running
// maximum modulus of the path: the walk-on-spheres engine records
// [max |jump centers|, max(|center| + rho)], which provably brackets the
// true supremum; the Euler engine reports its discrete-path supremum for
// both ends.
struct ExitSample {
    double exit_time = 0.0;
    cpx exit_point;
    double max_mod_lo = 0.0;
    double max_mod_hi = 0.0;
    Termination termination = Termination::ShellAbsorbed;
    std::uint64_t steps = 0;
};

struct SamplerConfig {
    // Absorption when the safe radius drops below eps_shell * max(1, |z|).
    double eps_shell = 1e-6;
    std::uint64_t max_steps = 10'000'000;
    double modulus_cap = 1e6;
    // Engine: walk-on-spheres when empty, fixed-step Euler otherwise.
    std::optional<double> euler_step;
};

// Exit sample of planar Brownian motion from the domain.
// WoS jumps combine a uniform point on the safe circle with an exact draw of
// the disk exit-time law, so the accumulated time is exact up to shell bias.
// Throws Err::PointOutsideDomain / Err::MaxStepsExceeded.
ExitSample sample_exit(const DomainSpec& domain, cpx start,
                       const SamplerConfig& config, RngStream& rng);

// n samples, deterministically keyed by (seed, stream_base + index) and
// independent of the worker count.
std::vector<ExitSample> sample_exits(const DomainSpec& domain, cpx start,
                                     const SamplerConfig& config, std::uint64_t n,
                                     std::uint64_t seed, std::uint64_t stream_base = 0,
                                     int workers = 1);

// Pathwise-coupled Euler exits from nested domains driven by one increment
// sequence. Throws Err::NotNested when a step witnesses inner \ outer.
std::pair<ExitSample, ExitSample> coupled_exit_pair(const DomainSpec& inner,
                                                    const DomainSpec& outer,
                                                    cpx start,
                                                    const SamplerConfig& config,
                                                    RngStream& rng);

} // namespace exitlab
