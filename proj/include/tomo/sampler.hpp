#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tomo/states.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// RNG scheme pinned into provenance so reimplementations can state (not
/// reproduce) the stream: per-phase substreams seeded by splitmix64 over the
/// plan seed, normals by the cosine-branch Box-Muller transform on
/// mt19937_64 uniforms.
inline constexpr std::string_view kRngDescription =
    "mt19937_64; substream seed = splitmix64(seed, phase index); "
    "normals = Box-Muller (cosine branch)";

/// What a simulated acquisition run should record.
struct AcquisitionPlan {
  std::vector<double> phases;
  int samples_per_phase = 1;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;  // additive Gaussian detector noise, 0 = ideal

  AcquisitionPlan(std::vector<double> phases_, int samples_per_phase_,
                  std::uint64_t seed_, double noise_sigma_ = 0.0);
};

/// Deterministic substream derivation (two splitmix64 rounds).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Rejection-envelope constant c for Fock states: 1.1 times the maximum of
/// |psi_n|^2 over a N(0, (2n+1)/2) density, scanned on 2001 points in
/// [-7, 7].  Expected acceptance rate is 1/c.
double fock_envelope_factor(int n);

/// Draws samples_per_phase quadratures from the state's exact tomogram at
/// every planned phase, optionally degraded by additive Gaussian noise.
/// Deterministic given (state, plan); record order is phase-major.
QuadratureSampleSet acquire(const StateModel& state,
                            const AcquisitionPlan& plan);

}  // namespace tomo
