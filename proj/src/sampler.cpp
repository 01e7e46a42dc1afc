#include "tomo/sampler.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tomo/common.hpp"

namespace tomo {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Normal draws with a fully specified uniform-to-normal map, so a sample
// stream is pinned by the engine seed alone.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    const double u1 =
        (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

double envelope_pdf(double x, double variance) {
  return std::exp(-0.5 * x * x / variance) / std::sqrt(kTwoPi * variance);
}

}  // namespace

AcquisitionPlan::AcquisitionPlan(std::vector<double> phases_,
                                 int samples_per_phase_, std::uint64_t seed_,
                                 double noise_sigma_)
    : phases(std::move(phases_)),
      samples_per_phase(samples_per_phase_),
      seed(seed_),
      noise_sigma(noise_sigma_) {
  if (phases.empty()) throw FormatError("acquisition plan needs phases");
  if (samples_per_phase < 1)
    throw FormatError("acquisition plan needs samples_per_phase >= 1");
  if (noise_sigma < 0.0)
    throw FormatError("acquisition plan needs noise_sigma >= 0");
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t z = splitmix64(state);
  state ^= z + index * 0x9E3779B97F4A7C15ULL;
  return splitmix64(state);
}

double fock_envelope_factor(int n) {
  const double variance = 0.5 * (2.0 * n + 1.0);
  double max_ratio = 0.0;
  for (int i = 0; i < 2001; ++i) {
    const double x = -7.0 + 14.0 * i / 2000.0;
    const double psi = hermite_function(n, x);
    max_ratio = std::max(max_ratio, psi * psi / envelope_pdf(x, variance));
  }
  return 1.1 * max_ratio;
}

QuadratureSampleSet acquire(const StateModel& state,
                            const AcquisitionPlan& plan) {
  QuadratureSampleSet out;
  out.records.reserve(plan.phases.size() *
                      static_cast<std::size_t>(plan.samples_per_phase));
  out.seed = plan.seed;
  {
    std::ostringstream src;
    src << "simulated homodyne acquisition; " << kRngDescription;
    out.source = src.str();
  }

  const auto* gauss = std::get_if<GaussianStateSpec>(&state);
  const auto* fock = std::get_if<FockStateSpec>(&state);

  double envelope_c = 0.0, envelope_var = 0.0, envelope_sd = 0.0;
  if (fock != nullptr) {
    envelope_c = fock_envelope_factor(fock->n);
    envelope_var = 0.5 * (2.0 * fock->n + 1.0);
    envelope_sd = std::sqrt(envelope_var);
    std::ostringstream rate;
    rate << "; fock rejection acceptance rate = " << 1.0 / envelope_c;
    out.source += rate.str();
  }

  for (std::size_t pi = 0; pi < plan.phases.size(); ++pi) {
    const double theta = plan.phases[pi];
    NormalSource rng(substream_seed(plan.seed, pi));

    double mean = 0.0, sd = 0.0;
    if (gauss != nullptr) {
      mean = projected_mean(gauss->mean(), theta);
      sd = std::sqrt(projected_variance(gauss->covariance(), theta));
    }

    for (int k = 0; k < plan.samples_per_phase; ++k) {
      double x;
      if (gauss != nullptr) {
        x = mean + sd * rng.normal();
      } else {
        // rejection against c * N(0, (2n+1)/2)
        for (;;) {
          const double y = envelope_sd * rng.normal();
          const double u = rng.uniform01();
          const double psi = hermite_function(fock->n, y);
          if (u * envelope_c * envelope_pdf(y, envelope_var) <= psi * psi) {
            x = y;
            break;
          }
        }
      }
      if (plan.noise_sigma > 0.0) x += plan.noise_sigma * rng.normal();
      out.records.push_back({theta, x});
    }
  }
  return out;
}

}  // namespace tomo
