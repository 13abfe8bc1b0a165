#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace orbitlab {

inline constexpr std::uint64_t kDefaultSeed = 7;
inline constexpr std::size_t kMinSamples = 1000;

/// A Monte-Carlo value with its standard error.
struct Estimate {
  double value = 0;
  double std_error = 0;
};

inline Estimate scaled(const Estimate& e, double factor) {
  return {e.value * factor, e.std_error * (factor < 0 ? -factor : factor)};
}

/// Mean of `f` over the unit cube [0,1)^dim by stratified sampling.
///
/// The cube is cut into m^dim equal cells with a fixed number of samples per
/// cell; each cell draws from its own generator seeded from (seed, cell), so
/// the result depends only on (dim, samples, seed). The standard error is the
/// usual stratified one, sqrt(sum_c s_c^2 / n_c) / #cells.
Estimate stratified_mean(std::size_t dim, std::size_t samples, std::uint64_t seed,
                         const std::function<double(std::span<const double>)>& f);

/// splitmix64 step, exposed for seeding derived streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace orbitlab
