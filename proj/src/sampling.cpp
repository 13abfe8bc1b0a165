#include "orbitlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "orbitlab/errors.hpp"

namespace orbitlab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Estimate stratified_mean(std::size_t dim, std::size_t samples, std::uint64_t seed,
                         const std::function<double(std::span<const double>)>& f) {
  if (samples < kMinSamples) {
    throw PreconditionError("insufficient samples: " + std::to_string(samples) + " < " +
                            std::to_string(kMinSamples));
  }
  if (dim == 0) return {f({}), 0.0};

  // m cells per axis with at least 16 samples per cell.
  std::size_t per_axis = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(samples) / 16.0, 1.0 / static_cast<double>(dim))));
  per_axis = std::clamp<std::size_t>(per_axis, 1, 64);
  std::size_t cells = 1;
  for (std::size_t d = 0; d < dim; ++d) cells *= per_axis;
  const std::size_t per_cell = std::max<std::size_t>(2, samples / cells);

  std::vector<double> u(dim);
  std::vector<std::size_t> digit(dim);
  double mean_sum = 0;
  double var_sum = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t d = 0; d < dim; ++d) {
      digit[d] = rest % per_axis;
      rest /= per_axis;
    }
    std::mt19937_64 rng(mix_seed(seed, c));
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < per_cell; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        u[d] = (static_cast<double>(digit[d]) + r) / static_cast<double>(per_axis);
      }
      const double y = f(u);
      s += y;
      s2 += y * y;
    }
    const double n = static_cast<double>(per_cell);
    const double m = s / n;
    const double var = std::max(0.0, (s2 - n * m * m) / (n - 1.0));
    mean_sum += m;
    var_sum += var / n;
  }
  const double k = static_cast<double>(cells);
  return {mean_sum / k, std::sqrt(var_sum) / k};
}

}  // namespace orbitlab
