#pragma once

#include <cstdint>

#include "orbitlab/report.hpp"
#include "orbitlab/sampling.hpp"

namespace orbitlab {

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  bool quick = false;       // reduced radii and samples
  std::size_t samples = 0;  // 0: 200000, or 20000 with quick
};

/// Every verification pipeline on the bundled spaces. A failing stage is
/// recorded and the remaining stages still run.
Report paper_suite(const SuiteOptions& options);

}  // namespace orbitlab
