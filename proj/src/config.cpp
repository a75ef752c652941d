#include "fgdesc/config.hpp"

namespace fgdesc::config {

std::uint32_t config_hash() {
  // FNV-1a over the tuning constants.
  std::uint32_t h = 2166136261u;
  auto mix = [&h](long long v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<std::uint32_t>(v & 0xff);
      h *= 16777619u;
      v >>= 8;
    }
  };
  mix(kMaxTableOrder);
  mix(kMaxCatalogOrder);
  mix(kBruteForceCatalogOrder);
  mix(static_cast<long long>(kExtensionEnumBudget));
  mix(kPinDownScanBudget);
  mix(kNaiveCrossCheckBudget);
  mix(kThetaC);
  mix(kChiC);
  mix(kAlphaC);
  mix(kBetaC);
  mix(kFieldC);
  mix(kCyclicC);
  mix(kPipelineC);
  mix(kPipelineSigmaC);
  return h;
}

}  // namespace fgdesc::config
