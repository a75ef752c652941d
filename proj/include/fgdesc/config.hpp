#pragma once

#include <cstdint>

// Central tuning knobs. Length-guard constants are checked at build time by
// the formula builders; the test suite measures them up to 2^20 and the
// builders throw if a bound is ever exceeded.
namespace fgdesc::config {

// Dense multiplication tables are supported up to this order.
inline constexpr int kMaxTableOrder = 1024;

// Complete catalogs are shipped up to this order.
inline constexpr int kMaxCatalogOrder = 24;

// Cayley-table backtracking (with isomorphism rejection) handles orders up
// to this bound; curated constructions take over above it.
inline constexpr int kBruteForceCatalogOrder = 16;

// Factor-set enumeration runs only while |N|^(|H|^2) stays at or below this.
inline constexpr double kExtensionEnumBudget = 1e7;

// pin_down_subset certifies injectivity by exhaustive scan while |V| <= this.
inline constexpr long long kPinDownScanBudget = 1000000;

// Checked evaluation cross-checks a shortcut answer against the naive
// evaluator whenever the estimated naive cost is at or below this.
inline constexpr long long kNaiveCrossCheckBudget = 2000000;

// Length-guard constants: |theta_n| <= kThetaC * log n (+ kThetaC), etc.
// All use the convention log m = min{ r : 2^r >= m }.
inline constexpr int kThetaC = 12;
inline constexpr int kChiC = 20;
inline constexpr int kAlphaC = 24;
inline constexpr int kBetaC = 30;
inline constexpr int kFieldC = 100;
inline constexpr int kCyclicC = 40;

// describe_group: |phi| <= kPipelineC * log^3|G| (checked at build time).
inline constexpr int kPipelineC = 220;
// describe_sigma_bounded: |phi| <= kPipelineSigmaC * log^4|G|.
inline constexpr int kPipelineSigmaC = 220;

// A small stable hash of the configuration, embedded in reports.
std::uint32_t config_hash();

}  // namespace fgdesc::config
