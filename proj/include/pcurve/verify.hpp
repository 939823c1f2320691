#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcurve/config.hpp"
#include "pcurve/report.hpp"

namespace pcurve {

// Sample sizes and thresholds of the check suite at sample_scale = 1 and
// tolerance_scale = 1.
namespace checks {
inline constexpr std::size_t kAmgmTriples = 100000;
inline constexpr std::size_t kErrConfigs = 100000;
inline constexpr std::size_t kAreaSamples = 1000000;
inline constexpr std::size_t kSoundnessTriples = 100000;
inline constexpr std::size_t kSegmentConfigs = 100000;
inline constexpr std::size_t kLineageHorizon = 2000;
inline constexpr std::size_t kFloorHorizon = 5000;
inline constexpr std::size_t kFloorSeeds = 20;
inline constexpr std::size_t kTheoremWedges = 8;
inline constexpr std::size_t kTheoremHorizon = 400;
inline constexpr std::size_t kTheoremTrials = 50;
inline constexpr std::size_t kPartitionLimit = 10000;
inline constexpr std::size_t kPoissonDraws = 100000;
inline constexpr std::size_t kChiSquareCells = 100;  // per wedge

inline constexpr double kAmgmRelTol = 1e-12;
inline constexpr double kErrFloor = 1e-12;
inline constexpr double kSigmas = 3.0;
inline constexpr double kDecrementSlack = 1e-9;
inline constexpr double kDecrementFloor = 1e-12;
inline constexpr double kSegmentSlack = 1e-12;
inline constexpr double kFloorSlack = 1e-9;
inline constexpr double kVarianceRelTol = 0.05;
inline constexpr double kChiSquareLevel = 1e-3;
}  // namespace checks

// C* = (1/2)^2 * prod_{k=3}^{n-1} (1 - 2 / (k (ln k)^{3/2})); floor of ell_n / ell_1.
double length_floor(std::size_t n);

// Upper quantile of the chi-square distribution (Wilson-Hilferty).
double chi_square_critical(std::size_t dof, double level);

// Runs checks C1 ... C12; failures are recorded, infrastructure errors propagate.
// The body of the returned report depends only on the config.
Report verify_lemma_suite(const ExperimentConfig& config);

}  // namespace pcurve
