// analysis.hpp: post-processing: logarithmic scaling fits of the critical
// entropy and phase-boundary extraction from 2-D scans.

#pragma once

#include "mdicke/scan.hpp"

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mdicke {

struct ScalingFit {
    double s0{0.0};
    double s1{0.0};
    double se_s0{0.0};
    double se_s1{0.0};
    std::array<std::array<double, 2>, 2> covariance{};
    double n_min{0.0};
    double n_max{0.0};
    std::vector<double> residuals;
    double r2{0.0};
};

// Ordinary least squares of S against ln N. Needs >= 4 points with strictly
// increasing N; throws InputError otherwise.
ScalingFit fit_log_scaling(std::span<const std::pair<double, double>> points);

// Refit on the upper half of the N window (at least 4 points); empty when
// that would not drop any point.
std::optional<ScalingFit> fit_upper_half(std::span<const std::pair<double, double>> points);

// Marching squares on the phase field of a 2-D scan, each crossing refined by
// bisection on the order-parameter oracle. A crossing is first order when the
// order parameter jumps by more than the threshold and phi = 0 is still
// locally stable (c1 > c1_tol) at the boundary. A 1-D scan yields the
// refined crossing points (y = 0) and no segments.
Boundary trace_boundary(const ScanResult& scan, const BoundaryOptions& opts = {});

}  // namespace mdicke
