#include "mdicke/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace mdicke {

ScalingFit fit_log_scaling(std::span<const std::pair<double, double>> points)
{
    const std::size_t n = points.size();
    if (n < 4) throw InputError("fit_log_scaling: need at least 4 points");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(points[i].first > 0.0)) throw InputError("fit_log_scaling: N must be positive");
        if (i && !(points[i].first > points[i - 1].first)) {
            throw InputError("fit_log_scaling: N must be strictly increasing");
        }
    }

    double mx = 0.0, my = 0.0;
    for (const auto& [N, S] : points) {
        mx += std::log(N);
        my += S;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [N, S] : points) {
        const double dx = std::log(N) - mx, dy = S - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 1e-300) throw InputError("fit_log_scaling: rank-deficient design");

    ScalingFit fit;
    fit.s1 = sxy / sxx;
    fit.s0 = my - fit.s1 * mx;
    double ssr = 0.0;
    for (const auto& [N, S] : points) {
        const double r = S - (fit.s0 + fit.s1 * std::log(N));
        fit.residuals.push_back(r);
        ssr += r * r;
    }
    const double sigma2 = ssr / static_cast<double>(n - 2);
    fit.covariance[1][1] = sigma2 / sxx;
    fit.covariance[0][0] = sigma2 * (1.0 / n + mx * mx / sxx);
    fit.covariance[0][1] = fit.covariance[1][0] = -mx * sigma2 / sxx;
    fit.se_s0 = std::sqrt(fit.covariance[0][0]);
    fit.se_s1 = std::sqrt(fit.covariance[1][1]);
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    fit.n_min = points.front().first;
    fit.n_max = points.back().first;
    return fit;
}

std::optional<ScalingFit> fit_upper_half(std::span<const std::pair<double, double>> points)
{
    const std::size_t n = points.size();
    const std::size_t keep = std::max<std::size_t>(4, (n + 1) / 2);
    if (keep >= n) return std::nullopt;
    return fit_log_scaling(points.subspan(n - keep));
}

}  // namespace mdicke
