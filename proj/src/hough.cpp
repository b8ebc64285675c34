// SPDX-License-Identifier: Apache-2.0
#include "houghface/hough.hpp"

#include <algorithm>
#include <numbers>

namespace houghface {

void HoughConfig::validate() const {
    if (!(theta_step_deg > 0.0)) throw ConfigError("hough: theta step must be positive");
    if (theta_bins < 1) throw ConfigError("hough: need at least one theta bin");
    if (theta_bins * theta_step_deg > 180.0 + 1e-9)
        throw ConfigError("hough: theta range exceeds 180 degrees");
    if (theta_min_deg < -90.0 - 1e-9 ||
        theta_min_deg + theta_bins * theta_step_deg > 90.0 + 1e-9)
        throw ConfigError("hough: theta range must lie within [-90, 90]");
    if (!(rho_step > 0.0)) throw ConfigError("hough: rho step must be positive");
}

namespace detail {

Raster<int> houghVotes(const std::vector<std::pair<int, int>>& points,
                       int /*block_size*/, const HoughConfig& cfg, int rho_offset) {
    const int rho_bins = 2 * rho_offset + 1;
    Raster<int> votes = Raster<int>::Zero(rho_bins, cfg.theta_bins);

    std::vector<double> cos_t(cfg.theta_bins), sin_t(cfg.theta_bins);
    constexpr double deg = std::numbers::pi / 180.0;
    for (int t = 0; t < cfg.theta_bins; ++t) {
        const double theta = (cfg.theta_min_deg + t * cfg.theta_step_deg) * deg;
        cos_t[t] = std::cos(theta);
        sin_t[t] = std::sin(theta);
    }

    for (const auto& [x, y] : points) {
        for (int t = 0; t < cfg.theta_bins; ++t) {
            const double rho = x * cos_t[t] + y * sin_t[t];
            const long bin = rho_offset + roundAwayFromZero(rho / cfg.rho_step);
            votes(bin, t) += 1;
        }
    }
    return votes;
}

}  // namespace detail

std::vector<Peak> topPeaks(const HoughAccumulator& acc, int m) {
    if (m < 1) throw ConfigError("top_peaks: m must be >= 1");

    struct Cell {
        int votes, r, t;
    };
    std::vector<Cell> cells;
    for (int r = 0; r < acc.rhoBins(); ++r)
        for (int t = 0; t < acc.thetaBins(); ++t)
            if (acc.votes(r, t) > 0) cells.push_back({acc.votes(r, t), r, t});

    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.r != b.r) return a.r < b.r;
        return a.t < b.t;
    });
    if (static_cast<int>(cells.size()) > m) cells.resize(static_cast<std::size_t>(m));

    std::vector<Peak> peaks;
    peaks.reserve(cells.size());
    for (const Cell& c : cells)
        peaks.push_back({acc.rhoOfBin(c.r), acc.thetaOfBin(c.t), c.votes});
    return peaks;
}

std::pair<double, double> peakCentroid(const std::vector<Peak>& peaks) {
    if (peaks.empty()) throw ConfigError("peak_centroid: empty peak list");
    double rho = 0.0, theta = 0.0;
    for (const Peak& p : peaks) {
        rho += p.rho;
        theta += p.theta;
    }
    const double n = static_cast<double>(peaks.size());
    return {rho / n, theta / n};
}

std::array<Peak, 2> selectNearestTwo(const std::vector<Peak>& peaks,
                                     std::pair<double, double> centroid) {
    if (peaks.empty()) throw ConfigError("select_nearest_two: empty peak list");
    if (peaks.size() == 1) return {peaks[0], peaks[0]};

    std::vector<std::pair<double, Peak>> by_distance;
    by_distance.reserve(peaks.size());
    for (const Peak& p : peaks) {
        const double dr = p.rho - centroid.first;
        const double dt = p.theta - centroid.second;
        by_distance.emplace_back(std::sqrt(dr * dr + dt * dt), p);
    }
    std::sort(by_distance.begin(), by_distance.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  if (a.second.votes != b.second.votes) return a.second.votes > b.second.votes;
                  if (a.second.rho != b.second.rho) return a.second.rho < b.second.rho;
                  return a.second.theta < b.second.theta;
              });
    return {by_distance[0].second, by_distance[1].second};
}

}  // namespace houghface
