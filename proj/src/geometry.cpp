#include "uavswarm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "uavswarm/quadrature.hpp"

namespace uavswarm {

namespace {

Point2 uniform_in_disk(double radius, Rng& rng) {
    const double r = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

double distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double SwarmLayout::min_pair_distance() const {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) best = std::min(best, pair_distance(i, k));
    }
    return best;
}

GbsLayout sample_gbs_layout(int m_available, int m_occupied, double coverage_radius_m,
                            double altitude_m, Rng& rng) {
    GbsLayout layout;
    const int total = m_available + m_occupied;
    layout.positions.reserve(total);
    layout.center_distances.reserve(total);
    for (int m = 0; m < total; ++m) {
        const Point2 p = uniform_in_disk(coverage_radius_m, rng);
        layout.positions.push_back(p);
        layout.center_distances.push_back(std::sqrt(p.x * p.x + p.y * p.y + altitude_m * altitude_m));
        (m < m_available ? layout.available_idx : layout.occupied_idx).push_back(m);
    }
    return layout;
}

GbsLayout sample_gbs_layout(const Scenario& scenario, Rng& rng) {
    const auto& c = scenario.config();
    return sample_gbs_layout(c.m_available, c.m_occupied, c.coverage_radius_m, c.swarm_altitude_m, rng);
}

SwarmLayout sample_swarm_layout(int n_uavs, double swarm_radius_m, double altitude_m,
                                double min_separation_m, Rng& rng, const PlacementLimits& limits) {
    const double min_sq = min_separation_m * min_separation_m;
    std::vector<Point2> placed;
    placed.reserve(n_uavs);

    for (int layout_try = 0; layout_try < limits.layout_retries; ++layout_try) {
        placed.clear();
        bool stuck = false;
        for (int n = 0; n < n_uavs && !stuck; ++n) {
            bool accepted = false;
            for (int attempt = 0; attempt < limits.attempts_per_point; ++attempt) {
                const Point2 cand = uniform_in_disk(swarm_radius_m, rng);
                const bool clear = std::all_of(placed.begin(), placed.end(), [&](const Point2& q) {
                    const double dx = cand.x - q.x;
                    const double dy = cand.y - q.y;
                    return dx * dx + dy * dy >= min_sq;
                });
                if (clear) {
                    placed.push_back(cand);
                    accepted = true;
                    break;
                }
            }
            stuck = !accepted;
        }
        if (stuck) continue;

        SwarmLayout layout;
        layout.head_idx = 0;
        layout.positions.reserve(n_uavs);
        for (const auto& p : placed) layout.positions.push_back({p.x, p.y, altitude_m});
        layout.pair_distances.assign(static_cast<std::size_t>(n_uavs) * n_uavs, 0.0);
        for (int i = 0; i < n_uavs; ++i) {
            for (int k = i + 1; k < n_uavs; ++k) {
                const double d = distance(layout.positions[i], layout.positions[k]);
                layout.pair_distances[static_cast<std::size_t>(i) * n_uavs + k] = d;
                layout.pair_distances[static_cast<std::size_t>(k) * n_uavs + i] = d;
            }
        }
        return layout;
    }
    throw PlacementError("hard-core placement of " + std::to_string(n_uavs) +
                         " UAVs with separation " + std::to_string(min_separation_m) +
                         " m in radius " + std::to_string(swarm_radius_m) + " m failed after " +
                         std::to_string(limits.layout_retries) + " layout attempts");
}

SwarmLayout sample_swarm_layout(const Scenario& scenario, Rng& rng, const PlacementLimits& limits) {
    const auto& c = scenario.config();
    return sample_swarm_layout(c.n_uavs, c.swarm_radius_m, c.swarm_altitude_m, c.min_separation_m, rng,
                               limits);
}

double gbs_distance_pdf(double u, double coverage_radius_m, double altitude_m) {
    const double upper = std::sqrt(coverage_radius_m * coverage_radius_m + altitude_m * altitude_m);
    if (u < altitude_m || u > upper) return 0.0;
    return 2.0 * u / (coverage_radius_m * coverage_radius_m);
}

double gbs_distance_pdf(double u, const Scenario& scenario) {
    const auto& c = scenario.config();
    return gbs_distance_pdf(u, c.coverage_radius_m, c.swarm_altitude_m);
}

double disk_pair_distance_pdf(double w, double radius) {
    if (w < 0.0 || w > 2.0 * radius) return 0.0;
    const double s = w / (2.0 * radius);
    const double r2 = radius * radius;
    return 4.0 * w / (std::numbers::pi * r2) * std::acos(s) -
           2.0 * w * w / (std::numbers::pi * r2 * radius) * std::sqrt(std::max(0.0, 1.0 - s * s));
}

PairDistanceDistribution::PairDistanceDistribution(double radius, double min_separation)
    : radius_(radius), min_separation_(min_separation) {
    if (!(radius > 0.0)) throw std::domain_error("PairDistanceDistribution: radius must be > 0");
    if (!(min_separation >= 0.0 && min_separation < 2.0 * radius)) {
        throw std::domain_error("PairDistanceDistribution: need 0 <= min_separation < 2 * radius");
    }
    specfun::QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;
    mass_ = specfun::integrate([r = radius_](double w) { return disk_pair_distance_pdf(w, r); },
                               min_separation_, 2.0 * radius_, opt);
}

PairDistanceDistribution::PairDistanceDistribution(const Scenario& scenario)
    : PairDistanceDistribution(scenario.config().swarm_radius_m, scenario.config().min_separation_m) {}

double PairDistanceDistribution::pdf(double w) const {
    if (w < min_separation_ || w > 2.0 * radius_) return 0.0;
    return disk_pair_distance_pdf(w, radius_) / mass_;
}

double uav_pair_distance_pdf(double w, const Scenario& scenario) {
    return PairDistanceDistribution(scenario).pdf(w);
}

void write_layout_csv(std::ostream& out, const GbsLayout& gbs, const SwarmLayout& swarm) {
    out << "x,y,z,role\n";
    for (std::size_t n = 0; n < swarm.size(); ++n) {
        const auto& p = swarm.positions[n];
        out << p.x << ',' << p.y << ',' << p.z << ','
            << (static_cast<int>(n) == swarm.head_idx ? "head" : "member") << '\n';
    }
    for (int m : gbs.available_idx) {
        out << gbs.positions[m].x << ',' << gbs.positions[m].y << ",0,available\n";
    }
    for (int m : gbs.occupied_idx) {
        out << gbs.positions[m].x << ',' << gbs.positions[m].y << ",0,occupied\n";
    }
}

}  // namespace uavswarm
