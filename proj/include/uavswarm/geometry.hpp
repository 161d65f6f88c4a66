#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "uavswarm/rng.hpp"
#include "uavswarm/scenario.hpp"

namespace uavswarm {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Point3& a, const Point3& b);

/// Ground base stations inside the coverage disk. The swarm centre sits at
/// (0, 0, H) directly above the disk centre.
struct GbsLayout {
    std::vector<Point2> positions;
    std::vector<int> available_idx;
    std::vector<int> occupied_idx;
    /// 3D distance from each GBS to the swarm centre.
    std::vector<double> center_distances;

    std::size_t size() const { return positions.size(); }
};

/// UAV positions at altitude H; UAV head_idx is the swarm head.
struct SwarmLayout {
    std::vector<Point3> positions;
    int head_idx = 0;
    /// Row-major N x N matrix of pairwise 3D distances.
    std::vector<double> pair_distances;

    std::size_t size() const { return positions.size(); }
    double pair_distance(std::size_t n, std::size_t k) const { return pair_distances[n * size() + k]; }
    double min_pair_distance() const;
};

/// The sequential-inhibition sampler gave up.
class PlacementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Limits of the sequential-inhibition sampler.
struct PlacementLimits {
    int attempts_per_point = 10000;
    int layout_retries = 100;
};

/// Binomial point process: m_available + m_occupied GBSs i.i.d. uniform on
/// the coverage disk. The first m_available are the available ones.
GbsLayout sample_gbs_layout(const Scenario& scenario, Rng& rng);
GbsLayout sample_gbs_layout(int m_available, int m_occupied, double coverage_radius_m,
                            double altitude_m, Rng& rng);

/// Hard-core swarm: points uniform on the swarm disk, each new point rejected
/// while it lies closer than min_separation_m to an accepted one. A point that
/// cannot be placed within attempts_per_point restarts the whole layout.
SwarmLayout sample_swarm_layout(const Scenario& scenario, Rng& rng, const PlacementLimits& limits = {});
SwarmLayout sample_swarm_layout(int n_uavs, double swarm_radius_m, double altitude_m,
                                double min_separation_m, Rng& rng, const PlacementLimits& limits = {});

/// Density of the GBS-to-swarm-centre distance: 2u/R^2 on [H, sqrt(R^2 + H^2)].
double gbs_distance_pdf(double u, const Scenario& scenario);
double gbs_distance_pdf(double u, double coverage_radius_m, double altitude_m);

/// Density of the distance between two independent uniform points in a disk.
double disk_pair_distance_pdf(double w, double radius);

/// Disk pair-distance law truncated to [min_separation, 2 * radius].
class PairDistanceDistribution {
public:
    PairDistanceDistribution(double radius, double min_separation);
    explicit PairDistanceDistribution(const Scenario& scenario);

    double pdf(double w) const;
    double lower() const { return min_separation_; }
    double upper() const { return 2.0 * radius_; }
    /// Probability mass of the untruncated law on [lower, upper].
    double truncation_mass() const { return mass_; }

private:
    double radius_;
    double min_separation_;
    double mass_;
};

double uav_pair_distance_pdf(double w, const Scenario& scenario);

/// Debug dump, one row per node: x,y,z,role.
void write_layout_csv(std::ostream& out, const GbsLayout& gbs, const SwarmLayout& swarm);

}  // namespace uavswarm
