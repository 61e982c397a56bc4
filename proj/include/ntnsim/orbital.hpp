#pragma once

#include <compare>
#include <string>
#include <vector>

namespace ntnsim::orbital {

inline constexpr double kEarthRadiusKm = 6378.137;
inline constexpr double kMuKm3PerS2 = 398600.4418;
inline constexpr double kLightSpeedKmPerS = 299792.458;
// Sidereal rotation rate, deg/s.
inline constexpr double kEarthRotationDegPerS = 360.0 / 86164.1;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

struct SatId {
    int plane = 0;
    int slot = 0;

    auto operator<=>(const SatId&) const = default;
    // Zero-padded so lexicographic order matches (plane, slot) order.
    std::string str() const;
};

struct ConstellationConfig {
    double altitude_km = 550.0;
    double inclination_deg = 53.0;
    int num_planes = 1;
    int sats_per_plane = 1;
    int phasing_factor = 0;  // Walker F
    double raan_spread_deg = 360.0;
    double epoch_s = 0.0;

    double semi_major_axis_km() const { return kEarthRadiusKm + altitude_km; }
    double orbital_period_s() const;
    int total_sats() const { return num_planes * sats_per_plane; }

    bool operator==(const ConstellationConfig&) const = default;

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

struct SatelliteState {
    SatId id;
    Vec3 position_km;  // Earth-centered inertial
    double time_s = 0.0;
};

enum class SiteRole { gateway, core, smo, data_network };

std::string to_string(SiteRole role);
SiteRole site_role_from_string(const std::string& s);

struct GroundSite {
    std::string id;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    SiteRole role = SiteRole::gateway;
    double min_elevation_deg = 10.0;

    bool operator==(const GroundSite&) const = default;

    void validate() const;
};

// Circular Keplerian motion, spherical Earth, inertial frame.
std::vector<SatelliteState> propagate(const ConstellationConfig& config, double t_s);

// |a - b| / c. Symmetric, nonnegative.
double propagation_delay_s(const Vec3& a, const Vec3& b);

// Site position in the inertial frame; Earth rotation applied from epoch t = 0.
Vec3 site_position_eci(const GroundSite& site, double t_s);

// Elevation of a point above the site's local horizon, degrees.
double elevation_deg(const Vec3& sat_pos_km, const Vec3& site_pos_km);

bool visible(const SatelliteState& sat, const GroundSite& site);

struct VisibilityWindow {
    SatId sat;
    double start_s = 0.0;
    double end_s = 0.0;
};

// Maximal per-satellite visibility windows over [epoch, epoch + horizon],
// boundaries aligned to the step grid.
std::vector<VisibilityWindow> visibility_windows(const ConstellationConfig& config,
                                                 const GroundSite& site,
                                                 double horizon_s,
                                                 double step_s);

}  // namespace ntnsim::orbital
