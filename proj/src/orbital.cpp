#include "ntnsim/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace ntnsim::orbital {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

std::string SatId::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "sat-%03d-%03d", plane, slot);
    return buf;
}

double ConstellationConfig::orbital_period_s() const {
    const double a = semi_major_axis_km();
    return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kMuKm3PerS2);
}

void ConstellationConfig::validate() const {
    if (altitude_km <= 0.0) throw std::invalid_argument("altitude must be > 0");
    if (num_planes < 1) throw std::invalid_argument("num_planes must be >= 1");
    if (sats_per_plane < 1) throw std::invalid_argument("sats_per_plane must be >= 1");
    if (phasing_factor < 0 || phasing_factor >= num_planes)
        throw std::invalid_argument("phasing_factor must be in [0, num_planes)");
}

std::string to_string(SiteRole role) {
    switch (role) {
        case SiteRole::gateway: return "gateway";
        case SiteRole::core: return "core";
        case SiteRole::smo: return "smo";
        case SiteRole::data_network: return "data_network";
    }
    throw std::logic_error("bad SiteRole");
}

SiteRole site_role_from_string(const std::string& s) {
    if (s == "gateway") return SiteRole::gateway;
    if (s == "core") return SiteRole::core;
    if (s == "smo") return SiteRole::smo;
    if (s == "data_network") return SiteRole::data_network;
    throw std::invalid_argument("unknown site role: " + s);
}

void GroundSite::validate() const {
    if (latitude_deg < -90.0 || latitude_deg > 90.0)
        throw std::invalid_argument("latitude out of range for site " + id);
    if (longitude_deg <= -180.0 || longitude_deg > 180.0)
        throw std::invalid_argument("longitude out of range for site " + id);
    if (min_elevation_deg < 0.0 || min_elevation_deg >= 90.0)
        throw std::invalid_argument("min_elevation out of range for site " + id);
}

std::vector<SatelliteState> propagate(const ConstellationConfig& config, double t_s) {
    config.validate();
    if (t_s < config.epoch_s) throw std::invalid_argument("t before epoch");

    const double a = config.semi_major_axis_km();
    const double omega = std::sqrt(kMuKm3PerS2 / (a * a * a));  // rad/s
    const double incl = config.inclination_deg * kDegToRad;
    const double dt = t_s - config.epoch_s;
    const double phase_step_deg =
        config.phasing_factor * 360.0 / (config.num_planes * config.sats_per_plane);

    std::vector<SatelliteState> states;
    states.reserve(static_cast<size_t>(config.total_sats()));
    for (int p = 0; p < config.num_planes; ++p) {
        const double raan = p * config.raan_spread_deg / config.num_planes * kDegToRad;
        const double cos_raan = std::cos(raan);
        const double sin_raan = std::sin(raan);
        for (int s = 0; s < config.sats_per_plane; ++s) {
            const double u0 = (s * 360.0 / config.sats_per_plane + p * phase_step_deg) * kDegToRad;
            const double u = u0 + omega * dt;  // argument of latitude
            const double cu = std::cos(u);
            const double su = std::sin(u);
            Vec3 pos{
                a * (cos_raan * cu - sin_raan * su * std::cos(incl)),
                a * (sin_raan * cu + cos_raan * su * std::cos(incl)),
                a * su * std::sin(incl),
            };
            states.push_back({SatId{p, s}, pos, t_s});
        }
    }
    return states;
}

double propagation_delay_s(const Vec3& a, const Vec3& b) {
    return (a - b).norm() / kLightSpeedKmPerS;
}

Vec3 site_position_eci(const GroundSite& site, double t_s) {
    const double lat = site.latitude_deg * kDegToRad;
    const double lon = (site.longitude_deg + kEarthRotationDegPerS * t_s) * kDegToRad;
    return {kEarthRadiusKm * std::cos(lat) * std::cos(lon),
            kEarthRadiusKm * std::cos(lat) * std::sin(lon),
            kEarthRadiusKm * std::sin(lat)};
}

double elevation_deg(const Vec3& sat_pos_km, const Vec3& site_pos_km) {
    const Vec3 rho = sat_pos_km - site_pos_km;
    const double rho_norm = rho.norm();
    if (rho_norm == 0.0) return 90.0;
    const double up = rho.dot(site_pos_km) / (rho_norm * site_pos_km.norm());
    return std::asin(std::clamp(up, -1.0, 1.0)) / kDegToRad;
}

bool visible(const SatelliteState& sat, const GroundSite& site) {
    const Vec3 site_pos = site_position_eci(site, sat.time_s);
    return elevation_deg(sat.position_km, site_pos) >= site.min_elevation_deg;
}

std::vector<VisibilityWindow> visibility_windows(const ConstellationConfig& config,
                                                 const GroundSite& site,
                                                 double horizon_s,
                                                 double step_s) {
    if (step_s <= 0.0) throw std::invalid_argument("step must be > 0");
    if (horizon_s < step_s) throw std::invalid_argument("horizon must be >= step");

    const int n_steps = static_cast<int>(std::floor(horizon_s / step_s + 1e-9));
    const int n_sats = config.total_sats();

    std::vector<VisibilityWindow> windows;
    // Open window start per satellite; < 0 means closed.
    std::vector<double> open_start(static_cast<size_t>(n_sats), -1.0);
    std::vector<SatId> ids(static_cast<size_t>(n_sats));

    for (int i = 0; i <= n_steps; ++i) {
        const double t = config.epoch_s + i * step_s;
        const auto states = propagate(config, t);
        for (int k = 0; k < n_sats; ++k) {
            ids[static_cast<size_t>(k)] = states[static_cast<size_t>(k)].id;
            const bool vis = visible(states[static_cast<size_t>(k)], site);
            double& start = open_start[static_cast<size_t>(k)];
            if (vis && start < 0.0) {
                start = t;
            } else if (!vis && start >= 0.0) {
                windows.push_back({states[static_cast<size_t>(k)].id, start, t - step_s});
                start = -1.0;
            }
        }
    }
    const double t_end = config.epoch_s + n_steps * step_s;
    for (int k = 0; k < n_sats; ++k) {
        if (open_start[static_cast<size_t>(k)] >= 0.0)
            windows.push_back({ids[static_cast<size_t>(k)], open_start[static_cast<size_t>(k)], t_end});
    }
    return windows;
}

}  // namespace ntnsim::orbital
