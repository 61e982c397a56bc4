#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "ntnsim/orbital.hpp"

using namespace ntnsim;
using orbital::ConstellationConfig;
using orbital::GroundSite;
using orbital::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;

// Elevation of a satellite at altitude h over a site at central angle phi,
// from the spherical triangle between site, subsatellite point and satellite.
double elevation_oracle_deg(double altitude_km, double central_angle_rad) {
    const double r = orbital::kEarthRadiusKm + altitude_km;
    const double num = std::cos(central_angle_rad) - orbital::kEarthRadiusKm / r;
    const double den = std::sin(central_angle_rad);
    return std::atan2(num, den) * 180.0 / kPi;
}

}  // namespace

TEST_CASE("single satellite sits at the configured radius") {
    ConstellationConfig cfg;
    cfg.altitude_km = 550.0;
    const auto states = orbital::propagate(cfg, 0.0);
    REQUIRE(states.size() == 1);
    CHECK(states[0].position_km.norm() == doctest::Approx(6928.137).epsilon(1e-9));
}

TEST_CASE("radius invariant holds for every propagated state") {
    ConstellationConfig cfg;
    cfg.altitude_km = 550.0;
    cfg.inclination_deg = 53.0;
    cfg.num_planes = 6;
    cfg.sats_per_plane = 8;
    cfg.phasing_factor = 1;
    const double a = cfg.semi_major_axis_km();
    for (double t : {0.0, 120.0, 3333.0}) {
        for (const auto& st : orbital::propagate(cfg, t))
            CHECK(std::abs(st.position_km.norm() - a) / a < 1e-6);
    }
}

TEST_CASE("full constellation count and pairwise distinct positions") {
    ConstellationConfig cfg;
    cfg.altitude_km = 550.0;
    cfg.inclination_deg = 53.0;
    cfg.num_planes = 72;
    cfg.sats_per_plane = 22;
    // At the symmetric t = 0 phase, satellites of planes 180 deg apart in RAAN
    // momentarily meet at the orbit-plane intersections; a generic epoch has
    // every satellite at a distinct point.
    const auto states = orbital::propagate(cfg, 137.0);
    REQUIRE(states.size() == 1584);
    std::set<std::tuple<long, long, long>> seen;
    for (const auto& st : states) {
        seen.insert({std::lround(st.position_km.x * 1e3), std::lround(st.position_km.y * 1e3),
                     std::lround(st.position_km.z * 1e3)});
    }
    CHECK(seen.size() == states.size());
}

TEST_CASE("positions repeat after one orbital period") {
    ConstellationConfig cfg;
    cfg.altitude_km = 550.0;
    cfg.inclination_deg = 53.0;
    cfg.num_planes = 3;
    cfg.sats_per_plane = 4;
    const auto a = orbital::propagate(cfg, 0.0);
    const auto b = orbital::propagate(cfg, cfg.orbital_period_s());
    for (size_t i = 0; i < a.size(); ++i)
        CHECK((a[i].position_km - b[i].position_km).norm() < 1e-6);
}

TEST_CASE("propagation delay basics") {
    const Vec3 p{1000.0, 2000.0, 3000.0};
    CHECK(orbital::propagation_delay_s(p, p) == 0.0);
    const Vec3 q{2000.0, 2000.0, 3000.0};  // 1000 km apart
    CHECK(orbital::propagation_delay_s(p, q) == doctest::Approx(3.3356e-3).epsilon(1e-4));
    CHECK(orbital::propagation_delay_s(p, q) == orbital::propagation_delay_s(q, p));
    // Nadir point to a GEO-altitude satellite.
    const Vec3 ground{orbital::kEarthRadiusKm, 0.0, 0.0};
    const Vec3 geo{orbital::kEarthRadiusKm + 35786.0, 0.0, 0.0};
    CHECK(orbital::propagation_delay_s(ground, geo) == doctest::Approx(0.11937).epsilon(1e-4));
}

TEST_CASE("delay triangle inequality over sampled triples") {
    ConstellationConfig cfg;
    cfg.altitude_km = 550.0;
    cfg.inclination_deg = 53.0;
    cfg.num_planes = 4;
    cfg.sats_per_plane = 5;
    const auto states = orbital::propagate(cfg, 77.0);
    for (size_t i = 0; i < states.size(); ++i) {
        for (size_t j = i + 1; j < states.size(); ++j) {
            for (size_t k = j + 1; k < states.size(); ++k) {
                const auto& A = states[i].position_km;
                const auto& B = states[j].position_km;
                const auto& C = states[k].position_km;
                CHECK(orbital::propagation_delay_s(A, C) <=
                      orbital::propagation_delay_s(A, B) + orbital::propagation_delay_s(B, C) +
                          1e-12);
            }
        }
    }
}

TEST_CASE("visibility predicate") {
    GroundSite site{"gw", 0.0, 0.0, orbital::SiteRole::gateway, 10.0};

    SUBCASE("satellite at zenith") {
        orbital::SatelliteState sat{{0, 0}, {6928.137, 0.0, 0.0}, 0.0};
        CHECK(orbital::visible(sat, site));
    }
    SUBCASE("satellite on the opposite side of Earth") {
        orbital::SatelliteState sat{{0, 0}, {-6928.137, 0.0, 0.0}, 0.0};
        CHECK_FALSE(orbital::visible(sat, site));
    }
    SUBCASE("550 km satellite at 2000 km ground range is below a 10 deg mask") {
        const double phi = 2000.0 / orbital::kEarthRadiusKm;
        orbital::SatelliteState sat{
            {0, 0}, {6928.137 * std::cos(phi), 6928.137 * std::sin(phi), 0.0}, 0.0};
        CHECK_FALSE(orbital::visible(sat, site));
        const auto site_pos = orbital::site_position_eci(site, 0.0);
        const double elev = orbital::elevation_deg(sat.position_km, site_pos);
        CHECK(elev == doctest::Approx(elevation_oracle_deg(550.0, phi)).epsilon(1e-6));
        CHECK(elev < 10.0);
        CHECK(elev > 4.0);
    }
}

TEST_CASE("visibility windows") {
    SUBCASE("geostationary-altitude satellite fixed over the site") {
        ConstellationConfig cfg;
        cfg.altitude_km = 35786.0;
        cfg.inclination_deg = 0.0;
        GroundSite site{"gw", 0.0, 0.0, orbital::SiteRole::gateway, 10.0};
        const auto windows = orbital::visibility_windows(cfg, site, 3600.0, 60.0);
        REQUIRE(windows.size() == 1);
        CHECK(windows[0].start_s == 0.0);
        CHECK(windows[0].end_s == 3600.0);
    }
    SUBCASE("satellite never above the mask") {
        ConstellationConfig cfg;
        cfg.altitude_km = 550.0;
        cfg.inclination_deg = 0.0;
        GroundSite site{"polar", 89.0, 0.0, orbital::SiteRole::gateway, 10.0};
        CHECK(orbital::visibility_windows(cfg, site, 3600.0, 10.0).empty());
    }
    SUBCASE("LEO pass duration matches the closed-form oracle") {
        ConstellationConfig cfg;
        cfg.altitude_km = 550.0;
        cfg.inclination_deg = 0.0;
        GroundSite site{"gw", 0.0, 180.0, orbital::SiteRole::gateway, 10.0};
        const double period = cfg.orbital_period_s();
        const auto windows = orbital::visibility_windows(cfg, site, period, 1.0);
        REQUIRE(windows.size() == 1);
        const double duration = windows[0].end_s - windows[0].start_s;
        // Half-width of the visibility cone at a 10 deg mask.
        const double r = cfg.semi_major_axis_km();
        const double mask = 10.0 * kPi / 180.0;
        const double psi = std::acos(orbital::kEarthRadiusKm * std::cos(mask) / r) - mask;
        const double rel_rate = 2.0 * kPi / period -
                                orbital::kEarthRotationDegPerS * kPi / 180.0;
        const double expected = 2.0 * psi / rel_rate;
        CHECK(duration == doctest::Approx(expected).epsilon(0.02));
        CHECK(duration > 4.0 * 60.0);
        CHECK(duration < 9.0 * 60.0);
    }
}

TEST_CASE("config validation") {
    ConstellationConfig cfg;
    cfg.altitude_km = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.altitude_km = 550.0;
    cfg.num_planes = 4;
    cfg.phasing_factor = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.phasing_factor = 3;
    CHECK_NOTHROW(cfg.validate());
}
