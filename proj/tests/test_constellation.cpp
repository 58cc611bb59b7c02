#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "oracles.hpp"
#include "xover/constellation.hpp"

using namespace xover;

namespace {
const EarthModel kEarth{};
}

TEST(WalkerConfig, Validation) {
    WalkerConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.total_satellites(), 1584);
    for (auto mutate : std::vector<std::function<void(WalkerConfig&)>>{
             [](WalkerConfig& w) { w.num_planes = 0; },
             [](WalkerConfig& w) { w.sats_per_plane = -1; },
             [](WalkerConfig& w) { w.inclination_deg = 0.0; },
             [](WalkerConfig& w) { w.inclination_deg = 180.0; },
             [](WalkerConfig& w) { w.altitude_km = 0.0; },
             [](WalkerConfig& w) { w.phasing_factor = w.num_planes; },
             [](WalkerConfig& w) { w.raan_span_deg = 400.0; },
             [](WalkerConfig& w) { w.epoch_offset_s = std::nan(""); },
         }) {
        WalkerConfig w;
        mutate(w);
        EXPECT_THROW(w.validate(), std::invalid_argument);
    }
}

TEST(GenerateWalker, CountOrderAndSpacing) {
    const WalkerConfig cfg;
    const auto els = generate_walker(cfg);
    ASSERT_EQ(els.size(), 1584u);
    EXPECT_EQ(els[0].id, (SatelliteId{0, 0}));
    EXPECT_EQ(els[66].id, (SatelliteId{1, 0}));
    EXPECT_EQ(els[66 * 24 - 1].id, (SatelliteId{23, 65}));
    EXPECT_DOUBLE_EQ(els[66].raan_deg, 15.0);
    EXPECT_NEAR(els[1].anomaly_deg, 360.0 / 66.0, 1e-12);
    EXPECT_DOUBLE_EQ(els[66].anomaly_deg, 0.0);  // F = 0: no inter-plane phasing
    std::set<std::pair<int, int>> ids;
    for (const auto& e : els) ids.insert({e.id.plane_index, e.id.slot_index});
    EXPECT_EQ(ids.size(), els.size());
}

TEST(GenerateWalker, PhasingFactorShiftsAdjacentPlanes) {
    WalkerConfig cfg;
    cfg.phasing_factor = 5;
    const auto els = generate_walker(cfg);
    EXPECT_NEAR(els[66].anomaly_deg, 5.0 * 360.0 / 1584.0, 1e-12);
    EXPECT_NEAR(els[2 * 66].anomaly_deg, 10.0 * 360.0 / 1584.0, 1e-12);
}

TEST(SatelliteId, Label) { EXPECT_EQ((SatelliteId{3, 17}.label()), "p3s17"); }

TEST(OrbitalVelocity, KnownValueAndKeplerPeriod) {
    EXPECT_NEAR(orbital_velocity(550.0, kEarth), 7.59, 0.01);
    for (double h : {300.0, 550.0, 1100.0})
        EXPECT_NEAR(orbital_period_s(h, kEarth),
                    oracle::kepler_period(h, kEarth.radius_km, kEarth.gravitational_constant, kEarth.earth_mass_kg),
                    1e-6);
    EXPECT_THROW(orbital_velocity(-1.0, kEarth), std::invalid_argument);
}

TEST(Propagate, NormConservedAndLatitudeBounded) {
    WalkerConfig cfg;
    cfg.altitude_km = 1100.0;
    const auto els = generate_walker(cfg);
    const double radius = kEarth.radius_km + cfg.altitude_km;
    const double zmax = radius * std::sin(deg_to_rad(cfg.inclination_deg));
    for (double t : {0.0, 1.0, 917.0, 3599.0, 86400.0 * 3})
        for (std::size_t k = 0; k < els.size(); k += 37) {
            const auto s = propagate(els[k], t, cfg, kEarth);
            EXPECT_LE(std::abs(s.position_ecef.norm() - radius) / radius, 1e-6);
            EXPECT_LE(std::abs(s.position_ecef.z), zmax * (1.0 + 1e-12));
        }
}

TEST(Propagate, InertialAndEarthFixedCoincideAtEpoch) {
    const WalkerConfig cfg;
    const auto els = generate_walker(cfg);
    const auto eci = propagate_inertial(els[100], 0.0, cfg, kEarth);
    const auto ecef = propagate(els[100], 0.0, cfg, kEarth).position_ecef;
    EXPECT_NEAR(distance(eci, ecef), 0.0, 1e-9);
}

TEST(Propagate, InertialPositionRepeatsEachPeriod) {
    const WalkerConfig cfg;
    const auto el = generate_walker(cfg)[500];
    const double T = orbital_period_s(cfg.altitude_km, kEarth);
    EXPECT_NEAR(distance(propagate_inertial(el, 0.0, cfg, kEarth), propagate_inertial(el, T, cfg, kEarth)), 0.0,
                1e-6);
}

TEST(Propagate, EarthRotationMovesFixedFrameWestward) {
    // An inertially fixed point drifts westward in the Earth-fixed frame.
    const WalkerConfig cfg;
    const auto el = generate_walker(cfg)[0];
    const double T = orbital_period_s(cfg.altitude_km, kEarth);
    const auto a = propagate(el, 0.0, cfg, kEarth).position_ecef;
    const auto b = propagate(el, T, cfg, kEarth).position_ecef;
    const double lon_a = std::atan2(a.y, a.x), lon_b = std::atan2(b.y, b.x);
    EXPECT_NEAR(std::remainder(lon_b - lon_a, 2 * kPi), -kEarth.rotation_rate_rad_per_s * T, 1e-9);
}

TEST(Propagate, EpochOffsetEqualsTimeShift) {
    WalkerConfig shifted;
    shifted.epoch_offset_s = 1234.5;
    const WalkerConfig base;
    const auto els = generate_walker(base);
    for (std::size_t k = 0; k < els.size(); k += 101)
        EXPECT_NEAR(distance(propagate(els[k], 10.0, shifted, kEarth).position_ecef,
                             propagate(els[k], 1244.5, base, kEarth).position_ecef),
                    0.0, 1e-8);
}

TEST(Propagate, AllPreservesOrderAndIsDeterministic) {
    const WalkerConfig cfg;
    const auto els = generate_walker(cfg);
    const auto a = propagate_all(els, 42.0, cfg, kEarth);
    const auto b = propagate_all(els, 42.0, cfg, kEarth);
    ASSERT_EQ(a.size(), els.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].id, els[k].id);
        EXPECT_EQ(a[k].position_ecef, b[k].position_ecef);
    }
}

TEST(Stations, RangeFromMinimumElevation) {
    const auto gs = make_station("TSX", {43.6486, -79.3832}, 1100.0, 25.0, kEarth);
    EXPECT_NEAR(gs.range_km, 2048.7, 0.1);
    EXPECT_THROW(make_station("bad", {95.0, 0.0}, 550.0, 25.0, kEarth), std::invalid_argument);
    const auto pos = station_positions({gs}, kEarth);
    ASSERT_EQ(pos.size(), 1u);
    EXPECT_NEAR(pos[0].norm(), kEarth.radius_km, 1e-9);
}
