#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "xover/geo.hpp"

using namespace xover;

namespace {
const EarthModel kEarth{};
}

TEST(EarthModel, DefaultsAndValidation) {
    EXPECT_DOUBLE_EQ(kEarth.radius_km, 6378.0);
    EXPECT_DOUBLE_EQ(kEarth.c_km_per_s(), 299792.458);
    EXPECT_NO_THROW(kEarth.validate());

    EarthModel bad = kEarth;
    bad.radius_km = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = kEarth;
    bad.grazing_altitude_km = kEarth.radius_km;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = kEarth;
    bad.c_m_per_s = -1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(GeodeticPoint, RejectsOutOfRangeCoordinates) {
    EXPECT_NO_THROW((GeodeticPoint{90.0, -180.0}.validate()));
    EXPECT_THROW((GeodeticPoint{90.5, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((GeodeticPoint{0.0, 181.0}.validate()), std::invalid_argument);
}

TEST(CentralAngle, KnownValues) {
    EXPECT_NEAR(central_angle({0, 0}, {0, 90}), 90.0, 1e-12);
    EXPECT_NEAR(central_angle({90, 0}, {-90, 0}), 180.0, 1e-12);
    EXPECT_DOUBLE_EQ(central_angle({12.5, 33.0}, {12.5, 33.0}), 0.0);
}

TEST(CentralAngle, MatchesAcosOracleOnRandomPairs) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    for (int k = 0; k < 2000; ++k) {
        const GeodeticPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
        const double expect = oracle::central_angle_acos(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg);
        // acos loses precision near 0 and 180 degrees; stay well inside.
        if (expect < 0.5 || expect > 179.5) continue;
        EXPECT_NEAR(central_angle(a, b), expect, 1e-9);
    }
}

TEST(CentralAngle, SymmetricAndBounded) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    for (int k = 0; k < 500; ++k) {
        const GeodeticPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
        const double ab = central_angle(a, b);
        EXPECT_DOUBLE_EQ(ab, central_angle(b, a));
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 180.0);
    }
}

TEST(ArcLength, ProportionalToAngle) {
    EXPECT_NEAR(arc_length(360.0, kEarth), 2.0 * kPi * 6378.0, 1e-9);
    EXPECT_NEAR(arc_length(23.4533, kEarth), 2611.0, 0.5);
    EXPECT_DOUBLE_EQ(arc_length(0.0, kEarth), 0.0);
}

TEST(ChordLength, NeverExceedsArcAtSameRadius) {
    for (double t = 0.1; t < 180.0; t += 0.7)
        EXPECT_LT(chord_length(t, 0.0, kEarth), arc_length(t, kEarth));
    EXPECT_NEAR(chord_length(180.0, 550.0, kEarth), 2.0 * (6378.0 + 550.0), 1e-9);
}

TEST(SlantRange, ReferenceValuesAt25Degrees) {
    EXPECT_NEAR(slant_range(25.0, 300.0, kEarth), 648.5, 0.1);
    EXPECT_NEAR(slant_range(25.0, 550.0, kEarth), 1123.4, 0.1);
    EXPECT_NEAR(slant_range(25.0, 1100.0, kEarth), 2048.7, 0.1);
}

TEST(SlantRange, ZenithIsAltitude) { EXPECT_DOUBLE_EQ(slant_range(90.0, 550.0, kEarth), 550.0); }

TEST(SlantRange, MatchesQuadraticOracleAndDecreasesWithElevation) {
    for (double h : {300.0, 550.0, 1100.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double e = 0.0; e <= 90.0; e += 0.5) {
            const double r = slant_range(e, h, kEarth);
            EXPECT_NEAR(r, oracle::slant_range_quadratic(e, h, kEarth.radius_km), 1e-8);
            EXPECT_LT(r, prev);
            EXPECT_GE(r, h - 1e-9);
            prev = r;
        }
    }
}

TEST(SlantRange, SatelliteAtRangeLiesOnShellWithRequestedElevation) {
    const double h = 550.0, e = 25.0;
    const double r = slant_range(e, h, kEarth);
    const Cartesian3 gs{0.0, 0.0, kEarth.radius_km};
    const Cartesian3 sat = gs + Cartesian3{std::cos(deg_to_rad(e)), 0.0, std::sin(deg_to_rad(e))} * r;
    EXPECT_NEAR(sat.norm(), kEarth.radius_km + h, 1e-8);
    EXPECT_NEAR(elevation_angle(gs, sat), e, 1e-9);
}

TEST(CosineOffset, DegenerateCases) {
    EXPECT_NEAR(cosine_offset(550.0, 550.0, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(cosine_offset(300.0, 400.0, 90.0), 500.0, 1e-9);
}

TEST(MaxLislRange, ReferenceValues) {
    EXPECT_NEAR(max_lisl_range(300.0, kEarth), 3399.95, 0.01);
    EXPECT_NEAR(max_lisl_range(550.0, kEarth), 5016.54, 0.01);
    EXPECT_NEAR(max_lisl_range(1100.0, kEarth), 7540.48, 0.01);
}

TEST(MaxLislRange, RejectsShellsBelowGrazingAltitude) {
    EXPECT_THROW(max_lisl_range(80.0, kEarth), std::domain_error);
    EXPECT_THROW(max_lisl_range(10.0, kEarth), std::domain_error);
}

TEST(MaxLislRange, ChordAtMaximumJustGrazes) {
    for (double h : {300.0, 550.0, 1100.0}) {
        const double d = max_lisl_range(h, kEarth);
        const double r = kEarth.radius_km + h;
        const double half = std::asin(d / 2.0 / r);
        const Cartesian3 a{r * std::cos(half), -r * std::sin(half), 0.0};
        const Cartesian3 b{r * std::cos(half), r * std::sin(half), 0.0};
        EXPECT_NEAR(distance(a, b), d, 1e-8);
        EXPECT_NEAR(segment_min_radius(a, b), kEarth.radius_km + kEarth.grazing_altitude_km, 1e-8);
    }
}

TEST(GeodeticToEcef, AxesAndRadius) {
    const Cartesian3 p = geodetic_to_ecef({0.0, 0.0}, kEarth);
    EXPECT_NEAR(p.x, 6378.0, 1e-9);
    EXPECT_NEAR(p.y, 0.0, 1e-9);
    const Cartesian3 n = geodetic_to_ecef({90.0, 45.0}, kEarth, 100.0);
    EXPECT_NEAR(n.z, 6478.0, 1e-9);
    EXPECT_NEAR(geodetic_to_ecef({-33.0, 151.0}, kEarth, 550.0).norm(), 6928.0, 1e-9);
}

TEST(ElevationAngle, ZenithAndHorizon) {
    const Cartesian3 gs = geodetic_to_ecef({10.0, 20.0}, kEarth);
    EXPECT_NEAR(elevation_angle(gs, geodetic_to_ecef({10.0, 20.0}, kEarth, 500.0)), 90.0, 1e-9);
    const Cartesian3 east{-std::sin(deg_to_rad(20.0)), std::cos(deg_to_rad(20.0)), 0.0};
    EXPECT_NEAR(elevation_angle(gs, gs + east * 1000.0), 0.0, 1e-9);
}

TEST(GrazingShell, ClearanceAgreesWithMinimumRadius) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double shell = kEarth.radius_km + kEarth.grazing_altitude_km;
    int checked = 0;
    for (int k = 0; k < 5000; ++k) {
        Cartesian3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        a = a * ((kEarth.radius_km + 550.0) / a.norm());
        b = b * ((kEarth.radius_km + 550.0) / b.norm());
        const double m = segment_min_radius(a, b);
        if (std::abs(m - shell) < 1e-6) continue;
        EXPECT_EQ(clears_grazing_shell(a, b, kEarth), m >= shell);
        ++checked;
    }
    EXPECT_GT(checked, 4900);
}

TEST(GrazingShell, EndpointBelowShellFails) {
    const Cartesian3 a{kEarth.radius_km + 10.0, 0.0, 0.0};
    const Cartesian3 b{kEarth.radius_km + 500.0, 0.0, 0.0};
    EXPECT_FALSE(clears_grazing_shell(a, b, kEarth));
    EXPECT_DOUBLE_EQ(segment_min_radius(a, b), kEarth.radius_km + 10.0);
}
