// Spherical-Earth and satellite geometry primitives.
//
// Every angle crossing this API is in degrees; lengths are in kilometres
// unless the name says otherwise.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace xover {

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Spherical Earth plus the physical constants used by the latency models.
struct EarthModel {
    double radius_km = 6378.0;
    /// Lowest altitude a laser link may pass through (line-of-sight grazing shell).
    double grazing_altitude_km = 80.0;
    double c_m_per_s = 299'792'458.0;
    double gravitational_constant = 6.673e-11;  // m^3 kg^-1 s^-2
    double earth_mass_kg = 5.98e24;
    double rotation_rate_rad_per_s = 7.2921159e-5;

    void validate() const {
        if (!(radius_km > 0.0)) throw std::invalid_argument("earth.radius_km must be > 0");
        if (!(grazing_altitude_km >= 0.0 && grazing_altitude_km < radius_km))
            throw std::invalid_argument("earth.grazing_altitude_km must lie in [0, radius_km)");
        if (!(c_m_per_s > 0.0)) throw std::invalid_argument("earth.c_m_per_s must be > 0");
        if (!(gravitational_constant > 0.0 && earth_mass_kg > 0.0))
            throw std::invalid_argument("earth gravitational parameters must be > 0");
    }

    /// Speed of light in km/s.
    double c_km_per_s() const { return c_m_per_s / 1000.0; }

    bool operator==(const EarthModel&) const = default;
};

struct GeodeticPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    void validate() const {
        if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
            throw std::invalid_argument("latitude out of [-90, 90]: " + std::to_string(lat_deg));
        if (!(lon_deg >= -180.0 && lon_deg <= 180.0))
            throw std::invalid_argument("longitude out of [-180, 180]: " + std::to_string(lon_deg));
    }

    bool operator==(const GeodeticPoint&) const = default;
};

/// Earth-centred Cartesian vector, km.
struct Cartesian3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Cartesian3 operator+(const Cartesian3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Cartesian3 operator-(const Cartesian3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Cartesian3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr double dot(const Cartesian3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    bool operator==(const Cartesian3&) const = default;
};

inline double distance(const Cartesian3& a, const Cartesian3& b) { return (a - b).norm(); }

inline double distance_squared(const Cartesian3& a, const Cartesian3& b) {
    const Cartesian3 d = a - b;
    return d.dot(d);
}

/// Great-circle central angle in degrees, haversine form.
inline double central_angle(const GeodeticPoint& a, const GeodeticPoint& b) {
    const double phi1 = deg_to_rad(a.lat_deg);
    const double phi2 = deg_to_rad(b.lat_deg);
    const double dphi = phi2 - phi1;
    const double dlambda = deg_to_rad(b.lon_deg - a.lon_deg);
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    double hav = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    hav = std::clamp(hav, 0.0, 1.0);
    return rad_to_deg(2.0 * std::asin(std::sqrt(hav)));
}

/// Length of the surface arc subtending `theta_deg` at the Earth's centre.
inline double arc_length(double theta_deg, const EarthModel& earth) {
    return 2.0 * kPi * earth.radius_km * (theta_deg / 360.0);
}

/// Straight-line distance between two points at `altitude_km` separated by `theta_deg`.
inline double chord_length(double theta_deg, double altitude_km, const EarthModel& earth) {
    return 2.0 * (earth.radius_km + altitude_km) * std::sin(deg_to_rad(theta_deg / 2.0));
}

/// Ground-station-to-satellite distance at elevation `elevation_deg` for a
/// satellite at `altitude_km`.
inline double slant_range(double elevation_deg, double altitude_km, const EarthModel& earth) {
    if (elevation_deg == 90.0) return altitude_km;
    const double r = earth.radius_km;
    const double eps = deg_to_rad(elevation_deg);
    const double ratio = (r + altitude_km) / r;
    const double c = std::cos(eps);
    return r * (std::sqrt(ratio * ratio - c * c) - std::sin(eps));
}

/// Law-of-cosines offset between the overhead satellite position and the
/// one seen at `alpha_deg` off zenith (alpha = 90 - elevation).
inline double cosine_offset(double altitude_km, double gs_range_km, double alpha_deg) {
    const double h = altitude_km;
    const double r = gs_range_km;
    const double sq = h * h + r * r - 2.0 * h * r * std::cos(deg_to_rad(alpha_deg));
    return std::sqrt(std::max(sq, 0.0));
}

/// Longest satellite-to-satellite link at `altitude_km` whose line of sight
/// clears the grazing shell.
inline double max_lisl_range(double altitude_km, const EarthModel& earth) {
    if (!(altitude_km > earth.grazing_altitude_km))
        throw std::domain_error("max_lisl_range: altitude must exceed the grazing altitude");
    const double orbit = earth.radius_km + altitude_km;
    const double graze = earth.radius_km + earth.grazing_altitude_km;
    return 2.0 * std::sqrt(orbit * orbit - graze * graze);
}

inline Cartesian3 geodetic_to_ecef(const GeodeticPoint& p, const EarthModel& earth, double altitude_km = 0.0) {
    const double lat = deg_to_rad(p.lat_deg);
    const double lon = deg_to_rad(p.lon_deg);
    const double r = earth.radius_km + altitude_km;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

/// Elevation (degrees) of `target` as seen from the surface point `station`.
inline double elevation_angle(const Cartesian3& station, const Cartesian3& target) {
    const Cartesian3 look = target - station;
    const double range = look.norm();
    const double up = station.norm();
    if (range == 0.0 || up == 0.0) return 90.0;
    const double s = std::clamp(look.dot(station) / (range * up), -1.0, 1.0);
    return rad_to_deg(std::asin(s));
}

/// Squared smallest distance from the Earth's centre to the segment [a, b].
inline double segment_min_radius_squared(const Cartesian3& a, const Cartesian3& b) {
    const Cartesian3 d = b - a;
    const double len2 = d.dot(d);
    if (len2 == 0.0) return a.dot(a);
    const double t = std::clamp(-a.dot(d) / len2, 0.0, 1.0);
    const Cartesian3 p = a + d * t;
    return p.dot(p);
}

inline double segment_min_radius(const Cartesian3& a, const Cartesian3& b) {
    return std::sqrt(segment_min_radius_squared(a, b));
}

/// True when the straight line between `a` and `b` stays above the grazing shell.
inline bool clears_grazing_shell(const Cartesian3& a, const Cartesian3& b, const EarthModel& earth) {
    const double shell = earth.radius_km + earth.grazing_altitude_km;
    const double shell_sq = shell * shell;
    const Cartesian3 d = b - a;
    const double len2 = d.dot(d);
    const double proj = -a.dot(d);
    // Closest approach at an endpoint.
    if (proj <= 0.0 || proj >= len2) return std::min(a.dot(a), b.dot(b)) >= shell_sq;
    // Interior closest approach: |a|^2 - proj^2/len2 >= shell^2, scaled by len2.
    return a.dot(a) * len2 - proj * proj >= shell_sq * len2;
}

}  // namespace xover
