// Independent reference implementations used only by the tests. Each one
// reaches the same quantity as the library by a different route.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

constexpr double kPi = std::numbers::pi;
inline double rad(double deg) { return deg * kPi / 180.0; }
inline double deg(double r) { return r * 180.0 / kPi; }

struct V2 {
    double x, y;
    V2 operator+(V2 o) const { return {x + o.x, y + o.y}; }
    V2 operator-(V2 o) const { return {x - o.x, y - o.y}; }
    V2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

/// Central angle from the dot product of unit vectors (acos form).
inline double central_angle_acos(double lat1, double lon1, double lat2, double lon2) {
    const double a[3] = {std::cos(rad(lat1)) * std::cos(rad(lon1)), std::cos(rad(lat1)) * std::sin(rad(lon1)),
                         std::sin(rad(lat1))};
    const double b[3] = {std::cos(rad(lat2)) * std::cos(rad(lon2)), std::cos(rad(lat2)) * std::sin(rad(lon2)),
                         std::sin(rad(lat2))};
    const double d = std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0);
    return deg(std::acos(d));
}

/// Slant range by solving |A + r u|^2 = (R+h)^2 for the look direction u.
inline double slant_range_quadratic(double elev_deg, double h, double R) {
    // A = (0, R), u = (cos e, sin e): r^2 + 2 R sin(e) r + R^2 - (R+h)^2 = 0.
    const double b = 2.0 * R * std::sin(rad(elev_deg));
    const double c = R * R - (R + h) * (R + h);
    return (-b + std::sqrt(b * b - 4.0 * c)) / 2.0;
}

/// End-to-end satellite path length built from explicit 2-D points in the
/// orbit plane: stations A, B on the surface `theta` apart, overhead points
/// X', Y', displaced satellites X, Y at elevation `elev` from A and B.
/// `kind` is 1..4 with the usual scenario meaning.
inline double owsn_length_2d(int kind, double theta_deg, double h, double elev_deg, double R) {
    const double half = rad(theta_deg) / 2.0;
    const V2 up_a{-std::sin(half), std::cos(half)};
    const V2 up_b{std::sin(half), std::cos(half)};
    const V2 A = up_a * R, B = up_b * R;
    const V2 Xp = up_a * (R + h), Yp = up_b * (R + h);
    const double chord = (Xp - Yp).norm();
    if (kind == 1) return (Xp - A).norm() + chord + (Yp - B).norm();

    const double r = slant_range_quadratic(elev_deg, h, R);
    const double e = rad(elev_deg);
    // Tangent directions at A and B pointing from A towards B.
    const V2 tan_a{std::cos(half), std::sin(half)};
    const V2 tan_b{std::cos(half), -std::sin(half)};
    const auto look = [&](V2 up, V2 tangent, double sign) {
        return (up * std::sin(e) + tangent * (sign * std::cos(e))) * r;
    };
    // X displaced away from B, Y away from A.
    const V2 X = A + look(up_a, tan_a, -1.0);
    const V2 Y = B + look(up_b, tan_b, +1.0);
    const double off_x = (X - Xp).norm();
    const double off_y = (Y - Yp).norm();
    const double ground = (X - A).norm() + (Y - B).norm();
    switch (kind) {
    case 2:
        return ground + chord + off_x + off_y;
    case 3:
        return ground + chord - off_x - off_y;
    default:
        return ground + chord;
    }
}

inline double fibre_length_ratio(int kind, double theta_deg, double h, double i, double elev_deg, double R) {
    const double arc = 2.0 * kPi * R * theta_deg / 360.0;
    return owsn_length_2d(kind, theta_deg, h, elev_deg, R) / (arc * i);
}

/// Root of f(x) = 1: coarse scan for a sign change, then Illinois-style
/// regula falsi inside the bracket.
inline std::optional<double> scan_falsi_root(const std::function<double(double)>& f, double lo, double hi,
                                             double step) {
    double a = lo, fa = f(a) - 1.0;
    for (double b = lo + step; b <= hi + 1e-12; a = b, b += step) {
        double fb = f(b) - 1.0;
        if ((fa > 0.0) == (fb > 0.0)) {
            fa = fb;
            continue;
        }
        int side = 0;
        for (int k = 0; k < 200 && b - a > 1e-12; ++k) {
            const double x = (a * fb - b * fa) / (fb - fa);
            const double fx = f(x) - 1.0;
            if (fx == 0.0) return x;
            if ((fx > 0.0) == (fa > 0.0)) {
                a = x;
                fa = fx;
                if (side == -1) fb /= 2.0;
                side = -1;
            } else {
                b = x;
                fb = fx;
                if (side == 1) fa /= 2.0;
                side = 1;
            }
        }
        return 0.5 * (a + b);
    }
    return std::nullopt;
}

/// Kepler's third law for a circular orbit, seconds.
inline double kepler_period(double h_km, double R_km, double G, double M) {
    const double a = (R_km + h_km) * 1000.0;
    return 2.0 * kPi * std::sqrt(a * a * a / (G * M));
}

/// Undirected weighted graph as an adjacency matrix; +inf means no edge.
struct SmallGraph {
    int n = 0;
    std::vector<std::vector<double>> w;
    std::vector<bool> relay;  ///< false for nodes that may only terminate a route
};

struct BrutePath {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<int> nodes;
};

/// Exhaustive simple-path enumeration; ties broken by lexicographic node order.
inline BrutePath brute_force_shortest(const SmallGraph& g, int src, int dst) {
    BrutePath best;
    std::vector<int> path = {src};
    std::vector<bool> used(g.n, false);
    used[src] = true;
    std::function<void(int, double)> dfs = [&](int u, double cost) {
        if (u == dst) {
            if (cost < best.cost || (cost == best.cost && path < best.nodes)) best = {cost, path};
            return;
        }
        if (u != src && !g.relay[u]) return;
        for (int v = 0; v < g.n; ++v) {
            if (used[v] || !std::isfinite(g.w[u][v])) continue;
            used[v] = true;
            path.push_back(v);
            dfs(v, cost + g.w[u][v]);
            path.pop_back();
            used[v] = false;
        }
    };
    dfs(src, 0.0);
    return best;
}

}  // namespace oracle
