#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace tdw {

/// Mean sphere radius used for all geodesy, meters.
inline constexpr double kEarthRadiusM = 6371008.8;

inline constexpr double kPi = 3.14159265358979323846;

/// A geographic position in degrees. lat in [-90, 90], lon in [-180, 180].
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline bool valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Great-circle distance in meters (haversine on the mean sphere).
inline double geo_distance(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dphi = deg_to_rad(b.lat - a.lat);
    const double dlam = deg_to_rad(b.lon - a.lon);
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Point reached from `origin` after `distance_m` meters on the initial
/// bearing `bearing_rad` (radians clockwise from north).
inline GeoPoint geo_offset(const GeoPoint& origin, double bearing_rad, double distance_m) {
    const double delta = distance_m / kEarthRadiusM;
    const double phi1 = deg_to_rad(origin.lat);
    const double lam1 = deg_to_rad(origin.lon);
    const double sin_phi2 =
        std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing_rad);
    const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
    const double lam2 = lam1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(phi1),
                                          std::cos(delta) - std::sin(phi1) * sin_phi2);
    double lon = rad_to_deg(lam2);
    if (lon > 180.0) lon -= 360.0;
    if (lon < -180.0) lon += 360.0;
    return GeoPoint{rad_to_deg(phi2), lon};
}

namespace detail {

inline std::array<double, 3> to_unit_vector(const GeoPoint& p) {
    const double phi = deg_to_rad(p.lat);
    const double lam = deg_to_rad(p.lon);
    return {std::cos(phi) * std::cos(lam), std::cos(phi) * std::sin(lam), std::sin(phi)};
}

inline GeoPoint from_unit_vector(const std::array<double, 3>& v) {
    const double hyp = std::sqrt(v[0] * v[0] + v[1] * v[1]);
    return GeoPoint{rad_to_deg(std::atan2(v[2], hyp)), rad_to_deg(std::atan2(v[1], v[0]))};
}

}  // namespace detail

/// Position at fraction `f` in [0, 1] along the great circle from a to b.
inline GeoPoint geo_interpolate(const GeoPoint& a, const GeoPoint& b, double f) {
    const auto va = detail::to_unit_vector(a);
    const auto vb = detail::to_unit_vector(b);
    double dot = va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2];
    dot = std::clamp(dot, -1.0, 1.0);
    const double omega = std::acos(dot);
    if (omega < 1e-12) return a;
    const double s = std::sin(omega);
    const double wa = std::sin((1.0 - f) * omega) / s;
    const double wb = std::sin(f * omega) / s;
    return detail::from_unit_vector(
        {wa * va[0] + wb * vb[0], wa * va[1] + wb * vb[1], wa * va[2] + wb * vb[2]});
}

}  // namespace tdw
