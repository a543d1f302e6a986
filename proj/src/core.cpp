#include "proxnet/core.hpp"

#include "proxnet/timezone.hpp"

namespace proxnet {

std::int64_t bin_index(Timestamp t, std::int64_t width_s, std::int64_t origin_s) {
  if (width_s <= 0) throw InvalidParameter("bin width must be positive");
  std::int64_t d = t - origin_s;
  std::int64_t q = d / width_s;
  if (d % width_s != 0 && d < 0) --q;
  return q;
}

TimeBin make_bin(Timestamp t, std::int64_t width_s, std::int64_t origin_s) {
  return TimeBin{bin_index(t, width_s, origin_s), width_s, origin_s};
}

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

WeekBin weekly_bin(Timestamp t, const std::string& tz_name) {
  const TimeZone& zone = TimeZone::get(tz_name);
  std::int64_t local = t + zone.utc_offset_at(t);
  std::int64_t day = local / 86400;
  std::int64_t rem = local % 86400;
  if (rem < 0) {
    rem += 86400;
    --day;
  }
  // 1970-01-01 was a Thursday; Monday = 0 puts it at index 3.
  int dow = static_cast<int>(((day + 3) % 7 + 7) % 7);
  return WeekBin{dow, static_cast<int>(rem / 3600)};
}

bool geo_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b) {
  constexpr double deg = 3.14159265358979323846 / 180.0;
  const double lat1 = a.lat * deg;
  const double lat2 = b.lat * deg;
  const double dlat = (b.lat - a.lat) * deg;
  const double dlon = (b.lon - a.lon) * deg;
  const double s1 = std::sin(dlat / 2);
  const double s2 = std::sin(dlon / 2);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

Edge make_edge(UserId a, UserId b) {
  if (a == b) throw InvalidParameter("self-loop edge: " + a);
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace proxnet
