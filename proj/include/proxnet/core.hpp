#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

// Shared domain types used across all channels: identities, time binning,
// geodesic arithmetic and the error taxonomy.

namespace proxnet {

using UserId = std::string;
using Timestamp = std::int64_t;  // seconds since Unix epoch, UTC

// ---- errors ---------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class KeyMismatch : public Error {
 public:
  using Error::Error;
};

// ---- time binning ----------------------------------------------------------

struct TimeBin {
  std::int64_t index = 0;
  std::int64_t width_s = 0;
  std::int64_t origin_s = 0;

  std::int64_t start_s() const { return origin_s + index * width_s; }
  std::int64_t end_s() const { return start_s() + width_s; }

  friend bool operator==(const TimeBin&, const TimeBin&) = default;
};

// Floor division so negative (t - origin) still maps to the bin left of it.
std::int64_t bin_index(Timestamp t, std::int64_t width_s, std::int64_t origin_s = 0);

TimeBin make_bin(Timestamp t, std::int64_t width_s, std::int64_t origin_s = 0);

// ---- civil calendar helpers -------------------------------------------------

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d);
void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d);

struct WeekBin {
  int day_of_week = 0;  // Monday = 0 .. Sunday = 6
  int hour = 0;         // 0..23

  friend bool operator==(const WeekBin&, const WeekBin&) = default;
};

// Day-of-week and hour in the local civil time of an IANA zone.
WeekBin weekly_bin(Timestamp t, const std::string& tz_name);

// ---- geodesics ---------------------------------------------------------------

inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool geo_valid(const GeoPoint& p);

// Great-circle distance in meters on a spherical Earth.
double haversine(const GeoPoint& a, const GeoPoint& b);

// ---- canonical undirected edges ----------------------------------------------

// Unordered participant pair stored with endpoints in lexicographic order.
using Edge = std::pair<UserId, UserId>;

Edge make_edge(UserId a, UserId b);

}  // namespace proxnet
