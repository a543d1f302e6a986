#include "proxnet/timezone.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

#include "proxnet/core.hpp"

namespace proxnet {

namespace {

constexpr const char* kZoneDir = "/usr/share/zoneinfo/";

struct Header {
  std::uint32_t isutcnt, isstdcnt, leapcnt, timecnt, typecnt, charcnt;
};

std::uint32_t read_u32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

std::int64_t read_i64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return static_cast<std::int64_t>(v);
}

Header read_header(const unsigned char* p) {
  Header h;
  h.isutcnt = read_u32(p + 20);
  h.isstdcnt = read_u32(p + 24);
  h.leapcnt = read_u32(p + 28);
  h.timecnt = read_u32(p + 32);
  h.typecnt = read_u32(p + 36);
  h.charcnt = read_u32(p + 40);
  return h;
}

std::size_t data_size(const Header& h, int time_width) {
  return h.timecnt * time_width + h.timecnt + h.typecnt * 6 + h.charcnt +
         h.leapcnt * (time_width + 4) + h.isstdcnt + h.isutcnt;
}

// Sunday = 0 indexing used by POSIX TZ rules.
int dow_sun0(std::int64_t epoch_day) { return static_cast<int>(((epoch_day + 4) % 7 + 7) % 7); }

int days_in_month(std::int64_t y, int m) {
  static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) return 29;
  return d[m - 1];
}

}  // namespace

const TimeZone& TimeZone::get(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, TimeZone> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load(name)).first;
  return it->second;
}

TimeZone TimeZone::load(const std::string& name) {
  if (name.empty() || name[0] == '/' || name.find("..") != std::string::npos)
    throw InvalidParameter("invalid timezone name: " + name);
  std::ifstream in(kZoneDir + name, std::ios::binary);
  if (!in) throw InvalidParameter("unknown timezone: " + name);
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < 44 || std::memcmp(p, "TZif", 4) != 0)
    throw InvalidParameter("not a TZif file: " + name);
  const char version = raw[4];

  TimeZone tz;
  tz.name_ = name;

  Header h1 = read_header(p);
  std::size_t off = 44;
  int time_width = 4;
  Header h = h1;
  if (version >= '2') {
    // skip the 32-bit block, use the 64-bit one
    off += data_size(h1, 4);
    if (raw.size() < off + 44) throw InvalidParameter("truncated TZif: " + name);
    h = read_header(p + off);
    off += 44;
    time_width = 8;
  }
  if (raw.size() < off + data_size(h, time_width))
    throw InvalidParameter("truncated TZif: " + name);

  std::vector<std::int64_t> times(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) {
    if (time_width == 8)
      times[i] = read_i64(p + off + i * 8);
    else
      times[i] = static_cast<std::int32_t>(read_u32(p + off + i * 4));
  }
  off += h.timecnt * time_width;
  const unsigned char* type_idx = p + off;
  off += h.timecnt;
  struct TtInfo {
    std::int64_t utoff;
    bool dst;
  };
  std::vector<TtInfo> infos(h.typecnt);
  for (std::uint32_t i = 0; i < h.typecnt; ++i) {
    const unsigned char* q = p + off + i * 6;
    infos[i] = {static_cast<std::int32_t>(read_u32(q)), q[4] != 0};
  }
  off += h.typecnt * 6 + h.charcnt + h.leapcnt * (time_width + 4) + h.isstdcnt + h.isutcnt;

  tz.transitions_ = times;
  tz.offsets_.resize(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) {
    unsigned idx = type_idx[i];
    if (idx >= infos.size()) throw InvalidParameter("corrupt TZif: " + name);
    tz.offsets_[i] = infos[idx].utoff;
  }
  tz.initial_offset_ = 0;
  for (const auto& ti : infos)
    if (!ti.dst) {
      tz.initial_offset_ = ti.utoff;
      break;
    }
  if (infos.empty()) throw InvalidParameter("TZif with no time types: " + name);

  if (version >= '2') {
    // footer: '\n' TZ string '\n'
    std::size_t nl1 = raw.find('\n', off);
    if (nl1 != std::string::npos) {
      std::size_t nl2 = raw.find('\n', nl1 + 1);
      if (nl2 != std::string::npos && nl2 > nl1 + 1)
        tz.footer_ = parse_posix(raw.substr(nl1 + 1, nl2 - nl1 - 1));
    }
  }
  return tz;
}

TimeZone::PosixRule TimeZone::parse_posix(const std::string& s) {
  PosixRule r;
  std::size_t i = 0;
  auto skip_name = [&]() {
    if (i < s.size() && s[i] == '<') {
      while (i < s.size() && s[i] != '>') ++i;
      if (i < s.size()) ++i;
    } else {
      while (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])))) ++i;
    }
  };
  auto parse_offset = [&](bool* ok) -> std::int64_t {
    std::int64_t sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -1;
      ++i;
    }
    std::int64_t parts[3] = {0, 0, 0};
    int np = 0;
    while (np < 3 && i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::int64_t v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        v = v * 10 + (s[i++] - '0');
      parts[np++] = v;
      if (i < s.size() && s[i] == ':')
        ++i;
      else
        break;
    }
    *ok = np > 0;
    return sign * (parts[0] * 3600 + parts[1] * 60 + parts[2]);
  };
  auto parse_rule = [&](int& month, int& week, int& dow, std::int64_t& time) -> bool {
    if (i >= s.size()) return false;
    if (s[i] == 'M') {
      ++i;
      int vals[3] = {0, 0, 0};
      for (int k = 0; k < 3; ++k) {
        int v = 0;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
          v = v * 10 + (s[i++] - '0');
        vals[k] = v;
        if (k < 2) {
          if (i >= s.size() || s[i] != '.') return false;
          ++i;
        }
      }
      month = vals[0];
      week = vals[1];
      dow = vals[2];
    } else {
      // Jn and n forms: encode as month 0 with the day stored in `week`.
      bool julian = s[i] == 'J';
      if (julian) ++i;
      int v = 0;
      if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        v = v * 10 + (s[i++] - '0');
      month = julian ? -1 : 0;
      week = v;
      dow = 0;
    }
    time = 7200;
    if (i < s.size() && s[i] == '/') {
      ++i;
      bool ok = false;
      time = parse_offset(&ok);
      if (!ok) return false;
    }
    return true;
  };

  skip_name();
  bool ok = false;
  std::int64_t std_west = parse_offset(&ok);
  if (!ok) return r;  // e.g. bare "UTC" footer is invalid per POSIX; table covers it
  r.std_offset = -std_west;
  r.valid = true;
  if (i >= s.size()) return r;

  skip_name();
  r.has_dst = true;
  r.dst_offset = r.std_offset + 3600;
  if (i < s.size() && s[i] != ',') {
    bool ok2 = false;
    std::size_t save = i;
    std::int64_t dst_west = parse_offset(&ok2);
    if (ok2)
      r.dst_offset = -dst_west;
    else
      i = save;
  }
  if (i < s.size() && s[i] == ',') {
    ++i;
    if (!parse_rule(r.start_month, r.start_week, r.start_dow, r.start_time)) {
      r.has_dst = false;
      return r;
    }
    if (i >= s.size() || s[i] != ',') {
      r.has_dst = false;
      return r;
    }
    ++i;
    if (!parse_rule(r.end_month, r.end_week, r.end_dow, r.end_time)) {
      r.has_dst = false;
      return r;
    }
  } else {
    // no explicit rule; fall back to the common US convention
    r.start_month = 3;
    r.start_week = 2;
    r.start_dow = 0;
    r.end_month = 11;
    r.end_week = 1;
    r.end_dow = 0;
  }
  return r;
}

namespace {

// Epoch day of a POSIX transition rule in year y.
std::int64_t rule_day(std::int64_t y, int month, int week, int dow) {
  if (month == -1) {
    // Jn: 1-based day ignoring Feb 29.
    int n = week;
    int m = 1;
    while (n > (m == 2 ? 28 : days_in_month(2001, m))) {
      n -= (m == 2 ? 28 : days_in_month(2001, m));
      ++m;
    }
    return days_from_civil(y, m, n);
  }
  if (month == 0) {
    // n: zero-based day counting Feb 29.
    return days_from_civil(y, 1, 1) + week;
  }
  std::int64_t first = days_from_civil(y, month, 1);
  int fd = dow_sun0(first);
  int day = 1 + ((dow - fd) % 7 + 7) % 7 + (week - 1) * 7;
  while (day > days_in_month(y, month)) day -= 7;
  return days_from_civil(y, month, day);
}

}  // namespace

std::int64_t TimeZone::footer_offset_at(std::int64_t t) const {
  const PosixRule& r = footer_;
  if (!r.has_dst) return r.std_offset;
  std::int64_t y;
  unsigned m, d;
  std::int64_t local_guess = t + r.std_offset;
  std::int64_t day = local_guess / 86400;
  if (local_guess % 86400 < 0) --day;
  civil_from_days(day, y, m, d);

  auto bounds = [&](std::int64_t year, std::int64_t& start_utc, std::int64_t& end_utc) {
    start_utc = rule_day(year, r.start_month, r.start_week, r.start_dow) * 86400 + r.start_time -
                r.std_offset;
    end_utc =
        rule_day(year, r.end_month, r.end_week, r.end_dow) * 86400 + r.end_time - r.dst_offset;
  };
  std::int64_t start_utc, end_utc;
  bounds(y, start_utc, end_utc);
  bool dst;
  if (start_utc <= end_utc) {
    dst = t >= start_utc && t < end_utc;
  } else {
    // southern hemisphere: DST spans the year boundary
    dst = t >= start_utc || t < end_utc;
  }
  return dst ? r.dst_offset : r.std_offset;
}

std::int64_t TimeZone::utc_offset_at(std::int64_t t) const {
  if (transitions_.empty()) {
    if (footer_.valid) return footer_offset_at(t);
    return initial_offset_;
  }
  if (t < transitions_.front()) return initial_offset_;
  if (t >= transitions_.back() && footer_.valid) {
    // last stored interval still applies exactly at the final transition;
    // beyond it the footer rule takes over
    if (t == transitions_.back()) return offsets_.back();
    return footer_offset_at(t);
  }
  auto it = std::upper_bound(transitions_.begin(), transitions_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - transitions_.begin()) - 1;
  return offsets_[idx];
}

}  // namespace proxnet
