#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Minimal IANA tz database reader. The toolchain's std::chrono has no tzdb,
// so we read the binary TZif files under /usr/share/zoneinfo directly and
// evaluate the POSIX TZ footer rule for instants beyond the last stored
// transition.

namespace proxnet {

class TimeZone {
 public:
  // Cached lookup by IANA name ("Europe/Copenhagen"). Throws InvalidParameter
  // if the zone is unknown or the file cannot be parsed.
  static const TimeZone& get(const std::string& name);

  // Offset from UTC in seconds (east positive) in effect at UTC instant t.
  std::int64_t utc_offset_at(std::int64_t t) const;

  const std::string& name() const { return name_; }

 private:
  struct PosixRule {
    bool valid = false;
    std::int64_t std_offset = 0;  // seconds east
    bool has_dst = false;
    std::int64_t dst_offset = 0;
    // transition day rules, 'M' form: month 1-12, week 1-5 (5 = last), weekday 0=Sunday
    int start_month = 0, start_week = 0, start_dow = 0;
    std::int64_t start_time = 7200;
    int end_month = 0, end_week = 0, end_dow = 0;
    std::int64_t end_time = 7200;
  };

  static TimeZone load(const std::string& name);
  static PosixRule parse_posix(const std::string& tz);
  std::int64_t footer_offset_at(std::int64_t t) const;

  std::string name_;
  std::vector<std::int64_t> transitions_;  // UTC instants, ascending
  std::vector<std::int64_t> offsets_;      // offset in effect from transitions_[i]
  std::int64_t initial_offset_ = 0;        // before the first transition
  PosixRule footer_;
};

}  // namespace proxnet
