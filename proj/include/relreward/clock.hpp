#ifndef RELREWARD_CLOCK_HPP_
#define RELREWARD_CLOCK_HPP_

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>

namespace relreward {

// UTC wall-clock time as "2024-05-01T12:00:00.123Z".
inline std::string utc_timestamp(std::chrono::system_clock::time_point tp = std::chrono::system_clock::now()) {
  auto secs = std::chrono::time_point_cast<std::chrono::seconds>(tp);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(tp - secs).count();
  std::time_t t = std::chrono::system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

// Filesystem-safe UTC stamp, "20240501T120000Z".
inline std::string compact_utc_stamp(std::chrono::system_clock::time_point tp = std::chrono::system_clock::now()) {
  std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace relreward

#endif  // RELREWARD_CLOCK_HPP_
