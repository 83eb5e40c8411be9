#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace itd {

/// Month indices count calendar months from January of this year (= 1).
inline constexpr int kMonthIndexOriginYear = 2010;

enum class Weekday { sunday, monday, tuesday, wednesday, thursday, friday, saturday };

/// Wall-clock instant in the single corpus timezone, stored as seconds since
/// 1970-01-01 00:00:00. Text form is exactly `MM/DD/YYYY HH:MM:SS`.
class Timestamp {
public:
  constexpr Timestamp() = default;

  static Timestamp from_civil(int year, int month, int day, int hour = 0,
                              int minute = 0, int second = 0);
  static constexpr Timestamp from_seconds(std::int64_t s) { return Timestamp(s); }
  /// Strict parse; nullopt on any deviation from `MM/DD/YYYY HH:MM:SS`.
  static std::optional<Timestamp> parse(std::string_view text);

  std::string format() const;
  /// Writes the 19-character text form into out (no terminator).
  void format_to(char *out) const;

  constexpr std::int64_t seconds() const { return seconds_; }
  int year() const;
  /// Calendar month, 1-12.
  int month() const;
  int day() const;
  int hour() const;
  int minute() const;
  int second() const;
  Weekday day_of_week() const;
  /// Months since the origin: January 2010 -> 1, February 2010 -> 2, ...
  int month_index() const;

  Timestamp plus_seconds(std::int64_t s) const { return Timestamp(seconds_ + s); }

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

private:
  constexpr explicit Timestamp(std::int64_t s) : seconds_(s) {}
  std::int64_t seconds_ = 0;
};

/// Days from 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day) noexcept;
int days_in_month(int year, int month) noexcept;
/// First day of the given month index as a timestamp at 00:00:00.
Timestamp month_start(int month_index);

} // namespace itd
