#include "itd/timestamp.hpp"

namespace itd {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

struct Civil {
  int year;
  int month;
  int day;
};

// Howard Hinnant's civil_from_days
Civil civil_from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {static_cast<int>(y + (m <= 2)), static_cast<int>(m),
          static_cast<int>(d)};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

int digit(char c) { return (c >= '0' && c <= '9') ? c - '0' : -1; }

bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int &out) {
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int d = digit(s[pos + i]);
    if (d < 0)
      return false;
    v = v * 10 + d;
  }
  out = v;
  return true;
}

void put2(char *out, int v) {
  out[0] = static_cast<char>('0' + v / 10);
  out[1] = static_cast<char>('0' + v % 10);
}

} // namespace

std::int64_t days_from_civil(int year, int month, int day) noexcept {
  const std::int64_t y = static_cast<std::int64_t>(year) - (month <= 2);
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned mp = static_cast<unsigned>(month > 2 ? month - 3 : month + 9);
  const unsigned doy = (153 * mp + 2) / 5 + static_cast<unsigned>(day) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int days_in_month(int year, int month) noexcept {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

Timestamp Timestamp::from_civil(int year, int month, int day, int hour,
                                int minute, int second) {
  return Timestamp(days_from_civil(year, month, day) * kSecondsPerDay +
                   hour * 3600 + minute * 60 + second);
}

std::optional<Timestamp> Timestamp::parse(std::string_view s) {
  if (s.size() != 19 || s[2] != '/' || s[5] != '/' || s[10] != ' ' ||
      s[13] != ':' || s[16] != ':')
    return std::nullopt;
  int mo, d, y, h, mi, se;
  if (!read_digits(s, 0, 2, mo) || !read_digits(s, 3, 2, d) ||
      !read_digits(s, 6, 4, y) || !read_digits(s, 11, 2, h) ||
      !read_digits(s, 14, 2, mi) || !read_digits(s, 17, 2, se))
    return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 ||
      mi > 59 || se > 59)
    return std::nullopt;
  return from_civil(y, mo, d, h, mi, se);
}

void Timestamp::format_to(char *out) const {
  const std::int64_t days = floor_div(seconds_, kSecondsPerDay);
  const auto secs = static_cast<int>(seconds_ - days * kSecondsPerDay);
  const Civil c = civil_from_days(days);
  put2(out, c.month);
  out[2] = '/';
  put2(out + 3, c.day);
  out[5] = '/';
  put2(out + 6, c.year / 100);
  put2(out + 8, c.year % 100);
  out[10] = ' ';
  put2(out + 11, secs / 3600);
  out[13] = ':';
  put2(out + 14, (secs / 60) % 60);
  out[16] = ':';
  put2(out + 17, secs % 60);
}

std::string Timestamp::format() const {
  std::string s(19, '\0');
  format_to(s.data());
  return s;
}

int Timestamp::year() const {
  return civil_from_days(floor_div(seconds_, kSecondsPerDay)).year;
}
int Timestamp::month() const {
  return civil_from_days(floor_div(seconds_, kSecondsPerDay)).month;
}
int Timestamp::day() const {
  return civil_from_days(floor_div(seconds_, kSecondsPerDay)).day;
}
int Timestamp::hour() const {
  return static_cast<int>((seconds_ - floor_div(seconds_, kSecondsPerDay) *
                                          kSecondsPerDay) / 3600);
}
int Timestamp::minute() const {
  return static_cast<int>((seconds_ - floor_div(seconds_, 3600) * 3600) / 60);
}
int Timestamp::second() const {
  return static_cast<int>(seconds_ - floor_div(seconds_, 60) * 60);
}

Weekday Timestamp::day_of_week() const {
  // 1970-01-01 was a Thursday
  std::int64_t days = floor_div(seconds_, kSecondsPerDay);
  std::int64_t w = (days + 4) % 7;
  if (w < 0)
    w += 7;
  return static_cast<Weekday>(w);
}

int Timestamp::month_index() const {
  const Civil c = civil_from_days(floor_div(seconds_, kSecondsPerDay));
  return (c.year - kMonthIndexOriginYear) * 12 + c.month;
}

Timestamp month_start(int month_index) {
  int zero_based = month_index - 1;
  int year = kMonthIndexOriginYear + static_cast<int>(floor_div(zero_based, 12));
  int month = static_cast<int>(zero_based - floor_div(zero_based, 12) * 12) + 1;
  return Timestamp::from_civil(year, month, 1);
}

} // namespace itd
