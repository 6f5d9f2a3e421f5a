#include "snapcorpus/common/timestamp.hpp"

#include <chrono>
#include <cstdio>

namespace snapcorpus {

namespace {

std::optional<int> digits(std::string_view s, std::size_t pos, std::size_t len)
{
    if (pos + len > s.size()) {
        return std::nullopt;
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return std::nullopt;
        }
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

std::optional<EpochSeconds> compose(int y, int mo, int d, int h, int mi, int sec)
{
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) {
        return std::nullopt;
    }
    auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<EpochSeconds>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

struct Fields {
    int y, mo, d, h, mi, s;
};

Fields decompose(EpochSeconds t)
{
    using namespace std::chrono;
    auto days = t >= 0 ? t / 86400 : (t - 86399) / 86400;
    auto rem = t - days * 86400;
    year_month_day ymd{sys_days{std::chrono::days{days}}};
    return {static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
            static_cast<int>(static_cast<unsigned>(ymd.day())), static_cast<int>(rem / 3600),
            static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60)};
}

}  // namespace

std::optional<EpochSeconds> parse_log_time(std::string_view s)
{
    if (s.size() != 19 || s[4] != '-' || s[7] != '-' || s[10] != ' ' || s[13] != ':' ||
        s[16] != ':') {
        return std::nullopt;
    }
    auto y = digits(s, 0, 4), mo = digits(s, 5, 2), d = digits(s, 8, 2);
    auto h = digits(s, 11, 2), mi = digits(s, 14, 2), sec = digits(s, 17, 2);
    if (!y || !mo || !d || !h || !mi || !sec) {
        return std::nullopt;
    }
    return compose(*y, *mo, *d, *h, *mi, *sec);
}

std::string format_log_time(EpochSeconds t)
{
    auto f = decompose(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", f.y, f.mo, f.d, f.h, f.mi, f.s);
    return buf;
}

std::optional<EpochSeconds> parse_ts14(std::string_view s)
{
    if (s.size() != 14) {
        return std::nullopt;
    }
    auto y = digits(s, 0, 4), mo = digits(s, 4, 2), d = digits(s, 6, 2);
    auto h = digits(s, 8, 2), mi = digits(s, 10, 2), sec = digits(s, 12, 2);
    if (!y || !mo || !d || !h || !mi || !sec) {
        return std::nullopt;
    }
    return compose(*y, *mo, *d, *h, *mi, *sec);
}

std::string format_ts14(EpochSeconds t)
{
    auto f = decompose(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d%02d%02d%02d%02d%02d", f.y, f.mo, f.d, f.h, f.mi, f.s);
    return buf;
}

std::optional<EpochSeconds> parse_date(std::string_view s)
{
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        return std::nullopt;
    }
    auto y = digits(s, 0, 4), mo = digits(s, 5, 2), d = digits(s, 8, 2);
    if (!y || !mo || !d) {
        return std::nullopt;
    }
    return compose(*y, *mo, *d, 0, 0, 0);
}

}  // namespace snapcorpus
