#include "sgdcert/numfmt.hpp"

#include <charconv>
#include <cmath>

namespace sgdcert {

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_int(std::int64_t value) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_u64(std::uint64_t value) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::optional<double> try_parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double out = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return out;
}

std::optional<std::int64_t> try_parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return out;
}

std::optional<std::uint64_t> try_parse_u64(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t out = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return out;
}

}  // namespace sgdcert
