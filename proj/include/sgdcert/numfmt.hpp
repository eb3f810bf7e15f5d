#ifndef SGDCERT_NUMFMT_HPP
#define SGDCERT_NUMFMT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sgdcert {

/// Shortest decimal form that parses back to exactly the same double.
/// Infinities serialize as "inf" / "-inf".
std::string format_real(double value);

std::string format_int(std::int64_t value);
std::string format_u64(std::uint64_t value);

/// Strict full-string parses; no leading/trailing junk, empty -> nullopt.
std::optional<double> try_parse_real(std::string_view text);
std::optional<std::int64_t> try_parse_int(std::string_view text);
std::optional<std::uint64_t> try_parse_u64(std::string_view text);

}  // namespace sgdcert

#endif  // SGDCERT_NUMFMT_HPP
