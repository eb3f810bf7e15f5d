#ifndef SGDCERT_KVFILE_HPP
#define SGDCERT_KVFILE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgdcert/types.hpp"

namespace sgdcert {

/// Flat key-value text format used for problem and experiment files:
///
///     # comment
///     [section]
///     key = value
///
/// UTF-8, one pair per line, full-line # comments, duplicate keys rejected.
/// Sections and keys keep insertion order, so serialization is deterministic
/// and parse/serialize round-trips are lossless.
class KvFile {
 public:
  KvFile() = default;

  static KvFile parse(const std::string& text);
  static KvFile load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  /// Missing section or key -> ConfigError naming both.
  const std::string& get(const std::string& section,
                         const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  double get_real(const std::string& section, const std::string& key) const;
  std::int64_t get_int(const std::string& section,
                       const std::string& key) const;
  std::uint64_t get_u64(const std::string& section,
                        const std::string& key) const;
  /// Comma-separated list of reals; rejects empty elements.
  std::vector<double> get_reals(const std::string& section,
                                const std::string& key) const;

  void set(const std::string& section, const std::string& key,
           std::string value);
  void set_real(const std::string& section, const std::string& key,
                double value);
  void set_int(const std::string& section, const std::string& key,
               std::int64_t value);
  void set_u64(const std::string& section, const std::string& key,
               std::uint64_t value);
  void set_reals(const std::string& section, const std::string& key,
                 const std::vector<double>& values);

  std::vector<std::string> section_names() const;
  /// Keys of one section in insertion order.
  std::vector<std::string> keys(const std::string& section) const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };

  const Section* find_section(const std::string& section) const;
  Section& require_section(const std::string& section);

  std::vector<Section> sections_;
};

}  // namespace sgdcert

#endif  // SGDCERT_KVFILE_HPP
