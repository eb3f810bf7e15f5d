#include "sgdcert/kvfile.hpp"

#include <fstream>
#include <sstream>

#include "sgdcert/numfmt.hpp"

namespace sgdcert {

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& detail) {
  throw ConfigError("line " + std::to_string(line_no) + ": " + detail);
}

}  // namespace

KvFile KvFile::parse(const std::string& text) {
  KvFile out;
  Section* current = nullptr;
  std::istringstream stream(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        parse_fail(line_no, "malformed section header");
      }
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) parse_fail(line_no, "empty section name");
      if (out.find_section(name) != nullptr) {
        parse_fail(line_no, "duplicate section [" + name + "]");
      }
      out.sections_.push_back(Section{name, {}});
      current = &out.sections_.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      parse_fail(line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) parse_fail(line_no, "empty key");
    if (current == nullptr) {
      parse_fail(line_no, "key '" + key + "' outside any section");
    }
    for (const auto& [k, v] : current->entries) {
      if (k == key) {
        parse_fail(line_no,
                   "duplicate key '" + key + "' in [" + current->name + "]");
      }
    }
    current->entries.emplace_back(key, value);
  }
  return out;
}

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  try {
    return parse(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string KvFile::serialize() const {
  std::string out;
  bool first = true;
  for (const auto& section : sections_) {
    if (!first) out += "\n";
    first = false;
    out += "[" + section.name + "]\n";
    for (const auto& [key, value] : section.entries) {
      out += key + " = " + value + "\n";
    }
  }
  return out;
}

void KvFile::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize();
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

const KvFile::Section* KvFile::find_section(const std::string& section) const {
  for (const auto& s : sections_) {
    if (s.name == section) return &s;
  }
  return nullptr;
}

KvFile::Section& KvFile::require_section(const std::string& section) {
  for (auto& s : sections_) {
    if (s.name == section) return s;
  }
  sections_.push_back(Section{section, {}});
  return sections_.back();
}

bool KvFile::has_section(const std::string& section) const {
  return find_section(section) != nullptr;
}

bool KvFile::has(const std::string& section, const std::string& key) const {
  const Section* s = find_section(section);
  if (s == nullptr) return false;
  for (const auto& [k, v] : s->entries) {
    if (k == key) return true;
  }
  return false;
}

const std::string& KvFile::get(const std::string& section,
                               const std::string& key) const {
  const Section* s = find_section(section);
  if (s == nullptr) throw ConfigError("missing section [" + section + "]");
  for (const auto& [k, v] : s->entries) {
    if (k == key) return v;
  }
  throw ConfigError("missing key '" + key + "' in [" + section + "]");
}

std::string KvFile::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double KvFile::get_real(const std::string& section,
                        const std::string& key) const {
  const std::string& raw = get(section, key);
  const auto parsed = try_parse_real(raw);
  if (!parsed) {
    throw ConfigError("key '" + key + "' in [" + section +
                      "]: not a number: '" + raw + "'");
  }
  return *parsed;
}

std::int64_t KvFile::get_int(const std::string& section,
                             const std::string& key) const {
  const std::string& raw = get(section, key);
  const auto parsed = try_parse_int(raw);
  if (!parsed) {
    throw ConfigError("key '" + key + "' in [" + section +
                      "]: not an integer: '" + raw + "'");
  }
  return *parsed;
}

std::uint64_t KvFile::get_u64(const std::string& section,
                              const std::string& key) const {
  const std::string& raw = get(section, key);
  const auto parsed = try_parse_u64(raw);
  if (!parsed) {
    throw ConfigError("key '" + key + "' in [" + section +
                      "]: not an unsigned integer: '" + raw + "'");
  }
  return *parsed;
}

std::vector<double> KvFile::get_reals(const std::string& section,
                                      const std::string& key) const {
  const std::string& raw = get(section, key);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const auto comma = raw.find(',', start);
    const auto piece =
        trim(std::string_view(raw).substr(start, comma - start));
    const auto parsed = try_parse_real(piece);
    if (!parsed) {
      throw ConfigError("key '" + key + "' in [" + section +
                        "]: not a number list: '" + raw + "'");
    }
    out.push_back(*parsed);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void KvFile::set(const std::string& section, const std::string& key,
                 std::string value) {
  Section& s = require_section(section);
  for (auto& [k, v] : s.entries) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  s.entries.emplace_back(key, std::move(value));
}

void KvFile::set_real(const std::string& section, const std::string& key,
                      double value) {
  set(section, key, format_real(value));
}

void KvFile::set_int(const std::string& section, const std::string& key,
                     std::int64_t value) {
  set(section, key, format_int(value));
}

void KvFile::set_u64(const std::string& section, const std::string& key,
                     std::uint64_t value) {
  set(section, key, format_u64(value));
}

void KvFile::set_reals(const std::string& section, const std::string& key,
                       const std::vector<double>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) joined += ",";
    joined += format_real(values[i]);
  }
  set(section, key, std::move(joined));
}

std::vector<std::string> KvFile::section_names() const {
  std::vector<std::string> out;
  out.reserve(sections_.size());
  for (const auto& s : sections_) out.push_back(s.name);
  return out;
}

std::vector<std::string> KvFile::keys(const std::string& section) const {
  const Section* s = find_section(section);
  if (s == nullptr) throw ConfigError("missing section [" + section + "]");
  std::vector<std::string> out;
  out.reserve(s->entries.size());
  for (const auto& [k, v] : s->entries) out.push_back(k);
  return out;
}

}  // namespace sgdcert
