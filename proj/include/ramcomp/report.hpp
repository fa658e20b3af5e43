#pragma once

// key=value text blocks used for CLI output and golden files.

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ramcomp {

/// Twelve significant digits, always with a decimal point or exponent so a
/// real never reads as an integer ("6.0", not "6").
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

class KeyValueBlock {
 public:
  KeyValueBlock& add(std::string key, double value) { return add_raw(std::move(key), format_real(value)); }
  KeyValueBlock& add(std::string key, bool value) { return add_raw(std::move(key), value ? "true" : "false"); }
  KeyValueBlock& add(std::string key, int value) { return add_raw(std::move(key), std::to_string(value)); }
  KeyValueBlock& add(std::string key, long value) { return add_raw(std::move(key), std::to_string(value)); }
  KeyValueBlock& add(std::string key, long long value) { return add_raw(std::move(key), std::to_string(value)); }
  KeyValueBlock& add(std::string key, unsigned long value) { return add_raw(std::move(key), std::to_string(value)); }
  KeyValueBlock& add(std::string key, const char* value) { return add_raw(std::move(key), value); }
  KeyValueBlock& add(std::string key, const std::string& value) { return add_raw(std::move(key), value); }

  KeyValueBlock& add_raw(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Value for `key`, or empty string when absent.
  std::string get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    return {};
  }

  friend std::ostream& operator<<(std::ostream& out, const KeyValueBlock& block) {
    for (const auto& [k, v] : block.entries_) out << k << '=' << v << '\n';
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ramcomp
