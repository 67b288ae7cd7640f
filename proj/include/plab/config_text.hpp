#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace plab::cfg {

/// Value of a structured-text config entry: number, boolean, quoted string,
/// or bracketed array (possibly nested).
struct Value {
  enum class Kind { number, boolean, string, array } kind = Kind::number;
  double num = 0.0;
  bool boolean = false;
  std::string str;
  std::vector<Value> items;

  double as_number() const;
  bool as_bool() const;
  const std::string& as_string() const;
  const std::vector<Value>& as_array() const;
};

/// Flat document: "key = value" lines, with "[section]" headers prefixing the
/// keys that follow ("section.key"). '#' starts a comment.
class Document {
 public:
  static Document parse(const std::string& text);
  static Document parse_file(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const Value& get(const std::string& key) const;
  double number(const std::string& key) const { return get(key).as_number(); }
  double number_or(const std::string& key, double fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  bool bool_or(const std::string& key, bool fallback) const;
  const std::map<std::string, Value>& entries() const { return entries_; }

  /// Canonical "key = value" dump with sorted keys; whitespace and ordering
  /// of the source do not affect it.
  std::string canonical() const;

  /// FNV-1a over the canonical dump, as fixed-width hex.
  std::string hash() const;

 private:
  std::map<std::string, Value> entries_;
};

}  // namespace plab::cfg
