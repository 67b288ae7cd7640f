#include "plab/config_text.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plab::cfg {

double Value::as_number() const {
  if (kind != Kind::number) throw std::runtime_error("config: expected a number");
  return num;
}

bool Value::as_bool() const {
  if (kind != Kind::boolean) throw std::runtime_error("config: expected a boolean");
  return boolean;
}

const std::string& Value::as_string() const {
  if (kind != Kind::string) throw std::runtime_error("config: expected a string");
  return str;
}

const std::vector<Value>& Value::as_array() const {
  if (kind != Kind::array) throw std::runtime_error("config: expected an array");
  return items;
}

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
};

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
  Value v;
  v.kind = Value::Kind::array;
  ++c.pos;  // '['
  c.skip_ws();
  if (!c.done() && c.peek() == ']') {
    ++c.pos;
    return v;
  }
  while (true) {
    v.items.push_back(parse_value(c));
    c.skip_ws();
    if (c.done()) throw std::runtime_error("config: unterminated array");
    if (c.peek() == ',') {
      ++c.pos;
      c.skip_ws();
      continue;
    }
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    throw std::runtime_error("config: expected ',' or ']' in array");
  }
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  if (c.done()) throw std::runtime_error("config: missing value");
  char ch = c.peek();
  if (ch == '[') return parse_array(c);
  if (ch == '"') {
    Value v;
    v.kind = Value::Kind::string;
    ++c.pos;
    while (!c.done() && c.peek() != '"') v.str.push_back(c.s[c.pos++]);
    if (c.done()) throw std::runtime_error("config: unterminated string");
    ++c.pos;
    return v;
  }
  size_t start = c.pos;
  while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#') ++c.pos;
  std::string tok = c.s.substr(start, c.pos - start);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.pop_back();
  if (tok == "true" || tok == "false") {
    Value v;
    v.kind = Value::Kind::boolean;
    v.boolean = tok == "true";
    return v;
  }
  try {
    size_t used = 0;
    double d = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    Value v;
    v.num = d;
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: cannot parse value '" + tok + "'");
  }
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void canonical_value(std::ostream& os, const Value& v) {
  switch (v.kind) {
    case Value::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.num);
      os << buf;
      break;
    }
    case Value::Kind::boolean:
      os << (v.boolean ? "true" : "false");
      break;
    case Value::Kind::string:
      os << '"' << v.str << '"';
      break;
    case Value::Kind::array:
      os << '[';
      for (size_t k = 0; k < v.items.size(); ++k) {
        if (k) os << ", ";
        canonical_value(os, v.items[k]);
      }
      os << ']';
      break;
  }
}

}  // namespace

Document Document::parse(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = std::string::npos;
    bool in_str = false;
    for (size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') in_str = !in_str;
      if (line[k] == '#' && !in_str) {
        hash = k;
        break;
      }
    }
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) + " is not 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
    if (!section.empty()) key = section + "." + key;
    std::string rhs = trim(line.substr(eq + 1));
    Cursor c{rhs, 0};
    Value v = parse_value(c);
    c.skip_ws();
    if (!c.done()) throw std::runtime_error("config: trailing characters after value at line " + std::to_string(lineno));
    doc.entries_[key] = std::move(v);
  }
  return doc;
}

Document Document::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Value& Document::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::runtime_error("config: missing key '" + key + "'");
  return it->second;
}

double Document::number_or(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.as_number();
}

std::string Document::string_or(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.as_string();
}

bool Document::bool_or(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.as_bool();
}

std::string Document::canonical() const {
  std::ostringstream os;
  for (const auto& [key, value] : entries_) {
    os << key << " = ";
    canonical_value(os, value);
    os << '\n';
  }
  return os.str();
}

std::string Document::hash() const {
  std::string text = canonical();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace plab::cfg
