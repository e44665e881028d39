#include "charsub/spec_parser.hpp"

#include <cctype>
#include <sstream>

namespace charsub {

ParseError::ParseError(int line, int column, const std::string& what)
    : InvalidArgument(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                               : what),
      line_(line),
      column_(column) {}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

SpecFile SpecFile::parse(const std::string& text) {
  SpecFile out;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const std::size_t first = line.find_first_not_of(" \t");
    if (line[first] == '[') {
      const std::size_t close = line.find(']', first);
      if (close == std::string::npos) throw ParseError(line_no, static_cast<int>(first) + 1, "unterminated section header");
      if (!trim(line.substr(close + 1)).empty()) {
        throw ParseError(line_no, static_cast<int>(close) + 2, "unexpected text after section header");
      }
      section = trim(line.substr(first + 1, close - first - 1));
      if (section.empty()) throw ParseError(line_no, static_cast<int>(first) + 1, "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, static_cast<int>(first) + 1, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, static_cast<int>(first) + 1, "missing key before '='");
    for (char c : key) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
        throw ParseError(line_no, static_cast<int>(first) + 1, "invalid key '" + key + "'");
      }
    }
    std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
    const std::string value = vstart == std::string::npos ? "" : trim(line.substr(vstart));
    if (value.empty()) throw ParseError(line_no, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
    auto& sec = out.sections_[section];
    if (sec.count(key)) throw ParseError(line_no, static_cast<int>(first) + 1, "duplicate key '" + key + "'");
    sec[key] = SpecEntry{value, line_no, static_cast<int>(vstart) + 1};
  }
  return out;
}

const SpecEntry* SpecFile::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void SpecFile::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = SpecEntry{std::move(value), 0, 0};
}

void SpecFile::append(const std::string& section, const std::string& key, const std::string& value) {
  auto& sec = sections_[section];
  auto it = sec.find(key);
  if (it == sec.end()) {
    sec[key] = SpecEntry{value, 0, 0};
  } else {
    it->second.value += ", " + value;
  }
}

void fail_at(const SpecEntry& e, const std::string& what) { throw ParseError(e.line, e.column, what); }

std::vector<std::string> split_top_level(const std::string& text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth < 0) throw InvalidArgument("unbalanced brackets in '" + text + "'");
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw InvalidArgument("unbalanced brackets in '" + text + "'");
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::string strip_brackets(const std::string& s0) {
  std::string s = trim(s0);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') return trim(s.substr(1, s.size() - 2));
  return s;
}

Int parse_integer(const std::string& s0) {
  std::string s = trim(s0);
  if (s.empty()) throw InvalidArgument("expected an integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw InvalidArgument("expected an integer, got '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw InvalidArgument("expected an integer, got '" + s + "'");
  }
  return Int(s[0] == '+' ? s.substr(1) : s, 10);
}

Rat parse_rational(const std::string& s0) {
  std::string s = trim(s0);
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_integer(s));
  Int den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  return make_rat(parse_integer(s.substr(0, slash)), den);
}

std::uint64_t parse_count(const std::string& s) {
  Int v = parse_integer(s);
  if (v < 0 || !v.fits_ulong_p()) throw InvalidArgument("expected a nonnegative count, got '" + trim(s) + "'");
  return v.get_ui();
}

bool parse_bool(const std::string& s0) {
  std::string s = trim(s0);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw InvalidArgument("expected true or false, got '" + s + "'");
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  std::string body = strip_brackets(s);
  if (body.empty()) return out;
  for (const auto& part : split_top_level(body)) out.push_back(parse_integer(part));
  return out;
}

std::vector<std::uint64_t> parse_count_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::string body = strip_brackets(s);
  if (body.empty()) return out;
  for (const auto& part : split_top_level(body)) out.push_back(parse_count(part));
  return out;
}

Coords parse_element(const std::string& s0, const FinAbGroup& g) {
  std::string s = trim(s0);
  Coords c;
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw InvalidArgument("unterminated element '" + s + "'");
    std::string body = trim(s.substr(1, s.size() - 2));
    if (!body.empty())
      for (const auto& part : split_top_level(body)) c.push_back(parse_integer(part).get_si());
  } else if (s == "0" && g.rank() == 0) {
    return c;
  } else {
    c.push_back(parse_integer(s).get_si());
  }
  if (c.size() != g.rank()) {
    throw InvalidArgument("element " + s + " has " + std::to_string(c.size()) + " coordinates; " + g.str() + " has rank " +
                          std::to_string(g.rank()));
  }
  return g.reduce(c);
}

std::vector<Coords> parse_element_list(const std::string& s, const FinAbGroup& g) {
  std::vector<Coords> out;
  std::string body = strip_brackets(s);
  if (body.empty()) return out;
  for (const auto& part : split_top_level(body)) out.push_back(parse_element(part, g));
  return out;
}

std::vector<CirclePoint> parse_point_list(const std::string& s) {
  std::vector<CirclePoint> out;
  std::string body = strip_brackets(s);
  if (body.empty()) return out;
  for (const auto& part : split_top_level(body)) out.push_back(parse_circle_point(part));
  return out;
}

SeqSpec parse_integer_sequence(const std::string& s0) {
  std::string s = trim(s0);
  const std::size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw InvalidArgument("expected geometric(a,q), factorial(a), recurrence([c],[u0]) or explicit([terms])");
  }
  const std::string name = trim(s.substr(0, open));
  const auto args = split_top_level(s.substr(open + 1, s.size() - open - 2));
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw InvalidArgument(name + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                            std::to_string(args.size()));
    }
  };
  SeqSpec u;
  if (name == "geometric") {
    need(2);
    u = Geometric{parse_integer(args[0]), parse_integer(args[1])};
  } else if (name == "factorial") {
    need(1);
    u = Factorial{parse_integer(args[0])};
  } else if (name == "recurrence") {
    need(2);
    u = LinearRecurrence{parse_int_list(args[0]), parse_int_list(args[1])};
  } else if (name == "explicit") {
    if (args.size() == 1 && !args[0].empty() && args[0].front() == '[') {
      u = ExplicitPrefix{parse_int_list(args[0])};
    } else {
      std::vector<Int> terms;
      for (const auto& a : args) terms.push_back(parse_integer(a));
      u = ExplicitPrefix{terms};
    }
  } else {
    throw InvalidArgument("unknown sequence kind '" + name + "'");
  }
  return validated(std::move(u));
}

}  // namespace charsub
