#pragma once

// Plain-text spec files: "key = value" lines grouped under [section]
// headers. '#' starts a comment. Keys before the first header belong to the
// top-level section "".
//
//   command = membership
//   [sequence]
//   u = geometric(1, 2)
//   [points]
//   x = 1/3, 2/5

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charsub/circle.hpp"
#include "charsub/common.hpp"
#include "charsub/finite_abelian.hpp"
#include "charsub/sequence.hpp"

namespace charsub {

/// Input error with a 1-based source position.
class ParseError : public InvalidArgument {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct SpecEntry {
  std::string value;
  int line = 0;
  int column = 0;  // column of the first value character
};

class SpecFile {
 public:
  static SpecFile parse(const std::string& text);

  const SpecEntry* find(const std::string& section, const std::string& key) const;
  bool has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }
  /// Adds or replaces an entry (command-line overrides carry line 0).
  void set(const std::string& section, const std::string& key, std::string value);
  /// Appends to a comma-separated list value.
  void append(const std::string& section, const std::string& key, const std::string& value);

  const std::map<std::string, std::map<std::string, SpecEntry>>& sections() const { return sections_; }

 private:
  std::map<std::string, std::map<std::string, SpecEntry>> sections_;
};

/// Wraps an exception from a value parser with the entry position.
[[noreturn]] void fail_at(const SpecEntry& e, const std::string& what);

/// Splits on commas that are not nested inside (), [] or {}.
std::vector<std::string> split_top_level(const std::string& text, char sep = ',');
std::string trim(const std::string& s);
/// Removes one pair of enclosing brackets when present.
std::string strip_brackets(const std::string& s);

Int parse_integer(const std::string& s);
Rat parse_rational(const std::string& s);
std::uint64_t parse_count(const std::string& s);
bool parse_bool(const std::string& s);
std::vector<Int> parse_int_list(const std::string& s);
std::vector<std::uint64_t> parse_count_list(const std::string& s);
/// "(1,0)" or a bare integer for rank one.
Coords parse_element(const std::string& s, const FinAbGroup& g);
std::vector<Coords> parse_element_list(const std::string& s, const FinAbGroup& g);
std::vector<CirclePoint> parse_point_list(const std::string& s);

/// geometric(a, q), factorial(a), recurrence([c...], [u_0...]), explicit([...]).
SeqSpec parse_integer_sequence(const std::string& s);

}  // namespace charsub
