#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "charsub/common.hpp"

namespace charsub {

/// Membership holds from index `cutoff` on.
struct In {
  Int cutoff;
  std::string reason;
};

/// Membership fails: the value set on the residue cycle contains a point of
/// norm at least `delta`, and that cycle repeats forever.
struct NotIn {
  Rat delta;
  std::string reason;
  Int modulus;            // 0 when not derived from a residue orbit
  Int preperiod;
  std::vector<Int> cycle; // residues (or pairing numerators) on the cycle
};

/// No decision within the searched depth. Never asserts anything.
struct Unknown {
  std::uint64_t depth = 0;
  std::string reason;
};

using Verdict = std::variant<In, NotIn, Unknown>;

inline bool is_in(const Verdict& v) { return std::holds_alternative<In>(v); }
inline bool is_not_in(const Verdict& v) { return std::holds_alternative<NotIn>(v); }
inline bool is_unknown(const Verdict& v) { return std::holds_alternative<Unknown>(v); }

inline const char* verdict_name(const Verdict& v) {
  if (is_in(v)) return "In";
  if (is_not_in(v)) return "NotIn";
  return "Unknown";
}

}  // namespace charsub
