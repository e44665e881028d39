#include "charsub/commands.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "charsub/diophantine.hpp"
#include "charsub/graph.hpp"
#include "charsub/polish.hpp"
#include "charsub/sequence.hpp"

namespace charsub {

using json = nlohmann::ordered_json;

namespace {

// Spec access -----------------------------------------------------------------------------

const SpecEntry& required(const SpecFile& spec, const std::string& section, const std::string& key) {
  const SpecEntry* e = spec.find(section, key);
  if (!e) throw ParseError(0, 0, "missing key '" + key + "' in section [" + section + "]");
  return *e;
}

// Runs a value parser and attaches the entry position to its errors.
template <class F>
auto parsed(const SpecEntry& e, F f) -> decltype(f(e.value)) {
  try {
    return f(e.value);
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& ex) {
    fail_at(e, ex.what());
  }
}

template <class T, class F>
T param_or(const SpecFile& spec, const std::string& key, T fallback, F f) {
  const SpecEntry* e = spec.find("params", key);
  return e ? parsed(*e, f) : fallback;
}

std::uint64_t count_param(const SpecFile& spec, const std::string& key, std::uint64_t fallback) {
  return param_or<std::uint64_t>(spec, key, fallback, parse_count);
}

bool has_group_sequence(const SpecFile& spec) { return spec.has("sequence", "period"); }

FiniteEventuallyPeriodic load_finite_sequence(const SpecFile& spec) {
  const SpecEntry& ge = spec.has("group", "factors") ? required(spec, "group", "factors") : required(spec, "", "group");
  FinAbGroup g = parsed(ge, parse_group);
  const SpecEntry& pe = required(spec, "sequence", "period");
  FiniteEventuallyPeriodic u{g, {}, parsed(pe, [&](const std::string& s) { return parse_element_list(s, g); })};
  if (const SpecEntry* pre = spec.find("sequence", "prefix")) {
    u.prefix = parsed(*pre, [&](const std::string& s) { return parse_element_list(s, g); });
  }
  return parsed(pe, [&](const std::string&) { return std::get<FiniteEventuallyPeriodic>(validated(u)); });
}

SeqSpec load_sequence(const SpecFile& spec) {
  if (has_group_sequence(spec)) return load_finite_sequence(spec);
  return parsed(required(spec, "sequence", "u"), parse_integer_sequence);
}

SeqSpec load_integer_sequence(const SpecFile& spec) {
  if (has_group_sequence(spec)) throw InvalidArgument("this command needs an integer sequence ([sequence] u = ...)");
  return load_sequence(spec);
}

// JSON helpers -------------------------------------------------------------------------------

std::string rat_str(const Rat& q) { return to_string(q); }

json interval_json(const Interval& iv) {
  return json{{"lo", rat_str(iv.lo)}, {"hi", rat_str(iv.hi)}, {"approx", {iv.lo.get_d(), iv.hi.get_d()}}};
}

json ints_json(const std::vector<Int>& v) {
  json a = json::array();
  for (const Int& x : v) a.push_back(x.get_str());
  return a;
}

json verdict_json(const Verdict& v) {
  json j{{"kind", verdict_name(v)}};
  if (const auto* in = std::get_if<In>(&v)) {
    j["cutoff"] = in->cutoff.get_str();
    j["reason"] = in->reason;
  } else if (const auto* no = std::get_if<NotIn>(&v)) {
    j["delta"] = rat_str(no->delta);
    j["reason"] = no->reason;
    j["modulus"] = no->modulus.get_str();
    j["preperiod"] = no->preperiod.get_str();
    j["cycle"] = ints_json(no->cycle);
  } else {
    const auto& un = std::get<Unknown>(v);
    j["depth"] = un.depth;
    j["reason"] = un.reason;
  }
  return j;
}

Verdict verdict_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "In") return In{Int(j.at("cutoff").get<std::string>()), j.value("reason", "")};
  if (kind == "NotIn") {
    std::vector<Int> cycle;
    for (const auto& c : j.at("cycle")) cycle.emplace_back(c.get<std::string>());
    return NotIn{parse_rational(j.at("delta").get<std::string>()), j.value("reason", ""),
                 Int(j.at("modulus").get<std::string>()), Int(j.at("preperiod").get<std::string>()), cycle};
  }
  return Unknown{j.value("depth", std::uint64_t{0}), j.value("reason", "")};
}

json zinf_json(const ZInfElem& z) {
  json j = json::object();
  for (const auto& r : z.runs()) {
    if (r.length == 1) {
      j[r.start.get_str()] = r.coeff.get_str();
    } else {
      j[r.start.get_str() + ".." + Index(r.start + r.length - 1).get_str()] = r.coeff.get_str();
    }
  }
  return j;
}

ZInfElem zinf_from_json(const json& j) {
  std::vector<ZInfElem::Run> runs;
  for (const auto& [k, v] : j.items()) {
    const auto dots = k.find("..");
    Index a(dots == std::string::npos ? k : k.substr(0, dots));
    Index b(dots == std::string::npos ? k : k.substr(dots + 2));
    runs.push_back(ZInfElem::Run{a, b - a + 1, Int(v.get<std::string>())});
  }
  return ZInfElem::from_runs(runs);
}

json chord_json(const ChordValue& c) {
  json j = interval_json(c.enclosure);
  j["text"] = c.str();
  return j;
}

json metric_json(const MetricResult& m) {
  json j{{"text", m.str()}};
  switch (m.kind) {
    case MetricResult::Kind::Value:
      j["kind"] = "value";
      j["value"] = interval_json(m.value);
      break;
    case MetricResult::Kind::Diverges:
      j["kind"] = "diverges";
      j["partial_lower"] = rat_str(m.partial_lower);
      j["witness_position"] = m.witness_position.get_str();
      break;
    default:
      j["kind"] = "unknown";
      j["reason"] = m.reason;
  }
  return j;
}

int verdict_code(const Verdict& v) {
  if (is_in(v)) return kExitVerified;
  if (is_not_in(v)) return kExitViolated;
  return kExitUnknown;
}

// Combines per-item codes: any violation wins, then any unknown.
int combine(int a, int b) {
  if (a == kExitViolated || b == kExitViolated) return kExitViolated;
  if (a == kExitUnknown || b == kExitUnknown) return kExitUnknown;
  return std::max(a, b);
}

struct Outcome {
  json result = json::object();
  int code = kExitVerified;
  json asserted = json::array();
};

// Commands -------------------------------------------------------------------------------------

Outcome cmd_membership(const SpecFile& spec) {
  Outcome out;
  SeqSpec u = load_sequence(spec);
  const SpecEntry& pe = required(spec, "points", "x");
  json items = json::array();
  if (const auto* f = std::get_if<FiniteEventuallyPeriodic>(&u)) {
    for (const Coords& x : parsed(pe, [&](const std::string& s) { return parse_element_list(s, f->group); })) {
      Verdict v = member_su(*f, x);
      const bool ok = recheck_verdict(*f, x, v);
      items.push_back(json{{"point", coords_str(x)}, {"verdict", verdict_json(v)}, {"rechecked", ok}});
      out.code = combine(out.code, ok ? verdict_code(v) : kExitViolated);
    }
  } else {
    const std::uint64_t depth = count_param(spec, "depth", kDefaultOrbitBudget);
    for (const CirclePoint& x : parsed(pe, parse_point_list)) {
      Verdict v = member_su(u, x, depth);
      const bool ok = is_unknown(v) || recheck_verdict(u, x, v);
      items.push_back(json{{"point", x.str()}, {"verdict", verdict_json(v)}, {"rechecked", ok}});
      out.code = combine(out.code, ok ? verdict_code(v) : kExitViolated);
    }
  }
  out.result["sequence"] = seq_str(u);
  out.result["points"] = items;
  return out;
}

Outcome cmd_su_finite(const SpecFile& spec) {
  Outcome out;
  FiniteEventuallyPeriodic u = load_finite_sequence(spec);
  Subgroup s = su_finite(u.group, u);
  out.result["group"] = u.group.str();
  out.result["sequence"] = seq_str(u);
  out.result["subgroup"] = s.str();
  out.result["order"] = s.order();
  json elems = json::array();
  if (s.order() <= 4096)
    for (const Coords& x : s.elements()) elems.push_back(coords_str(x));
  out.result["elements"] = elems;
  out.result["whole_group"] = s == Subgroup::whole(u.group);
  bool trivial = true;
  for (const Coords& chi : u.period) trivial = trivial && chi == u.group.zero();
  out.result["period_all_zero"] = trivial;
  return out;
}

Outcome cmd_radical(const SpecFile& spec) {
  Outcome out;
  SeqSpec u = load_integer_sequence(spec);
  const std::uint64_t q = count_param(spec, "probe_bound", 50);
  const bool t_seq = param_or<bool>(spec, "t_sequence", false, parse_bool);
  const bool tb_seq = param_or<bool>(spec, "tb_sequence", false, parse_bool);
  std::vector<Rat> extra;
  if (const SpecEntry* e = spec.find("points", "x")) {
    for (const CirclePoint& p : parsed(*e, parse_point_list)) {
      if (!p.is_rational()) fail_at(*e, "radical probes must be rational");
      extra.push_back(p.value());
    }
  }
  RadicalProfile p = radical_profile(u, q, t_seq, extra);
  auto subgroup_of_z = [](const Int& n) { return n == 0 ? std::string("{0}") : n.get_str() + "Z"; };
  out.result["sequence"] = seq_str(u);
  out.result["probe_bound"] = q;
  out.result["certified_superset"] = subgroup_of_z(p.bounds.certified_superset);
  out.result["certified_subset"] = subgroup_of_z(p.bounds.certified_subset);
  out.result["superset_reason"] = p.superset_reason;
  out.result["map"] = flag_name(p.map);
  out.result["minap"] = flag_name(p.minap);
  out.result["probes"] = p.probes;
  out.result["members"] = p.members.size();
  out.result["not_in"] = p.not_in;
  out.result["unknown"] = p.unknown;
  out.result["term_gcd"] = p.term_gcd ? json(p.term_gcd->get_str()) : json(nullptr);
  json members = json::array();
  for (std::size_t i = 0; i < p.members.size() && i < 64; ++i) members.push_back(rat_str(p.members[i]));
  out.result["member_sample"] = members;
  if (t_seq) out.asserted.push_back("T-sequence: asserted");
  if (tb_seq) out.asserted.push_back("TB-sequence: asserted");
  return out;
}

json separator_json(const SeparatingCharacter& s) {
  return json{{"base_char", coords_str(s.base_char)},
              {"tail", zinf_json(s.tail)},
              {"verified", s.verified},
              {"index", s.index},
              {"modulus", s.modulus},
              {"value", s.value.str()},
              {"points_checked", s.checked},
              {"fallback", s.fallback}};
}

Outcome cmd_separate(const SpecFile& spec) {
  Outcome out;
  FiniteEventuallyPeriodic u = load_finite_sequence(spec);
  const SpecEntry& xe = required(spec, "points", "x");
  Coords x = parsed(xe, [&](const std::string& s) { return parse_element(s, u.group); });
  std::vector<CirclePoint> trace = parsed(required(spec, "points", "trace"), parse_point_list);
  SeparatingCharacter s = separate_point(u, x, trace);
  out.result["group"] = u.group.str();
  out.result["sequence"] = seq_str(u);
  out.result["point"] = coords_str(x);
  json tr = json::array();
  for (const auto& t : trace) tr.push_back(t.str());
  out.result["trace"] = tr;
  out.result["separator"] = separator_json(s);
  out.code = s.verified ? kExitVerified : kExitViolated;
  return out;
}

Outcome cmd_gu_perp(const SpecFile& spec) {
  Outcome out;
  FiniteEventuallyPeriodic u = load_finite_sequence(spec);
  const std::uint64_t l = count_param(spec, "depth", 4);
  if (param_or<bool>(spec, "closure", false, parse_bool)) {
    Closure c = restrict_to_closure(u);
    out.result["closure"] = json{{"subgroup", c.y.str()}, {"as_group", c.restricted.group.str()},
                                 {"restricted_sequence", seq_str(c.restricted)}};
    u = c.restricted;
  }
  PerpReport r = gu_perp_generators(u, l);
  json gens = json::array();
  for (const auto& g : r.generators) gens.push_back(json{{"base_char", coords_str(g.base_char)}, {"tail", zinf_json(g.tail)}});
  out.result["group"] = u.group.str();
  out.result["generators"] = gens;
  out.result["annihilates_graph"] = r.annihilates;
  out.result["relation_holds"] = r.relation_holds;
  out.result["relation_with_negative_unit_holds"] = r.plus_sign_holds;
  out.result["points_checked"] = r.points_checked;
  out.code = r.annihilates && r.relation_holds ? kExitVerified : kExitViolated;
  return out;
}

Outcome cmd_akm(const SpecFile& spec) {
  Outcome out;
  SeqSpec u = load_sequence(spec);
  const std::uint64_t k = count_param(spec, "k", 1);
  const std::uint64_t m = count_param(spec, "m", 0);
  const std::uint64_t n = count_param(spec, "n", 10);
  const std::uint64_t budget = count_param(spec, "budget", kDefaultStateBudget);
  json values = json::array();
  if (const auto* f = std::get_if<FiniteEventuallyPeriodic>(&u)) {
    for (const Coords& v : enumerate_akm(*f, k, m, n, budget)) values.push_back(coords_str(v));
  } else {
    for (const Int& v : enumerate_akm(u, k, m, n, budget)) values.push_back(v.get_str());
  }
  out.result["sequence"] = seq_str(u);
  out.result["k"] = k;
  out.result["m"] = m;
  out.result["n"] = n;
  out.result["count"] = values.size();
  out.result["values"] = values;
  if (const SpecEntry* te = spec.find("points", "targets")) {
    if (std::holds_alternative<FiniteEventuallyPeriodic>(u)) fail_at(*te, "coverage targets need an integer sequence");
    std::vector<Int> targets = parsed(*te, parse_int_list);
    AkmCover c = akm_exhaustion(u, targets, k, n);
    out.result["cover"] = json{{"found", c.found},
                               {"k", c.k},
                               {"uncovered", c.uncovered ? json(c.uncovered->get_str()) : json(nullptr)}};
    if (!c.found) out.code = kExitViolated;
  }
  return out;
}

Outcome cmd_neighborhood(const SpecFile& spec) {
  Outcome out;
  SeqSpec u = load_integer_sequence(spec);
  std::vector<std::uint64_t> cutoffs = parsed(required(spec, "params", "cutoffs"), parse_count_list);
  Int y = parsed(required(spec, "params", "y"), parse_integer);
  const std::uint64_t depth = count_param(spec, "depth", 12);
  const std::uint64_t budget = count_param(spec, "budget", 5'000'000);
  NeighborhoodResult r = neighborhood_member(u, cutoffs, y, depth, budget);
  json dec = json::array();
  for (const auto& t : r.decomposition)
    dec.push_back(json{{"cutoff", t.cutoff}, {"index", t.index}, {"coefficient", t.sign}});
  out.result["sequence"] = seq_str(u);
  out.result["cutoffs"] = cutoffs;
  out.result["y"] = y.get_str();
  out.result["verdict"] = verdict_json(r.verdict);
  out.result["decomposition"] = dec;
  out.result["certificate_modulus"] = r.certificate_modulus ? json(r.certificate_modulus->get_str()) : json(nullptr);
  out.result["nodes"] = r.nodes;
  const bool ok = !is_in(r.verdict) || check_decomposition(u, cutoffs, y, r.decomposition);
  out.result["rechecked"] = ok;
  out.code = ok ? verdict_code(r.verdict) : kExitViolated;
  return out;
}

OmegaRule load_omega(const SpecFile& spec) {
  const SpecEntry& e = required(spec, "params", "omega");
  const std::string name = trim(e.value);
  if (name == "unit") return omega_unit();
  if (name == "scaled") return omega_scaled();
  if (name == "anchored") return omega_anchored();
  fail_at(e, "omega must be one of unit, scaled, anchored");
}

Outcome cmd_witness_exa1(const SpecFile& spec) {
  Outcome out;
  OmegaRule omega = load_omega(spec);
  const std::string mode = spec.has("params", "mode") ? trim(required(spec, "params", "mode").value) : "analysis";
  out.result["omega"] = omega.name;
  out.result["mode"] = mode;
  if (mode == "analysis") {
    CoefficientAnalysis a = exa1_coefficient_analysis(omega, count_param(spec, "terms", 8));
    out.result["r1_divergent"] = verdict_json(a.r1_divergent);
    if (const Int* c = std::get_if<Int>(&a.bound)) {
      out.result["bound"] = json{{"kind", "uniform"}, {"c", c->get_str()}};
    } else if (const auto* w = std::get_if<UnboundedWitness>(&a.bound)) {
      json ks = json::array(), pos = json::array(), ds = json::array();
      for (std::size_t i = 0; i < w->k.size(); ++i) {
        ks.push_back(w->k[i].get_str());
        pos.push_back(w->positions[i].get_str());
        ds.push_back(w->d[i].get_str());
      }
      out.result["bound"] = json{{"kind", "unbounded"}, {"k", ks}, {"positions", pos}, {"d", ds}};
    } else {
      out.result["bound"] = json{{"kind", "unknown"}, {"reason", std::get<Unknown>(a.bound).reason}};
      out.code = kExitUnknown;
    }
    return out;
  }
  if (mode == "unbounded") {
    CoefficientAnalysis a = exa1_coefficient_analysis(omega, count_param(spec, "terms", 8));
    const auto* w = std::get_if<UnboundedWitness>(&a.bound);
    if (!w) throw PreconditionViolation("coefficients of " + omega.name + " are not certified unbounded");
    UnboundedWitnessResult r = exa1_unbounded_witness(omega, w->k);
    json z = json::object(), pairings = json::array();
    for (const auto& [k, v] : r.z.finite_entries()) z[k.get_str()] = v.str();
    for (const auto& p : r.pairings) pairings.push_back(p.str());
    out.result["z"] = z;
    out.result["pairings"] = pairings;
    out.result["l1_bound"] = rat_str(r.l1_bound);
    out.result["verified"] = r.verified;
    out.code = r.verified ? kExitVerified : kExitViolated;
    return out;
  }
  if (mode == "escape") {
    Int c = 1;
    if (omega.coefficient_bound) c = *omega.coefficient_bound;
    if (const SpecEntry* ce = spec.find("params", "c")) c = parsed(*ce, parse_integer);
    const std::uint64_t blocks = count_param(spec, "blocks", 100);
    const Rat bound = param_or<Rat>(spec, "bound", Rat(10), parse_rational);
    EscapeWitness w = exa1_escape_witness(omega, c, blocks, bound);
    json ks = json::array(), pos = json::array(), vals = json::array();
    for (std::size_t i = 0; i < w.k.size() && i < 20; ++i) {
      ks.push_back(w.k[i].get_str());
      pos.push_back(w.positions[i].get_str());
      vals.push_back(rat_str(w.values[i]));
    }
    std::uint64_t by_kind[3] = {0, 0, 0};
    json rows = json::array();
    for (const auto& row : w.trace) {
      ++by_kind[row.kind - 'a'];
      if (rows.size() < 10) {
        rows.push_back(json{{"t", row.t.get_str()}, {"m", row.m}, {"case", std::string(1, row.kind)},
                            {"pairing", row.pairing.str()}, {"norm", rat_str(row.norm)},
                            {"bound", rat_str(row.bound)}, {"ok", row.ok}});
      }
    }
    out.result["c"] = c.get_str();
    out.result["blocks"] = blocks;
    out.result["k_prefix"] = ks;
    out.result["positions_prefix"] = pos;
    out.result["values_prefix"] = vals;
    out.result["trace_rows"] = w.trace.size();
    out.result["trace_cases"] = json{{"a", by_kind[0]}, {"b", by_kind[1]}, {"c", by_kind[2]}};
    out.result["trace_sample"] = rows;
    out.result["trace_ok"] = w.trace_ok;
    out.result["divergence"] = metric_json(w.divergence);
    const bool ok = w.trace_ok && w.divergence.kind == MetricResult::Kind::Diverges;
    out.code = ok ? kExitVerified : kExitViolated;
    return out;
  }
  fail_at(required(spec, "params", "mode"), "mode must be one of analysis, unbounded, escape");
}

TInfElem parse_pattern(const std::string& s0) {
  const std::string s = trim(s0);
  const std::size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')') throw InvalidArgument("expected harmonic(C[, start]) or constant(v[, start])");
  const std::string name = trim(s.substr(0, open));
  const auto args = split_top_level(s.substr(open + 1, s.size() - open - 2));
  if (args.empty() || args.size() > 2) throw InvalidArgument(name + " takes one or two arguments");
  const Index start = args.size() == 2 ? parse_integer(args[1]) : Index(1);
  if (name == "harmonic") return harmonic_pattern(parse_integer(args[0]), start);
  if (name == "constant") return constant_pattern(parse_circle_point(args[0]), start);
  throw InvalidArgument("unknown pattern '" + name + "'");
}

Outcome cmd_gclosure(const SpecFile& spec) {
  Outcome out;
  const SpecEntry& pe = required(spec, "params", "pattern");
  TInfElem z = parsed(pe, parse_pattern);
  const std::uint64_t blocks = count_param(spec, "blocks", 20);
  std::optional<Index> k0;
  if (const SpecEntry* ke = spec.find("params", "k0")) k0 = parsed(*ke, parse_integer);
  GClosureResult r = exa1_gclosure_blocks(z, blocks, k0);
  out.result["pattern"] = z.str();
  out.result["projection_family"] = r.projection_family;
  const Rat sqrt3_floor(17320, 10000);
  bool ok = true;
  json chars = json::array();
  for (std::size_t m = 0; m < r.characters.size(); ++m) {
    json row{{"character", zinf_json(r.characters[m])}, {"chord", chord_json(r.chords[m])}};
    if (!r.projection_family) {
      const Interval& s = r.partition.sums[m];
      const bool in_range = s.lo > Rat(1, 3) && s.hi < Rat(1, 2);
      row["block_sum"] = interval_json(s);
      row["block_sum_exact"] = static_cast<bool>(r.partition.exact[m]);
      row["sum_in_range"] = in_range;
      row["chord_at_least_sqrt3"] = r.chords[m].lower() >= sqrt3_floor;
      ok = ok && in_range && r.chords[m].lower() >= sqrt3_floor;
    } else {
      ok = ok && r.chords[m].lower() > 0;
    }
    chars.push_back(row);
  }
  if (!r.projection_family) {
    json cut = json::array();
    for (const Index& c : r.partition.cutoffs) cut.push_back(c.get_str());
    out.result["cutoffs"] = cut;
  }
  out.result["blocks"] = chars;
  const std::uint64_t tests = count_param(spec, "tests", 0);
  if (tests > 0 && !r.projection_family) {
    std::mt19937_64 rng(count_param(spec, "seed", 1));
    const Index first = r.partition.cutoffs.front() + 1;
    std::uint64_t tails_vanish = 0;
    bool bounded = true;
    for (std::uint64_t t = 0; t < tests; ++t) {
      std::map<Index, CirclePoint> entries;
      const std::uint64_t size = 1 + rng() % 8;
      for (std::uint64_t i = 0; i < size; ++i) {
        Index pos = first + Index(static_cast<unsigned long>(rng() % 5000));
        entries[pos] = CirclePoint::rational(make_rat(Int(static_cast<long>(1 + rng() % 50)), Int(1000)));
      }
      TInfElem w = TInfElem::finite(entries);
      auto rows = gclosure_test_element(r, w);
      bool vanished = false;
      for (std::size_t m = 0; m < rows.size(); ++m) {
        if (rows[m].chord.lower() > rows[m].block_l1.hi) bounded = false;
        if (m + 1 == rows.size()) vanished = rows[m].chord.upper() == 0;
      }
      if (vanished) ++tails_vanish;
    }
    out.result["tests"] = json{{"count", tests}, {"chord_within_block_l1", bounded}, {"last_block_zero", tails_vanish}};
    ok = ok && bounded && tails_vanish == tests;
  }
  out.result["ok"] = ok;
  out.code = ok ? kExitVerified : kExitViolated;
  return out;
}

Outcome cmd_kronecker(const SpecFile& spec) {
  Outcome out;
  std::vector<CirclePoint> xs = parsed(required(spec, "points", "x"), parse_point_list);
  std::vector<CirclePoint> ts = parsed(required(spec, "points", "targets"), parse_point_list);
  const Rat eps = parsed(required(spec, "params", "eps"), parse_rational);
  const std::uint64_t n_max = count_param(spec, "scan_max", 1'000'000);
  const Int height = param_or<Int>(spec, "height", Int(20), parse_integer);
  KroneckerResult r = kronecker_char_search(xs, ts, eps, n_max, height);
  json px = json::array(), pt = json::array();
  for (const auto& x : xs) px.push_back(x.str());
  for (const auto& t : ts) pt.push_back(t.str());
  out.result["points"] = px;
  out.result["targets"] = pt;
  out.result["eps"] = rat_str(eps);
  out.result["scan_max"] = n_max;
  out.result["gate_height"] = height.get_str();
  out.result["scanned"] = r.scanned;
  if (r.dependency) {
    json rel = json{{"kind", relation_kind_name(r.dependency->kind)}};
    if (r.dependency->relation) rel["coefficients"] = ints_json(r.dependency->relation->coefficients);
    if (!r.dependency->ambiguous.empty()) rel["ambiguous"] = ints_json(r.dependency->ambiguous);
    out.result["dependency"] = rel;
    out.code = kExitViolated;
  } else if (r.solution) {
    json ach = json::array();
    for (const auto& a : r.solution->achieved) ach.push_back(a.str());
    json up = json::array();
    for (const auto& a : r.solution->achieved_upper) up.push_back(rat_str(a));
    out.result["solution"] = json{{"n", r.solution->n.get_str()}, {"achieved", ach}, {"achieved_upper", up},
                                  {"reverified", r.reverified}};
    out.code = r.reverified ? kExitVerified : kExitViolated;
  } else {
    out.result["not_found_within"] = n_max;
    out.code = kExitUnknown;
  }
  return out;
}

Outcome cmd_relation(const SpecFile& spec) {
  Outcome out;
  std::vector<CirclePoint> xs = parsed(required(spec, "points", "x"), parse_point_list);
  const Int height = param_or<Int>(spec, "height", Int(1000), parse_integer);
  const std::uint64_t bits = count_param(spec, "precision", 128);
  RelationResult r = integer_relation(xs, height, static_cast<unsigned>(bits));
  json px = json::array();
  for (const auto& x : xs) px.push_back(x.str());
  out.result["points"] = px;
  out.result["height"] = height.get_str();
  out.result["precision_bits"] = bits;
  out.result["kind"] = relation_kind_name(r.kind);
  out.result["method"] = r.method;
  if (r.relation) {
    out.result["relation"] = json{{"coefficients", ints_json(r.relation->coefficients)},
                                  {"exact_zero", r.relation->exact_zero},
                                  {"residual", interval_json(r.relation->residual)},
                                  {"torsion_only", r.relation->torsion_only}};
  }
  if (r.kind == RelationResult::Kind::Ambiguous) {
    out.result["ambiguous"] = ints_json(r.ambiguous);
    out.code = kExitUnknown;
  }
  return out;
}

Outcome cmd_wordcheck(const SpecFile& spec) {
  Outcome out;
  const std::uint64_t rank = parsed(required(spec, "params", "rank"), parse_count);
  const std::uint64_t n0 = parsed(required(spec, "params", "n0"), parse_count);
  WordCheckReport w = l1_word_check(rank, n0);
  out.result["rank"] = w.rank;
  out.result["n0"] = w.n0;
  out.result["vectors_checked"] = w.vectors_checked;
  out.result["violations"] = w.violations;
  out.result["ball_counts"] = w.ball_counts;
  out.result["delannoy"] = w.delannoy;
  out.result["counts_match"] = w.counts_match;
  out.result["symbolic"] = w.symbolic;
  out.result["passed"] = w.passed;
  out.code = w.passed ? kExitVerified : kExitViolated;
  return out;
}

using Handler = std::function<Outcome(const SpecFile&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"membership", cmd_membership}, {"su-finite", cmd_su_finite},
      {"radical", cmd_radical},       {"separate", cmd_separate},
      {"gu-perp", cmd_gu_perp},       {"akm", cmd_akm},
      {"neighborhood", cmd_neighborhood}, {"witness-exa1", cmd_witness_exa1},
      {"gclosure", cmd_gclosure},     {"kronecker", cmd_kronecker},
      {"relation", cmd_relation},     {"wordcheck", cmd_wordcheck},
  };
  return h;
}

json echo_json(const SpecFile& spec) {
  json j = json::object();
  for (const auto& [section, entries] : spec.sections()) {
    json s = json::object();
    for (const auto& [k, e] : entries) s[k] = e.value;
    j[section.empty() ? "_" : section] = s;
  }
  return j;
}

SpecFile spec_from_echo(const json& j) {
  SpecFile s;
  for (const auto& [section, entries] : j.items())
    for (const auto& [k, v] : entries.items()) s.set(section == "_" ? "" : section, k, v.get<std::string>());
  return s;
}

const char* status_name(int code) {
  switch (code) {
    case kExitVerified:
      return "verified";
    case kExitViolated:
      return "violated";
    case kExitUnknown:
      return "unknown";
    default:
      return "input_error";
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"membership", "su-finite",    "radical",  "separate",
                                                 "gu-perp",    "akm",          "neighborhood", "witness-exa1",
                                                 "gclosure",   "kronecker",    "relation", "wordcheck"};
  return names;
}

Report run_command(const std::string& name, const SpecFile& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  json& j = rep.json;
  j["schema"] = kReportSchema;
  j["tool_version"] = kToolVersion;
  j["command"] = json{{"name", name}, {"inputs", echo_json(spec)}};
  Outcome o;
  try {
    auto it = handlers().find(name);
    if (it == handlers().end()) throw InvalidArgument("unknown command '" + name + "'");
    o = it->second(spec);
  } catch (const ParseError& e) {
    o.code = kExitInputError;
    o.result = json{{"error", {{"type", "parse"}, {"message", e.what()}, {"line", e.line()}, {"column", e.column()}}}};
  } catch (const InvalidArgument& e) {
    o.code = kExitInputError;
    o.result = json{{"error", {{"type", "invalid_argument"}, {"message", e.what()}}}};
  } catch (const PreconditionViolation& e) {
    o.code = kExitViolated;
    o.result = json{{"error", {{"type", "precondition"}, {"message", e.what()}}}};
  } catch (const BudgetExceeded& e) {
    o.code = kExitUnknown;
    o.result = json{{"error", {{"type", "budget"}, {"message", e.what()}}}};
  } catch (const std::exception& e) {
    o.code = kExitInputError;
    o.result = json{{"error", {{"type", "error"}, {"message", e.what()}}}};
  }
  j["status"] = status_name(o.code);
  j["exit_code"] = o.code;
  j["result"] = o.result;
  j["asserted"] = o.asserted;
  j["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  rep.exit_code = o.code;
  return rep;
}

Report recheck_report(const json& report) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  json& j = rep.json;
  j["schema"] = kReportSchema;
  j["tool_version"] = kToolVersion;
  Outcome o;
  try {
    if (report.value("schema", "") != kReportSchema) throw InvalidArgument("not a " + std::string(kReportSchema) + " report");
    const std::string name = report.at("command").at("name");
    j["command"] = json{{"name", "recheck"}, {"of", name}};
    SpecFile spec = spec_from_echo(report.at("command").at("inputs"));
    const json& res = report.at("result");
    bool ok = true;
    std::uint64_t checked = 0;
    if (res.contains("error")) {
      o.result["note"] = "report carries an error and no certificate";
    } else if (name == "membership") {
      SeqSpec u = load_sequence(spec);
      for (const auto& item : res.at("points")) {
        Verdict v = verdict_from_json(item.at("verdict"));
        if (is_unknown(v)) continue;
        ++checked;
        if (const auto* f = std::get_if<FiniteEventuallyPeriodic>(&u)) {
          ok = ok && recheck_verdict(*f, parse_element(item.at("point").get<std::string>(), f->group), v);
        } else {
          ok = ok && recheck_verdict(u, parse_circle_point(item.at("point").get<std::string>()), v);
        }
      }
    } else if (name == "separate") {
      FiniteEventuallyPeriodic u = load_finite_sequence(spec);
      const json& s = res.at("separator");
      SeparatingCharacter sc;
      sc.base_char = parse_element(s.at("base_char").get<std::string>(), u.group);
      sc.tail = zinf_from_json(s.at("tail"));
      Coords x = parse_element(res.at("point").get<std::string>(), u.group);
      std::vector<CirclePoint> trace;
      for (const auto& t : res.at("trace")) trace.push_back(parse_circle_point(t.get<std::string>()));
      ok = verify_annihilates_graph(u, sc, &checked) && !(separator_value(u, sc, x, trace) == CirclePoint());
    } else if (name == "neighborhood") {
      SeqSpec u = load_integer_sequence(spec);
      Verdict v = verdict_from_json(res.at("verdict"));
      if (is_in(v)) {
        std::vector<DecompositionTerm> terms;
        for (const auto& t : res.at("decomposition"))
          terms.push_back(DecompositionTerm{t.at("cutoff"), t.at("index"), t.at("coefficient")});
        std::vector<std::uint64_t> cutoffs = res.at("cutoffs");
        ok = check_decomposition(u, cutoffs, Int(res.at("y").get<std::string>()), terms);
        checked = 1;
      } else if (is_not_in(v)) {
        // y must miss every admissible sum modulo q; recompute the verdict.
        std::vector<std::uint64_t> cutoffs = res.at("cutoffs");
        NeighborhoodResult again = neighborhood_member(u, cutoffs, Int(res.at("y").get<std::string>()), 0, 1);
        ok = is_not_in(again.verdict);
        checked = 1;
      }
    } else if (name == "kronecker") {
      if (res.contains("solution")) {
        std::vector<CirclePoint> xs, ts;
        for (const auto& x : res.at("points")) xs.push_back(parse_circle_point(x.get<std::string>()));
        for (const auto& t : res.at("targets")) ts.push_back(parse_circle_point(t.get<std::string>()));
        ok = verify_kronecker(xs, ts, parse_rational(res.at("eps").get<std::string>()),
                              Int(res.at("solution").at("n").get<std::string>()), 128);
        checked = 1;
      }
    } else if (name == "relation") {
      if (res.contains("relation")) {
        std::vector<CirclePoint> xs;
        for (const auto& x : res.at("points")) xs.push_back(parse_circle_point(x.get<std::string>()));
        CirclePoint s;
        std::size_t i = 0;
        for (const auto& c : res.at("relation").at("coefficients")) s = s + pair(Int(c.get<std::string>()), xs.at(i++));
        ok = s == CirclePoint();
        checked = 1;
      }
    } else if (name == "su-finite") {
      FiniteEventuallyPeriodic u = load_finite_sequence(spec);
      ok = su_finite(u.group, u).str() == res.at("subgroup").get<std::string>();
      checked = 1;
    } else {
      Report again = run_command(name, spec);
      json a = again.json.at("result"), b = res;
      ok = a == b;
      checked = 1;
    }
    o.result["checked"] = checked;
    o.result["ok"] = ok;
    o.code = ok ? kExitVerified : kExitViolated;
  } catch (const std::exception& e) {
    o.code = kExitInputError;
    o.result = json{{"error", {{"type", "recheck"}, {"message", e.what()}}}};
  }
  j["status"] = status_name(o.code);
  j["exit_code"] = o.code;
  j["result"] = o.result;
  j["asserted"] = json::array();
  j["timing_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  rep.exit_code = o.code;
  return rep;
}

}  // namespace charsub
