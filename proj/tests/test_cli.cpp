#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "charsub/commands.hpp"

using namespace charsub;
using json = nlohmann::ordered_json;

namespace {

SpecFile spec(const std::string& text) { return SpecFile::parse(text); }

json strip_timing(json j) {
  j.erase("timing_ms");
  return j;
}

}  // namespace

TEST(SpecParser, SectionsAndErrors) {
  SpecFile s = spec("command = akm\n[sequence]\n  u = geometric(1, 3)  # comment\n");
  ASSERT_NE(s.find("sequence", "u"), nullptr);
  EXPECT_EQ(s.find("sequence", "u")->value, "geometric(1, 3)");
  EXPECT_EQ(s.find("sequence", "u")->line, 3);
  EXPECT_EQ(s.find("sequence", "u")->column, 7);
  try {
    spec("[a]\nx = 1\nx = 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(spec("[a\n"), ParseError);
  EXPECT_THROW(spec("novalue\n"), ParseError);
}

TEST(SpecParser, Values) {
  EXPECT_EQ(parse_rational(" -3/6 "), Rat(-1, 2));
  EXPECT_EQ(parse_int_list("[1, -2, 3]"), (std::vector<Int>{1, -2, 3}));
  EXPECT_EQ(parse_element("(1, 5)", FinAbGroup({2, 4})), (Coords{1, 1}));
  EXPECT_THROW(parse_element("(1)", FinAbGroup({2, 4})), InvalidArgument);
  EXPECT_EQ(seq_str(parse_integer_sequence("recurrence([1,1],[0,1])")), seq_str(LinearRecurrence{{1, 1}, {0, 1}}));
  EXPECT_THROW(parse_integer_sequence("geometric(1)"), InvalidArgument);
}

TEST(Cli, MembershipNotIn) {
  Report r = run_command("membership", spec("[sequence]\nu = geometric(1,2)\n[points]\nx = 1/3\n"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.json["result"]["points"][0]["verdict"]["kind"], "NotIn");
  EXPECT_EQ(r.json["schema"], kReportSchema);
}

TEST(Cli, SuFinite) {
  Report r = run_command("su-finite", spec("[group]\nfactors = Z4\n[sequence]\nperiod = [2]\n"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.json["result"]["elements"], json::array({"0", "2"}));
}

TEST(Cli, MembershipUnknown) {
  Report r = run_command("membership", spec("[sequence]\nu = explicit([1,2,3])\n[points]\nx = 1/5\n"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.json["result"]["points"][0]["verdict"]["kind"], "Unknown");
}

TEST(Cli, ParseErrorsCarryPosition) {
  Report r = run_command("membership", spec("[sequence]\nu = geometric(1,2)\n[points]\nx = 1/3, 2/0\n"));
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.json["result"]["error"]["line"], 4);
  EXPECT_EQ(r.json["result"]["error"]["column"], 5);
  EXPECT_EQ(run_command("nonsense", SpecFile()).exit_code, 3);
  EXPECT_EQ(run_command("relation", SpecFile()).exit_code, 3);
}

TEST(Cli, AssertedFlagsAreReported) {
  Report r = run_command("radical", spec("[sequence]\nu = factorial(1)\n[params]\nprobe_bound = 10\nt_sequence = true\n"));
  EXPECT_EQ(r.json["asserted"], json::array({"T-sequence: asserted"}));
}

class Fixtures : public ::testing::TestWithParam<std::string> {};

TEST_P(Fixtures, DeterministicAndRechecks) {
  std::ifstream in(GetParam());
  std::stringstream ss;
  ss << in.rdbuf();
  SpecFile s = SpecFile::parse(ss.str());
  const std::string name = s.find("", "command")->value;
  Report a = run_command(name, s), b = run_command(name, s);
  EXPECT_EQ(strip_timing(a.json).dump(), strip_timing(b.json).dump());
  Report re = recheck_report(json::parse(a.json.dump()));
  EXPECT_EQ(re.exit_code, 0) << re.json.dump(2);
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(CHARSUB_SPEC_DIR))
    if (e.path().extension() == ".spec" && e.path().stem() != "gclosure_harmonic") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

INSTANTIATE_TEST_SUITE_P(Specs, Fixtures, ::testing::ValuesIn(fixture_files()),
                         [](const auto& info) {
                           std::string n = std::filesystem::path(info.param).stem().string();
                           for (auto& c : n)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return n;
                         });
