#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"

namespace {

using Json = nlohmann::json;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

std::string fixture(const std::string& name) { return std::string(RESILOG_FIXTURE_DIR) + "/" + name; }

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = resilog::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json machine(std::vector<std::string> args, int expected_code = 0) {
  args.insert(args.begin(), {"--format", "machine"});
  const Result r = run(args);
  EXPECT_EQ(r.code, expected_code) << r.out << r.err;
  return Json::parse(r.out);
}

std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, CheckP2) {
  const Json doc = machine({"check", fixture("p2_example.toml")});
  EXPECT_EQ(doc["schema"], "resilog/1");
  EXPECT_EQ(doc["command"], "check");
  EXPECT_TRUE(doc["tangent"].get<bool>());
  ASSERT_EQ(doc["charts"].size(), 3U);
  EXPECT_EQ(doc["charts"][0]["cofactor"], "4");
  EXPECT_EQ(doc["charts"][1]["cofactor"], "-1");
  EXPECT_EQ(doc["charts"][0]["field"][0], "5*x1");
}

TEST(Cli, CheckNonTangentExitsTwo) {
  const Json doc = machine({"check", fixture("non_tangent.toml")}, 2);
  EXPECT_FALSE(doc["tangent"].get<bool>());
  EXPECT_EQ(doc["remainder"], "1");
  const Result table = run({"check", fixture("non_tangent.toml")});
  EXPECT_EQ(table.code, 2);
  EXPECT_NE(table.out.find("remainder"), std::string::npos);
}

TEST(Cli, MalformedExitsOneWithPosition) {
  const Result r = run({"check", fixture("malformed.toml")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("3:32"), std::string::npos);
  const Json doc = machine({"check", fixture("malformed.toml")}, 1);
  EXPECT_EQ(doc["error"]["code"], "ParseError");
  EXPECT_EQ(doc["error"]["line"], 3);
  EXPECT_EQ(doc["error"]["column"], 32);
}

TEST(Cli, SchemaAndIoErrorsExitOne) {
  EXPECT_EQ(machine({"check", fixture("missing_divisor.toml")}, 1)["error"]["code"], "SchemaError");
  EXPECT_EQ(run({"check", fixture("does_not_exist.toml")}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--format", "xml", "check", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"verify", "--i", "5", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"verify", "--i", "x", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"zeros", "--box", "2,1", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"zeros", "--box", "1", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"residues", "--eps-levels", "1e-3", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"residues", "--grid", "0", "--numeric", fixture("p2_example.toml")}).code, 1);
  EXPECT_EQ(run({"cyclic"}).code, 1);
  EXPECT_EQ(run({"cyclic", "--m", "1"}).code, 1);
  const Result help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("verify"), std::string::npos);
}

TEST(Cli, VerifyP3AllIdentitiesExact) {
  const Json doc = machine({"verify", fixture("p3_example.toml")});
  EXPECT_EQ(doc["certification"], "proved_on_instance");
  EXPECT_TRUE(doc["all_hold"].get<bool>());
  const std::array<const char*, 3> want{"37", "7", "1"};
  ASSERT_EQ(doc["identities"].size(), 3U);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(doc["identities"][i]["var"]["total"], want[i]);
    EXPECT_EQ(doc["identities"][i]["var"]["gap"], "0");
    EXPECT_TRUE(doc["identities"][i]["holds"].get<bool>());
  }
}

TEST(Cli, ResiduesSelection) {
  const Json doc = machine({"residues", "--i", "1", fixture("p2_example.toml")});
  ASSERT_EQ(doc["records"].size(), 2U);
  EXPECT_EQ(doc["records"][0]["var"], "4/5");
  EXPECT_EQ(doc["records"][1]["var"], "1/5");
  const Json all = machine({"residues", "--i", "all", fixture("p2_example.toml")});
  EXPECT_EQ(all["records"].size(), 5U);
  EXPECT_EQ(all["records"][0]["var"], "14/5");
}

TEST(Cli, VerifyIncompletePointsExitsThree) {
  const Json doc = machine({"verify", "--points", fixture("p2_one_point.toml"), fixture("p2_example.toml")}, 3);
  EXPECT_EQ(doc["certification"], "partial");
  EXPECT_FALSE(doc["all_hold"].get<bool>());
}

TEST(Cli, NumericCertificationExitsZero) {
  const Json doc = machine({"verify", fixture("jordan_p2.toml")});
  EXPECT_EQ(doc["certification"], "numeric");
  EXPECT_TRUE(doc["all_hold"].get<bool>());
  const Json& rec = doc["records"][0];
  EXPECT_EQ(rec["method"], "perturbation");
  EXPECT_TRUE(rec["ordinary"].contains("re"));
  EXPECT_TRUE(rec["ordinary"].contains("err"));
}

TEST(Cli, PoincareAndSurface) {
  const Json p2 = machine({"poincare", fixture("p2_example.toml")});
  EXPECT_EQ(p2["i_used"], 1);
  EXPECT_EQ(p2["total_log_residue"], "2");
  EXPECT_TRUE(p2["bound_asserted"].get<bool>());
  const Json p3 = machine({"poincare", fixture("p3_example.toml")});
  EXPECT_EQ(p3["i_used"], 0);
  EXPECT_EQ(p3["total_log_residue"], "27");
  EXPECT_TRUE(p3["bound_asserted"].get<bool>());
  const Json s = machine({"surface", fixture("p2_example.toml")});
  EXPECT_EQ(s["points"][0]["gsv"], "1");
  EXPECT_EQ(s["points"][1]["gsv"], "1");
  EXPECT_EQ(s["points"][0]["cs"], "4/5");
  EXPECT_EQ(s["points"][1]["cs"], "1/5");
  EXPECT_EQ(s["gsv_total"], "2");
  EXPECT_EQ(s["cs_total"], "1");
  EXPECT_EQ(machine({"surface", fixture("p3_example.toml")}, 2)["error"]["code"], "NotSupported");
}

TEST(Cli, ZerosModes) {
  const Json exact = machine({"zeros", fixture("p3_example.toml")});
  EXPECT_EQ(exact["zeros"]["count"], 4);
  EXPECT_EQ(exact["zeros"]["mode"], "exact_linear");
  EXPECT_EQ(machine({"zeros", fixture("quadratic_p2.toml")}, 2)["error"]["code"], "NonLinearField");
  const Json numeric = machine({"zeros", "--numeric", fixture("quadratic_p2.toml")});
  EXPECT_EQ(numeric["zeros"]["count"], 7);
  EXPECT_TRUE(numeric["zeros"]["complete"].get<bool>());
  const Json narrow = machine({"zeros", "--numeric", "--box", "0.2,3", fixture("quadratic_p2.toml")});
  EXPECT_FALSE(narrow["zeros"]["complete"].get<bool>());
}

TEST(Cli, Birational) {
  const Json a2 = machine({"discrepancy", fixture("a2_chain.toml")});
  EXPECT_EQ(a2["a"], Json::array({"0", "0"}));
  EXPECT_EQ(a2["classification"], "canonical");
  EXPECT_TRUE(a2["round_trip"].get<bool>());
  EXPECT_EQ(machine({"discrepancy", fixture("not_negative_definite.toml")}, 2)["error"]["code"],
            "NotNegativeDefinite");
  const Json c2 = machine({"cyclic", "--m", "2"});
  EXPECT_EQ(c2["classification"], "canonical");
  EXPECT_EQ(c2["a"], Json::array({"0"}));
  const Json c7 = machine({"cyclic", "--m", "7"});
  EXPECT_EQ(c7["a"], Json::array({"-5/7"}));
  EXPECT_EQ(c7["classification"], "log_terminal");
  EXPECT_EQ(c7["I_E"], "2");
}

TEST(Cli, MachineOutputIsDeterministic) {
  const std::vector<std::vector<std::string>> cases{
      {"--format", "machine", "verify", fixture("p3_example.toml")},
      {"--format", "machine", "zeros", "--numeric", fixture("quadratic_p2.toml")},
      {"--format", "machine", "verify", fixture("jordan_p2.toml")},
      {"--format", "machine", "residues", "--seed", "3", fixture("jordan_p2.toml")},
  };
  for (const auto& args : cases) {
    const Result a = run(args);
    const Result b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
}

TEST(Cli, TableRenderingHasNoTrailingWhitespace) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify", fixture("p2_example.toml")},
           {"surface", fixture("p2_example.toml")},
           {"verify", fixture("jordan_p2.toml")},
           {"cyclic", "--m", "5"},
           {"discrepancy", fixture("a2_chain.toml")}}) {
    const Result r = run(args);
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
      EXPECT_TRUE(line.empty() || line.back() != ' ') << "'" << line << "'";
    }
  }
}

// Reference outputs checked in under tests/golden.
struct GoldenCase {
  const char* file;
  std::vector<std::string> args;
};

TEST(Cli, GoldenFiles) {
  const std::vector<GoldenCase> cases{
      {"verify_p2.txt", {"verify", "P2"}},
      {"verify_p3.json", {"--format", "machine", "verify", "P3"}},
      {"surface_p2.json", {"--format", "machine", "surface", "P2"}},
      {"check_p2.txt", {"check", "P2"}},
      {"cyclic_7.json", {"--format", "machine", "cyclic", "--m", "7"}},
      {"discrepancy_a2.txt", {"discrepancy", "A2"}},
  };
  for (auto c : cases) {
    for (auto& a : c.args) {
      if (a == "P2") a = fixture("p2_example.toml");
      if (a == "P3") a = fixture("p3_example.toml");
      if (a == "A2") a = fixture("a2_chain.toml");
    }
    const Result r = run(c.args);
    EXPECT_EQ(r.code, 0);
    const std::string want = read(std::string(RESILOG_GOLDEN_DIR) + "/" + c.file);
    ASSERT_FALSE(want.empty()) << c.file;
    EXPECT_EQ(r.out, want) << c.file;
  }
}

// The installed executable: exit codes through a real process.
int run_process(const std::string& args) {
  const std::string cmd = std::string(RESILOG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliProcess, ExitCodes) {
  EXPECT_EQ(run_process("check " + fixture("p2_example.toml")), 0);
  EXPECT_EQ(run_process("check " + fixture("non_tangent.toml")), 2);
  EXPECT_EQ(run_process("check " + fixture("malformed.toml")), 1);
  EXPECT_EQ(run_process("verify " + fixture("p3_example.toml")), 0);
  EXPECT_EQ(run_process("verify --points " + fixture("p2_one_point.toml") + " " + fixture("p2_example.toml")), 3);
  EXPECT_EQ(run_process("discrepancy " + fixture("not_negative_definite.toml")), 2);
  EXPECT_EQ(run_process("cyclic --m 1"), 1);
  EXPECT_EQ(run_process(""), 1);
}

}  // namespace
