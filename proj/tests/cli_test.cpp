#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "msa/cli.hpp"

namespace msa::cli {
namespace {

using nlohmann::json;

std::string data(const std::string& name) { return std::string(MSA_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

TEST(Cli, ProveDiaTopInD) {
  Captured r = run_captured({"prove", "--logic", "D", "--formula", "(dia T)"});
  EXPECT_EQ(r.code, Ok);
  EXPECT_NE(r.out.find("Provable"), std::string::npos);
}

TEST(Cli, ProveDiaTopInKEmitsCountermodel) {
  const std::string path = temp_path("cm.json");
  std::remove(path.c_str());
  Captured r = run_captured({"prove", "--logic", "K", "--formula", "(dia T)", "--countermodel", path});
  EXPECT_EQ(r.code, Negative);
  json cm = json::parse(slurp(path));
  EXPECT_EQ(cm["worlds"].size(), 1u);
  EXPECT_TRUE(cm["edges"].empty());
}

TEST(Cli, ProveStructured) {
  Captured r = run_captured({"prove", "--logic", "T", "--formula", "(imp (box (g p)) (g p))", "--structured"});
  EXPECT_EQ(r.code, Ok);
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["results"][0]["verdict"], "Provable");
  EXPECT_TRUE(doc.contains("bounds"));
  EXPECT_EQ(doc["exit_code"], 0);
}

TEST(Cli, ProveQuantifiedUsesDomainBound) {
  Captured r = run_captured({"prove", "--formula", "(imp (g f) (c 0 (g f)))", "--sig", data("cli_sig.txt"),
                             "--domain-bound", "2", "--structured"});
  EXPECT_EQ(r.code, Ok) << r.err;
  EXPECT_EQ(json::parse(r.out)["bounds"]["domain_bound"], 2);
}

TEST(Cli, BudgetExceeded) {
  Captured r = run_captured({"prove", "--logic", "S4", "--budget", "1", "--formula",
                             "(imp (box (or (g p) (g q))) (or (box (g p)) (dia (g q))))"});
  EXPECT_EQ(r.code, Budget);
}

TEST(Cli, CorrespondThreeWorlds) {
  Captured r = run_captured({"correspond", "--max-worlds", "3"});
  EXPECT_EQ(r.code, Ok);
  EXPECT_NE(r.out.find("Condition on R"), std::string::npos);
  EXPECT_NE(r.out.find("Discrepancies: 0"), std::string::npos);
}

TEST(Cli, CorrespondFrameFile) {
  Captured r = run_captured({"correspond", "--file", data("chain3.json"), "--schema", "4", "--structured"});
  EXPECT_EQ(r.code, Ok) << r.err;
  json doc = json::parse(r.out);
  EXPECT_FALSE(doc["frame"]["transitive"]);
  EXPECT_FALSE(doc["schemas"][0]["valid"]);
  EXPECT_TRUE(doc["schemas"][0].contains("witness"));
}

TEST(Cli, Normalize) {
  Captured r = run_captured({"normalize", "--formula", "(not (not (g p)))", "--structured"});
  EXPECT_EQ(r.code, Ok);
  EXPECT_EQ(json::parse(r.out)["results"][0]["normal_form"], "(g p)");
}

TEST(Cli, CheckIdentity) {
  EXPECT_EQ(run_captured({"check-identity", "--name", "L1", "--trials", "20"}).code, Ok);
  EXPECT_EQ(run_captured({"check-identity", "--name", "ax1-as-printed", "--trials", "200"}).code, Negative);
  EXPECT_EQ(run_captured({"check-identity", "--name", "nope"}).code, Usage);
}

TEST(Cli, CheckAxioms) {
  Captured r = run_captured({"check-axioms", "--systems", "10", "--trials", "20", "--structured"});
  EXPECT_EQ(r.code, Ok);
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["bounds"]["systems"], 10);
  bool printed_failed = false;
  for (const auto& a : doc["axioms"]) {
    if (a["name"] == "ax1-as-printed") printed_failed = !a["pass"].get<bool>();
  }
  EXPECT_TRUE(printed_failed);
}

TEST(Cli, Interpolate) {
  Captured r = run_captured({"interpolate", "--formula", "(and (g p) (g q))", "--right", "(or (g p) (g r))",
                             "--structured"});
  EXPECT_EQ(r.code, Ok);
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["results"][0]["interpolant"], "(g p)");
  EXPECT_TRUE(doc["results"][0]["left_implication"]);
  EXPECT_EQ(run_captured({"interpolate", "--formula", "(g p)", "--right", "(g q)"}).code, Negative);
}

TEST(Cli, SaturateAndCountermodel) {
  EXPECT_EQ(run_captured({"saturate", "--formula", "(dia (g p))", "--right", "(g p)"}).code, Ok);
  EXPECT_EQ(run_captured({"saturate", "--formula", "(g p)", "--right", "(g p)"}).code, Negative);
  Captured r = run_captured({"countermodel", "--formula", "(dia (g p))", "--right", "(g p)", "--structured"});
  EXPECT_EQ(r.code, Ok);
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["results"][0]["system"]["worlds"].size(), 2u);
  EXPECT_TRUE(doc["bounds"].contains("domain_bound"));
}

TEST(Cli, Richness) {
  EXPECT_EQ(run_captured({"richness", "--sigma", "suc", "--pi", "pred", "--n-max", "5", "--window", "16"}).code, Ok);
  EXPECT_EQ(run_captured({"richness", "--file", data("identity_semigroup.txt")}).code, Negative);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_captured({}).code, Usage);
  EXPECT_EQ(run_captured({"frobnicate"}).code, Usage);
  EXPECT_EQ(run_captured({"prove"}).code, Usage);
  EXPECT_EQ(run_captured({"prove", "--logic", "B", "--formula", "(g p)"}).code, Usage);
  EXPECT_EQ(run_captured({"prove", "--formula", "(g p"}).code, Usage);
  EXPECT_EQ(run_captured({"correspond", "--max-worlds", "0"}).code, Usage);
  EXPECT_EQ(run_captured({"prove", "--file", "/nonexistent/formulas"}).code, Usage);
}

TEST(Cli, OutFile) {
  const std::string path = temp_path("out.json");
  Captured r = run_captured({"correspond", "--max-worlds", "2", "--structured", "--out", path});
  EXPECT_EQ(r.code, Ok);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(path))["report"]["frames"], 18);
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> runs{
      {"check-axioms", "--systems", "5", "--trials", "10", "--seed", "9", "--structured"},
      {"check-identity", "--name", "T5-4(ii)", "--trials", "30", "--seed", "4", "--structured"},
      {"countermodel", "--file", data("saturation_seeds.json"), "--structured"},
      {"interpolate", "--formula", "(box (and (g p) (g q)))", "--right", "(box (g p))", "--structured"}};
  for (const auto& args : runs) {
    Captured a = run_captured(args), b = run_captured(args);
    EXPECT_EQ(a.code, b.code) << args[0];
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

}  // namespace
}  // namespace msa::cli
