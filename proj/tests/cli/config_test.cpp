#include <gtest/gtest.h>

#include <filesystem>

#include "config.hpp"

using namespace ethlab::cli;

namespace {

std::vector<Diagnostic> diagnose(const std::string& yaml) { return validate(yaml); }

bool mentions(const std::vector<Diagnostic>& ds, const std::string& field) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.field == field; });
}

std::string dump(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) out += d.to_string() + "\n";
  return out;
}

}  // namespace

TEST(Config, ValidConfigHasNoDiagnostics) {
  const auto ds = diagnose(R"(
model: {L: 8, N: 3, t_prime: 0.5, V_prime: 0.5}
sectors: [1, 2]
analyses: [spectrum, spacing]
)");
  EXPECT_TRUE(ds.empty()) << dump(ds);
}

TEST(Config, ShippedConfigsAreValid) {
  for (const auto& entry : std::filesystem::directory_iterator(ETHLAB_CONFIG_DIR)) {
    const auto parsed = load_config(entry.path());
    EXPECT_TRUE(parsed.ok()) << entry.path() << "\n" << dump(parsed.diagnostics);
  }
}

TEST(Config, TooManyParticles) {
  const auto ds = diagnose("model: {L: 6, N: 7}\nanalyses: [spectrum]\n");
  ASSERT_EQ(ds.size(), 1U) << dump(ds);
  EXPECT_EQ(ds[0].field, "model.N");
  EXPECT_EQ(ds[0].line, 1);
}

TEST(Config, MomentumOutOfRange) {
  const auto ds = diagnose("model: {L: 6, N: 2}\nsectors: [1, 6]\nanalyses: [spectrum]\n");
  ASSERT_EQ(ds.size(), 1U) << dump(ds);
  EXPECT_EQ(ds[0].field, "model.sectors");
  EXPECT_NE(ds[0].message.find("k=6"), std::string::npos);
}

TEST(Config, AllProblemsReportedTogether) {
  const auto ds = diagnose(R"(
model:
  L: 6
  N: 2
  colour: red
analyses: [spectrum, bogus, spectrum]
observable: {kind: density_product, i: 2, j: 8}
spacing: {bins: 0}
extra: 1
)");
  EXPECT_TRUE(mentions(ds, "model.colour")) << dump(ds);
  EXPECT_TRUE(mentions(ds, "extra")) << dump(ds);
  EXPECT_TRUE(mentions(ds, "spacing.bins")) << dump(ds);
  EXPECT_TRUE(mentions(ds, "observable")) << dump(ds);
  EXPECT_EQ(std::count_if(ds.begin(), ds.end(), [](auto& d) { return d.field == "analyses"; }), 2);
  for (const auto& d : ds) EXPECT_GT(d.line, 0) << d.to_string();
}

TEST(Config, LineNumbersPointAtTheKey) {
  const auto ds = diagnose("model:\n  L: 6\n  N: 2\n  V: abc\nanalyses: [spectrum]\n");
  ASSERT_EQ(ds.size(), 1U) << dump(ds);
  EXPECT_EQ(ds[0].field, "model.V");
  EXPECT_EQ(ds[0].line, 4);
}

TEST(Config, AnalysisNeedsMatchingModel) {
  EXPECT_TRUE(mentions(diagnose("model: {L: 6, N: 2}\nanalyses: [rmt]\n"), "analyses"));
  EXPECT_TRUE(mentions(diagnose("model: {type: deutsch, n: 50}\nanalyses: [spacing]\n"), "analyses"));
  EXPECT_TRUE(diagnose("model: {type: deutsch, n: 50}\nanalyses: [rmt]\n").empty());
}

TEST(Config, QuenchAndEntropyChecks) {
  auto ds = diagnose(R"(
model: {L: 8, N: 3}
analyses: [quench, entropy]
quench: {initial: {type: basis_state, occupied: [0, 1, 9]}}
entropy: {cuts: [0, 4, 8]}
)");
  EXPECT_TRUE(mentions(ds, "quench.initial.occupied")) << dump(ds);
  EXPECT_EQ(std::count_if(ds.begin(), ds.end(), [](auto& d) { return d.field == "entropy.cuts"; }), 2)
      << dump(ds);
}

TEST(Config, ModelsListAndDefaults) {
  const auto parsed = parse_config(R"(
models:
  - {name: a, L: 9, N: 3, sectors: [2]}
  - {name: b, L: 9, N: 3, t_prime: 0.9}
sectors: [1, 4]
analyses: []
seed: 12
)");
  ASSERT_TRUE(parsed.ok()) << dump(parsed.diagnostics);
  const auto& cfg = parsed.config;
  ASSERT_EQ(cfg.models.size(), 2U);
  EXPECT_EQ(std::get<HcbModel>(cfg.models[0].model).sectors, std::vector<int>{2});
  EXPECT_EQ(std::get<HcbModel>(cfg.models[1].model).sectors, (std::vector<int>{1, 4}));
  EXPECT_DOUBLE_EQ(std::get<HcbModel>(cfg.models[1].model).params.t_prime, 0.9);
  EXPECT_TRUE(cfg.analyses.empty());
  EXPECT_EQ(cfg.seed, 12U);
}

TEST(Config, DuplicateModelNames) {
  const auto ds = diagnose("models:\n  - {name: a, L: 5, N: 2}\n  - {name: a, L: 6, N: 2}\n");
  EXPECT_TRUE(mentions(ds, "models[1].name")) << dump(ds);
}

TEST(Config, SyntaxError) {
  const auto ds = diagnose("model: {L: 6, N: 2\n");
  ASSERT_EQ(ds.size(), 1U);
  EXPECT_EQ(ds[0].field, "<document>");
}
