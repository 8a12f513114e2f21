#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_support.hpp"

using namespace sorte;
using nlohmann::json;

namespace {

json toy_document() {
  return json{{"agents", {"bank_a", "bank_b"}},
              {"scenarios", {"up", "down"}},
              {"probs", {0.5, 0.5}},
              {"endowments", {{0.0, 0.0}, {0.0, 0.0}}},
              {"utility", {{"family", "exponential"}, {"alphas", {1.0, 2.0}}}},
              {"constraints", {{"variant", "full"}}},
              {"budget_A", 0.0}};
}

}  // namespace

TEST(IoTest, ParsesFullDocument) {
  const ScenarioDocument doc = parse_scenario_document(toy_document());
  EXPECT_EQ(doc.model.num_agents(), 2);
  EXPECT_EQ(doc.model.num_scenarios(), 2);
  EXPECT_EQ(doc.model.agent_ids()[1], "bank_b");
  EXPECT_EQ(doc.alphas, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(doc.spec.variant(), SharingVariant::FullSharing);
  EXPECT_DOUBLE_EQ(doc.budget_A, 0.0);
}

TEST(IoTest, MissingKeyIsSchemaError) {
  json doc = toy_document();
  doc.erase("probs");
  EXPECT_THROW(parse_scenario_document(doc), SchemaError);
}

TEST(IoTest, WrongTypeIsSchemaError) {
  json doc = toy_document();
  doc["probs"] = "half-half";
  EXPECT_THROW(parse_scenario_document(doc), SchemaError);
}

TEST(IoTest, BadProbabilitiesAreValidationErrors) {
  json doc = toy_document();
  doc["probs"] = {0.6, 0.5};
  EXPECT_THROW(parse_scenario_document(doc), ValidationError);
  doc["probs"] = {1.0, 0.0};
  EXPECT_THROW(parse_scenario_document(doc), ValidationError);
}

TEST(IoTest, RaggedEndowmentsRejected) {
  json doc = toy_document();
  doc["endowments"] = {{0.0, 0.0}, {0.0}};
  EXPECT_THROW(parse_scenario_document(doc), ValidationError);
}

TEST(IoTest, UnknownConstraintVariantRejected) {
  json doc = toy_document();
  doc["constraints"] = {{"variant", "polar_oracle"}};
  EXPECT_THROW(parse_scenario_document(doc), SchemaError);
}

TEST(IoTest, ClusterDocumentRoundTrip) {
  json doc = toy_document();
  doc["agents"] = {"a", "b", "c", "d"};
  doc["endowments"] = {{0.1, -0.1}, {0.2, -0.2}, {0.0, 0.3}, {-0.3, 0.0}};
  doc["utility"] = {{"family", "exponential"},
                    {"alphas", {1.0, 2.0, 0.5, 1.5}},
                    {"gammas", {1.0, 1.0, 2.0, 1.0}}};
  doc["constraints"] = {{"variant", "cluster"}, {"groups", {{0, 1}, {2, 3}}}};
  const ScenarioDocument parsed = parse_scenario_document(doc);
  EXPECT_EQ(parsed.spec.variant(), SharingVariant::Cluster);
  EXPECT_EQ(parsed.gammas.size(), 4u);
  EXPECT_EQ(parsed.profile[2].weight(), 2.0);
}

TEST(IoTest, CsvVectorAndMatrix) {
  Matrix m(2, 2, 0.0);
  m(0, 0) = 1.0;
  m(0, 1) = -0.5;
  m(1, 0) = 0.25;
  m(1, 1) = 0.0;
  EXPECT_EQ(to_csv({"up", "down"}, m), "up,down\n1,-0.5\n0.25,0\n");
  EXPECT_EQ(to_csv({"up", "down"}, std::vector<double>{0.1, 0.2}),
            "up,down\n0.10000000000000001,0.20000000000000001\n");
  EXPECT_EQ(to_csv({"up", "down"}, m, {"a", "b"}), "id,up,down\na,1,-0.5\nb,0.25,0\n");
}

TEST(IoTest, SolutionJsonRoundTripVerifies) {
  const ScenarioDocument doc = parse_scenario_document(toy_document());
  const EquilibriumSolution sol = solve_sorte(doc.model, doc.profile, doc.spec, doc.budget_A);
  const json j = solution_to_json(doc.model, sol);
  const EquilibriumSolution claimed = solution_from_json(doc.model, j);

  const VerifyReport direct = verify_sorte(doc.model, doc.profile, doc.spec, doc.budget_A, sol);
  const VerifyReport round =
      verify_sorte(doc.model, doc.profile, doc.spec, doc.budget_A, claimed);
  EXPECT_TRUE(direct.pass);
  EXPECT_TRUE(round.pass);
  ASSERT_EQ(direct.checks.size(), round.checks.size());
  for (std::size_t i = 0; i < direct.checks.size(); ++i)
    EXPECT_EQ(direct.checks[i].pass, round.checks[i].pass);
}

TEST(IoTest, SolutionJsonRejectsWrongShape) {
  const ScenarioDocument doc = parse_scenario_document(toy_document());
  const EquilibriumSolution sol = solve_sorte(doc.model, doc.profile, doc.spec, doc.budget_A);
  json j = solution_to_json(doc.model, sol);
  j["Y"] = {{0.0, 0.0}};
  EXPECT_THROW(solution_from_json(doc.model, j), ValidationError);
}

TEST(IoTest, FormatDoubleIsRoundTrippable) {
  for (double x : {0.1, -1.0 / 3.0, 1e-17, 123456.789, 0.0}) {
    const std::string s = format_double(x);
    EXPECT_EQ(std::stod(s), x);
  }
}
