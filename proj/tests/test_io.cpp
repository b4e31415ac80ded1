#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "airsea/empirical_pdf.hpp"
#include "airsea/result_table.hpp"
#include "airsea/scenario_io.hpp"

using namespace airsea;

namespace {

std::string valid_csv() {
  std::ostringstream os;
  os << "angle_deg,density_per_deg\n";
  for (int i = 0; i < 20; ++i) {
    const double a = 2.5 + 5.0 * i;
    const double d = (a < 50.0) ? 0.02 : 0.0;  // flat box of area ~1
    os << a << "," << d << "\n";
  }
  return os.str();
}

}  // namespace

TEST(EmpiricalPdfCsv, LoadsValidFile) {
  std::istringstream in(valid_csv());
  const EmpiricalPdf pdf = EmpiricalPdf::from_csv(in);
  EXPECT_EQ(pdf.size(), 20u);
  EXPECT_NEAR(pdf.grid_resolution_deg, 5.0, 1e-12);
  EXPECT_NEAR(pdf.trapezoid_area(), 0.95, 1e-12);
  EXPECT_NEAR(pdf.density_at(5.0), 0.02, 1e-12);   // interpolated
  EXPECT_EQ(pdf.density_at(-3.0), 0.0);            // outside the table
}

TEST(EmpiricalPdfCsv, ErrorsCarryLineNumbers) {
  {
    std::istringstream in("angle_deg,density_per_deg\n1.0,0.5\n2.0,abc\n");
    try {
      EmpiricalPdf::from_csv(in);
      FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
  }
  {
    std::istringstream in("bad_header\n1.0,0.5\n");
    EXPECT_THROW(EmpiricalPdf::from_csv(in), ConfigError);
  }
  {
    std::istringstream in("angle_deg,density_per_deg\n1.0\n");
    EXPECT_THROW(EmpiricalPdf::from_csv(in), ConfigError);
  }
}

TEST(EmpiricalPdfCsv, ValidationGates) {
  // descending angles
  std::string body = "angle_deg,density_per_deg\n";
  for (int i = 0; i < 10; ++i) body += std::to_string(10 - i) + ",0.1\n";
  std::istringstream desc(body);
  EXPECT_THROW(EmpiricalPdf::from_csv(desc), ConfigError);

  // negative density
  std::istringstream neg(
      "angle_deg,density_per_deg\n1,0.1\n2,0.1\n3,0.1\n4,-0.1\n5,0.1\n6,0.1\n7,0.1\n8,0.1\n9,"
      "0.1\n10,0.1\n");
  EXPECT_THROW(EmpiricalPdf::from_csv(neg), ConfigError);

  // too few rows
  std::istringstream tiny("angle_deg,density_per_deg\n1,0.5\n2,0.5\n");
  EXPECT_THROW(EmpiricalPdf::from_csv(tiny), ConfigError);

  // area far from one
  std::string small_area = "angle_deg,density_per_deg\n";
  for (int i = 0; i < 10; ++i) small_area += std::to_string(i + 1.0) + ",0.01\n";
  std::istringstream sa(small_area);
  EXPECT_THROW(EmpiricalPdf::from_csv(sa), ConfigError);
}

TEST(ResultTable, ProvenanceAndShape) {
  ResultTable t({"a", "b"});
  t.set_provenance("seed", "7");
  t.add_row({"1", "2"});
  EXPECT_THROW(t.add_row({"only-one"}), ConfigError);

  std::ostringstream o1, o2;
  t.write_csv(o1);
  t.write_csv(o2);
  EXPECT_EQ(o1.str(), o2.str());  // no timestamps, nothing volatile
  EXPECT_NE(o1.str().find("# tool=airsea"), std::string::npos);
  EXPECT_NE(o1.str().find("# seed=7"), std::string::npos);
  EXPECT_NE(o1.str().find("a,b\n1,2\n"), std::string::npos);
}

TEST(ResultTable, StableHashAndFormatting) {
  EXPECT_EQ(fnv1a64("abc"), 0xe71fa2190541574bull);
  EXPECT_EQ(format_cell(0.25), "0.25");
  EXPECT_EQ(format_cell(1.111763704526097e-06), "1.11176370453e-06");
}

TEST(ScenarioJson, DefaultsAndOverrides) {
  const LinkScenario base = scenario_from_json(nlohmann::json::object());
  EXPECT_NEAR(base.geometry.total_m(), 20.0, 1e-12);
  EXPECT_EQ(slope_model_name(base.slope_model), "mw");

  nlohmann::json j = {{"z_w_m", 30.0}, {"z_a_m", 30.0}, {"fov_deg", 30.0},
                      {"slope_model", "cm"}, {"wind_speed_mps", 14.0}};
  const LinkScenario s = scenario_from_json(j);
  EXPECT_NEAR(s.geometry.total_m(), 60.0, 1e-12);
  EXPECT_EQ(slope_model_name(s.slope_model), "cm");
  EXPECT_NEAR(std::get<CoxMunkModel>(s.slope_model).slope_variance, 0.003 + 0.00512 * 14.0,
              1e-12);
}

TEST(ScenarioJson, RejectsUnknownAndConflictingKeys) {
  EXPECT_THROW(scenario_from_json({{"z_total_m", 60.0}}), ConfigError);
  EXPECT_THROW(scenario_from_json({{"lambertian_m", 20.0}, {"tx_half_angle_deg", 15.0}}),
               ConfigError);
  EXPECT_THROW(scenario_from_json({{"slope_model", "gauss"}}), ConfigError);
  EXPECT_THROW(scenario_from_json({{"slope_model", "empirical"}}), ConfigError);
  EXPECT_THROW(scenario_from_json({{"mw_law", "cubic"}}), ConfigError);
  EXPECT_THROW(scenario_from_json({{"fov_deg", "wide"}}), ConfigError);
}

TEST(ScenarioJson, HalfAngleAndPowerLaw) {
  const LinkScenario s = scenario_from_json({{"tx_half_angle_deg", 15.0}});
  EXPECT_NEAR(s.tx.lambertian_order, 19.9937, 1e-3);

  const LinkScenario p = scenario_from_json({{"mw_law", "power"}, {"wind_speed_mps", 8.7}});
  const auto& mw = std::get<ModifiedWeibullModel>(p.slope_model);
  EXPECT_NEAR(mw.shape_k, 1.8108, 5e-4);
}

TEST(ScenarioJson, HashTracksContent) {
  const LinkScenario a = default_scenario();
  LinkScenario b = a;
  EXPECT_EQ(scenario_hash_hex(a), scenario_hash_hex(b));
  b.rx.fov_deg = 20.0;
  EXPECT_NE(scenario_hash_hex(a), scenario_hash_hex(b));
}

TEST(ScenarioJson, MissingFileIsConfigError) {
  EXPECT_THROW(load_scenario("/nonexistent/path/to/config.json"), ConfigError);
}
