#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pvt/error.hpp"
#include "pvt/serialize.hpp"

using namespace pvt;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "pvt_serialize_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind parse_kind(const std::string& text) {
  try {
    model_from_json(json::parse(text));
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorKind::InvalidArgument;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(ModelJson, RoundTripIsExact) {
  auto model = vdw_compatible_model(VdwParams{1.3, 0.7, 0.9}, 2.0);
  model.mu1 = 0.01;
  model.mu2 = 0.02;
  model.g_ref = -0.5;
  model.alpha1 = Poly2{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6}};
  const auto doc = to_json(model);
  EXPECT_EQ(doc.at("coeffs").at("alpha1").size(), 6u);
  const auto back = model_from_json(json::parse(doc.dump()));
  EXPECT_EQ(back, model);
  EXPECT_EQ(model_hash(back), model_hash(model));
}

TEST(ModelJson, DocumentLayout) {
  const auto doc = to_json(landau_model(LandauPresetParams{}));
  for (const char* key : {"preset", "tref", "pref", "coeffs", "mu1", "mu2", "gref", "box"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc.at("preset"), "landau");
  for (const char* key : {"alpha1", "alpha2", "alpha3", "beta1", "beta2", "b"}) {
    EXPECT_TRUE(doc.at("coeffs").contains(key)) << key;
  }
}

TEST(ModelJson, PresetParameters) {
  const auto vdw = model_from_json(json::parse(R"({"preset":"vdw","params":{"a":1,"b":1,"R":1,"beta1":1}})"));
  EXPECT_EQ(vdw, vdw_compatible_model(VdwParams{1.0, 1.0, 1.0}, 1.0));
  EXPECT_EQ(model_from_json(json::parse(R"({"preset":"vdw"})")), vdw_compatible_model(VdwParams{}));
  const auto landau = model_from_json(json::parse(R"({"preset":"landau","params":{"a2_c":0.5}})"));
  LandauPresetParams params;
  params.a2_c = 0.5;
  EXPECT_EQ(landau, landau_model(params));
}

TEST(ModelJson, ScalarCoefficientsAndDefaults) {
  const auto model = model_from_json(json::parse(
      R"({"preset":"custom","tref":1,"pref":1,"coeffs":{"alpha1":0.5,"alpha2":[1,0.1],"alpha3":2,"beta1":1},
          "box":{"T_min":0.5,"T_max":1.5,"p_min":0.5,"p_max":1.5}})"));
  EXPECT_EQ(model.alpha1, Poly2::constant(0.5));
  EXPECT_EQ(model.alpha2, Poly2::linear(1.0, 0.1, 0.0));
  EXPECT_EQ(model.beta2, Poly2::constant(0.0));
  EXPECT_EQ(model.box.T_max, 1.5);
}

TEST(ModelJson, MalformedDocuments) {
  EXPECT_EQ(parse_kind(R"({"preset":"vdw","params":{"a":"x"}})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"preset":"custom"})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"preset":"nonsense","coeffs":{}})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"preset":"custom","coeffs":{"alpha1":[1,2,3,4,5,6,7]}})"), ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"({"preset":"custom","coeffs":{"alpha1":"x","alpha2":1,"alpha3":1,"beta1":1}})"),
            ErrorKind::ParseError);
  EXPECT_EQ(parse_kind(R"([1,2,3])"), ErrorKind::ParseError);
}

TEST(ModelJson, LoadFromFile) {
  const auto path = scratch_dir() / "model.json";
  write_atomic(path.string(), to_json(vdw_compatible_model(VdwParams{})).dump());
  EXPECT_EQ(load_model(path.string()), vdw_compatible_model(VdwParams{}));
  try {
    load_model((scratch_dir() / "absent.json").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(ModelHash, SensitiveToCoefficients) {
  auto a = vdw_compatible_model(VdwParams{});
  auto b = a;
  b.mu1 = 1e-12;
  EXPECT_NE(model_hash(a), model_hash(b));
  EXPECT_EQ(model_hash_hex(a).size(), 16u);
}

TEST(ResultJson, EquilibriumSetLayout) {
  const auto doc = to_json(reduced_steady_states(ReducedCoeffs{1.0, 0.0, 1.0, 0.0}));
  EXPECT_DOUBLE_EQ(doc.at("discriminant").get<double>(), 4.0);
  ASSERT_EQ(doc.at("roots").size(), 3u);
  EXPECT_EQ(doc.at("roots")[0].at("branch"), "minus");
  EXPECT_EQ(doc.at("roots")[0].at("stable"), true);
  EXPECT_EQ(doc.at("roots")[1].at("branch"), "zero");
  EXPECT_DOUBLE_EQ(doc.at("roots")[2].at("rho").get<double>(), 1.0);
}

TEST(ResultJson, TransitionReportLayout) {
  const auto doc = to_json(classify_local(ReducedCoeffs{0.0, 0.5, 1.0, 0.0}));
  EXPECT_EQ(doc.at("dynamic_type"), "III");
  EXPECT_EQ(doc.at("thermo_order"), "first");
  EXPECT_EQ(doc.at("leading_order"), 2);
}

TEST(FormatNumber, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 8.0 / 27.0, 1e22}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(NAN), "nan");
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(Csv, Headers) {
  EXPECT_EQ(first_line(critical_curve_csv(CriticalCurve{})), "p,T_phi,rho0");
  EXPECT_EQ(first_line(transition_rows_csv({})), "T,phi_plus,phi_minus,G_plus,G_zero");
  EXPECT_EQ(first_line(bifurcation_csv({})), "T,lambda,rho,branch,stability,marker");
  Trajectory scalar;
  scalar.samples.push_back({0.0, 0.5, NAN});
  EXPECT_EQ(trajectory_csv(scalar), "t,rho\n0,0.5\n");
  Trajectory coupled;
  coupled.coupled = true;
  coupled.samples.push_back({0.0, 0.5, 0.25});
  EXPECT_EQ(trajectory_csv(coupled), "t,rho,S\n0,0.5,0.25\n");
  const auto f = Field1D::uniform(3, 0.5, 1.0, 2.0);
  EXPECT_EQ(snapshot_csv(f), "x,rho,S\n0,1,2\n0.5,1,2\n1,1,2\n");
}

TEST(WriteAtomic, ReplacesContentWithoutLeftovers) {
  const auto path = scratch_dir() / "out.csv";
  write_atomic(path.string(), "first\n");
  write_atomic(path.string(), "second\n");
  EXPECT_EQ(read_file(path), "second\n");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  try {
    write_atomic((scratch_dir() / "no_such_dir" / "x.csv").string(), "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}
