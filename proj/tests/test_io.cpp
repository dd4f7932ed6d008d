#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fockcs/io.hpp"

using namespace fockcs;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples{FOCKCS_SAMPLES_DIR};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fockcs_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(CustomSpectrum, LoadsTable) {
  const SpectrumModel m = load_custom_spectrum(kSamples / "well_table.json");
  EXPECT_TRUE(m.finite());
  EXPECT_EQ(m.max_index(), 10);
  for (int n = 0; n <= 10; ++n) EXPECT_EQ(eigenvalue(m, n), n * (n + 2.0));
  EXPECT_TRUE(validate_spectrum(m, 10).ok());
}

TEST(CustomSpectrum, RejectsBadFiles) {
  EXPECT_THROW(load_custom_spectrum(kSamples / "missing.json"), std::runtime_error);
  const fs::path bad = scratch("bad.json");
  write_text(bad, "{\"levels\": [0, 1]}");
  EXPECT_THROW(load_custom_spectrum(bad), std::runtime_error);
  write_text(bad, "{not json");
  EXPECT_THROW(load_custom_spectrum(bad), std::runtime_error);
}

TEST(ResolveModel, CustomAndCatalog) {
  const std::string spec = "custom:file=" + (kSamples / "well_table.json").string() + ",omega=2";
  const SpectrumModel m = resolve_model(spec);
  EXPECT_EQ(m.omega(), 2.0);
  EXPECT_EQ(resolve_model("infinite_well").descriptor(), "infinite_well");
  EXPECT_THROW(resolve_model("custom:omega=1"), std::invalid_argument);
}

TEST(Format, DoubleRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Table, CsvAndJson) {
  Table t;
  t.comments = {"config: {}"};
  t.columns = {"n", "p"};
  t.add_row({0.0, 0.25});
  t.add_row({1.0, 0.75});
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "# config: {}\nn,p\n0,0.25\n1,0.75\n");
  const json j = table_json(t, json{{"command", "x"}});
  EXPECT_EQ(j["rows"][1][1].get<double>(), 0.75);
  EXPECT_EQ(j["columns"][0], "n");
}

TEST(RunConfigIo, JsonRoundTripAndEmbedding) {
  RunConfig c;
  c.command = "state eval";
  c.model = "poschl_teller:nu=3";
  c.family = "dual";
  c.z = {cplx{0.3, -0.4}};
  c.alphas = {0.7};
  c.seed = 42;
  c.extra = json{{"t", 0.5}};
  const json j = to_json(c);
  EXPECT_EQ(to_json(run_config_from_json(j)).dump(), j.dump());

  const fs::path csv = scratch("embedded.csv");
  write_text(csv, "# config: " + j.dump() + "\nn,re,im\n0,1,0\n");
  EXPECT_EQ(to_json(embedded_run_config(csv)).dump(), j.dump());

  const fs::path js = scratch("embedded.json");
  write_text(js, json{{"config", json{{"radial_points", 8}}}, {"run_config", j}}.dump());
  EXPECT_EQ(embedded_run_config(js).model, "poschl_teller:nu=3");

  const fs::path none = scratch("none.json");
  write_text(none, "{}");
  EXPECT_THROW(embedded_run_config(none), std::runtime_error);
}

TEST(OutputPath, EnvironmentDirectory) {
  ::setenv("FOCKCS_OUTPUT_DIR", "/tmp/fockcs_out", 1);
  EXPECT_EQ(output_path("a.csv"), fs::path("/tmp/fockcs_out/a.csv"));
  EXPECT_EQ(output_path("sub/a.csv"), fs::path("sub/a.csv"));
  ::unsetenv("FOCKCS_OUTPUT_DIR");
  EXPECT_EQ(output_path("a.csv"), fs::path("a.csv"));
}
