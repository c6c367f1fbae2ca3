#include <gtest/gtest.h>

#include <filesystem>

#include "json.hpp"
#include "locrad/error.hpp"
#include "locrad/io.hpp"

using namespace locrad;
using nlohmann::json;

namespace {

std::string data(const char* name) {
  return read_text_file(std::filesystem::path(LOCRAD_TEST_DATA_DIR) / name);
}

}  // namespace

TEST(Io, ParsesInstanceFile) {
  const auto f = parse_instance(data("pm_constants.txt"));
  EXPECT_EQ(f.dist.size(), 2u);
  EXPECT_EQ(f.cls.num_functions(), 2u);
  EXPECT_EQ(f.cls.name(1), "minus");
  ASSERT_TRUE(f.sample().has_value());
  EXPECT_EQ(f.sample()->n(), 2u);
  EXPECT_TRUE(f.targets.empty());
}

TEST(Io, InstanceErrorsAreConfigurationErrors) {
  EXPECT_THROW(parse_instance("point a 1\nfunction f 1 2\n"), ConfigurationError);
  EXPECT_THROW(parse_instance("point a 1\nbogus 3\n"), ConfigurationError);
  EXPECT_THROW(parse_instance("point a 1\nfunction f 1\nsample zz\n"), ConfigurationError);
  EXPECT_THROW(parse_instance("range 0 1\npoint a 1\nfunction f 2\n"), ConfigurationError);
}

TEST(Io, CsvRequiresHeaderAndRectangularRows) {
  const auto t = parse_csv("a, b\n1, 2\n3,4\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "2");
  EXPECT_THROW(parse_csv(""), ConfigurationError);
  EXPECT_THROW(parse_csv("a,b\n1\n"), ConfigurationError);
}

TEST(Io, TypedCsvReaders) {
  const auto g = gram_from_csv(parse_csv(data("half_identity_gram.csv")));
  EXPECT_EQ(g.n(), 2u);
  EXPECT_EQ(g(1, 1), 0.5);
  EXPECT_EQ(spectrum_from_csv(parse_csv(data("spectrum.csv"))).size(), 4u);
  const auto [grid, values] = curve_from_csv(parse_csv(data("sqrt_curve.csv")));
  EXPECT_EQ(grid.size(), values.size());
  const auto s = labeled_sample_from_csv(parse_csv(data("stumps.csv")));
  EXPECT_TRUE(s.has_features());
  EXPECT_EQ(s.n(), 8u);
  EXPECT_FALSE(labeled_sample_from_csv(parse_csv("x,label\na,1\nb,-1\n")).has_features());
  EXPECT_THROW(labeled_sample_from_csv(parse_csv("x,label\n1,2\n")), ConfigurationError);
}

TEST(Io, ConfigIsFlatKeyValue) {
  const auto c = parse_config(data("bound41.cfg"));
  EXPECT_EQ(c.at("theorem"), "4.1");
  EXPECT_EQ(c.at("n"), "50");
  EXPECT_THROW(parse_config("novalue\n"), ConfigurationError);
}

TEST(Io, JsonDocumentsHaveDocumentedKeys) {
  BoundParams p;
  p.n = 10;
  const auto b = json::parse(to_json(main_bound_thm33(p, 0.1, 1, Direction::p_vs_pn)));
  for (const char* k : {"theorem_id", "inputs", "constants", "bound_value", "confidence", "confidence_k", "formula_text"})
    EXPECT_TRUE(b.contains(k)) << k;
  EXPECT_EQ(b["constants"]["c1"], 704.0);
  TrialReport r;
  r.claim_id = "4.1";
  r.margins = {0.5, 0.25};
  EXPECT_FALSE(json::parse(to_json(r)).contains("margins"));
  EXPECT_EQ(json::parse(to_json(r, true))["margins"].size(), 2u);
}

TEST(Io, CsvDocumentsHaveHeaders) {
  TrialReport r;
  r.margins = {0.5};
  EXPECT_EQ(margins_csv(r), "trial,margin\n0,0.5\n");
  EXPECT_EQ(curve_csv({1.0}, {2.0}), "r,psi\n1,2\n");
  EXPECT_EQ(named_values_csv({{"a", 0.25}}), "name,value\na,0.25\n");
  EXPECT_THROW(curve_csv({1.0}, {}), DimensionError);
}

TEST(Io, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "locrad_io_roundtrip.txt";
  write_text_file(path, "abc\n");
  EXPECT_EQ(read_text_file(path), "abc\n");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text_file("/nonexistent/locrad.txt"), ConfigurationError);
}
