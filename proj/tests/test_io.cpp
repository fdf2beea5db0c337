#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "krein/generate.hpp"
#include "krein/io.hpp"

using namespace krein;
using io::Json;

TEST(OperatorJson, RoundTripIsBitExact) {
  Rng rng(601);
  for (int i = 0; i < 50; ++i) {
    const Signature d(rng.integer(0, 3), rng.integer(1, 3));
    const Signature c(rng.integer(1, 3), rng.integer(0, 3));
    Matrix m = rng.matrix(c.dim(), d.dim());
    m(0, 0) = Complex(1.0 / 3.0, -std::ldexp(1.0, -1070));  // subnormal imaginary part
    const KreinOperator t(d, c, m);
    const std::string text = io::dump(io::operator_to_json(t));
    const KreinOperator back = io::operator_from_json(Json::parse(text));
    EXPECT_EQ(back.domain(), d);
    EXPECT_EQ(back.codomain(), c);
    EXPECT_TRUE(back.matrix() == m);
    EXPECT_EQ(io::dump(io::operator_to_json(back)), text);
  }
}

TEST(OperatorJson, ExtraKeysIgnored) {
  const Json j = Json::parse(R"({"signature_domain": [1, 0], "signature_codomain": [1, 0],
                                 "matrix": [[[2, 0]]], "generator": {"seed": 3}})");
  EXPECT_EQ(io::operator_from_json(j).matrix()(0, 0), Complex(2.0));
}

TEST(OperatorJson, MalformedInputs) {
  const char* bad[] = {
      R"({"signature_domain": [1, 0], "matrix": [[[1, 0]]]})",
      R"({"signature_domain": [1], "signature_codomain": [1, 0], "matrix": [[[1, 0]]]})",
      R"({"signature_domain": [-1, 2], "signature_codomain": [1, 0], "matrix": [[[1, 0]]]})",
      R"({"signature_domain": [1, 0], "signature_codomain": [1, 0], "matrix": [[1]]})",
      R"({"signature_domain": [1, 0], "signature_codomain": [1, 0], "matrix": [[["a", 0]]]})",
      R"({"signature_domain": [1, 1], "signature_codomain": [1, 1], "matrix": [[[1, 0]]]})",
      R"({"signature_domain": [1, 0], "signature_codomain": [1, 0], "matrix": [[[1, 0], [2, 0]]]})",
      R"([1, 2, 3])",
  };
  for (const char* text : bad) {
    try {
      io::operator_from_json(Json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::DimensionMismatch)
          << text;
    }
  }
}

TEST(Dump, DeterministicLayout) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = {0.1, 2.0};
  j["nan"] = std::numeric_limits<double>::quiet_NaN();
  const std::string text = io::dump(j);
  EXPECT_LT(text.find("alpha"), text.find("zeta"));
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("null"), std::string::npos);
  EXPECT_EQ(text, io::dump(Json::parse(text)));
}

TEST(Digest, KnownValues) {
  EXPECT_EQ(io::digest(""), "cbf29ce484222325");
  EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
}

TEST(Files, WriteReadAndMissing) {
  const auto path = std::filesystem::temp_directory_path() / "krein_io_test.json";
  io::write_text_file(path, "{\"x\": 1}\n");
  EXPECT_EQ(io::read_json_file(path)["x"], 1);
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_text_file(path), Error);
}
