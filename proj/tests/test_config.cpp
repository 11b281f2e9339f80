#include <gtest/gtest.h>

#include "bergman/config.hpp"

using namespace bergman;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(SymbolParsing, ExpressionMatchesTermList) {
  const MonomialSymbol a = parse_symbol_expression("2*zbar*w^2 - zbar + 0.5");
  const MonomialSymbol b = parse_symbol(json::parse(R"([
      {"coeff_re": 2.0, "b": 1, "c": 2},
      {"coeff_re": -1.0, "b": 1},
      {"coeff_re": 0.5}])"),
                                        "phi");
  EXPECT_EQ(a, b);
  EXPECT_EQ(parse_symbol(json(3.0), "x"), MonomialSymbol::constant(3.0));
  EXPECT_EQ(parse_symbol_expression("z*wbar"), MonomialSymbol::monomial(1, 0, 0, 1));
  EXPECT_EQ(parse_symbol_expression(" zbar^3 "), MonomialSymbol::monomial(0, 3, 0, 0));
  EXPECT_EQ(parse_symbol(json::parse(R"([{"coeff_im": 1.0, "a": 1}])"), "x"),
            MonomialSymbol::monomial(1, 0, 0, 0, {0.0, 1.0}));
}

TEST(SymbolParsing, Shortcuts) {
  for (const auto& s : symbol_shortcuts()) EXPECT_NO_THROW(parse_symbol_expression(s)) << s;
}

TEST(SymbolParsing, Rejects) {
  EXPECT_EQ(code_of([] { parse_symbol_expression("q"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_symbol_expression(""); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_symbol_expression("z w"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_symbol_expression("z^"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_symbol(json::parse(R"([{"a": -1}])"), "x"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_symbol(json::parse(R"([{"e": 1}])"), "x"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_symbol(json::parse(R"({"a": 1})"), "x"); }), ErrorCode::ConfigInvalid);
}

TEST(Domains, PresetsAndKinds) {
  EXPECT_NEAR(build_shadow(json("paper-intersection")).slice_radius(1.0), 0.676097, 5e-7);
  EXPECT_NEAR(domain_presets().at("paper-intersection").at("R").get<double>(), 1.207107, 5e-7);
  EXPECT_EQ(build_shadow(json("bidisk")).y_max(), 1.0);
  EXPECT_NEAR(build_shadow(json::parse(R"({"kind": "ball", "R": 2.0})")).slice_radius(0.0), 2.0, 0.0);
  EXPECT_EQ(build_shadow(json::parse(R"({"kind": "bidisk", "r_z": 0.5, "r_w": 3})")).y_max(), 3.0);
  EXPECT_NEAR(build_shadow(json::parse(R"({"kind": "sampled", "points": [[0, 1], [1, 0.5]]})")).slice_radius(0.5),
              0.75, 1e-15);
  EXPECT_EQ(code_of([] { build_shadow(json("torus")); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { build_shadow(json::parse(R"({"kind": "ball", "radius": 1})")); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { build_shadow(json::parse(R"({"kind": "sampled", "points": [[0, 0.5], [1, 1]]})")); }),
            ErrorCode::NonMonotoneProfile);
}

TEST(Config, Valid) {
  const auto c = parse_config(json::parse(R"({
      "experiment": "dichotomy", "domain": "bidisk",
      "symbols": {"phi": "zbar", "psi": [{"coeff_re": 1, "d": 1}]},
      "parameters": {"m_max": 64},
      "output": {"path": "somewhere", "format": "csv"}})"));
  EXPECT_EQ(c.experiment, "dichotomy");
  EXPECT_EQ(c.domain.at("kind"), "bidisk");
  EXPECT_EQ(c.symbols.size(), 2u);
  EXPECT_EQ(c.parameters.at("m_max"), 64);
  EXPECT_EQ(c.output_path, "somewhere");
  EXPECT_EQ(c.output_format, "csv");
}

TEST(Config, DomainOptionalForDiskExperiments) {
  for (const char* e : {"lemma4", "lemma5", "lemma6"})
    EXPECT_NO_THROW(parse_config(json{{"experiment", e}})) << e;
}

TEST(Config, Rejects) {
  EXPECT_NE(message_of([] { parse_config(json::parse(R"({"experiment": "ray"})")); }).find("'domain'"),
            std::string::npos);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "ray", "domain": "bidisk", "extra": 1})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "lemma9"})")); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"domain": "bidisk"})")); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "ray", "domain": "bidisk", "symbols": {"chi": "z"}})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "ray", "domain": "bidisk", "symbols": {"phi": "z+"}})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "ray", "domain": "bidisk", "output": {"format": "xml"}})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "ray", "domain": "bidisk", "output": {"dir": "x"}})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { parse_config(json::parse(R"({"experiment": "ray", "domain": "bidisk", "parameters": []})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { load_config("/nonexistent/config.json"); }), ErrorCode::ConfigInvalid);
}
