#pragma once

// Experiment configuration: JSON schema checks, domain presets, and symbol parsing.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/error.hpp"
#include "bergman/shadow.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

using nlohmann::json;

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"lemma3", "lemma4", "lemma5", "lemma6", "lemma1",
                                              "eqn3",   "ray",    "paper_g", "spectra", "dichotomy"};
  return names;
}

/// Named domains accepted wherever a domain specification is expected.
inline const std::map<std::string, json>& domain_presets() {
  static const std::map<std::string, json> presets{
      {"bidisk", {{"kind", "bidisk"}, {"r_z", 1.0}, {"r_w", 1.0}}},
      {"ball", {{"kind", "ball"}, {"R", 1.0}}},
      {"paper-intersection",
       {{"kind", "intersection"}, {"r_z", 1.0}, {"r_w", 1.0}, {"R", kPaperIntersectionRadius}}},
  };
  return presets;
}

/// Symbol shortcuts listed by the catalog; any expression in the same grammar is accepted.
inline const std::vector<std::string>& symbol_shortcuts() {
  static const std::vector<std::string> s{"1", "z", "zbar", "w", "wbar", "z*wbar", "zbar*w",
                                          "zbar*wbar", "z+zbar", "zbar^2", "zbar*w - zbar"};
  return s;
}

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) { fail(ErrorCode::ConfigInvalid, what); }

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      config_error("unknown field '" + key + "' in " + where);
  }
}

inline double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) config_error("missing field '" + std::string(key) + "' in " + where);
  if (!obj.at(key).is_number()) config_error("field '" + std::string(key) + "' in " + where + " must be a number");
  return obj.at(key).get<double>();
}

inline int get_exponent(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return 0;
  if (!obj.at(key).is_number_integer() || obj.at(key).get<long>() < 0)
    config_error("field '" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return obj.at(key).get<int>();
}

/// Parses sums of products such as "2*zbar*w^2 - zbar + 0.5".
class SymbolParser {
public:
  explicit SymbolParser(std::string text) : s_(std::move(text)) {}

  MonomialSymbol parse() {
    MonomialSymbol out;
    skip();
    if (at_end()) error("empty expression");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      out += term() * sign;
      first = false;
      skip();
    }
    return out;
  }

private:
  MonomialSymbol term() {
    MonomialSymbol t = factor();
    skip();
    while (!at_end() && peek() == '*') {
      ++pos_;
      skip();
      t = t * factor();
      skip();
    }
    return t;
  }

  MonomialSymbol factor() {
    if (at_end()) error("unexpected end of expression");
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return MonomialSymbol::constant(v);
    }
    std::string name;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) name += s_[pos_++];
    Exponents e;
    int* slot = name == "z" ? &e.a : name == "zbar" ? &e.b : name == "w" ? &e.c : name == "wbar" ? &e.d : nullptr;
    if (!slot) error("unknown factor '" + name + "'");
    int power = 1;
    skip();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip();
      std::string digits;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += s_[pos_++];
      if (digits.empty()) error("expected exponent after '^'");
      power = std::stoi(digits);
    }
    *slot = power;
    return MonomialSymbol::monomial(e.a, e.b, e.c, e.d);
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  [[noreturn]] void error(const std::string& what) const {
    config_error("symbol \"" + s_ + "\": " + what + " at position " + std::to_string(pos_));
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline MonomialSymbol parse_symbol_expression(const std::string& text) {
  return detail::SymbolParser(text).parse();
}

/// A symbol is either an expression string or an array of {coeff_re, coeff_im, a, b, c, d}.
inline MonomialSymbol parse_symbol(const json& j, const std::string& name) {
  if (j.is_string()) return parse_symbol_expression(j.get<std::string>());
  if (j.is_number()) return MonomialSymbol::constant(j.get<double>());
  if (!j.is_array()) detail::config_error("symbol '" + name + "' must be a string or a term array");
  MonomialSymbol s;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string where = "symbol '" + name + "' term " + std::to_string(k);
    detail::check_keys(j[k], {"coeff_re", "coeff_im", "a", "b", "c", "d"}, where);
    const double re = j[k].contains("coeff_re") ? detail::get_number(j[k], "coeff_re", where) : 0.0;
    const double im = j[k].contains("coeff_im") ? detail::get_number(j[k], "coeff_im", where) : 0.0;
    s.add({detail::get_exponent(j[k], "a", where), detail::get_exponent(j[k], "b", where),
           detail::get_exponent(j[k], "c", where), detail::get_exponent(j[k], "d", where)},
          {re, im});
  }
  return s;
}

/// Resolves presets to the explicit {kind, ...} form.
inline json resolve_domain(const json& j) {
  if (j.is_string()) {
    const auto& presets = domain_presets();
    auto it = presets.find(j.get<std::string>());
    if (it == presets.end()) detail::config_error("unknown domain preset '" + j.get<std::string>() + "'");
    return it->second;
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    detail::config_error("domain must be a preset name or an object with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bidisk")
    detail::check_keys(j, {"kind", "r_z", "r_w"}, "domain");
  else if (kind == "ball")
    detail::check_keys(j, {"kind", "R"}, "domain");
  else if (kind == "intersection")
    detail::check_keys(j, {"kind", "r_z", "r_w", "R"}, "domain");
  else if (kind == "sampled")
    detail::check_keys(j, {"kind", "points"}, "domain");
  else
    detail::config_error("unknown domain kind '" + kind + "'");
  return j;
}

inline ShadowRegion build_shadow(const json& spec) {
  const json j = resolve_domain(spec);
  const std::string kind = j.at("kind").get<std::string>();
  auto num = [&](const char* key, double fallback) {
    return j.contains(key) ? detail::get_number(j, key, "domain") : fallback;
  };
  if (kind == "bidisk") return make_shadow(profile::Bidisk{num("r_z", 1.0), num("r_w", 1.0)}, kind);
  if (kind == "ball") return make_shadow(profile::Ball{num("R", 1.0)}, kind);
  if (kind == "intersection")
    return make_shadow(profile::Intersection{num("r_z", 1.0), num("r_w", 1.0), num("R", 1.0)}, kind);
  if (!j.contains("points") || !j.at("points").is_array())
    detail::config_error("sampled domain needs a 'points' array of [y, r] pairs");
  profile::Sampled s;
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      detail::config_error("sampled points must be [y, r] number pairs");
    s.points.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return make_shadow(std::move(s), kind);
}

/// Top-level configuration after schema checks. Parameters are kept as JSON and resolved per
/// experiment (defaults filled in) by the runner.
struct ExperimentConfig {
  std::string experiment;
  json domain;                              // resolved form, or null where no domain is used
  std::map<std::string, json> symbols;      // raw symbol specifications
  json parameters = json::object();
  std::string output_path = "out";
  std::string output_format = "both";
};

inline bool experiment_needs_domain(const std::string& e) {
  return e != "lemma4" && e != "lemma5" && e != "lemma6";
}

inline const std::set<std::string>& symbol_names() {
  static const std::set<std::string> names{"phi", "psi", "f1", "f2", "f", "g", "vanishing"};
  return names;
}

inline ExperimentConfig parse_config(const json& j) {
  detail::check_keys(j, {"experiment", "domain", "symbols", "parameters", "output"}, "config");
  ExperimentConfig c;
  if (!j.contains("experiment")) detail::config_error("missing field 'experiment'");
  if (!j.at("experiment").is_string()) detail::config_error("'experiment' must be a string");
  c.experiment = j.at("experiment").get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    detail::config_error("unknown experiment '" + c.experiment + "'");

  if (j.contains("domain")) {
    c.domain = resolve_domain(j.at("domain"));
  } else if (experiment_needs_domain(c.experiment)) {
    detail::config_error("missing field 'domain' (required by experiment '" + c.experiment + "')");
  }

  if (j.contains("symbols")) {
    if (!j.at("symbols").is_object()) detail::config_error("'symbols' must be an object");
    for (const auto& [name, spec] : j.at("symbols").items()) {
      if (!symbol_names().count(name)) detail::config_error("unknown symbol name '" + name + "'");
      (void)parse_symbol(spec, name);
      c.symbols[name] = spec;
    }
  }
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_object()) detail::config_error("'parameters' must be an object");
    c.parameters = j.at("parameters");
  }
  if (j.contains("output")) {
    detail::check_keys(j.at("output"), {"path", "format"}, "output");
    const json& o = j.at("output");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) detail::config_error("output.path must be a string");
      c.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) detail::config_error("output.format must be a string");
      c.output_format = o.at("format").get<std::string>();
    }
    if (c.output_format != "json" && c.output_format != "csv" && c.output_format != "both")
      detail::config_error("output.format must be json, csv or both");
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::config_error("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    detail::config_error(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace bergman
