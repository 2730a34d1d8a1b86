#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "zolab/block_rules.hpp"
#include "zolab/catalog.hpp"
#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/int_rule.hpp"
#include "zolab/lambda.hpp"

// Document schema for LambdaSpec. Numbers that must stay exact are strings
// ("3/8", "-5", "0.125"); "variant" selects the shape:
//
//   {"variant": "dyadic_blocks", "blocks": [{"exp": 3, "lo": "1", "hi": "2"}, ...]}
//       hi may be null (unbounded); "grid": "N" clamps lo to 0.
//   {"variant": "dyadic_blocks", "rule": {"kind": "family", "m": R, "n": R, "k0": 1}}
//       R is an integer rule: {"kind": "poly", "coeffs": [...]}, "affine",
//       "exp", "dexp" or {"kind": "prefix", "k0": 1, "values": [...]};
//       other rule kinds: "sandwich" {"n"}, "union_counterexample" {"part"}.
//   {"variant": "explicit", "values": [...], "exact": true, "tau": "...", "label": "..."}
//   {"variant": "union" | "minkowski", "left": S, "right": S}
//   {"variant": "thinned", "base": S, "p": 0.5, "seed": 7}
//   {"variant": "affine", "base": S, "scale": "3", "shift": "1/2"}
//   {"variant": "catalog", "name": "dyadic_a"}

namespace zolab::spec_json {

using nlohmann::json;

inline std::string rat(const Rational& q) { return q.get_str(); }

inline Rational read_rational(const json& j, const char* field) {
  if (!j.contains(field)) throw InvalidArgument(std::string("missing field: ") + field);
  const auto& v = j.at(field);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
  throw InvalidArgument(std::string("field must be an exact number string: ") + field);
}

inline json to_json(const LambdaSpec& s);

inline json node_json(const std::shared_ptr<const detail::Node>& n) { return to_json(wrap(n)); }

inline json to_json(const LambdaSpec& s) {
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LambdaSpec::DyadicBlocks>) {
          if (v.rule) return {{"variant", "dyadic_blocks"}, {"rule", v.rule->to_json()}};
          auto arr = json::array();
          for (const auto& b : v.blocks)
            arr.push_back({{"exp", b.exp}, {"lo", rat(b.lo)}, {"hi", b.hi ? json(rat(*b.hi)) : json(nullptr)}});
          return {{"variant", "dyadic_blocks"}, {"blocks", arr}};
        } else if constexpr (std::is_same_v<T, LambdaSpec::ExplicitReals>) {
          auto arr = json::array();
          for (const auto& d : v.values) arr.push_back(d.str());
          json j = {{"variant", "explicit"}, {"values", arr}, {"exact", v.exact}};
          if (!v.exact) j["tau"] = rat(v.tau);
          if (!v.label.empty()) j["label"] = v.label;
          return j;
        } else if constexpr (std::is_same_v<T, LambdaSpec::Union>) {
          return {{"variant", "union"}, {"left", node_json(v.left)}, {"right", node_json(v.right)}};
        } else if constexpr (std::is_same_v<T, LambdaSpec::Minkowski>) {
          return {{"variant", "minkowski"}, {"left", node_json(v.left)}, {"right", node_json(v.right)}};
        } else if constexpr (std::is_same_v<T, LambdaSpec::Thinned>) {
          return {{"variant", "thinned"}, {"base", node_json(v.base)}, {"p", v.p}, {"seed", v.seed}};
        } else {
          return {{"variant", "affine"}, {"base", node_json(v.base)}, {"scale", rat(v.scale)}, {"shift", rat(v.shift)}};
        }
      },
      s.variant());
}

inline std::shared_ptr<const BlockRule> rule_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "family")
    return std::make_shared<FamilyRule>(IntRule::from_json(j.at("m")), IntRule::from_json(j.at("n")),
                                        j.value("k0", std::int64_t{1}));
  if (kind == "sandwich") return std::make_shared<SandwichRule>(j.at("n").get<std::int64_t>());
  if (kind == "union_counterexample") return std::make_shared<UnionCounterexampleRule>(j.at("part").get<int>());
  throw InvalidArgument("unknown block rule kind: " + kind);
}

inline LambdaSpec from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant")) throw InvalidArgument("spec document needs a \"variant\" field");
  const std::string var = j.at("variant").get<std::string>();
  if (var == "catalog") return catalog::require(j.at("name").get<std::string>()).spec;
  if (var == "dyadic_blocks") {
    if (j.contains("rule")) return dyadic_blocks(rule_from_json(j.at("rule")));
    std::vector<Block> blocks;
    for (const auto& b : j.at("blocks")) {
      std::optional<Rational> hi;
      if (b.contains("hi") && !b.at("hi").is_null()) hi = read_rational(b, "hi");
      const auto exp = b.at("exp").get<std::int64_t>();
      Rational lo = read_rational(b, "lo");
      if (hi && *hi < lo) throw InvalidArgument("block with hi < lo");
      if (b.value("grid", std::string("Z")) == "N")
        blocks.push_back(Block::natural(exp, lo, hi));
      else
        blocks.push_back(Block{exp, lo, hi});
    }
    return dyadic_blocks(blocks);
  }
  if (var == "explicit") {
    std::vector<Dyadic> vals;
    for (const auto& v : j.at("values")) {
      Rational q = v.is_string() ? parse_rational(v.get<std::string>())
                                 : Rational(Integer(std::to_string(v.get<long long>())));
      vals.push_back(Dyadic::require(q, "explicit value"));
    }
    const std::string label = j.value("label", std::string());
    if (j.value("exact", true)) return explicit_set(std::move(vals), label);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    const Rational tau = j.contains("tau") ? read_rational(j, "tau") : default_tau();
    return make_spec(LambdaSpec::ExplicitReals{std::move(vals), false, tau, label}, false, tau);
  }
  if (var == "union") return union_of(from_json(j.at("left")), from_json(j.at("right")));
  if (var == "minkowski") return minkowski(from_json(j.at("left")), from_json(j.at("right")));
  if (var == "thinned")
    return thin(from_json(j.at("base")), j.at("p").get<double>(), j.value("seed", std::uint64_t{0}));
  if (var == "affine")
    return affine(from_json(j.at("base")), read_rational(j, "scale"),
                  j.contains("shift") ? read_rational(j, "shift") : Rational(0));
  throw InvalidArgument("unknown spec variant: " + var);
}

inline LambdaSpec parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed spec document: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid spec document: ") + e.what());
  }
}

}  // namespace zolab::spec_json
