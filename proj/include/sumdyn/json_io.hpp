#ifndef SUMDYN_JSON_IO_HPP
#define SUMDYN_JSON_IO_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bitvec.hpp"
#include "errors.hpp"
#include "function_spec.hpp"
#include "rational.hpp"
#include "setspec.hpp"
#include "straus.hpp"
#include "torus.hpp"

namespace sumdyn {

using nlohmann::json;

// Numbers are read through their shortest decimal text so 0.6 becomes 3/5, not the nearest double.
inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(j.get<std::int64_t>()));
  if (j.is_number()) return parse_rational(j.dump());
  throw ParseError("expected a number or rational string, got " + j.dump());
}

inline json rational_to_json(const Rational& r) { return to_string(r); }

inline std::vector<Rational> point_from_json(const json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

// [[lo, hi], ...] per coordinate; hi < lo wraps around 1.
inline TorusBox box_from_json(const json& j) {
  TorusBox b;
  for (const auto& arc : j) {
    if (!arc.is_array() || arc.size() != 2) throw ParseError("box arcs are [lo, hi] pairs");
    b.arcs.push_back(make_arc(rational_from_json(arc[0]), rational_from_json(arc[1])));
  }
  return b;
}

inline json box_to_json(const TorusBox& b) {
  json arr = json::array();
  for (const auto& a : b.arcs) arr.push_back({to_string(a.lo), to_string(a.lo + a.len)});
  return arr;
}

// Alternating run lengths, starting with a (possibly empty) run of zeros.
inline std::vector<std::uint64_t> rle_encode(const BitVec& bits) {
  std::vector<std::uint64_t> runs;
  bool cur = false;
  std::uint64_t len = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits.test(i) != cur) {
      runs.push_back(len);
      cur = !cur;
      len = 0;
    }
    ++len;
  }
  runs.push_back(len);
  return runs;
}

inline BitVec rle_decode(const std::vector<std::uint64_t>& runs) {
  std::uint64_t n = 0;
  for (auto r : runs) n += r;
  BitVec bits(n);
  std::uint64_t pos = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (k % 2 == 1)
      for (std::uint64_t i = 0; i < runs[k]; ++i) bits.set(pos + i);
    pos += runs[k];
  }
  return bits;
}

inline SetSpec setspec_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    auto children = [&](const char* key) {
      std::vector<SetSpec> out;
      for (const auto& c : j.at(key)) out.push_back(setspec_from_json(c));
      return out;
    };
    if (type == "residue") return SetSpec::residue(j.at("m").get<std::uint64_t>(), j.at("r").get<std::uint64_t>());
    if (type == "all") return SetSpec::everything();
    if (type == "union") return SetSpec::unite(children("of"));
    if (type == "intersection") return SetSpec::intersect(children("of"));
    if (type == "complement") return SetSpec::complement(setspec_from_json(j.at("of")));
    if (type == "shift") {
      auto t = j.at("t").get<std::int64_t>();
      if (t < 0) throw ParseError("shift t must be >= 0");
      return SetSpec::shift(setspec_from_json(j.at("of")), t);
    }
    if (type == "window") {
      BitVec bits = j.contains("rle") ? rle_decode(j.at("rle").get<std::vector<std::uint64_t>>()) : BitVec(0);
      if (j.contains("members")) return SetSpec::finite_set(j.at("members").get<std::vector<std::uint64_t>>());
      return SetSpec::window(j.value("offset", std::uint64_t{1}), std::move(bits), j.value("finite", false));
    }
    if (type == "straus") return make_straus(StrausSpec(j.at("primes").get<std::vector<std::uint64_t>>()));
    if (type == "return_times") {
      std::size_t s = j.at("s").get<std::size_t>();
      Rational alpha = rational_from_json(j.at("alpha"));
      std::vector<Rational> base = j.contains("base") ? point_from_json(j.at("base")) : std::vector<Rational>(s, 0);
      return return_time_set(s, alpha, base, box_from_json(j.at("box")), j.at("horizon").get<std::uint64_t>());
    }
    throw ParseError("unknown set type '" + type + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("set spec JSON: ") + e.what());
  }
}

inline json setspec_to_json(const SetSpec& spec) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        auto kids = [](const std::vector<SetSpec>& of) {
          json arr = json::array();
          for (const auto& c : of) arr.push_back(setspec_to_json(c));
          return arr;
        };
        if constexpr (std::is_same_v<T, node::Residue>) {
          return {{"type", "residue"}, {"m", x.m}, {"r", x.r}};
        } else if constexpr (std::is_same_v<T, node::Union>) {
          return {{"type", "union"}, {"of", kids(x.of)}};
        } else if constexpr (std::is_same_v<T, node::Intersection>) {
          return {{"type", "intersection"}, {"of", kids(x.of)}};
        } else if constexpr (std::is_same_v<T, node::Complement>) {
          return {{"type", "complement"}, {"of", setspec_to_json(x.of[0])}};
        } else if constexpr (std::is_same_v<T, node::Shift>) {
          return {{"type", "shift"}, {"t", x.t}, {"of", setspec_to_json(x.of[0])}};
        } else if constexpr (std::is_same_v<T, node::Window>) {
          return {{"type", "window"}, {"offset", x.offset}, {"finite", x.finite}, {"rle", rle_encode(x.bits)}};
        } else {
          json base = json::array();
          for (const auto& b : x.base) base.push_back(to_string(b));
          return {{"type", "return_times"}, {"s", x.s},         {"alpha", to_string(x.alpha)},
                  {"base", base},           {"box", box_to_json(x.box)}, {"horizon", x.horizon}};
        }
      },
      spec.node());
}

// {"type": "const" | "box" | "char" | "sum" | "product" | "shift", ...}; "factor" defaults to 0.
inline FunctionSpec functionspec_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    std::size_t factor = j.value("factor", std::size_t{0});
    auto children = [&] {
      std::vector<FunctionSpec> out;
      for (const auto& c : j.at("of")) out.push_back(functionspec_from_json(c));
      return out;
    };
    if (type == "const") return FunctionSpec::constant(rational_from_json(j.at("value")));
    if (type == "box") return FunctionSpec::box(box_from_json(j.at("box")), factor);
    if (type == "char") return FunctionSpec::character(j.at("m").get<std::vector<std::int64_t>>(), factor);
    if (type == "sum") return FunctionSpec::sum(children());
    if (type == "product") return FunctionSpec::product(children());
    if (type == "shift") return FunctionSpec::shift(functionspec_from_json(j.at("of")), factor, j.at("n").get<std::uint64_t>());
    throw ParseError("unknown function type '" + type + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("function spec JSON: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace sumdyn

#endif
