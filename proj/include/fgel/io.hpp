// Copyright 2026 The fgel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgel/alphabet.hpp"
#include "fgel/error.hpp"
#include "fgel/homomorphism.hpp"
#include "fgel/markov.hpp"
#include "fgel/rational.hpp"
#include "fgel/weight.hpp"

namespace fgel::io {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse_error, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse_error, "malformed JSON in '" + path + "': " + e.what());
  }
}

/// Names of the form "a|b" laid out as a full grid become a product alphabet.
inline Alphabet alphabet_from_names(const std::vector<std::string>& names) {
  std::vector<std::string> first, second;
  bool product = !names.empty();
  for (const auto& name : names) {
    auto cut = name.find('|');
    if (cut == std::string::npos) {
      product = false;
      break;
    }
    std::string a = name.substr(0, cut), b = name.substr(cut + 1);
    if (std::find(first.begin(), first.end(), a) == first.end()) first.push_back(a);
    if (std::find(second.begin(), second.end(), b) == second.end()) second.push_back(b);
  }
  if (product && first.size() * second.size() == names.size()) {
    for (std::size_t k = 0; k < names.size() && product; ++k)
      product = names[k] == first[k / second.size()] + "|" + second[k % second.size()];
    if (product) return Alphabet::product(Alphabet::atomic(first), Alphabet::atomic(second));
  }
  return Alphabet::atomic(names);
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  if (j.is_number()) return parse_rational(j.dump());
  fail(ErrorKind::parse_error, "expected a rational, got " + j.dump());
}

inline Weight weight_from_json(const Json& j) {
  try {
    const int rank = j.at("rank").get<int>();
    Alphabet alphabet = alphabet_from_names(j.at("alphabet").get<std::vector<std::string>>());
    const std::size_t q = alphabet.size();
    const auto& edges = j.at("edges");
    if (!edges.is_array() || static_cast<int>(edges.size()) != rank)
      fail(ErrorKind::shape_mismatch, "expected " + std::to_string(rank) + " edge matrices");
    std::vector<std::vector<std::vector<Rational>>> dense;
    for (const auto& matrix : edges) {
      if (!matrix.is_array() || matrix.size() != q) fail(ErrorKind::shape_mismatch, "edge matrix must have |A| rows");
      std::vector<std::vector<Rational>> rows;
      for (const auto& row : matrix) {
        if (!row.is_array() || row.size() != q) fail(ErrorKind::shape_mismatch, "edge matrix must have |A| columns");
        std::vector<Rational> values;
        for (const auto& cell : row) values.push_back(rational_from_json(cell));
        rows.push_back(std::move(values));
      }
      dense.push_back(std::move(rows));
    }
    return Weight::from_dense(rank, std::move(alphabet), dense);
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse_error, std::string("weight JSON: ") + e.what());
  }
}

inline Json weight_to_json(const Weight& w) {
  Json j;
  j["rank"] = w.rank();
  j["alphabet"] = w.alphabet().names();
  Json edges = Json::array();
  for (int i = 0; i < w.rank(); ++i) {
    Json matrix = Json::array();
    for (const auto& row : w.dense_edge(i)) {
      Json cells = Json::array();
      for (const auto& v : row) cells.push_back(to_string(v));
      matrix.push_back(std::move(cells));
    }
    edges.push_back(std::move(matrix));
  }
  j["edges"] = std::move(edges);
  return j;
}

inline DenominatorNWeight denominator_weight_from_json(const Json& j) {
  Weight w = weight_from_json(j);
  std::int64_t n = 0;
  if (j.contains("n")) {
    n = j.at("n").get<std::int64_t>();
  } else {
    BigInt d = 1;
    for (int i = 0; i < w.rank(); ++i)
      for (const auto& e : w.edge(i)) d = big_lcm(d, boost::multiprecision::denominator(e.mass));
    n = d.convert_to<std::int64_t>();
  }
  return DenominatorNWeight::from_weight(std::move(w), n);
}

inline Json denominator_weight_to_json(const DenominatorNWeight& w) {
  Json j = weight_to_json(w.weight());
  j["n"] = w.n();
  return j;
}

inline MarkovMeasure markov_from_json(const Json& j) {
  if (j.contains("type") && j.at("type") != "markov") fail(ErrorKind::parse_error, "expected \"type\": \"markov\"");
  return MarkovMeasure(weight_from_json(j));
}

inline Json markov_to_json(const MarkovMeasure& m) {
  Json j = weight_to_json(m.weight());
  j["type"] = "markov";
  return j;
}

inline Homomorphism homomorphism_from_json(const Json& j) {
  try {
    const std::size_t n = j.at("n").get<std::size_t>();
    std::vector<Homomorphism::Perm> perms;
    for (const auto& images : j.at("perms")) {
      Homomorphism::Perm p;
      for (const auto& v : images) {
        auto image = v.get<std::int64_t>();
        if (image < 1 || static_cast<std::size_t>(image) > n)
          fail(ErrorKind::shape_mismatch, "permutation image " + std::to_string(image) + " outside 1.." + std::to_string(n));
        p.push_back(static_cast<std::uint32_t>(image - 1));
      }
      if (p.size() != n) fail(ErrorKind::shape_mismatch, "permutation has wrong length");
      perms.push_back(std::move(p));
    }
    return Homomorphism::from_perms(std::move(perms));
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse_error, std::string("homomorphism JSON: ") + e.what());
  }
}

inline Json homomorphism_to_json(const Homomorphism& h) {
  Json j;
  j["n"] = h.n();
  Json perms = Json::array();
  for (int i = 0; i < h.rank(); ++i) {
    Json images = Json::array();
    for (auto v : h.perm(i)) images.push_back(v + 1);
    perms.push_back(std::move(images));
  }
  j["perms"] = std::move(perms);
  return j;
}

inline Labeling labeling_from_json(const Json& j, const Alphabet& alphabet) {
  try {
    std::vector<std::size_t> symbols;
    for (const auto& s : j.at("symbols")) {
      std::string name = s.is_string() ? s.get<std::string>() : s.dump();
      auto index = alphabet.find(name);
      if (!index) fail(ErrorKind::shape_mismatch, "symbol '" + name + "' is not in the alphabet");
      symbols.push_back(*index);
    }
    return Labeling{alphabet, std::move(symbols)};
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse_error, std::string("labeling JSON: ") + e.what());
  }
}

inline Json labeling_to_json(const Labeling& x) {
  Json symbols = Json::array();
  for (std::size_t s : x.symbols) symbols.push_back(x.alphabet.name(s));
  return Json{{"symbols", symbols}};
}

}  // namespace fgel::io
