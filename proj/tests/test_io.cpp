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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fgel/io.hpp"
#include "support.hpp"

namespace fgel {
namespace {

using io::Json;

TEST(Io, WeightRoundTripIsBitExact) {
  RandomStream rng(91);
  for (int t = 0; t < 30; ++t) {
    Weight w = testing::random_weight(Alphabet::numbered(1 + rng.below(4)), 1 + static_cast<int>(rng.below(3)), rng);
    const std::string text = io::weight_to_json(w).dump();
    Weight back = io::weight_from_json(Json::parse(text));
    EXPECT_EQ(back, w);
    EXPECT_EQ(io::weight_to_json(back).dump(), text);
  }
}

TEST(Io, ProductAlphabetNamesAreRecognized) {
  RandomStream rng(92);
  Weight joint = testing::random_joint_weight(2, 3, 2, rng);
  Weight back = io::weight_from_json(io::weight_to_json(joint));
  EXPECT_EQ(back.alphabet().kind(), Alphabet::Kind::product);
  EXPECT_EQ(back, joint);
  MarkovMeasure m = io::markov_from_json(io::markov_to_json(MarkovMeasure(joint)));
  EXPECT_EQ(m.weight(), joint);
  EXPECT_EQ(io::markov_to_json(m)["type"], "markov");
}

TEST(Io, DenominatorWeight) {
  RandomStream rng(93);
  DenominatorNWeight w = testing::random_denominator_weight(3, 2, 12, rng);
  Json j = io::denominator_weight_to_json(w);
  EXPECT_EQ(j["n"], 12);
  EXPECT_EQ(io::denominator_weight_from_json(j), w);

  Json no_n = Json::parse(R"({"rank":1,"alphabet":["0","1"],"edges":[[["0","1/2"],["1/2","0"]]]})");
  EXPECT_EQ(io::denominator_weight_from_json(no_n).n(), 2);
}

TEST(Io, NumbersAndDecimals) {
  Json j = Json::parse(R"({"rank":1,"alphabet":["a","b"],"edges":[[[0.25,"1/4"],[0.25,"0.25"]]]})");
  Weight w = io::weight_from_json(j);
  EXPECT_EQ(w.mass(0, 0, 0), make_rational(1, 4));
  EXPECT_EQ(w.alphabet().name(1), "b");
}

TEST(Io, ErrorsAreTyped) {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::inconsistent;
  };
  EXPECT_EQ(kind_of([] { io::weight_from_json(Json::parse(R"({"rank":1})")); }), ErrorKind::parse_error);
  EXPECT_EQ(kind_of([] {
              io::weight_from_json(Json::parse(R"({"rank":2,"alphabet":["0","1"],"edges":[[["1","0"],["0","0"]],[["1/4","1/4"],["1/4","1/4"]]]})"));
            }),
            ErrorKind::axiom_violation);
  EXPECT_EQ(kind_of([] { io::homomorphism_from_json(Json::parse(R"({"n":2,"perms":[[1,3]]})")); }), ErrorKind::shape_mismatch);
  EXPECT_EQ(kind_of([] { io::homomorphism_from_json(Json::parse(R"({"n":2,"perms":[[1,1]]})")); }), ErrorKind::shape_mismatch);

  const auto path = std::filesystem::temp_directory_path() / "fgel_io_malformed.json";
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(kind_of([&] { io::read_json_file(path.string()); }), ErrorKind::parse_error);
  std::filesystem::remove(path);
}

TEST(Io, HomomorphismAndLabeling) {
  Json j = Json::parse(R"({"n":3,"perms":[[2,3,1]]})");
  Homomorphism h = io::homomorphism_from_json(j);
  EXPECT_EQ(h.perm(0), (Homomorphism::Perm{1, 2, 0}));
  EXPECT_EQ(io::homomorphism_to_json(h), j);

  Alphabet ab = Alphabet::atomic({"x", "y"});
  Labeling x = io::labeling_from_json(Json::parse(R"({"symbols":["y","x","y"]})"), ab);
  EXPECT_EQ(x.symbols, (std::vector<std::size_t>{1, 0, 1}));
  EXPECT_EQ(io::labeling_from_json(io::labeling_to_json(x), ab), x);
  Labeling numbered = io::labeling_from_json(Json::parse(R"({"symbols":[0,1,1]})"), Alphabet::numbered(2));
  EXPECT_EQ(numbered.symbols, (std::vector<std::size_t>{0, 1, 1}));
}

}  // namespace
}  // namespace fgel
