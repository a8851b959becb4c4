// Copyright 2026 The omsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "omsim/errors.hpp"
#include "omsim/features.hpp"

namespace omsim {
namespace {

using Bits = std::vector<std::uint8_t>;

// Seven relations A..G and the four views of the reference table.
class SevenRelations : public ::testing::Test {
 protected:
  static RelationId rel(char c) { return RelationId{c - 'A'}; }
  static PredicateId pred(int i) { return PredicateId{i}; }

  SchemaCatalog cat = SchemaCatalog::create(
      {{rel('A'), 100, 8}, {rel('B'), 100, 8}, {rel('C'), 100, 8}, {rel('D'), 100, 8},
       {rel('E'), 100, 8}, {rel('F'), 100, 8}, {rel('G'), 100, 8}},
      {{pred(1), rel('A'), rel('B'), 0.01}, {pred(2), rel('B'), rel('C'), 0.01},
       {pred(3), rel('A'), rel('D'), 0.01}, {pred(4), rel('D'), rel('E'), 0.01},
       {pred(5), rel('C'), rel('D'), 0.01}});
  View mv1 = make_view(ViewId{1}, PredicateSet{pred(1)}, cat);
  View mv2 = make_view(ViewId{2}, PredicateSet{pred(2)}, cat);
  View mv3 = make_view(ViewId{3}, PredicateSet{pred(3), pred(4)}, cat);
  View mv4 = make_view(ViewId{4}, PredicateSet{pred(5), pred(4)}, cat);
};

TEST_F(SevenRelations, ActionHalves) {
  EXPECT_EQ(encode_view(mv1, cat), (Bits{1, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(encode_view(mv2, cat), (Bits{0, 1, 1, 0, 0, 0, 0}));
  EXPECT_EQ(encode_view(mv3, cat), (Bits{1, 0, 0, 1, 1, 0, 0}));
  EXPECT_EQ(encode_view(mv4, cat), (Bits{0, 0, 1, 1, 1, 0, 0}));
  EXPECT_EQ(no_op_action(cat), (Bits(7, 0)));
}

TEST_F(SevenRelations, StateHalves) {
  EXPECT_EQ(encode_state(std::vector<View>{mv2, mv3}, cat), (Bits{1, 1, 1, 1, 1, 0, 0}));
  EXPECT_EQ(encode_state(std::vector<View>{mv1}, cat), (Bits{1, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(encode_state({}, cat), (Bits(7, 0)));
}

TEST_F(SevenRelations, TableRows) {
  const std::vector<View> s1{mv2, mv3};
  const std::vector<View> s2{mv1};
  const std::vector<View> s3{mv2, mv4};
  const std::vector<View> s4{mv1, mv2, mv3};
  EXPECT_EQ(encode_pair(mv1, s1, cat).values,
            (Bits{1, 1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0}));
  EXPECT_EQ(encode_pair(mv2, s2, cat).values,
            (Bits{0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(encode_pair(mv3, s3, cat).values,
            (Bits{1, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0}));
  EXPECT_EQ(encode_pair(mv4, s4, cat).values,
            (Bits{0, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 0, 0}));
  EXPECT_EQ(encode_pair(no_op_action(cat), encode_state({}, cat)).values, Bits(14, 0));
}

TEST_F(SevenRelations, StateOrderDoesNotMatter) {
  const std::vector<View> a{mv1, mv2, mv4};
  const std::vector<View> b{mv4, mv1, mv2};
  EXPECT_EQ(encode_pair(mv3, a, cat), encode_pair(mv3, b, cat));
}

TEST_F(SevenRelations, UnknownRelationThrows) {
  EXPECT_THROW(encode_relations(RelationSet{RelationId{42}}, cat), ConfigError);
}

TEST(Relabel, Examples) {
  const Relabeled r = relabel({1, 1, 1}, {0, 1, 1});
  EXPECT_EQ(r.pre_state, (Bits{1, 0, 0}));
  EXPECT_EQ(r.post_state, (Bits{1, 1, 1}));
  EXPECT_EQ(relabel({1, 0, 1}, {0, 0, 0}).pre_state, (Bits{1, 0, 1}));
  EXPECT_EQ(relabel({0, 1, 1}, {0, 1, 1}).pre_state, (Bits{0, 0, 0}));
}

TEST(Relabel, OrRestoresOverlappingState) {
  for (unsigned s = 0; s < 16; ++s) {
    for (unsigned a = 0; a < 16; ++a) {
      Bits sb, ab;
      for (int i = 0; i < 4; ++i) {
        sb.push_back(s >> i & 1);
        ab.push_back(a >> i & 1);
      }
      const Relabeled r = relabel(sb, ab);
      for (int i = 0; i < 4; ++i) {
        EXPECT_LE(r.pre_state[i], 1);
        if (sb[i] && ab[i]) EXPECT_EQ(r.pre_state[i] | ab[i], sb[i]);
        if (!ab[i]) EXPECT_EQ(r.pre_state[i], sb[i]);
      }
    }
  }
}

}  // namespace
}  // namespace omsim
