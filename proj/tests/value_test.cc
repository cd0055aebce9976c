// Copyright 2026 The toolrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "toolrobust/value.h"

#include <cmath>
#include <limits>
#include <string>

#include "gtest/gtest.h"
#include "toolrobust/rng.h"

namespace toolrobust {
namespace {

TEST(ValueTest, KindsAreDistinct) {
  EXPECT_TRUE(Value().is_null());
  EXPECT_TRUE(Value(3).is_int());
  EXPECT_TRUE(Value(3.0).is_real());
  EXPECT_FALSE(Value(3) == Value(3.0));
  EXPECT_EQ(Value(3).as_number(), 3.0);
}

TEST(ValueTest, JsonRoundTrip) {
  Value v(Value::Object{{"b", Value::Array{1, 2.5, "x", true, nullptr}},
                        {"a", Value::Object{{"k", "v"}}}});
  EXPECT_EQ(FromJson(ToJson(v)), v);
  EXPECT_EQ(ToJsonString(v),
            R"({"a":{"k":"v"},"b":[1,2.5,"x",true,null]})");
}

TEST(ValueTest, FormatRealAlwaysReadsBackAsReal) {
  EXPECT_EQ(FormatReal(1.0), "1.0");
  EXPECT_EQ(FormatReal(0.1), "0.1");
  EXPECT_EQ(FormatReal(-2.5), "-2.5");
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    double d = (rng.UniformReal() - 0.5) * std::pow(10.0, rng.Uniform(30)) ;
    std::string s = FormatReal(d);
    std::optional<Value> back = ParseLiteralExact(s);
    ASSERT_TRUE(back.has_value()) << s;
    ASSERT_TRUE(back->is_real()) << s;
    EXPECT_EQ(back->as_real(), d) << s;
  }
}

TEST(ValueTest, PythonLiteral) {
  Value v(Value::Object{{"flag", false}, {"n", nullptr}, {"s", "it's"}});
  EXPECT_EQ(ToPythonLiteral(v), R"({"flag": False, "n": None, "s": "it's"})");
}

TEST(ValueTest, ParsesPythonSpellings) {
  std::optional<Value> v =
      ParseLiteralExact("{'a': (1, 2), b: True, 'c': None, 'd': 'x\\'y'}");
  ASSERT_TRUE(v.has_value());
  const Value::Object& o = v->as_object();
  EXPECT_EQ(o.at("a"), Value(Value::Array{1, 2}));
  EXPECT_EQ(o.at("b"), Value(true));
  EXPECT_TRUE(o.at("c").is_null());
  EXPECT_EQ(o.at("d"), Value("x'y"));
}

TEST(ValueTest, ParseLiteralAdvancesOnlyOnSuccess) {
  size_t pos = 0;
  std::string_view text = "  [1, 2] rest";
  ASSERT_TRUE(ParseLiteral(text, &pos).has_value());
  EXPECT_EQ(text.substr(pos), " rest");
  size_t bad = 0;
  EXPECT_FALSE(ParseLiteral("[1, ", &bad).has_value());
  EXPECT_EQ(bad, 0u);
}

TEST(ValueTest, RejectsDeepNesting) {
  std::string deep(65, '[');
  deep += std::string(65, ']');
  EXPECT_FALSE(ParseLiteralExact(deep).has_value());
  std::string ok(64, '[');
  ok += std::string(64, ']');
  EXPECT_TRUE(ParseLiteralExact(ok).has_value());
}

TEST(ValueTest, InvalidUtf8IsReplaced) {
  std::string s = DumpJson(Json(std::string("a\xff" "b")));
  EXPECT_FALSE(s.empty());
}

}  // namespace
}  // namespace toolrobust
