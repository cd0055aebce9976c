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

#ifndef TOOLROBUST_VALUE_H_
#define TOOLROBUST_VALUE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace toolrobust {

using Json = nlohmann::ordered_json;

// A JSON-shaped argument value. Integers and reals are distinct kinds so
// scorers can compare typed values; object keys are kept sorted so equal
// values always render to the same bytes.
class Value {
 public:
  using Array = std::vector<Value>;
  using Object = std::map<std::string, Value>;

  enum class Kind { kNull, kBool, kInt, kReal, kString, kArray, kObject };

  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : data_(b) {}
  Value(int i) : data_(static_cast<int64_t>(i)) {}
  Value(int64_t i) : data_(i) {}
  Value(double d) : data_(d) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(Array a) : data_(std::move(a)) {}
  Value(Object o) : data_(std::move(o)) {}

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_null() const { return kind() == Kind::kNull; }
  bool is_bool() const { return kind() == Kind::kBool; }
  bool is_int() const { return kind() == Kind::kInt; }
  bool is_real() const { return kind() == Kind::kReal; }
  bool is_number() const { return is_int() || is_real(); }
  bool is_string() const { return kind() == Kind::kString; }
  bool is_array() const { return kind() == Kind::kArray; }
  bool is_object() const { return kind() == Kind::kObject; }

  bool as_bool() const { return std::get<bool>(data_); }
  int64_t as_int() const { return std::get<int64_t>(data_); }
  double as_real() const { return std::get<double>(data_); }
  // Numeric value of an int or real.
  double as_number() const {
    return is_int() ? static_cast<double>(as_int()) : as_real();
  }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const Array& as_array() const { return std::get<Array>(data_); }
  const Object& as_object() const { return std::get<Object>(data_); }
  Array& mutable_array() { return std::get<Array>(data_); }
  Object& mutable_object() { return std::get<Object>(data_); }

  friend bool operator==(const Value& a, const Value& b) {
    return a.data_ == b.data_;
  }

 private:
  std::variant<std::monostate, bool, int64_t, double, std::string, Array,
               Object>
      data_;
};

Json ToJson(const Value& value);
Value FromJson(const Json& json);

// Compact JSON rendering. Invalid UTF-8 is replaced rather than rejected.
std::string DumpJson(const Json& json);
std::string ToJsonString(const Value& value);

// Shortest round-trip decimal form of a finite double; always contains a
// '.' or an exponent so it reads back as a real.
std::string FormatReal(double d);

// Python-literal rendering: strings double-quoted with JSON escapes,
// True/False/None, reals via FormatReal.
std::string ToPythonLiteral(const Value& value);

// Lenient literal parser accepting JSON plus the Python spellings
// (single-quoted strings, True/False/None, tuples, bare identifier keys).
// Parses one value starting at `*pos` (leading whitespace skipped) and
// advances `*pos` past it. Returns nullopt without touching `*pos` on
// failure. Nesting deeper than 64 levels is rejected.
std::optional<Value> ParseLiteral(std::string_view text, size_t* pos);

// Parses `text` as exactly one literal surrounded only by whitespace.
std::optional<Value> ParseLiteralExact(std::string_view text);

}  // namespace toolrobust

#endif  // TOOLROBUST_VALUE_H_
