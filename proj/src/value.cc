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

#include <charconv>
#include <cmath>
#include <limits>

namespace toolrobust {
namespace {

constexpr int kMaxDepth = 64;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool IsIdentChar(char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9');
}

void AppendUtf8(uint32_t cp, std::string* out) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  std::optional<Value> Parse(size_t* pos) {
    pos_ = *pos;
    std::optional<Value> v = ParseValue(0);
    if (v.has_value()) *pos = pos_;
    return v;
  }

 private:
  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  void SkipSpace() {
    while (!AtEnd() && IsSpace(text_[pos_])) ++pos_;
  }

  bool ConsumeWord(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    size_t end = pos_ + word.size();
    if (end < text_.size() && IsIdentChar(text_[end])) return false;
    pos_ = end;
    return true;
  }

  std::optional<Value> ParseValue(int depth) {
    if (depth >= kMaxDepth) return std::nullopt;
    SkipSpace();
    if (AtEnd()) return std::nullopt;
    char c = Peek();
    switch (c) {
      case '{':
        return ParseObject(depth);
      case '[':
        return ParseSequence(depth, ']');
      case '(':
        return ParseSequence(depth, ')');
      case '"':
      case '\'': {
        std::optional<std::string> s = ParseString();
        if (!s.has_value()) return std::nullopt;
        return Value(std::move(*s));
      }
      default:
        break;
    }
    if (c == '-' || (c >= '0' && c <= '9')) return ParseNumber();
    if (ConsumeWord("true") || ConsumeWord("True")) return Value(true);
    if (ConsumeWord("false") || ConsumeWord("False")) return Value(false);
    if (ConsumeWord("null") || ConsumeWord("None")) return Value(nullptr);
    return std::nullopt;
  }

  std::optional<Value> ParseObject(int depth) {
    ++pos_;  // '{'
    Value::Object object;
    SkipSpace();
    if (Peek() == '}') {
      ++pos_;
      return Value(std::move(object));
    }
    while (true) {
      SkipSpace();
      std::string key;
      if (Peek() == '"' || Peek() == '\'') {
        std::optional<std::string> s = ParseString();
        if (!s.has_value()) return std::nullopt;
        key = std::move(*s);
      } else if (IsIdentStart(Peek())) {
        size_t start = pos_;
        while (!AtEnd() && IsIdentChar(text_[pos_])) ++pos_;
        key = std::string(text_.substr(start, pos_ - start));
      } else {
        return std::nullopt;
      }
      SkipSpace();
      if (Peek() != ':') return std::nullopt;
      ++pos_;
      std::optional<Value> v = ParseValue(depth + 1);
      if (!v.has_value()) return std::nullopt;
      object.insert_or_assign(std::move(key), std::move(*v));
      SkipSpace();
      if (Peek() == ',') {
        ++pos_;
        SkipSpace();
        if (Peek() == '}') {
          ++pos_;
          return Value(std::move(object));
        }
        continue;
      }
      if (Peek() == '}') {
        ++pos_;
        return Value(std::move(object));
      }
      return std::nullopt;
    }
  }

  std::optional<Value> ParseSequence(int depth, char close) {
    ++pos_;  // '[' or '('
    Value::Array array;
    SkipSpace();
    if (Peek() == close) {
      ++pos_;
      return Value(std::move(array));
    }
    while (true) {
      std::optional<Value> v = ParseValue(depth + 1);
      if (!v.has_value()) return std::nullopt;
      array.push_back(std::move(*v));
      SkipSpace();
      if (Peek() == ',') {
        ++pos_;
        SkipSpace();
        if (Peek() == close) {
          ++pos_;
          return Value(std::move(array));
        }
        continue;
      }
      if (Peek() == close) {
        ++pos_;
        return Value(std::move(array));
      }
      return std::nullopt;
    }
  }

  std::optional<uint32_t> ParseHex4() {
    if (pos_ + 4 > text_.size()) return std::nullopt;
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      char h = text_[pos_ + i];
      v <<= 4;
      if (h >= '0' && h <= '9') {
        v |= h - '0';
      } else if (h >= 'a' && h <= 'f') {
        v |= h - 'a' + 10;
      } else if (h >= 'A' && h <= 'F') {
        v |= h - 'A' + 10;
      } else {
        return std::nullopt;
      }
    }
    pos_ += 4;
    return v;
  }

  std::optional<std::string> ParseString() {
    char quote = text_[pos_++];
    std::string out;
    while (true) {
      if (AtEnd()) return std::nullopt;
      char c = text_[pos_++];
      if (c == quote) return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (AtEnd()) return std::nullopt;
      char e = text_[pos_++];
      switch (e) {
        case '"':
        case '\'':
        case '\\':
        case '/':
          out.push_back(e);
          break;
        case 'b':
          out.push_back('\b');
          break;
        case 'f':
          out.push_back('\f');
          break;
        case 'n':
          out.push_back('\n');
          break;
        case 'r':
          out.push_back('\r');
          break;
        case 't':
          out.push_back('\t');
          break;
        case 'u': {
          std::optional<uint32_t> cp = ParseHex4();
          if (!cp.has_value()) return std::nullopt;
          uint32_t code = *cp;
          if (code >= 0xD800 && code <= 0xDBFF &&
              text_.substr(pos_, 2) == "\\u") {
            size_t save = pos_;
            pos_ += 2;
            std::optional<uint32_t> low = ParseHex4();
            if (low.has_value() && *low >= 0xDC00 && *low <= 0xDFFF) {
              code = 0x10000 + ((code - 0xD800) << 10) + (*low - 0xDC00);
            } else {
              pos_ = save;
            }
          }
          AppendUtf8(code, &out);
          break;
        }
        default:
          out.push_back('\\');
          out.push_back(e);
          break;
      }
    }
  }

  std::optional<Value> ParseNumber() {
    size_t start = pos_;
    if (Peek() == '-') ++pos_;
    size_t digits_start = pos_;
    while (!AtEnd() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (pos_ == digits_start) {
      pos_ = start;
      return std::nullopt;
    }
    bool is_real = false;
    if (Peek() == '.' && pos_ + 1 < text_.size() && text_[pos_ + 1] >= '0' &&
        text_[pos_ + 1] <= '9') {
      is_real = true;
      ++pos_;
      while (!AtEnd() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    }
    if (Peek() == 'e' || Peek() == 'E') {
      size_t save = pos_;
      ++pos_;
      if (Peek() == '+' || Peek() == '-') ++pos_;
      size_t exp_start = pos_;
      while (!AtEnd() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      if (pos_ == exp_start) {
        pos_ = save;
      } else {
        is_real = true;
      }
    }
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    if (!is_real) {
      int64_t i = 0;
      auto [ptr, ec] = std::from_chars(first, last, i);
      if (ec == std::errc() && ptr == last) return Value(i);
    }
    double d = 0;
    auto [ptr, ec] = std::from_chars(first, last, d);
    if (ptr != last || ec != std::errc()) {
      pos_ = start;
      return std::nullopt;
    }
    if (!std::isfinite(d)) {
      pos_ = start;
      return std::nullopt;
    }
    return Value(d);
  }

  std::string_view text_;
  size_t pos_ = 0;
};

void AppendJsonString(std::string_view s, std::string* out) {
  out->append(DumpJson(Json(std::string(s))));
}

}  // namespace

Json ToJson(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::kNull:
      return Json(nullptr);
    case Value::Kind::kBool:
      return Json(value.as_bool());
    case Value::Kind::kInt:
      return Json(value.as_int());
    case Value::Kind::kReal:
      return Json(value.as_real());
    case Value::Kind::kString:
      return Json(value.as_string());
    case Value::Kind::kArray: {
      Json out = Json::array();
      for (const Value& v : value.as_array()) out.push_back(ToJson(v));
      return out;
    }
    case Value::Kind::kObject: {
      Json out = Json::object();
      for (const auto& [k, v] : value.as_object()) out[k] = ToJson(v);
      return out;
    }
  }
  return Json(nullptr);
}

Value FromJson(const Json& json) {
  switch (json.type()) {
    case Json::value_t::null:
    case Json::value_t::discarded:
      return Value(nullptr);
    case Json::value_t::boolean:
      return Value(json.get<bool>());
    case Json::value_t::number_integer:
      return Value(json.get<int64_t>());
    case Json::value_t::number_unsigned: {
      uint64_t u = json.get<uint64_t>();
      if (u <= static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) {
        return Value(static_cast<int64_t>(u));
      }
      return Value(static_cast<double>(u));
    }
    case Json::value_t::number_float:
      return Value(json.get<double>());
    case Json::value_t::string:
      return Value(json.get<std::string>());
    case Json::value_t::array: {
      Value::Array out;
      out.reserve(json.size());
      for (const Json& j : json) out.push_back(FromJson(j));
      return Value(std::move(out));
    }
    case Json::value_t::object: {
      Value::Object out;
      for (const auto& [k, v] : json.items()) out[k] = FromJson(v);
      return Value(std::move(out));
    }
    case Json::value_t::binary:
      break;
  }
  return Value(nullptr);
}

std::string DumpJson(const Json& json) {
  return json.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string ToJsonString(const Value& value) { return DumpJson(ToJson(value)); }

std::string FormatReal(double d) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string ToPythonLiteral(const Value& value) {
  std::string out;
  switch (value.kind()) {
    case Value::Kind::kNull:
      return "None";
    case Value::Kind::kBool:
      return value.as_bool() ? "True" : "False";
    case Value::Kind::kInt:
      return std::to_string(value.as_int());
    case Value::Kind::kReal:
      return FormatReal(value.as_real());
    case Value::Kind::kString:
      AppendJsonString(value.as_string(), &out);
      return out;
    case Value::Kind::kArray: {
      out.push_back('[');
      bool first = true;
      for (const Value& v : value.as_array()) {
        if (!first) out.append(", ");
        first = false;
        out.append(ToPythonLiteral(v));
      }
      out.push_back(']');
      return out;
    }
    case Value::Kind::kObject: {
      out.push_back('{');
      bool first = true;
      for (const auto& [k, v] : value.as_object()) {
        if (!first) out.append(", ");
        first = false;
        AppendJsonString(k, &out);
        out.append(": ");
        out.append(ToPythonLiteral(v));
      }
      out.push_back('}');
      return out;
    }
  }
  return out;
}

std::optional<Value> ParseLiteral(std::string_view text, size_t* pos) {
  LiteralParser parser(text);
  return parser.Parse(pos);
}

std::optional<Value> ParseLiteralExact(std::string_view text) {
  size_t pos = 0;
  std::optional<Value> v = ParseLiteral(text, &pos);
  if (!v.has_value()) return std::nullopt;
  while (pos < text.size() && IsSpace(text[pos])) ++pos;
  if (pos != text.size()) return std::nullopt;
  return v;
}

}  // namespace toolrobust
