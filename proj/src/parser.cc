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


#include "toolrobust/parser.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"

namespace toolrobust {
namespace {

using Object = Value::Object;

struct FamilyResult {
  std::vector<ToolCall> calls;
  std::string tag;
};

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

bool IsNameChar(char c) { return IsIdentChar(c) || c == '.' || c == '-'; }

void SkipSpace(std::string_view text, size_t* pos) {
  while (*pos < text.size() && IsSpace(text[*pos])) ++*pos;
}

void SkipInlineSpace(std::string_view text, size_t* pos) {
  while (*pos < text.size() && (text[*pos] == ' ' || text[*pos] == '\t')) {
    ++*pos;
  }
}

std::string_view Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// Tool name: identifier start, then identifier chars, '.' or '-', not ending
// in a separator.
size_t ScanName(std::string_view text, size_t pos) {
  if (pos >= text.size() || !IsIdentStart(text[pos])) return pos;
  size_t end = pos;
  while (end < text.size() && IsNameChar(text[end])) ++end;
  while (end > pos && (text[end - 1] == '.' || text[end - 1] == '-')) --end;
  return end;
}

bool IsCallName(std::string_view name) {
  return !name.empty() && ScanName(name, 0) == name.size();
}

bool IsIdentifier(std::string_view s) {
  if (s.empty() || !IsIdentStart(s[0])) return false;
  return std::all_of(s.begin(), s.end(), IsIdentChar);
}

bool IsValidToolName(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), IsSpace);
}

bool StartsWithNoCase(std::string_view text, size_t pos,
                      std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  return absl::EqualsIgnoreCase(std::string(text.substr(pos, prefix.size())),
                                std::string(prefix));
}

bool AtLineStart(std::string_view text, size_t pos) {
  while (pos > 0) {
    char c = text[pos - 1];
    if (c == '\n') return true;
    if (c != ' ' && c != '\t' && c != '*' && c != '-' && c != '>') return false;
    --pos;
  }
  return true;
}

size_t LineEnd(std::string_view text, size_t pos) {
  size_t e = text.find('\n', pos);
  return e == std::string_view::npos ? text.size() : e;
}

// Strips wrapping quotes, backticks and emphasis from a name token.
std::string_view CleanNameToken(std::string_view s) {
  s = Trim(s);
  while (!s.empty() && (s.front() == '`' || s.front() == '"' ||
                        s.front() == '\'' || s.front() == '*')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == '`' || s.back() == '"' ||
                        s.back() == '\'' || s.back() == '*')) {
    s.remove_suffix(1);
  }
  return Trim(s);
}

// ---------------------------------------------------------------------------
// JSON-shaped calls.

std::optional<Object> ParamsFromValue(const Value* v) {
  if (v == nullptr || v->is_null()) return Object();
  if (v->is_object()) return v->as_object();
  if (v->is_string()) {
    std::string_view s = Trim(v->as_string());
    if (s.empty()) return Object();
    std::optional<Value> inner = ParseLiteralExact(s);
    if (inner.has_value() && inner->is_object()) return inner->as_object();
  }
  return std::nullopt;
}

std::optional<ToolCall> CallFromObject(const Object& obj, int depth = 0) {
  if (depth > 2) return std::nullopt;
  auto fn = obj.find("function");
  if (fn != obj.end() && fn->second.is_object()) {
    return CallFromObject(fn->second.as_object(), depth + 1);
  }
  ToolCall call;
  for (const std::string& alias : NameAliases()) {
    auto it = obj.find(alias);
    if (it != obj.end() && it->second.is_string() &&
        IsValidToolName(it->second.as_string())) {
      call.name = it->second.as_string();
      break;
    }
  }
  if (call.name.empty()) return std::nullopt;
  const Value* params = nullptr;
  for (const std::string& alias : ParamAliases()) {
    auto it = obj.find(alias);
    if (it != obj.end()) {
      params = &it->second;
      break;
    }
  }
  std::optional<Object> p = ParamsFromValue(params);
  if (!p.has_value()) return std::nullopt;
  call.parameters = std::move(*p);
  return call;
}

std::vector<ToolCall> CallsFromValue(const Value& v) {
  std::vector<ToolCall> out;
  if (v.is_array()) {
    for (const Value& e : v.as_array()) {
      if (!e.is_object()) return {};
      std::optional<ToolCall> c = CallFromObject(e.as_object());
      if (!c.has_value()) return {};
      out.push_back(std::move(*c));
    }
    return out;
  }
  if (!v.is_object()) return out;
  const Object& obj = v.as_object();
  auto tc = obj.find("tool_calls");
  if (tc != obj.end() && tc->second.is_array()) return CallsFromValue(tc->second);
  std::optional<ToolCall> c = CallFromObject(obj);
  if (c.has_value()) out.push_back(std::move(*c));
  return out;
}

// Parses an object (or a string holding one) at `*pos`.
std::optional<Object> ParseParamsAt(std::string_view text, size_t* pos) {
  size_t p = *pos;
  std::optional<Value> v = ParseLiteral(text, &p);
  if (!v.has_value()) return std::nullopt;
  std::optional<Object> obj = ParamsFromValue(&*v);
  if (!obj.has_value()) return std::nullopt;
  *pos = p;
  return obj;
}

// ---------------------------------------------------------------------------
// Call expressions: name(k=v, k2: v2).

struct ParsedCall {
  ToolCall call;
  bool colon = false;
};

std::optional<Object> ParseArgs(std::string_view text, size_t* pos,
                                bool* colon) {
  size_t p = *pos;
  Object args;
  SkipSpace(text, &p);
  if (p < text.size() && text[p] == ')') {
    *pos = p + 1;
    return args;
  }
  while (true) {
    SkipSpace(text, &p);
    std::string key;
    if (p < text.size() && (text[p] == '"' || text[p] == '\'')) {
      std::optional<Value> k = ParseLiteral(text, &p);
      if (!k.has_value() || !k->is_string()) return std::nullopt;
      key = k->as_string();
    } else if (p < text.size() && IsIdentStart(text[p])) {
      size_t s = p;
      while (p < text.size() && IsIdentChar(text[p])) ++p;
      key = std::string(text.substr(s, p - s));
    } else {
      return std::nullopt;
    }
    SkipSpace(text, &p);
    if (p >= text.size()) return std::nullopt;
    if (text[p] == ':') {
      *colon = true;
    } else if (text[p] != '=') {
      return std::nullopt;
    }
    ++p;
    std::optional<Value> v = ParseLiteral(text, &p);
    if (!v.has_value()) return std::nullopt;
    args.insert_or_assign(std::move(key), std::move(*v));
    SkipSpace(text, &p);
    if (p >= text.size()) return std::nullopt;
    if (text[p] == ',') {
      ++p;
      SkipSpace(text, &p);
      if (p < text.size() && text[p] == ')') {
        *pos = p + 1;
        return args;
      }
      continue;
    }
    if (text[p] == ')') {
      *pos = p + 1;
      return args;
    }
    return std::nullopt;
  }
}

std::optional<ParsedCall> ParseCallAt(std::string_view text, size_t* pos) {
  size_t p = *pos;
  size_t end = ScanName(text, p);
  if (end == p || end >= text.size() || text[end] != '(') return std::nullopt;
  ParsedCall out;
  out.call.name = std::string(text.substr(p, end - p));
  p = end + 1;
  std::optional<Object> args = ParseArgs(text, &p, &out.colon);
  if (!args.has_value()) return std::nullopt;
  out.call.parameters = std::move(*args);
  *pos = p;
  return out;
}

// ---------------------------------------------------------------------------
// Family 1: bracketed.

std::optional<FamilyResult> ParseBracketCalls(std::string_view text,
                                              size_t* pos) {
  size_t p = *pos + 1;
  FamilyResult r;
  bool colon = false;
  while (true) {
    SkipSpace(text, &p);
    std::optional<ParsedCall> c = ParseCallAt(text, &p);
    if (!c.has_value()) return std::nullopt;
    colon = colon || c->colon;
    r.calls.push_back(std::move(c->call));
    SkipSpace(text, &p);
    if (p >= text.size()) return std::nullopt;
    if (text[p] == ',') {
      ++p;
      continue;
    }
    if (text[p] == ']') break;
    return std::nullopt;
  }
  r.tag = colon ? "bracket_colon" : "bracket";
  *pos = p + 1;
  return r;
}

bool IsKeywordName(std::string_view key) {
  return key == "func_name" || key == "name" || key == "function" ||
         key == "tool_name" || key == "tool";
}

bool IsKeywordParams(std::string_view key) {
  return key == "params" || key == "parameters" || key == "arguments" ||
         key == "args";
}

std::optional<FamilyResult> ParseKeywordList(std::string_view text,
                                             size_t* pos) {
  size_t p = *pos + 1;
  FamilyResult r;
  r.tag = "keyword_list";
  bool have_params = false;
  while (true) {
    SkipSpace(text, &p);
    size_t s = p;
    while (p < text.size() && IsIdentChar(text[p])) ++p;
    std::string_view key = text.substr(s, p - s);
    if (key.empty()) return std::nullopt;
    SkipSpace(text, &p);
    if (p >= text.size() || (text[p] != '=' && text[p] != ':')) {
      return std::nullopt;
    }
    ++p;
    std::optional<Value> v = ParseLiteral(text, &p);
    if (!v.has_value()) return std::nullopt;
    if (IsKeywordName(key)) {
      if (!v->is_string() || !IsValidToolName(v->as_string())) {
        return std::nullopt;
      }
      r.calls.push_back(ToolCall{v->as_string(), {}});
      have_params = false;
    } else if (IsKeywordParams(key)) {
      std::optional<Object> params = ParamsFromValue(&*v);
      if (r.calls.empty() || have_params || !params.has_value()) {
        return std::nullopt;
      }
      r.calls.back().parameters = std::move(*params);
      have_params = true;
    } else {
      return std::nullopt;
    }
    SkipSpace(text, &p);
    if (p >= text.size()) return std::nullopt;
    if (text[p] == ',') {
      ++p;
      continue;
    }
    if (text[p] == ']') break;
    return std::nullopt;
  }
  if (r.calls.empty()) return std::nullopt;
  *pos = p + 1;
  return r;
}

FamilyResult ParseBracketed(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '[') {
      ++i;
      continue;
    }
    size_t p = i;
    std::optional<FamilyResult> r = ParseBracketCalls(text, &p);
    if (!r.has_value()) {
      p = i;
      r = ParseKeywordList(text, &p);
    }
    if (!r.has_value()) {
      ++i;
      continue;
    }
    if (out.tag.empty()) out.tag = r->tag;
    for (ToolCall& c : r->calls) out.calls.push_back(std::move(c));
    i = p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family 6: bare call expressions.

bool BareCallBoundary(std::string_view text, size_t i) {
  if (i == 0) return true;
  char c = text[i - 1];
  return IsSpace(c) || c == '`' || c == '[' || c == ',' || c == ';' ||
         c == '*';
}

FamilyResult ParseBareCalls(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsIdentStart(text[i]) || !BareCallBoundary(text, i)) {
      ++i;
      continue;
    }
    size_t p = i;
    std::optional<ParsedCall> c = ParseCallAt(text, &p);
    if (!c.has_value()) {
      ++i;
      continue;
    }
    out.tag = "bare_call";
    out.calls.push_back(std::move(c->call));
    i = p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family 2: XML-style wrappers.

struct Attribute {
  std::string raw;
  std::optional<Value> literal;
};

// Parses attributes up to and including '>' or '/>'.
std::optional<std::map<std::string, Attribute>> ParseAttributes(
    std::string_view text, size_t* pos, bool* self_closing) {
  std::map<std::string, Attribute> attrs;
  size_t p = *pos;
  while (true) {
    SkipSpace(text, &p);
    if (p >= text.size()) return std::nullopt;
    if (text[p] == '>') {
      *self_closing = false;
      *pos = p + 1;
      return attrs;
    }
    if (text[p] == '/' && p + 1 < text.size() && text[p + 1] == '>') {
      *self_closing = true;
      *pos = p + 2;
      return attrs;
    }
    size_t s = p;
    while (p < text.size() && (IsIdentChar(text[p]) || text[p] == '-')) ++p;
    if (p == s) return std::nullopt;
    std::string name(text.substr(s, p - s));
    SkipSpace(text, &p);
    if (p >= text.size() || text[p] != '=') return std::nullopt;
    ++p;
    SkipSpace(text, &p);
    if (p >= text.size()) return std::nullopt;
    Attribute attr;
    char q = text[p];
    if (q == '"' || q == '\'') {
      size_t e = text.find(q, p + 1);
      if (e == std::string_view::npos) return std::nullopt;
      attr.raw = std::string(text.substr(p + 1, e - p - 1));
      p = e + 1;
    } else if (q == '{' || q == '[') {
      size_t e = p;
      attr.literal = ParseLiteral(text, &e);
      if (!attr.literal.has_value()) return std::nullopt;
      attr.raw = std::string(text.substr(p, e - p));
      p = e;
    } else {
      size_t e = p;
      while (e < text.size() && !IsSpace(text[e]) && text[e] != '>' &&
             !(text[e] == '/' && e + 1 < text.size() && text[e + 1] == '>')) {
        ++e;
      }
      attr.raw = std::string(text.substr(p, e - p));
      p = e;
    }
    attrs[name] = std::move(attr);
  }
}

std::optional<Object> AttributeParams(const Attribute& attr) {
  if (attr.literal.has_value()) return ParamsFromValue(&*attr.literal);
  Value v(attr.raw);
  return ParamsFromValue(&v);
}

// Body between an opening tag and its closing tag, parsed as an argument map.
std::optional<Object> ParseBodyParams(std::string_view text, size_t* pos,
                                      std::string_view close_tag) {
  size_t close = text.find(close_tag, *pos);
  if (close != std::string_view::npos) {
    std::string_view body = Trim(text.substr(*pos, close - *pos));
    std::optional<Object> params;
    if (body.empty()) {
      params = Object();
    } else {
      std::optional<Value> v = ParseLiteralExact(body);
      if (v.has_value()) params = ParamsFromValue(&*v);
    }
    if (!params.has_value()) return std::nullopt;
    *pos = close + close_tag.size();
    return params;
  }
  size_t p = *pos;
  std::optional<Object> params = ParseParamsAt(text, &p);
  if (!params.has_value()) return std::nullopt;
  *pos = p;
  return params;
}

std::optional<FamilyResult> ParseXmlAt(std::string_view text, size_t* pos) {
  size_t p = *pos + 1;
  size_t s = p;
  while (p < text.size() && (IsIdentChar(text[p]) || text[p] == '-')) ++p;
  std::string tag = absl::AsciiStrToLower(std::string(text.substr(s, p - s)));
  if (p >= text.size()) return std::nullopt;
  FamilyResult r;

  if (tag == "tool_call" && text[p] == '>') {
    ++p;
    size_t close = text.find("</tool_call>", p);
    std::vector<ToolCall> calls;
    if (close != std::string_view::npos) {
      std::optional<Value> v = ParseLiteralExact(Trim(text.substr(p, close - p)));
      if (v.has_value()) calls = CallsFromValue(*v);
      p = close + std::string_view("</tool_call>").size();
    } else {
      std::optional<Value> v = ParseLiteral(text, &p);
      if (v.has_value()) calls = CallsFromValue(*v);
    }
    if (calls.empty()) return std::nullopt;
    r.calls = std::move(calls);
    r.tag = "xml_tool_call";
    *pos = p;
    return r;
  }

  if (tag == "tool" && text[p] == '>') {
    ++p;
    size_t close = text.find("</tool>", p);
    if (close == std::string_view::npos) return std::nullopt;
    std::string_view name = CleanNameToken(text.substr(p, close - p));
    if (!IsValidToolName(name)) return std::nullopt;
    p = close + std::string_view("</tool>").size();
    size_t q = p;
    SkipSpace(text, &q);
    Object params;
    if (q < text.size() && (text[q] == '{' || text[q] == '"' || text[q] == '\'')) {
      std::optional<Object> parsed = ParseParamsAt(text, &q);
      if (parsed.has_value()) {
        params = std::move(*parsed);
        p = q;
      }
    }
    r.calls.push_back(ToolCall{std::string(name), std::move(params)});
    r.tag = "xml_tool_tag";
    *pos = p;
    return r;
  }

  if (!IsSpace(text[p])) return std::nullopt;
  bool self_closing = false;
  std::optional<std::map<std::string, Attribute>> attrs =
      ParseAttributes(text, &p, &self_closing);
  if (!attrs.has_value()) return std::nullopt;

  auto attr_name = [&](std::initializer_list<const char*> keys)
      -> std::optional<std::string> {
    for (const char* k : keys) {
      auto it = attrs->find(k);
      if (it != attrs->end()) {
        std::string_view n = CleanNameToken(it->second.raw);
        if (IsValidToolName(n)) return std::string(n);
      }
    }
    return std::nullopt;
  };

  std::optional<std::string> name;
  std::string close_tag;
  if (tag == "tool") {
    name = attr_name({"name", "tool", "tool_name"});
    r.tag = "xml_attr";
    close_tag = "</tool>";
  } else if (tag == "toolcall") {
    name = attr_name({"tool", "name", "tool_name"});
    r.tag = "xml_toolcall";
    close_tag = "</toolcall>";
  } else if (tag == "tool_call") {
    name = attr_name({"tool_name", "name", "tool"});
    r.tag = "xml_tool_call_attr";
    close_tag = "</tool_call>";
  } else {
    return std::nullopt;
  }
  if (!name.has_value()) return std::nullopt;

  std::optional<Object> params;
  for (const std::string& alias : ParamAliases()) {
    auto it = attrs->find(alias);
    if (it != attrs->end()) {
      params = AttributeParams(it->second);
      if (!params.has_value()) return std::nullopt;
      break;
    }
  }
  if (!params.has_value()) {
    if (self_closing) {
      params = Object();
    } else {
      params = ParseBodyParams(text, &p, close_tag);
      if (!params.has_value()) return std::nullopt;
    }
  } else if (!self_closing) {
    size_t close = text.find(close_tag, p);
    if (close != std::string_view::npos && Trim(text.substr(p, close - p)).empty()) {
      p = close + close_tag.size();
    }
  }
  r.calls.push_back(ToolCall{*name, std::move(*params)});
  *pos = p;
  return r;
}

FamilyResult ParseXml(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    size_t p = i;
    std::optional<FamilyResult> r = ParseXmlAt(text, &p);
    if (!r.has_value()) {
      ++i;
      continue;
    }
    if (out.tag.empty()) out.tag = r->tag;
    for (ToolCall& c : r->calls) out.calls.push_back(std::move(c));
    i = p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family 3: ReAct.

FamilyResult ParseReact(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    bool code = false;
    size_t after = 0;
    if (StartsWithNoCase(text, i, "ActionCode:") && AtLineStart(text, i)) {
      code = true;
      after = i + std::string_view("ActionCode:").size();
    } else if (StartsWithNoCase(text, i, "Action:") && AtLineStart(text, i)) {
      after = i + std::string_view("Action:").size();
    } else {
      ++i;
      continue;
    }
    size_t eol = LineEnd(text, after);
    std::string_view name = CleanNameToken(text.substr(after, eol - after));
    if (!IsValidToolName(name)) {
      i = after;
      continue;
    }
    size_t j = eol;
    size_t input = std::string_view::npos;
    while (j < text.size()) {
      if (AtLineStart(text, j) &&
          (StartsWithNoCase(text, j, "Action:") ||
           StartsWithNoCase(text, j, "ActionCode:"))) {
        break;
      }
      if (StartsWithNoCase(text, j, "Action Input:") && AtLineStart(text, j)) {
        input = j + std::string_view("Action Input:").size();
        break;
      }
      ++j;
    }
    if (input == std::string_view::npos) {
      i = eol;
      continue;
    }
    size_t p = input;
    std::optional<Object> params = ParseParamsAt(text, &p);
    if (!params.has_value()) {
      i = input;
      continue;
    }
    if (out.tag.empty()) out.tag = code ? "react_actioncode" : "react";
    out.calls.push_back(ToolCall{std::string(name), std::move(*params)});
    i = p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family 4: ad hoc forms.

bool IsReservedLabel(std::string_view word) {
  static const std::vector<std::string> kReserved = {
      "action",  "actioncode", "thought",  "observation", "function",
      "parameters", "arguments", "answer", "final",       "input",
      "output",  "response",   "result",   "json",        "tool",
      "tools",   "note",       "example",  "step",        "call",
      "question", "query",     "http",     "https"};
  std::string lower = absl::AsciiStrToLower(std::string(word));
  for (const std::string& r : kReserved) {
    if (lower == r) return true;
  }
  for (const std::string& r : NameAliases()) {
    if (lower == r) return true;
  }
  for (const std::string& r : ParamAliases()) {
    if (lower == r) return true;
  }
  return false;
}

FamilyResult ParseFunctionParameters(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (!(StartsWithNoCase(text, i, "Function:") && AtLineStart(text, i))) {
      ++i;
      continue;
    }
    size_t after = i + std::string_view("Function:").size();
    size_t eol = LineEnd(text, after);
    std::string_view name = CleanNameToken(text.substr(after, eol - after));
    size_t j = eol;
    SkipSpace(text, &j);
    size_t label = 0;
    if (StartsWithNoCase(text, j, "Parameters:")) {
      label = std::string_view("Parameters:").size();
    } else if (StartsWithNoCase(text, j, "Arguments:")) {
      label = std::string_view("Arguments:").size();
    }
    if (!IsValidToolName(name) || label == 0) {
      i = after;
      continue;
    }
    size_t p = j + label;
    std::optional<Object> params = ParseParamsAt(text, &p);
    if (!params.has_value()) {
      i = after;
      continue;
    }
    out.tag = "adhoc_function";
    out.calls.push_back(ToolCall{std::string(name), std::move(*params)});
    i = p;
  }
  return out;
}

FamilyResult ParseColonJson(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsIdentStart(text[i]) || !(i == 0 || IsSpace(text[i - 1]))) {
      ++i;
      continue;
    }
    size_t end = ScanName(text, i);
    std::string_view name = text.substr(i, end - i);
    size_t p = end;
    if (p >= text.size() || text[p] != ':' || IsReservedLabel(name)) {
      i = end;
      continue;
    }
    ++p;
    SkipSpace(text, &p);
    if (p >= text.size() || text[p] != '{') {
      i = end;
      continue;
    }
    std::optional<Value> v = ParseLiteral(text, &p);
    if (!v.has_value() || !v->is_object()) {
      i = end;
      continue;
    }
    out.tag = "adhoc_colon";
    out.calls.push_back(ToolCall{std::string(name), v->as_object()});
    i = p;
  }
  return out;
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string PercentDecode(std::string_view s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() &&
        HexValue(s[i + 1]) >= 0 && HexValue(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(HexValue(s[i + 1]) * 16 + HexValue(s[i + 2])));
      i += 2;
    } else if (s[i] == '+') {
      out.push_back(' ');
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

Value QueryValue(std::string_view token) {
  std::optional<Value> v = ParseLiteralExact(token);
  if (v.has_value() && (v->is_number() || v->is_bool() || v->is_null())) {
    return *v;
  }
  return Value(PercentDecode(token));
}

FamilyResult ParseQueryString(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsIdentStart(text[i]) || !(i == 0 || IsSpace(text[i - 1]) ||
                                     text[i - 1] == '`')) {
      ++i;
      continue;
    }
    size_t end = ScanName(text, i);
    if (end >= text.size() || text[end] != '?') {
      i = std::max(end, i + 1);
      continue;
    }
    size_t p = end + 1;
    Object params;
    bool ok = true;
    while (true) {
      size_t ks = p;
      while (p < text.size() && IsIdentChar(text[p])) ++p;
      if (p == ks || !IsIdentStart(text[ks]) || p >= text.size() ||
          text[p] != '=') {
        ok = false;
        break;
      }
      std::string key(text.substr(ks, p - ks));
      ++p;
      size_t vs = p;
      while (p < text.size() && text[p] != '&' && !IsSpace(text[p]) &&
             text[p] != '`') {
        ++p;
      }
      params.insert_or_assign(std::move(key), QueryValue(text.substr(vs, p - vs)));
      if (p < text.size() && text[p] == '&') {
        ++p;
        continue;
      }
      break;
    }
    if (!ok || params.empty()) {
      i = end;
      continue;
    }
    out.tag = "query_string";
    out.calls.push_back(ToolCall{std::string(text.substr(i, end - i)),
                                 std::move(params)});
    i = p;
  }
  return out;
}

FamilyResult ParseAdHoc(std::string_view text) {
  FamilyResult r = ParseFunctionParameters(text);
  if (!r.calls.empty()) return r;
  r = ParseColonJson(text);
  if (!r.calls.empty()) return r;
  return ParseQueryString(text);
}

// ---------------------------------------------------------------------------
// Family 5: JSON blobs.

FamilyResult ParseJsonBlob(std::string_view text) {
  FamilyResult out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{' && text[i] != '[') {
      ++i;
      continue;
    }
    size_t p = i;
    std::optional<Value> v = ParseLiteral(text, &p);
    if (!v.has_value()) {
      ++i;
      continue;
    }
    std::vector<ToolCall> calls = CallsFromValue(*v);
    if (calls.empty()) {
      ++i;
      continue;
    }
    out.tag = "json_blob";
    for (ToolCall& c : calls) out.calls.push_back(std::move(c));
    i = p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization.

struct VariantInfo {
  std::string_view tag;
  Family family;
  Source source;
};

constexpr VariantInfo kVariants[] = {
    {"bracket", Family::kBracketed, Source::kBfclV3},
    {"bracket_colon", Family::kBracketed, Source::kBfclV3},
    {"keyword_list", Family::kBracketed, Source::kBfclV3},
    {"xml_tool_call", Family::kXml, Source::kApiBank},
    {"xml_tool_tag", Family::kXml, Source::kApiBank},
    {"xml_attr", Family::kXml, Source::kApiBank},
    {"xml_toolcall", Family::kXml, Source::kApiBank},
    {"xml_tool_call_attr", Family::kXml, Source::kApiBank},
    {"react", Family::kReact, Source::kRotBench},
    {"react_actioncode", Family::kReact, Source::kRotBench},
    {"adhoc_function", Family::kAdHoc, Source::kToolAlpaca},
    {"adhoc_colon", Family::kAdHoc, Source::kToolAlpaca},
    {"query_string", Family::kAdHoc, Source::kToolAlpaca},
    {"json_blob", Family::kJsonBlob, Source::kBfclV3},
    {"bare_call", Family::kBareCall, Source::kBfclV3},
};

const VariantInfo* FindVariant(std::string_view tag) {
  for (const VariantInfo& v : kVariants) {
    if (v.tag == tag) return &v;
  }
  return nullptr;
}

std::string JsonArgs(const Object& params) {
  return DumpJson(ToJson(Value(params)));
}

absl::Status CheckKeysAreIdentifiers(const ToolCall& call) {
  for (const auto& [k, v] : call.parameters) {
    if (!IsIdentifier(k)) {
      return absl::InvalidArgumentError(
          absl::StrCat("parameter name '", k, "' is not an identifier"));
    }
  }
  return absl::OkStatus();
}

std::string PythonArgs(const Object& params, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out.append(", ");
    first = false;
    absl::StrAppend(&out, k, std::string(sep), ToPythonLiteral(v));
  }
  return out;
}

std::string PercentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (IsIdentChar(static_cast<char>(c)) || c == '-' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

absl::StatusOr<std::string> QueryToken(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::kNull:
      return std::string("null");
    case Value::Kind::kBool:
      return std::string(v.as_bool() ? "true" : "false");
    case Value::Kind::kInt:
      return std::to_string(v.as_int());
    case Value::Kind::kReal:
      return FormatReal(v.as_real());
    case Value::Kind::kString: {
      std::string token = PercentEncode(v.as_string());
      std::optional<Value> lit = ParseLiteralExact(token);
      if (lit.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "string '", v.as_string(), "' is ambiguous in query-string form"));
      }
      return token;
    }
    default:
      return absl::InvalidArgumentError(
          "query-string form supports only scalar values");
  }
}

}  // namespace

const std::vector<std::string>& NameAliases() {
  static const std::vector<std::string> kAliases = {
      "name", "function", "tool", "func_name", "tool_name", "action"};
  return kAliases;
}

const std::vector<std::string>& ParamAliases() {
  static const std::vector<std::string> kAliases = {
      "parameters", "arguments", "params", "args", "action_input"};
  return kAliases;
}

const std::vector<Family>& DefaultDispatchOrder(Source source) {
  static const std::vector<Family> kBfcl = {Family::kBracketed,
                                            Family::kJsonBlob, Family::kBareCall};
  static const std::vector<Family> kApiBank = {Family::kXml, Family::kJsonBlob,
                                               Family::kReact};
  static const std::vector<Family> kRotBench = {
      Family::kReact, Family::kJsonBlob, Family::kBareCall};
  static const std::vector<Family> kToolAlpaca = {
      Family::kReact, Family::kXml, Family::kJsonBlob, Family::kBareCall,
      Family::kAdHoc};
  static const std::vector<Family> kToolEyes = {Family::kReact,
                                                Family::kJsonBlob};
  switch (source) {
    case Source::kBfclV3:
      return kBfcl;
    case Source::kApiBank:
      return kApiBank;
    case Source::kRotBench:
      return kRotBench;
    case Source::kToolAlpaca:
      return kToolAlpaca;
    case Source::kToolEyes:
      return kToolEyes;
  }
  return kBfcl;
}

std::string StripCodeFences(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  size_t i = 0;
  while (i < raw.size()) {
    if (raw.compare(i, 3, "```") == 0) {
      i += 3;
      while (i < raw.size() && (IsIdentChar(raw[i]) || raw[i] == '-' ||
                                raw[i] == '+')) {
        ++i;
      }
      continue;
    }
    out.push_back(raw[i]);
    ++i;
  }
  return std::string(Trim(out));
}

ParseOutcome ParseFamily(std::string_view text, Family family) {
  FamilyResult r;
  switch (family) {
    case Family::kBracketed:
      r = ParseBracketed(text);
      break;
    case Family::kXml:
      r = ParseXml(text);
      break;
    case Family::kReact:
      r = ParseReact(text);
      break;
    case Family::kAdHoc:
      r = ParseAdHoc(text);
      break;
    case Family::kJsonBlob:
      r = ParseJsonBlob(text);
      break;
    case Family::kBareCall:
      r = ParseBareCalls(text);
      break;
  }
  ParseOutcome out;
  if (!r.calls.empty()) {
    out.tool_calls = std::move(r.calls);
    out.variant_used = std::move(r.tag);
  }
  return out;
}

ParseOutcome ParseToolCalls(std::string_view raw,
                            const std::vector<Family>& order) {
  std::string text = StripCodeFences(raw);
  if (text.empty()) return ParseOutcome();
  for (Family f : order) {
    ParseOutcome out = ParseFamily(text, f);
    if (!out.tool_calls.empty()) return out;
  }
  return ParseOutcome();
}

ParseOutcome ParseToolCalls(std::string_view raw, Source source) {
  return ParseToolCalls(raw, DefaultDispatchOrder(source));
}

const std::vector<std::string>& SerializationVariants() {
  static const std::vector<std::string> kTags = [] {
    std::vector<std::string> tags;
    for (const VariantInfo& v : kVariants) tags.emplace_back(v.tag);
    return tags;
  }();
  return kTags;
}

absl::StatusOr<Family> VariantFamily(std::string_view variant) {
  const VariantInfo* v = FindVariant(variant);
  if (v == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown variant '", std::string(variant), "'"));
  }
  return v->family;
}

absl::StatusOr<Source> SourceForVariant(std::string_view variant) {
  const VariantInfo* v = FindVariant(variant);
  if (v == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown variant '", std::string(variant), "'"));
  }
  return v->source;
}

absl::StatusOr<std::string> SerializeCall(const ToolCall& call,
                                          std::string_view variant) {
  const VariantInfo* info = FindVariant(variant);
  if (info == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown variant '", std::string(variant), "'"));
  }
  if (!IsCallName(call.name)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tool name '", call.name, "' cannot be rendered as a call name"));
  }
  const std::string& name = call.name;
  const Object& params = call.parameters;
  std::string_view tag = info->tag;

  if (tag == "bracket" || tag == "bracket_colon" || tag == "bare_call") {
    TR_RETURN_IF_ERROR(CheckKeysAreIdentifiers(call));
    std::string body = absl::StrCat(
        name, "(", PythonArgs(params, tag == "bracket_colon" ? ": " : "="), ")");
    if (tag == "bare_call") return body;
    return absl::StrCat("[", body, "]");
  }
  if (tag == "keyword_list") {
    return absl::StrCat("[func_name=", DumpJson(Json(name)),
                        ", params=", JsonArgs(params), "]");
  }
  if (tag == "xml_tool_call") {
    Json blob = Json::object();
    blob["name"] = name;
    blob["parameters"] = ToJson(Value(params));
    return absl::StrCat("<tool_call>", DumpJson(blob), "</tool_call>");
  }
  if (tag == "xml_tool_tag") {
    return absl::StrCat("<tool>", name, "</tool>\n", JsonArgs(params));
  }
  if (tag == "xml_attr") {
    return absl::StrCat("<tool name=\"", name, "\" parameters=",
                        JsonArgs(params), "/>");
  }
  if (tag == "xml_toolcall") {
    return absl::StrCat("<toolcall tool=\"", name, "\">", JsonArgs(params),
                        "</toolcall>");
  }
  if (tag == "xml_tool_call_attr") {
    return absl::StrCat("<tool_call tool_name=\"", name, "\">",
                        JsonArgs(params), "</tool_call>");
  }
  if (tag == "react") {
    return absl::StrCat("Thought: I should call ", name, ".\nAction: ", name,
                        "\nAction Input: ", JsonArgs(params));
  }
  if (tag == "react_actioncode") {
    return absl::StrCat("ActionCode: ", name, "\nAction Input: ",
                        JsonArgs(params));
  }
  if (tag == "adhoc_function") {
    return absl::StrCat("Function: ", name, "\nParameters: ", JsonArgs(params));
  }
  if (tag == "adhoc_colon") {
    if (IsReservedLabel(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("tool name '", name, "' collides with a reserved label"));
    }
    return absl::StrCat(name, ": ", JsonArgs(params));
  }
  if (tag == "query_string") {
    TR_RETURN_IF_ERROR(CheckKeysAreIdentifiers(call));
    if (params.empty()) {
      return absl::InvalidArgumentError(
          "query-string form needs at least one parameter");
    }
    std::string out = absl::StrCat(name, "?");
    bool first = true;
    for (const auto& [k, v] : params) {
      TR_ASSIGN_OR_RETURN(std::string token, QueryToken(v));
      if (!first) out.push_back('&');
      first = false;
      absl::StrAppend(&out, k, "=", token);
    }
    return out;
  }
  Json blob = Json::object();
  blob["name"] = name;
  blob["arguments"] = ToJson(Value(params));
  return DumpJson(blob);
}

}  // namespace toolrobust
