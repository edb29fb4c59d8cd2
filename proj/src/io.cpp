// Copyright 2026 The oqs Authors
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

#include "oqs/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oqs/errors.hpp"

namespace oqs {

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& s, const BuiltModel& m) : s_(s), m_(m) {
    D_ = m.model.dim();
    dims_ = m.model.dims();
  }

  Operator parse() {
    Operator r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("observable '" + s_ + "': " + why + " at position " + std::to_string(pos_));
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Operator expr() {
    Operator acc = term();
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }

  Operator term() {
    Operator acc = unary();
    while (eat('*')) acc = acc * unary();
    return acc;
  }

  Operator unary() {
    if (eat('-')) return -1.0 * unary();
    if (eat('+')) return unary();
    return factor();
  }

  Operator scalar(double x) const { return Operator(dims_, Mat::Identity(D_, D_) * cplx(x, 0)); }

  Operator factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Operator r = expr();
      if (!eat(')')) fail("missing ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return scalar(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t b = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(b, pos_ - b);
      if (eat('[')) {
        skip();
        size_t ib = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ib == pos_) fail("expected site index");
        int idx = std::stoi(s_.substr(ib, pos_ - ib));
        if (!eat(']')) fail("missing ']'");
        auto it = m_.site_ops.find(name);
        if (it == m_.site_ops.end()) fail("no site-resolved operator '" + name + "'");
        if (idx < 0 || idx >= static_cast<int>(it->second.size()))
          fail("site index " + std::to_string(idx) + " out of range for '" + name + "'");
        return it->second[idx];
      }
      if (name == "I") return scalar(1);
      auto it = m_.ops.find(name);
      if (it == m_.ops.end()) fail("unknown operator '" + name + "'");
      return it->second;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  const BuiltModel& m_;
  size_t pos_ = 0;
  int D_ = 0;
  HilbertDims dims_;
};

}  // namespace

Operator parse_observable(const std::string& expr, const BuiltModel& model) {
  if (expr.empty()) throw ConfigError("observable expression is empty");
  return ExprParser(expr, model).parse();
}

json operator_to_json(const Operator& op) {
  json j;
  j["dims"] = op.dims.factors();
  const int D = op.dim();
  json re = json::array(), im = json::array();
  for (int r = 0; r < D; ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < D; ++c) {
      rr.push_back(op.m(r, c).real());
      ii.push_back(op.m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Operator operator_from_json(const json& j) {
  try {
    HilbertDims d(j.at("dims").get<std::vector<int>>());
    const int D = d.total();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<int>(re.size()) != D || static_cast<int>(im.size()) != D)
      throw ConfigError("operator blob: row count does not match dims");
    Mat m(D, D);
    for (int r = 0; r < D; ++r) {
      if (static_cast<int>(re[r].size()) != D || static_cast<int>(im[r].size()) != D)
        throw ConfigError("operator blob: column count does not match dims");
      for (int c = 0; c < D; ++c) m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
    }
    return Operator(d, m);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("operator blob: ") + e.what());
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    const std::string& h = header[i];
    if (h.find_first_of(",\"") != std::string::npos) {
      out += '"';
      for (char c : h) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    } else {
      out += h;
    }
  }
  out += '\n';
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_double(r[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace oqs
