// Copyright 2026 The postgen Authors
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

#include "json_util.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace postgen::detail
{

void for_each_json_line(std::istream & in, const std::string & name,
                        const std::function<void(const json &, std::size_t)> & fn)
{
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error & e) {
      throw ParseError(name, line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(name, line, "expected a JSON object");
    }
    fn(obj, line);
  }
}

json parse_json_document(std::istream & in, const std::string & name)
{
  try {
    return json::parse(in);
  } catch (const json::parse_error & e) {
    throw ParseError(name, 0, std::string("invalid JSON: ") + e.what());
  }
}

std::ifstream open_input(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return in;
}

double get_number(const json & obj, const char * key, const std::string & name, std::size_t line)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(name, line, std::string("missing key '") + key + "'");
  }
  if (!it->is_number()) {
    throw ParseError(name, line, std::string("key '") + key + "' must be a number");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(name, line, std::string("key '") + key + "' is not finite");
  }
  return v;
}

std::string get_string(const json & obj, const char * key, const std::string & name, std::size_t line)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(name, line, std::string("missing key '") + key + "'");
  }
  if (!it->is_string()) {
    throw ParseError(name, line, std::string("key '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

Point2 to_point(const json & pair, const std::string & name, std::size_t line)
{
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw ParseError(name, line, "expected a point [x, y]");
  }
  const Point2 p{pair[0].get<double>(), pair[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw ParseError(name, line, "point is not finite");
  }
  return p;
}

std::vector<Point2> to_points(const json & arr, const std::string & name, std::size_t line)
{
  if (!arr.is_array()) {
    throw ParseError(name, line, "expected an array of points");
  }
  std::vector<Point2> out;
  out.reserve(arr.size());
  for (const auto & p : arr) {
    out.push_back(to_point(p, name, line));
  }
  return out;
}

json from_points(const std::vector<Point2> & points)
{
  json arr = json::array();
  for (const auto & p : points) {
    arr.push_back({p.x, p.y});
  }
  return arr;
}

void write_atomically(const std::filesystem::path & path, const std::string & content)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot write " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

}  // namespace postgen::detail
