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

#pragma once

// Shared helpers for the JSON and JSON-lines readers and writers.

#include <filesystem>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "postgen/errors.h"
#include "postgen/geometry.h"

namespace postgen::detail
{

using nlohmann::json;

/// Calls fn(object, line_number) for each non-blank line. JSON syntax errors become ParseError.
void for_each_json_line(std::istream & in, const std::string & name,
                        const std::function<void(const json &, std::size_t)> & fn);

json parse_json_document(std::istream & in, const std::string & name);

std::ifstream open_input(const std::filesystem::path & path);

double get_number(const json & obj, const char * key, const std::string & name, std::size_t line);
std::string get_string(const json & obj, const char * key, const std::string & name, std::size_t line);
Point2 to_point(const json & pair, const std::string & name, std::size_t line);
std::vector<Point2> to_points(const json & arr, const std::string & name, std::size_t line);
json from_points(const std::vector<Point2> & points);

/// Writes via a temporary sibling file and renames it over the destination.
void write_atomically(const std::filesystem::path & path, const std::string & content);

}  // namespace postgen::detail
