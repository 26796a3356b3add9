// Copyright 2026 The mqo-anneal Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include "mqo/instance.hpp"

namespace mqo::testing {

// Two queries with two plans each; sharing between p2 and p3 saves 5.
inline MqoInstance two_query_instance() {
  return MqoInstance({{"q1", {{"p1", 2}, {"p2", 4}}, ""}, {"q2", {{"p3", 3}, {"p4", 1}}, ""}},
                     {{"p2", "p3", 5}});
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mqo_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mqo::testing
