/*
 * Copyright 2026 The dyadgen Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef DYADGEN_TEST_SUPPORT_HPP
#define DYADGEN_TEST_SUPPORT_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef DYADGEN_TEST_DATA_DIR
#error "DYADGEN_TEST_DATA_DIR must point at tests/data"
#endif

inline std::string test_data(const std::string& name) {
  return std::string(DYADGEN_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

#endif  // DYADGEN_TEST_SUPPORT_HPP
