// Copyright 2026 The clustercoop Authors.
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

// Flat "key = value" configuration files for ExperimentSpec.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <string>

#include "clustercoop/error.h"
#include "clustercoop/harness.h"

namespace clustercoop {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : value + ",") {
    if (ch == ',' || ch == ';') {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& why) {
  throw Error(ErrorCode::kInvalidConfig,
              "config key '" + key + "': " + why + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0' || errno == ERANGE) {
    bad_value(key, value, "expected a number");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || value.front() == '-' || *end != '\0' || errno == ERANGE) {
    bad_value(key, value, "expected an unsigned integer");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "expected true or false");
}

// "3:0.5,4:0.5" -> {(3, 0.5), (4, 0.5)}.
std::vector<std::pair<int, double>> to_pmf(const std::string& key,
                                           const std::string& value) {
  std::vector<std::pair<int, double>> pmf;
  for (const std::string& item : split_list(value)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) bad_value(key, value, "expected order:probability pairs");
    const std::uint64_t n = to_u64(key, trim(item.substr(0, colon)));
    if (n > 1024) bad_value(key, value, "diversity order too large");
    pmf.emplace_back(static_cast<int>(n), to_double(key, trim(item.substr(colon + 1))));
  }
  if (pmf.empty()) bad_value(key, value, "empty pmf");
  return pmf;
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& key, const std::string& value, Parse parse) {
  std::vector<T> out;
  for (const std::string& item : split_list(value)) {
    try {
      out.push_back(parse(item));
    } catch (const Error& e) {
      bad_value(key, value, e.what());
    }
  }
  if (out.empty()) bad_value(key, value, "expected a non-empty list");
  return out;
}

using Setter = std::function<void(ExperimentSpec&, const std::string& key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"density", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.density = to_double(k, v);
       }},
      {"cluster_size", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.cluster_size = to_double(k, v);
       }},
      {"alpha", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.alpha = to_double(k, v);
       }},
      {"theta", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.theta = to_double(k, v);
       }},
      {"omega", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.omega = to_double(k, v);
       }},
      {"scattering", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         try {
           s.base.scattering.kind = parse_scattering(v);
         } catch (const Error& e) {
           bad_value(k, v, e.what());
         }
       }},
      {"scenario", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         try {
           s.base.scenario = parse_scenario(v);
         } catch (const Error& e) {
           bad_value(k, v, e.what());
         }
       }},
      {"trials", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.trials = to_u64(k, v);
       }},
      {"seed", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.seed = to_u64(k, v);
       }},
      {"disk_radius", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.disk_radius = to_double(k, v);
       }},
      {"threads", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         const std::uint64_t t = to_u64(k, v);
         if (t > 4096) bad_value(k, v, "too many threads");
         s.base.threads = static_cast<unsigned>(t);
       }},
      {"delta", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.scattering.delta = to_double(k, v);
       }},
      {"delta_prime", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.scattering.delta_prime = to_double(k, v);
       }},
      {"gamma", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.scattering.gamma = to_double(k, v);
       }},
      {"diversity_pmf", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.base.scattering.diversity_pmf = to_pmf(k, v);
       }},
      {"sweep", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.sweep = to_list<double>(k, v, [&](const std::string& item) {
           return to_double(k, item);
         });
       }},
      {"scenarios", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.scenarios = to_list<Scenario>(k, v, parse_scenario);
       }},
      {"scatterings", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.scatterings = to_list<ScatteringKind>(k, v, parse_scattering);
       }},
      {"outage_cap_epsilon", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.outage_cap_epsilon = to_double(k, v);
       }},
      {"output_path", [](ExperimentSpec& s, const std::string&, const std::string& v) {
         s.output_path = v;
       }},
      {"include_baseline", [](ExperimentSpec& s, const std::string& k, const std::string& v) {
         s.include_baseline = to_bool(k, v);
       }},
  };
  return table;
}

}  // namespace

ExperimentSpec parse_config(std::istream& in) {
  ExperimentSpec spec;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate config key '" + key + "'");
    }
    it->second(spec, key, value);
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    throw Error(ErrorCode::kInvalidConfig, std::string("invalid config: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace clustercoop
