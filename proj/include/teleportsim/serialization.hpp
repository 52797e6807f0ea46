// Copyright 2026 The teleportsim Authors
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

#pragma once

#include <json.hpp>

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/resources.hpp"
#include "teleportsim/scheme.hpp"
#include "teleportsim/teleport.hpp"

namespace teleportsim {

using nlohmann::json;

inline json to_json(const SchmidtChannel& ch) {
  return {{"a", {ch[0], ch[1], ch[2]}}};
}

inline SchmidtChannel channel_from_json(const json& j) {
  try {
    const auto a = j.at("a").get<std::vector<double>>();
    if (a.size() != 3) throw ValidationError("channel JSON needs exactly three coefficients");
    return SchmidtChannel::make(a[0], a[1], a[2]);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed channel JSON: ") + e.what());
  }
}

inline json to_json(const SchemeParams& p) {
  return {{"theta", p.theta}, {"delta", p.delta}, {"zeta", p.zeta}};
}

inline SchemeParams scheme_from_json(const json& j) {
  try {
    SchemeParams p;
    p.theta = j.at("theta").get<std::array<double, 3>>();
    p.delta = j.at("delta").get<std::array<double, 2>>();
    p.zeta = j.value("zeta", p.zeta);
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed scheme JSON: ") + e.what());
  }
}

inline json to_json(const ResourceReport& r) {
  return {{"e_channel", r.e_channel}, {"e12", r.e12},         {"h12", r.h12},
          {"sum", r.sum},             {"tangles", r.tangles}, {"probabilities", r.probabilities}};
}

inline json to_json(const TeleportReport& r) {
  json branches = json::array();
  for (std::size_t k = 0; k < r.branches.size(); ++k) {
    branches.push_back(
        {{"label", r.branches[k].label}, {"probability", r.branches[k].probability}, {"fidelity", r.fidelities[k]}});
  }
  return {{"branches", std::move(branches)}, {"mean_fidelity", r.mean_fidelity}, {"min_fidelity", r.min_fidelity}};
}

}  // namespace teleportsim
