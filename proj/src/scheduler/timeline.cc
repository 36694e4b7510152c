/**
 * Copyright 2026 The ZO2 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "zo2/scheduler/timeline.h"

#include <ostream>

#include "json.hpp"

namespace zo2::scheduler {

std::vector<Violation> validate_timeline(const Timeline& tl, const TaskGraph& graph) {
  std::vector<Violation> out;
  if (tl.events.size() != graph.size()) {
    out.push_back({Violation::Kind::kDependency, 0, 0, "timeline and graph sizes differ"});
    return out;
  }
  const auto& ev = tl.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].t_end < ev[i].t_start) {
      out.push_back({Violation::Kind::kNegativeDuration, i, i, ev[i].label + " ends before it starts"});
    }
  }
  for (const Edge& e : graph.edges()) {
    if (ev[e.succ].t_start < ev[e.pred].t_end) {
      out.push_back({Violation::Kind::kDependency, e.pred, e.succ,
                     ev[e.succ].label + " started before " + ev[e.pred].label + " finished"});
    }
  }
  for (std::size_t l = 0; l < kLaneCount; ++l) {
    const auto order = graph.lane_order(static_cast<Lane>(l));
    for (std::size_t k = 1; k < order.size(); ++k) {
      const std::size_t a = order[k - 1];
      const std::size_t b = order[k];
      if (graph.has_edge(a, b)) continue;
      if (ev[b].t_start < ev[a].t_start) {
        out.push_back({Violation::Kind::kLaneOrder, a, b, ev[b].label + " ran ahead of " + ev[a].label});
      } else if (ev[b].t_start < ev[a].t_end) {
        out.push_back({Violation::Kind::kLaneOverlap, a, b, ev[b].label + " overlaps " + ev[a].label});
      }
    }
  }
  return out;
}

void write_timeline_jsonl(const Timeline& tl, std::ostream& os) {
  const double to_us = tl.time_unit == "s" ? 1e6 : 1.0;
  for (const auto& e : tl.events) {
    nlohmann::json j;
    j["lane"] = std::string(to_string(e.lane));
    j["block"] = e.module;
    j["iteration"] = e.iteration;
    j["pass"] = e.pass;
    j["t_start"] = e.t_start;
    j["t_end"] = e.t_end;
    j["unit"] = tl.time_unit;
    j["name"] = e.label;
    j["cat"] = std::string(to_string(e.lane));
    j["ph"] = "X";
    j["ts"] = e.t_start * to_us;
    j["dur"] = (e.t_end - e.t_start) * to_us;
    j["pid"] = 0;
    j["tid"] = static_cast<int>(e.lane);
    os << j.dump() << '\n';
  }
}

}  // namespace zo2::scheduler
