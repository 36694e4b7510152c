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

#include "zo2/scheduler/executor.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "zo2/common/errors.h"

namespace zo2::scheduler {

namespace {

StreamEvent make_event(const TaskGraph& g, std::size_t i, double start, double end) {
  const Task& t = g.task(i);
  return {i, t.key.lane, t.key.kind, t.key.module, t.key.iteration, t.key.pass, t.label, start, end};
}

void finish(Timeline& tl) {
  tl.makespan = 0.0;
  for (const auto& e : tl.events) tl.makespan = std::max(tl.makespan, e.t_end);
}

void check(const Timeline& tl, const TaskGraph& g, const ExecOptions& opt) {
  if (opt.skip_validation) return;
  const auto v = validate_timeline(tl, g);
  if (!v.empty()) {
    throw SchedulingError("schedule violated " + std::to_string(v.size()) + " constraint(s); first: " +
                          v.front().message);
  }
}

Timeline run_threaded(TaskGraph& g, const ExecOptions& opt) {
  const std::size_t n = g.size();
  std::vector<char> done(n, 0);
  std::vector<char> failed(n, 0);
  std::vector<double> start(n, 0.0), end(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  std::mutex mu;
  std::condition_variable cv;
  const auto t0 = std::chrono::steady_clock::now();
  auto now = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  auto lane_worker = [&](Lane lane) {
    for (std::size_t i : g.lane_order(lane)) {
      Task& task = g.task(i);
      bool skip = false;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] {
          return std::all_of(task.deps.begin(), task.deps.end(), [&](std::size_t d) { return done[d] != 0; });
        });
        skip = std::any_of(task.deps.begin(), task.deps.end(), [&](std::size_t d) { return failed[d] != 0; });
      }
      const double s = now();
      std::exception_ptr err;
      if (!skip) {
        try {
          if (task.body) task.body();
        } catch (...) {
          err = std::current_exception();
        }
        if (opt.time_scale > 0.0) {
          const double until = s + task.duration * opt.time_scale;
          const double left = until - now();
          if (left > 0) std::this_thread::sleep_for(std::chrono::duration<double>(left));
        }
      }
      const double e = now();
      {
        std::lock_guard lock(mu);
        start[i] = s;
        end[i] = e;
        errors[i] = err;
        failed[i] = (skip || err) ? 1 : 0;
        done[i] = 1;
      }
      cv.notify_all();
    }
  };

  {
    std::array<std::jthread, kLaneCount> workers;
    for (std::size_t l = 0; l < kLaneCount; ++l) workers[l] = std::jthread(lane_worker, static_cast<Lane>(l));
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Timeline tl;
  tl.time_unit = "s";
  tl.events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) tl.events.push_back(make_event(g, i, start[i], end[i]));
  finish(tl);
  return tl;
}

}  // namespace

Timeline simulate(const TaskGraph& g) {
  Timeline tl;
  tl.events.reserve(g.size());
  std::array<double, kLaneCount> lane_free{};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Task& t = g.task(i);
    double s = lane_free[static_cast<std::size_t>(t.key.lane)];
    for (std::size_t d : t.deps) s = std::max(s, tl.events[d].t_end);
    const double e = s + t.duration;
    lane_free[static_cast<std::size_t>(t.key.lane)] = e;
    tl.events.push_back(make_event(g, i, s, e));
  }
  finish(tl);
  return tl;
}

Timeline run_schedule(TaskGraph& g, Backend backend, const ExecOptions& opt) {
  Timeline tl;
  if (backend == Backend::kSimulated) {
    tl = simulate(g);
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return tl.events[a].t_start < tl.events[b].t_start;
    });
    for (std::size_t i : order) {
      if (g.task(i).body) g.task(i).body();
    }
  } else {
    tl = run_threaded(g, opt);
  }
  check(tl, g, opt);
  return tl;
}

Timeline run_sequential(TaskGraph& g, Backend backend, const ExecOptions& opt) {
  TaskGraph serial = g.serialized();
  return run_schedule(serial, backend, opt);
}

}  // namespace zo2::scheduler
