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

#include "zo2/runtime/offload_runtime.h"

#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "zo2/common/errors.h"
#include "zo2/model/forward.h"

namespace zo2::runtime {

std::string MemoryReport::to_json() const {
  nlohmann::json j;
  j["device_peak_bytes"] = device_peak;
  j["device_used_bytes"] = device_used;
  j["device_capacity_bytes"] = device_capacity;
  j["host_bytes"] = host_bytes;
  j["device_allocations"] = device_allocations;
  j["categories"] = {{"persistent", persistent_bytes},   {"slots", slot_bytes},
                     {"slots_peak", slot_peak},          {"activations", activation_bytes},
                     {"tied_snapshot", tied_snapshot_bytes}, {"gradient", gradient_bytes}};
  return j.dump(2);
}

OffloadRuntime::OffloadRuntime(ModelParams params, RuntimeOptions opts)
    : spec_(params.spec),
      opts_(opts),
      compute_fmt_(params.fmt()),
      pool_(opts.device_capacity),
      t0_(std::chrono::steady_clock::now()) {
  if (!numerics::is_compute_format(compute_fmt_)) {
    throw std::invalid_argument("offload runtime: parameters must be F32 or F64");
  }
  if (opts_.slots == 0) throw ConfigError("arena_slots", "at least one device slot is required");
  if (opts_.codec && !numerics::is_low_bit_format(*opts_.codec)) {
    throw ConfigError("codec", "codec must be a low-bit format");
  }

  persistent_ = pool_.allocate(MemCategory::kPersistent, params.embedding.size_bytes() + params.head.size_bytes());
  activations_ = pool_.allocate(MemCategory::kActivations,
                                model::activation_working_set_bytes(spec_, opts_.batch_size, compute_fmt_));
  if (spec_.tie_embeddings && opts_.reserve_tied_snapshot) {
    tied_snapshot_ = pool_.allocate(MemCategory::kTiedSnapshot,
                                    spec_.vocab * spec_.dim * numerics::bytes_per_elem(compute_fmt_));
  }
  embedding_ = std::move(params.embedding);
  head_ = std::move(params.head);

  const auto layout = model::block_layout(spec_);
  block_bytes_ = BlockBucket(layout, compute_fmt_).size_bytes();
  host_.reserve(params.blocks.size());
  for (auto& b : params.blocks) {
    if (opts_.codec) {
      BlockBucket enc(layout, *opts_.codec);
      numerics::ConversionSummary s;
      numerics::encode_to(b.buf(), enc.buf(), &s);
      summary_ += s;
      host_.push_back(std::move(enc));
    } else {
      host_.push_back(std::move(b));
    }
  }
  params.blocks.clear();

  std::size_t n_slots = host_.empty() ? 0 : opts_.slots;
  for (std::size_t k = 0; k < n_slots; ++k) {
    auto s = std::make_unique<Slot>();
    if (opts_.arena_reuse) {
      s->alloc = pool_.allocate(MemCategory::kSlots, block_bytes_);
      s->bucket = BlockBucket(layout, compute_fmt_);
    }
    slots_.push_back(std::move(s));
  }
}

double OffloadRuntime::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
}

double OffloadRuntime::transfer_seconds(std::size_t wire_bytes) const {
  if (opts_.bytes_per_sec <= 0.0) return opts_.latency_s;
  return opts_.latency_s + static_cast<double>(wire_bytes) / opts_.bytes_per_sec;
}

void OffloadRuntime::throttle(std::chrono::steady_clock::time_point start, std::size_t wire_bytes) const {
  double t = transfer_seconds(wire_bytes);
  if (t <= 0.0) return;
  std::this_thread::sleep_until(start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                            std::chrono::duration<double>(t)));
}

void OffloadRuntime::check_block(std::size_t block) const {
  if (block == 0 || block > host_.size()) {
    throw std::out_of_range("offload runtime: no block " + std::to_string(block));
  }
}

OffloadRuntime::Slot& OffloadRuntime::checked_slot(std::size_t slot) {
  if (slot >= slots_.size()) throw std::out_of_range("offload runtime: no slot " + std::to_string(slot));
  return *slots_[slot];
}

TransferRecord OffloadRuntime::upload(std::size_t block, std::size_t slot, std::size_t iteration, int pass) {
  check_block(block);
  Slot& s = checked_slot(slot);
  if (s.state.load() != SlotState::kFree) {
    throw SchedulingError("upload of block " + std::to_string(block) + " into busy slot " + std::to_string(slot) +
                          " (holds block " + std::to_string(s.block.load()) + ")");
  }
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (k != slot && slots_[k]->state.load() == SlotState::kResident && slots_[k]->block.load() == block) {
      throw SchedulingError("block " + std::to_string(block) + " already resident in slot " + std::to_string(k));
    }
  }
  auto start = std::chrono::steady_clock::now();
  double t_start = now();
  if (!opts_.arena_reuse) {
    s.alloc = pool_.allocate(MemCategory::kSlots, block_bytes_);
    s.bucket = BlockBucket(model::block_layout(spec_), compute_fmt_);
  }
  const BlockBucket& src = host_[block - 1];
  numerics::convert_to(src.buf(), s.bucket.buf());
  throttle(start, src.size_bytes());
  s.block.store(block);
  s.state.store(SlotState::kResident);
  TransferRecord r{block, Direction::kUpload, src.numel(), src.size_bytes(), src.fmt(), slot, iteration, pass,
                   t_start, now()};
  log_.append(r);
  return r;
}

TransferRecord OffloadRuntime::offload(std::size_t block, std::size_t slot, std::size_t iteration, int pass) {
  check_block(block);
  Slot& s = checked_slot(slot);
  if (s.state.load() != SlotState::kResident || s.block.load() != block) {
    throw SchedulingError("offload of block " + std::to_string(block) + " from slot " + std::to_string(slot) +
                          " which does not hold it");
  }
  auto start = std::chrono::steady_clock::now();
  double t_start = now();
  BlockBucket& dst = host_[block - 1];
  numerics::ConversionSummary sum;
  numerics::convert_to(s.bucket.buf(), dst.buf(), &sum);
  if (opts_.codec) {
    std::lock_guard lock(summary_mu_);
    summary_ += sum;
  }
  throttle(start, dst.size_bytes());
  if (!opts_.arena_reuse) {
    s.bucket = BlockBucket();
    s.alloc.reset();
  }
  s.state.store(SlotState::kFree);
  TransferRecord r{block, Direction::kOffload, dst.numel(), dst.size_bytes(), dst.fmt(), slot, iteration, pass,
                   t_start, now()};
  log_.append(r);
  return r;
}

BlockBucket& OffloadRuntime::slot_bucket(std::size_t slot) {
  Slot& s = checked_slot(slot);
  if (s.state.load() != SlotState::kResident) {
    throw SchedulingError("slot " + std::to_string(slot) + " accessed while not resident");
  }
  return s.bucket;
}

SlotState OffloadRuntime::slot_state(std::size_t slot) const { return slots_.at(slot)->state.load(); }

std::optional<std::size_t> OffloadRuntime::slot_block(std::size_t slot) const {
  const Slot& s = *slots_.at(slot);
  if (s.state.load() != SlotState::kResident) return std::nullopt;
  return s.block.load();
}

void OffloadRuntime::update_host_block(std::size_t block, const std::function<void(BlockBucket&)>& fn) {
  check_block(block);
  BlockBucket& h = host_[block - 1];
  if (!opts_.codec) {
    fn(h);
    return;
  }
  BlockBucket tmp = h.converted(compute_fmt_);
  fn(tmp);
  numerics::ConversionSummary sum;
  numerics::encode_to(tmp.buf(), h.buf(), &sum);
  std::lock_guard lock(summary_mu_);
  summary_ += sum;
}

ModelParams OffloadRuntime::gather() const {
  ModelParams p;
  p.spec = spec_;
  p.embedding = embedding_;
  p.head = head_;
  p.blocks.reserve(host_.size());
  for (const auto& h : host_) p.blocks.push_back(h.fmt() == compute_fmt_ ? h : h.converted(compute_fmt_));
  return p;
}

numerics::ConversionSummary OffloadRuntime::codec_summary() const {
  std::lock_guard lock(summary_mu_);
  return summary_;
}

MemoryReport OffloadRuntime::memory_report() const {
  MemoryReport r;
  r.device_peak = pool_.peak();
  r.device_used = pool_.used();
  r.device_capacity = pool_.capacity();
  for (const auto& h : host_) r.host_bytes += h.size_bytes();
  r.persistent_bytes = pool_.peak(MemCategory::kPersistent);
  r.slot_bytes = pool_.used(MemCategory::kSlots);
  r.slot_peak = pool_.peak(MemCategory::kSlots);
  r.activation_bytes = pool_.peak(MemCategory::kActivations);
  r.tied_snapshot_bytes = pool_.peak(MemCategory::kTiedSnapshot);
  r.gradient_bytes = sizeof(double);
  r.device_allocations = pool_.allocation_count();
  return r;
}

}  // namespace zo2::runtime
