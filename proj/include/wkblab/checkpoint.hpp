/* Copyright 2026 The WKB Lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
        limitations under the License.
==============================================================================*/

#ifndef WKBLAB_CHECKPOINT_HPP
#define WKBLAB_CHECKPOINT_HPP

#include <cstdint>
#include <string>

#include "wkblab/mlp.hpp"
#include "wkblab/schedule.hpp"

namespace wkb {

struct CheckpointMeta {
    ScheduleKind schedule_kind = ScheduleKind::Simple;
    double beta = 20.0;
    double t_min = 0.01;
    double t_max = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t epochs = 0;
    std::uint64_t batch_size = 0;
    double lr = 1e-3;
    std::string dataset;
};

struct Checkpoint {
    MlpScore model;
    CheckpointMeta meta;
};

// Binary layout, little endian:
//   "WKBLABCK" | u32 version | u32 schedule kind | f64 beta, t_min, t_max |
//   u64 seed, epochs, batch | f64 lr | u32 len + dataset bytes |
//   u32 n_widths + u32 widths | u64 n_params + f64 params | u32 crc32
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const MlpScore& model, const CheckpointMeta& meta);

// Throws CorruptFile (bad magic, truncation, checksum) or VersionMismatch.
Checkpoint load_checkpoint(const std::string& path);
// Additionally throws ArchitectureMismatch when the stored widths differ.
Checkpoint load_checkpoint(const std::string& path, int expected_dim, int expected_hidden);

}  // namespace wkb

#endif  // WKBLAB_CHECKPOINT_HPP
