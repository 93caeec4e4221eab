#pragma once

// Checkpoint container (JSON):
//
//   {
//     "format": "tumorpinn-checkpoint", "version": 1,
//     "arch": [3, 64, 64, 64, 1], "init_seed": <u64>, "epoch": <i64>,
//     "network": [<flat params, NetworkParams::flatten order>],
//     "physical": {"mode": "constant_v" | "spatial_v1v2" | "v_and_a", "values": [...]},
//     "optimizer": {"step": <i64>, "m": [...], "v": [...], "beta1": .., "beta2": .., "eps": ..,
//                   "base_lr": .., "decay_factor": .., "decay_every": .., "clip_norm": ..},
//     "config_hash": "<hex>"
//   }
//
// Doubles are written in shortest round-trip form, so load(save(x)) == x
// and re-saving a loaded checkpoint reproduces the same bytes.

#include <cstdint>
#include <filesystem>
#include <string>

#include "tumorpinn/network.hpp"
#include "tumorpinn/radam.hpp"

namespace tumorpinn {

struct Checkpoint {
  std::uint64_t init_seed = 0;
  std::int64_t epoch = 0;
  NetworkParams net;
  PhysicalParams phys;
  OptimState optim;
  std::string config_hash;
};

std::string checkpoint_to_string(const Checkpoint& ckpt);
Checkpoint checkpoint_from_string(const std::string& text);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace tumorpinn
