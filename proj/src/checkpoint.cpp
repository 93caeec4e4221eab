#include "tumorpinn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tumorpinn/errors.hpp"

namespace tumorpinn {

using nlohmann::json;

std::string checkpoint_to_string(const Checkpoint& c) {
  const auto& h = c.optim.hyper;
  json j = {
      {"format", "tumorpinn-checkpoint"},
      {"version", 1},
      {"arch", c.net.arch.widths},
      {"init_seed", c.init_seed},
      {"epoch", c.epoch},
      {"network", c.net.flatten()},
      {"physical", {{"mode", to_string(c.phys.mode)}, {"values", c.phys.values}}},
      {"optimizer",
       {{"step", c.optim.step},
        {"m", c.optim.m},
        {"v", c.optim.v},
        {"beta1", h.beta1},
        {"beta2", h.beta2},
        {"eps", h.eps},
        {"base_lr", h.base_lr},
        {"decay_factor", h.decay_factor},
        {"decay_every", h.decay_every},
        {"clip_norm", h.clip_norm}}},
      {"config_hash", c.config_hash},
  };
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "tumorpinn-checkpoint") throw DataError("not a tumorpinn checkpoint");
    if (j.at("version") != 1) throw DataError("unsupported checkpoint version");
    Checkpoint c;
    Architecture arch;
    arch.widths = j.at("arch").get<std::vector<int>>();
    arch.validate();
    c.net = NetworkParams::unflatten(arch, j.at("network").get<std::vector<double>>());
    c.init_seed = j.at("init_seed").get<std::uint64_t>();
    c.epoch = j.at("epoch").get<std::int64_t>();
    c.phys.mode = param_mode_from_string(j.at("physical").at("mode").get<std::string>());
    c.phys.values = j.at("physical").at("values").get<std::vector<double>>();
    c.phys.validate();
    const json& o = j.at("optimizer");
    c.optim.step = o.at("step").get<std::int64_t>();
    c.optim.m = o.at("m").get<std::vector<double>>();
    c.optim.v = o.at("v").get<std::vector<double>>();
    c.optim.hyper.beta1 = o.at("beta1");
    c.optim.hyper.beta2 = o.at("beta2");
    c.optim.hyper.eps = o.at("eps");
    c.optim.hyper.base_lr = o.at("base_lr");
    c.optim.hyper.decay_factor = o.at("decay_factor");
    c.optim.hyper.decay_every = o.at("decay_every");
    c.optim.hyper.clip_norm = o.at("clip_norm");
    c.config_hash = j.at("config_hash").get<std::string>();
    const std::size_t n = c.net.parameter_count() + c.phys.values.size();
    if (c.optim.m.size() != n || c.optim.v.size() != n) {
      throw DataError("checkpoint optimizer moments do not match the trainable count");
    }
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write checkpoint " + path.string());
  os << checkpoint_to_string(ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read checkpoint " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return checkpoint_from_string(ss.str());
}

}  // namespace tumorpinn
