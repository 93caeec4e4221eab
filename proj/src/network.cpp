#include "tumorpinn/network.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

void Architecture::validate() const {
  if (widths.size() < 2) throw ConfigError("architecture needs at least an input and an output width");
  for (int w : widths) {
    if (w <= 0) throw ConfigError("architecture width must be positive, got " + std::to_string(w));
  }
  if (widths.front() != 3) throw ConfigError("network input width must be 3 (t, x, y)");
  if (widths.back() != 1) throw ConfigError("network output width must be 1 (density)");
}

std::size_t Architecture::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    n += static_cast<std::size_t>(widths[l]) * static_cast<std::size_t>(widths[l - 1] + 1);
  }
  return n;
}

void NetworkParams::validate() const {
  arch.validate();
  if (layers.size() != arch.layer_count()) {
    throw ConfigError("network has " + std::to_string(layers.size()) + " layers, architecture expects " +
                      std::to_string(arch.layer_count()));
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& L = layers[l];
    const int n_out = arch.widths[l + 1];
    const int n_in = arch.widths[l];
    if (L.weight.rows() != n_out || L.weight.cols() != n_in || L.bias.size() != n_out) {
      std::ostringstream os;
      os << "layer " << l << " has shape " << L.weight.rows() << "x" << L.weight.cols() << " (bias "
         << L.bias.size() << "), expected " << n_out << "x" << n_in;
      throw ConfigError(os.str());
    }
    if (!L.weight.allFinite() || !L.bias.allFinite()) {
      throw ConfigError("layer " + std::to_string(l) + " contains non-finite parameters");
    }
  }
}

std::vector<double> NetworkParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& L : layers) {
    for (Eigen::Index r = 0; r < L.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < L.weight.cols(); ++c) flat.push_back(L.weight(r, c));
    }
    for (Eigen::Index r = 0; r < L.bias.size(); ++r) flat.push_back(L.bias(r));
  }
  return flat;
}

void NetworkParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw ConfigError("flat parameter vector has " + std::to_string(flat.size()) + " entries, expected " +
                      std::to_string(parameter_count()));
  }
  std::size_t k = 0;
  for (auto& L : layers) {
    for (Eigen::Index r = 0; r < L.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < L.weight.cols(); ++c) L.weight(r, c) = flat[k++];
    }
    for (Eigen::Index r = 0; r < L.bias.size(); ++r) L.bias(r) = flat[k++];
  }
}

NetworkParams NetworkParams::zeros(const Architecture& arch) {
  arch.validate();
  NetworkParams net;
  net.arch = arch;
  for (std::size_t l = 1; l < arch.widths.size(); ++l) {
    net.layers.push_back(DenseLayer{Eigen::MatrixXd::Zero(arch.widths[l], arch.widths[l - 1]),
                                    Eigen::VectorXd::Zero(arch.widths[l])});
  }
  return net;
}

NetworkParams NetworkParams::unflatten(const Architecture& arch, std::span<const double> flat) {
  NetworkParams net = zeros(arch);
  net.assign(flat);
  return net;
}

NetworkParams init_xavier(const Architecture& arch, std::uint64_t seed) {
  NetworkParams net = NetworkParams::zeros(arch);
  std::mt19937_64 rng(seed);
  for (auto& L : net.layers) {
    const double bound = std::sqrt(6.0 / static_cast<double>(L.weight.rows() + L.weight.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < L.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < L.weight.cols(); ++c) L.weight(r, c) = dist(rng);
    }
  }
  return net;
}

double forward(const NetworkParams& net, const Point3& point) {
  Eigen::VectorXd z = Eigen::Map<const Eigen::Vector3d>(point.data());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& L = net.layers[l];
    Eigen::VectorXd a = L.weight * z + L.bias;
    if (l + 1 < net.layers.size()) {
      z = a.array().tanh().matrix();
    } else {
      z = std::move(a);
    }
  }
  const double u = std::abs(z(0));
  if (!std::isfinite(u)) throw NumericalError("network output is not finite");
  return u;
}

std::string to_string(ParamMode mode) {
  switch (mode) {
    case ParamMode::kConstantV: return "constant_v";
    case ParamMode::kSpatialV1V2: return "spatial_v1v2";
    case ParamMode::kVAndA: return "v_and_a";
  }
  return "?";
}

ParamMode param_mode_from_string(const std::string& name) {
  if (name == "constant_v") return ParamMode::kConstantV;
  if (name == "spatial_v1v2") return ParamMode::kSpatialV1V2;
  if (name == "v_and_a") return ParamMode::kVAndA;
  throw ConfigError("unknown physical parameter mode '" + name + "'");
}

void PhysicalParams::validate() const {
  if (values.size() != size_for(mode)) {
    throw ConfigError("mode " + to_string(mode) + " expects " + std::to_string(size_for(mode)) +
                      " physical parameters, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("physical parameter is not finite");
  }
}

std::vector<std::string> PhysicalParams::names() const {
  switch (mode) {
    case ParamMode::kConstantV: return {"v"};
    case ParamMode::kSpatialV1V2: return {"v1", "v2"};
    case ParamMode::kVAndA: return {"v", "a"};
  }
  return {};
}

}  // namespace tumorpinn
