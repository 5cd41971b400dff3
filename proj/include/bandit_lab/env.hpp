#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

// Bandit instances and reward sampling.
//
// Arms are 0-based inside the library. Everything that crosses the user
// boundary (config files, CSV, CLI) uses 1-based labels.

namespace bandit_lab {

using Arm = std::size_t;

enum class RewardDistribution { gaussian };

inline std::string_view to_string(RewardDistribution d) {
  switch (d) {
    case RewardDistribution::gaussian:
      return "gaussian";
  }
  return "unknown";
}

inline RewardDistribution parse_distribution(std::string_view name) {
  if (name == "gaussian" || name == "normal") return RewardDistribution::gaussian;
  throw ConfigError("unknown reward distribution '" + std::string(name) + "'");
}

// Ground truth: K arms with means `means` and sub-Gaussian scale sigma.
// Immutable after construction.
class BanditInstance {
 public:
  BanditInstance(std::vector<double> means, double sigma,
                 RewardDistribution dist = RewardDistribution::gaussian)
      : means_(std::move(means)), sigma_(sigma), dist_(dist) {
    if (means_.size() < 2) throw ConfigError("a bandit instance needs at least 2 arms");
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw ConfigError("sigma must be positive and finite");
    for (double m : means_) {
      if (!std::isfinite(m)) throw ConfigError("arm means must be finite");
    }
    // Ties go to the lowest index.
    best_ = static_cast<Arm>(std::max_element(means_.begin(), means_.end()) - means_.begin());
    worst_ = static_cast<Arm>(std::min_element(means_.begin(), means_.end()) - means_.begin());
  }

  std::size_t arm_count() const noexcept { return means_.size(); }
  double sigma() const noexcept { return sigma_; }
  RewardDistribution distribution() const noexcept { return dist_; }
  std::span<const double> means() const noexcept { return means_; }

  double mean(Arm arm) const {
    check_arm(arm);
    return means_[arm];
  }

  Arm best_arm() const noexcept { return best_; }
  Arm worst_arm() const noexcept { return worst_; }

  void check_arm(Arm arm) const {
    if (arm >= means_.size()) {
      throw ContractViolation("arm index " + std::to_string(arm + 1) + " out of range 1.." +
                              std::to_string(means_.size()));
    }
  }

  friend bool operator==(const BanditInstance&, const BanditInstance&) = default;

 private:
  std::vector<double> means_;
  double sigma_;
  RewardDistribution dist_;
  Arm best_ = 0;
  Arm worst_ = 0;
};

// Delta_{i,j} = mu_i - mu_j.
inline double gap(const BanditInstance& instance, Arm i, Arm j) {
  return instance.mean(i) - instance.mean(j);
}

inline Arm best_arm(const BanditInstance& instance) { return instance.best_arm(); }
inline Arm worst_arm(const BanditInstance& instance) { return instance.worst_arm(); }

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Reward randomness for one trial. The engine seed is a hash of
// (master_seed, stream_id), so trials can run in any order or on any thread.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id), engine_(derive_seed(master_seed, stream_id)) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  double standard_normal() { return normal_(engine_); }

  static std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
    return detail::splitmix64(detail::splitmix64(master_seed) ^ detail::splitmix64(~stream_id));
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// One draw from N(mu_arm, sigma^2).
inline double sample_reward(const BanditInstance& instance, Arm arm, RngStream& rng) {
  instance.check_arm(arm);
  return instance.means()[arm] + instance.sigma() * rng.standard_normal();
}

}  // namespace bandit_lab
