#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsbauth/bitstring.hpp"
#include "lsbauth/hmac.hpp"
#include "lsbauth/model.hpp"
#include "lsbauth/numfmt.hpp"

namespace lsbauth {

enum class AttackKind { none, replay, bias, lsb_forge };

std::string to_string(AttackKind k);
AttackKind parse_attack_kind(const std::string& s);  // throws ConfigError

/// Adversary active on [start, end).
struct AttackPhase {
  AttackKind kind = AttackKind::none;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::uint64_t tau = 0;          // replay delay
  double beta = 0.95;             // bias: weight on the true measurement
  Eigen::VectorXd x_inf;          // bias target; one entry broadcasts
};

/// Bernoulli packet delivery with success probability p from step `start`;
/// a lost vector is replaced by the last delivered one (to-hold).
struct ChannelModel {
  double p = 1.0;
  std::uint64_t start = 0;
};

enum class NoiseKind { uniform, gaussian };

struct SimConfig {
  ClosedLoopModel model;
  NumberFormat format = FloatFormat{5, 10};
  int L = 0;
  int r = 1;
  std::vector<AttackPhase> attacks;
  ChannelModel channel;
  NoiseKind noise = NoiseKind::uniform;
  std::uint64_t T = 150;
  std::uint64_t seed = 0;
  std::optional<Key> master_key;  // derived from the seed when absent
  bool run_detector = true;
  bool record = true;  // keep per-step rows; off for long averaging runs

  /// Throws ModelError for model defects and ConfigError for everything else.
  void validate() const;
};

struct SimTrace {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::uint64_t steps = 0;

  // Per step, when recording.
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> u;
  std::vector<Eigen::VectorXd> y_hat;
  std::vector<std::vector<BitString>> sent;       // sensor output
  std::vector<std::vector<BitString>> delivered;  // controller input
  std::vector<std::uint8_t> g;
  std::vector<std::uint8_t> dropped;
  std::vector<std::uint8_t> attack_active;
  std::vector<std::uint8_t> overflow;
  std::vector<std::uint64_t> sensor_counter;
  std::vector<std::vector<std::uint64_t>> detector_counter;

  // Always maintained.
  double cost_sum = 0.0;  // Σ_t x(t)ᵀ Q x(t)
  double max_abs_x1 = 0.0;
  std::uint64_t alarms = 0;
  bool finite = true;

  double mean_cost() const { return steps ? cost_sum / static_cast<double>(steps) : 0.0; }
};

/// Verbatim packet recorded at t - τ. Throws std::out_of_range if τ > t.
const std::vector<BitString>& apply_replay(const std::vector<std::vector<BitString>>& log,
                                           std::uint64_t t, std::uint64_t tau);

/// Q(β·y + (1-β)·x_inf) per channel, re-encoded, last L bits uniformly random.
std::vector<BitString> apply_bias(const Eigen::VectorXd& y, double beta, const Eigen::VectorXd& x_inf,
                                  const NumberFormat& fmt, int L, std::mt19937_64& rng);

/// Keeps each message part and draws the L digest bits uniformly.
std::vector<BitString> apply_lsb_forge(const std::vector<BitString>& packets, int L,
                                       std::mt19937_64& rng);

class Simulator {
 public:
  explicit Simulator(SimConfig cfg);
  SimTrace run();

  const SimConfig& config() const noexcept { return cfg_; }
  const Key& master_key() const noexcept { return master_; }

 private:
  SimConfig cfg_;
  Key master_;
};

inline SimTrace simulate(const SimConfig& cfg) { return Simulator(cfg).run(); }

struct PhaseOutcome {
  AttackPhase phase;
  std::optional<std::uint64_t> detected_at;
};

struct SimSummary {
  std::vector<PhaseOutcome> attacks;
  std::vector<std::uint64_t> alarm_times;
  std::uint64_t alarms_outside_attacks = 0;
  std::uint64_t longest_drop_run = 0;
  double max_abs_x1 = 0.0;
  bool safe_set_violated = false;
  bool finite = true;
};

SimSummary summarize(const SimTrace& trace, const SimConfig& cfg);
void write_summary(std::ostream& out, const SimSummary& s);

/// `t,x1..xn,u1..up,g,dropped,attack_active,overflow,ls,ld1..ldn`.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

}  // namespace lsbauth
