#include "lsbauth/ncs_sim.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lsbauth/authcodec.hpp"
#include "lsbauth/errors.hpp"

namespace lsbauth {

namespace {

enum Stream : std::uint64_t { kNoise = 1, kChannel = 2, kAdversary = 3, kKey = 4 };

std::mt19937_64 make_stream(std::uint64_t seed, Stream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s)};
  return std::mt19937_64(seq);
}

void randomize_tail(BitString& bits, int L, std::mt19937_64& rng) {
  for (int k = 0; k < L; ++k) {
    bits.set(bits.size() - static_cast<std::size_t>(L) + static_cast<std::size_t>(k), (rng() >> 63) != 0);
  }
}

const AttackPhase* active_phase(const std::vector<AttackPhase>& attacks, std::uint64_t t) {
  for (const auto& a : attacks) {
    if (a.kind != AttackKind::none && t >= a.start && t < a.end) return &a;
  }
  return nullptr;
}

Eigen::MatrixXd noise_factor(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal();
}

}  // namespace

std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::none: return "none";
    case AttackKind::replay: return "replay";
    case AttackKind::bias: return "bias";
    case AttackKind::lsb_forge: return "lsb_forge";
  }
  return "none";
}

AttackKind parse_attack_kind(const std::string& s) {
  if (s == "none") return AttackKind::none;
  if (s == "replay") return AttackKind::replay;
  if (s == "bias") return AttackKind::bias;
  if (s == "lsb_forge") return AttackKind::lsb_forge;
  throw ConfigError("unknown attack kind '" + s + "'");
}

void SimConfig::validate() const {
  model.validate();
  if (L < 0 || L > format.m()) throw ConfigError("coding into non-fractional bits");
  if (r < 0) throw ConfigError("look-ahead window r must be non-negative");
  if (!(channel.p >= 0.0 && channel.p <= 1.0)) throw ConfigError("dropout success probability must lie in [0, 1]");
  for (const auto& a : attacks) {
    if (a.end < a.start) throw ConfigError("attack phase ends before it starts");
    if (a.kind == AttackKind::replay && a.tau > a.start) {
      throw ConfigError("replay delay exceeds attack start time");
    }
    if (a.kind == AttackKind::bias) {
      if (!(a.beta > 0.0 && a.beta < 1.0)) throw ConfigError("bias weight beta must lie in (0, 1)");
      if (a.x_inf.size() != 1 && a.x_inf.size() != model.n()) {
        throw ConfigError("bias target must have 1 or n entries");
      }
    }
  }
  if (noise == NoiseKind::gaussian && model.Sigma_w.size() == 0) {
    throw ConfigError("gaussian noise requires Sigma_w");
  }
}

const std::vector<BitString>& apply_replay(const std::vector<std::vector<BitString>>& log,
                                           std::uint64_t t, std::uint64_t tau) {
  if (tau > t) throw std::out_of_range("replay delay exceeds elapsed time");
  return log.at(t - tau);
}

std::vector<BitString> apply_bias(const Eigen::VectorXd& y, double beta, const Eigen::VectorXd& x_inf,
                                  const NumberFormat& fmt, int L, std::mt19937_64& rng) {
  std::vector<BitString> out;
  out.reserve(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double target = x_inf.size() == 1 ? x_inf(0) : x_inf(i);
    BitString bits = encode(quantize(beta * y(i) + (1.0 - beta) * target, fmt).level, fmt);
    randomize_tail(bits, L, rng);
    out.push_back(std::move(bits));
  }
  return out;
}

std::vector<BitString> apply_lsb_forge(const std::vector<BitString>& packets, int L,
                                       std::mt19937_64& rng) {
  std::vector<BitString> out = packets;
  for (auto& b : out) randomize_tail(b, L, rng);
  return out;
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.master_key) {
    master_ = *cfg_.master_key;
  } else {
    auto rng = make_stream(cfg_.seed, kKey);
    std::vector<std::uint8_t> k(kKeyBytes);
    for (auto& b : k) b = static_cast<std::uint8_t>(rng() >> 56);
    master_ = Key(std::move(k));
  }
}

SimTrace Simulator::run() {
  const auto& M = cfg_.model;
  const auto& fmt = cfg_.format;
  const auto n = M.n();
  const auto nu = static_cast<std::size_t>(n);

  std::vector<KeyChain> sensor;
  std::vector<Key> roots;
  for (std::size_t i = 0; i < nu; ++i) {
    roots.push_back(derive_channel_key(master_, i));
    sensor.emplace_back(roots.back());
  }
  std::optional<Detector> detector;
  if (cfg_.run_detector) detector.emplace(roots, cfg_.L, cfg_.r);

  auto noise_rng = make_stream(cfg_.seed, kNoise);
  auto channel_rng = make_stream(cfg_.seed, kChannel);
  auto adv_rng = make_stream(cfg_.seed, kAdversary);
  std::uniform_real_distribution<double> uni(-M.w_bound, M.w_bound);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution deliver(cfg_.channel.p);
  const Eigen::MatrixXd Lw = cfg_.noise == NoiseKind::gaussian ? noise_factor(M.Sigma_w) : Eigen::MatrixXd();

  // The replay adversary needs the wire history.
  bool need_log = false;
  for (const auto& a : cfg_.attacks) need_log |= a.kind == AttackKind::replay;
  std::vector<std::vector<BitString>> wire_log;

  SimTrace tr;
  tr.n = n;
  tr.p = M.p();
  Eigen::VectorXd x = M.initial_state();
  Eigen::VectorXd y_hat(n), y_wire(n), w(M.d()), u(M.p());
  std::vector<BitString> sent(nu), held;
  bool have_held = false;

  for (std::uint64_t t = 0; t < cfg_.T; ++t) {
    // Sensor.
    bool overflow = false;
    for (std::size_t i = 0; i < nu; ++i) {
      const Quantization qv = quantize(x(static_cast<Eigen::Index>(i)), fmt);
      overflow |= qv.overflow;
      const BitString y = encode(qv.level, fmt);
      sent[i] = cfg_.L == 0 ? y : encode_measurement(y, sensor[i].mac(), cfg_.L, fmt).bits;
      sensor[i].advance();
    }
    if (need_log) wire_log.push_back(sent);

    // Adversary.
    std::vector<BitString> wire;
    const AttackPhase* phase = active_phase(cfg_.attacks, t);
    if (phase == nullptr) {
      wire = sent;
    } else if (phase->kind == AttackKind::replay) {
      wire = apply_replay(wire_log, t, phase->tau);
    } else if (phase->kind == AttackKind::bias) {
      for (std::size_t i = 0; i < nu; ++i) y_wire(static_cast<Eigen::Index>(i)) = decode_value(sent[i], fmt);
      wire = apply_bias(y_wire, phase->beta, phase->x_inf, fmt, cfg_.L, adv_rng);
    } else {
      wire = apply_lsb_forge(sent, cfg_.L, adv_rng);
    }

    // Channel.
    bool dropped = false;
    if (have_held && t >= cfg_.channel.start) dropped = !deliver(channel_rng);
    if (!dropped) {
      held = std::move(wire);
      have_held = true;
    }

    // Detector and controller both see the delivered vector only.
    const bool g = detector ? detector->step(held) : false;
    for (std::size_t i = 0; i < nu; ++i) y_hat(static_cast<Eigen::Index>(i)) = decode_value(held[i], fmt);
    u.noalias() = -M.K * y_hat;

    const double cost = x.dot(M.Q * x);
    tr.cost_sum += cost;
    tr.max_abs_x1 = std::max(tr.max_abs_x1, std::abs(x(0)));
    tr.alarms += g ? 1 : 0;
    tr.finite = tr.finite && x.allFinite();
    ++tr.steps;
    if (cfg_.record) {
      tr.x.push_back(x);
      tr.u.push_back(u);
      tr.y_hat.push_back(y_hat);
      tr.sent.push_back(sent);
      tr.delivered.push_back(held);
      tr.g.push_back(g);
      tr.dropped.push_back(dropped);
      tr.attack_active.push_back(phase != nullptr);
      tr.overflow.push_back(overflow);
      tr.sensor_counter.push_back(sensor[0].counter());
      std::vector<std::uint64_t> ld(nu, 0);
      if (detector) {
        for (std::size_t i = 0; i < nu; ++i) ld[i] = detector->counter(i);
      }
      tr.detector_counter.push_back(std::move(ld));
    }

    // Plant.
    if (cfg_.noise == NoiseKind::uniform) {
      for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = uni(noise_rng);
    } else {
      Eigen::VectorXd z(w.size());
      for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = normal(noise_rng);
      w.noalias() = Lw * z;
    }
    x = M.A * x + M.B * u + M.Bw * w;
  }
  return tr;
}

SimSummary summarize(const SimTrace& trace, const SimConfig& cfg) {
  SimSummary s;
  s.max_abs_x1 = trace.max_abs_x1;
  s.safe_set_violated = trace.max_abs_x1 > cfg.model.safe_bound_x1;
  s.finite = trace.finite;
  for (const auto& a : cfg.attacks) {
    if (a.kind != AttackKind::none) s.attacks.push_back({a, std::nullopt});
  }
  std::uint64_t run = 0;
  for (std::uint64_t t = 0; t < trace.g.size(); ++t) {
    run = trace.dropped[t] ? run + 1 : 0;
    s.longest_drop_run = std::max(s.longest_drop_run, run);
    if (!trace.g[t]) continue;
    s.alarm_times.push_back(t);
    bool inside = false;
    for (auto& o : s.attacks) {
      if (t >= o.phase.start && t < o.phase.end) {
        inside = true;
        if (!o.detected_at) o.detected_at = t;
      }
    }
    if (!inside) ++s.alarms_outside_attacks;
  }
  return s;
}

void write_summary(std::ostream& out, const SimSummary& s) {
  for (const auto& o : s.attacks) {
    out << to_string(o.phase.kind) << " [" << o.phase.start << ", " << o.phase.end << "): ";
    if (o.detected_at) {
      out << "detected at t=" << *o.detected_at << " (delay " << *o.detected_at - o.phase.start << ")\n";
    } else {
      out << "not detected\n";
    }
  }
  out << "alarms: " << s.alarm_times.size() << " total, " << s.alarms_outside_attacks
      << " outside attack phases\n";
  out << "longest dropout run: " << s.longest_drop_run << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", s.max_abs_x1);
  out << "max |x1|: " << buf << (s.safe_set_violated ? " (safe bound exceeded)" : "") << '\n';
  if (!s.finite) out << "state became non-finite\n";
}

void write_trace_csv(std::ostream& out, const SimTrace& tr) {
  out << 't';
  for (Eigen::Index i = 1; i <= tr.n; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= tr.p; ++i) out << ",u" << i;
  out << ",g,dropped,attack_active,overflow,ls";
  for (Eigen::Index i = 1; i <= tr.n; ++i) out << ",ld" << i;
  out << '\n';
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (std::size_t t = 0; t < tr.x.size(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < tr.n; ++i) out << ',' << num(tr.x[t](i));
    for (Eigen::Index i = 0; i < tr.p; ++i) out << ',' << num(tr.u[t](i));
    out << ',' << int(tr.g[t]) << ',' << int(tr.dropped[t]) << ',' << int(tr.attack_active[t]) << ','
        << int(tr.overflow[t]) << ',' << tr.sensor_counter[t];
    for (auto c : tr.detector_counter[t]) out << ',' << c;
    out << '\n';
  }
}

}  // namespace lsbauth
