#include "lsbauth_cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "lsbauth/authcodec.hpp"
#include "lsbauth/errors.hpp"
#include "lsbauth/metrics.hpp"
#include "lsbauth/ncs_sim.hpp"
#include "lsbauth/vectors.hpp"
#include "lsbauth_cli/config.hpp"

namespace lsbauth::cli {

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;

  // simulate
  std::optional<std::string> format;
  std::optional<int> L;
  std::optional<int> r;
  std::optional<std::uint64_t> T;
  std::optional<double> dropout_p;
  std::optional<std::uint64_t> dropout_start;
  std::optional<std::string> noise;
  std::optional<std::string> master_key;
  bool no_detector = false;

  // metrics
  std::vector<std::string> formats;
  std::optional<std::string> L_range;
  std::string ellipsoid_out;

  // security
  std::optional<std::string> sec_L, sec_r, sec_T;
  std::uint64_t monte_carlo = 0;

  // vectors
  std::string check;
};

// Output goes to --out when given, else to the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

RunConfig base_config(const Options& o) {
  RunConfig c = o.config.empty() ? default_config() : load_config(o.config);
  if (o.seed) c.sim.seed = *o.seed;
  return c;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  RunConfig c = base_config(o);
  SimConfig& s = c.sim;
  if (o.format) s.format = NumberFormat::parse(*o.format);
  if (o.L) s.L = *o.L;
  if (o.r) s.r = *o.r;
  if (o.T) s.T = *o.T;
  if (o.dropout_p) s.channel.p = *o.dropout_p;
  if (o.dropout_start) s.channel.start = *o.dropout_start;
  if (o.noise) {
    if (*o.noise == "uniform") {
      s.noise = NoiseKind::uniform;
    } else if (*o.noise == "gaussian") {
      s.noise = NoiseKind::gaussian;
    } else {
      throw ConfigError("noise must be 'uniform' or 'gaussian'");
    }
  }
  if (o.master_key) {
    try {
      s.master_key = Key::from_hex(*o.master_key);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--master-key: ") + e.what());
    }
  }
  if (o.no_detector) s.run_detector = false;
  s.record = true;

  const SimTrace trace = simulate(s);
  Sink sink(o.out, out);
  write_trace_csv(sink.stream(), trace);
  write_summary(sink.to_file() ? out : err, summarize(trace, s));
  return kExitOk;
}

int cmd_metrics(const Options& o, std::ostream& out) {
  RunConfig c = base_config(o);
  std::vector<NumberFormat> formats;
  for (const auto& f : o.formats) formats.push_back(NumberFormat::parse(f));
  if (formats.empty()) formats = c.metric_formats;
  if (formats.empty()) formats.push_back(c.sim.format);

  std::vector<int> Ls = c.metric_L;
  if (o.L_range) {
    Ls = parse_int_list(*o.L_range);
    if (Ls.empty()) throw ConfigError("empty L range");
  }
  c.sim.model.validate();

  std::vector<SweepRow> rows;
  nlohmann::json ellipsoids = nlohmann::json::array();
  for (const auto& fmt : formats) {
    std::vector<int> range = Ls;
    if (range.empty()) {
      for (int L = 0; L <= fmt.m(); ++L) range.push_back(L);
    }
    auto part = sweep_table(c.sim.model, fmt, range);
    rows.insert(rows.end(), part.begin(), part.end());
    if (!o.ellipsoid_out.empty() && fmt.is_fixed()) {
      for (int L : range) {
        nlohmann::json j{{"format", fmt.descriptor()}, {"m", fmt.m()}, {"L", L}};
        try {
          const Ellipsoid e = fixed_point_ellipsoid(c.sim.model, error_bound_fixed(fmt.m(), L));
          std::vector<std::vector<double>> P(static_cast<std::size_t>(e.P.rows()));
          for (Eigen::Index i = 0; i < e.P.rows(); ++i) {
            for (Eigen::Index k = 0; k < e.P.cols(); ++k) P[static_cast<std::size_t>(i)].push_back(e.P(i, k));
          }
          j["P"] = P;
          j["alpha"] = e.alpha;
          j["certificate_min_eig"] = e.certificate;
        } catch (const DivergenceError&) {
          j["P"] = nullptr;
        }
        ellipsoids.push_back(j);
      }
    }
  }
  Sink sink(o.out, out);
  write_table_csv(sink.stream(), rows);
  if (!o.ellipsoid_out.empty()) {
    std::ofstream f(o.ellipsoid_out);
    if (!f) throw ConfigError("cannot open ellipsoid output '" + o.ellipsoid_out + "'");
    f << ellipsoids.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_security(const Options& o, std::ostream& out) {
  RunConfig c = base_config(o);
  std::vector<int> Ls = c.security_L, rs = c.security_r;
  std::vector<std::uint64_t> Ts = c.security_T;
  if (o.sec_L) Ls = parse_int_list(*o.sec_L);
  if (o.sec_r) rs = parse_int_list(*o.sec_r);
  if (o.sec_T) {
    Ts.clear();
    for (int t : parse_int_list(*o.sec_T)) {
      if (t < 0) throw ConfigError("T must be non-negative");
      Ts.push_back(static_cast<std::uint64_t>(t));
    }
  }
  if (Ls.empty() || rs.empty() || Ts.empty()) throw ConfigError("security needs non-empty L, r and T lists");
  for (int L : Ls) {
    if (L < 0 || L > 51) throw ConfigError("L out of range");
  }
  for (int r : rs) {
    if (r < 1) throw ConfigError("r must be at least 1");
  }

  Sink sink(o.out, out);
  auto& os = sink.stream();
  os << "L,r,T,probability";
  if (o.monte_carlo) os << ",empirical,sigma";
  os << '\n';
  const NumberFormat wide = FixedFormat{1, 51};  // room for any L <= 51
  std::uint64_t cell = 0;
  for (int L : Ls) {
    for (int r : rs) {
      for (std::uint64_t T : Ts) {
        const double p = attack_success_probability(L, r, T);
        os << L << ',' << r << ',' << T << ',' << fmt6(p);
        if (o.monte_carlo) {
          const NumberFormat fmt = L <= 8 ? NumberFormat(FixedFormat{7, 8}) : wide;
          const auto est = estimate_forgery(L, r, o.monte_carlo, c.sim.seed + cell, T, fmt);
          os << ',' << fmt6(est.rate()) << ',' << fmt6(est.sigma(p));
        }
        os << '\n';
        ++cell;
      }
    }
  }
  return kExitOk;
}

int cmd_vectors(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.check.empty()) {
    std::ifstream in(o.check);
    if (!in) throw ConfigError("cannot open vector file '" + o.check + "'");
    std::vector<TestVector> vs;
    try {
      vs = read_vectors(in);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("malformed vector file: ") + e.what());
    }
    std::size_t bad = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (!check_vector(vs[i])) {
        ++bad;
        err << "vector " << i + 1 << " does not verify\n";
      }
    }
    out << vs.size() - bad << '/' << vs.size() << " vectors verify\n";
    return bad ? kExitFailure : kExitOk;
  }
  Sink sink(o.out, out);
  write_vectors(sink.stream(), conformance_vectors());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LSB HMAC authentication for networked control: simulation, metrics, security"};
  app.name("lsbauth");
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "YAML scenario file");
  app.add_option("--seed", o.seed, "random seed (overrides the config)");
  app.add_option("--out", o.out, "output file (default: standard output)");
  app.fallthrough();

  auto* sim = app.add_subcommand("simulate", "run the closed loop and write a trace CSV");
  sim->add_option("--format", o.format, "number format, e.g. fl:q5m10");
  sim->add_option("--L", o.L, "coded bits per measurement");
  sim->add_option("--r", o.r, "detector look-ahead window");
  sim->add_option("--T", o.T, "number of steps");
  sim->add_option("--dropout-p", o.dropout_p, "packet delivery probability");
  sim->add_option("--dropout-start", o.dropout_start, "first step with dropouts");
  sim->add_option("--noise", o.noise, "uniform or gaussian");
  sim->add_option("--master-key", o.master_key, "master key as hex");
  sim->add_flag("--no-detector", o.no_detector, "skip the detector");

  auto* met = app.add_subcommand("metrics", "sweep the performance metrics over L");
  met->add_option("--format", o.formats, "number format(s)");
  met->add_option("--L", o.L_range, "L values, e.g. 0..8");
  met->add_option("--ellipsoid-out", o.ellipsoid_out, "write invariant ellipsoids as JSON");

  auto* sec = app.add_subcommand("security", "attack success probability grid");
  sec->add_option("--L", o.sec_L, "L values");
  sec->add_option("--r", o.sec_r, "window sizes");
  sec->add_option("--T", o.sec_T, "attack lengths");
  sec->add_option("--monte-carlo", o.monte_carlo, "trials for an empirical column");

  auto* vec = app.add_subcommand("vectors", "emit or check conformance vectors");
  vec->add_option("--check", o.check, "verify an existing vector file");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(o, out, err);
    if (*met) return cmd_metrics(o, out);
    if (*sec) return cmd_security(o, out);
    if (*vec) return cmd_vectors(o, out, err);
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace lsbauth::cli
