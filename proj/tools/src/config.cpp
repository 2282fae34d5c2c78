#include "lsbauth_cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "lsbauth/errors.hpp"

namespace lsbauth::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for " + what);
  }
}

Eigen::MatrixXd matrix(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(what + " must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = node[static_cast<std::size_t>(i)];
    if (!row.IsSequence()) throw ConfigError(what + " rows must be lists");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      if (cols == 0) throw ConfigError(what + " rows must be non-empty");
      m.resize(rows, cols);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError(what + " rows differ in length");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scalar<double>(row[static_cast<std::size_t>(j)], what);
  }
  return m;
}

Eigen::VectorXd vector(const YAML::Node& node, const std::string& what) {
  if (node.IsScalar()) {
    Eigen::VectorXd v(1);
    v(0) = scalar<double>(node, what);
    return v;
  }
  if (!node.IsSequence()) throw ConfigError(what + " must be a number or a list");
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar<double>(node[i], what);
  return v;
}

template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& what) {
  std::vector<T> out;
  if (node.IsScalar()) {
    out.push_back(scalar<T>(node, what));
  } else if (node.IsSequence()) {
    for (const auto& v : node) out.push_back(scalar<T>(v, what));
  } else {
    throw ConfigError(what + " must be a value or a list");
  }
  return out;
}

void read_model(const YAML::Node& node, ClosedLoopModel& m) {
  check_keys(node, "model", {"A", "B", "Bw", "K", "Q", "w_bound", "Sigma_w", "safe_bound_x1", "x0"});
  if (node["A"]) m.A = matrix(node["A"], "model.A");
  if (node["B"]) m.B = matrix(node["B"], "model.B");
  if (node["Bw"]) m.Bw = matrix(node["Bw"], "model.Bw");
  if (node["K"]) m.K = matrix(node["K"], "model.K");
  if (node["Q"]) m.Q = matrix(node["Q"], "model.Q");
  if (node["w_bound"]) m.w_bound = scalar<double>(node["w_bound"], "model.w_bound");
  if (node["Sigma_w"]) {
    const auto s = node["Sigma_w"];
    if (s.IsScalar()) {
      m.Sigma_w = scalar<double>(s, "model.Sigma_w") * Eigen::MatrixXd::Identity(m.Bw.cols(), m.Bw.cols());
    } else {
      m.Sigma_w = matrix(s, "model.Sigma_w");
    }
  }
  if (node["safe_bound_x1"]) m.safe_bound_x1 = scalar<double>(node["safe_bound_x1"], "model.safe_bound_x1");
  if (node["x0"]) m.x0 = vector(node["x0"], "model.x0");
}

AttackPhase read_attack(const YAML::Node& node) {
  check_keys(node, "attack", {"kind", "start", "end", "tau", "beta", "x_inf"});
  if (!node["kind"] || !node["start"] || !node["end"]) {
    throw ConfigError("attack needs kind, start and end");
  }
  AttackPhase a;
  a.kind = parse_attack_kind(scalar<std::string>(node["kind"], "attack.kind"));
  a.start = scalar<std::uint64_t>(node["start"], "attack.start");
  a.end = scalar<std::uint64_t>(node["end"], "attack.end");
  if (node["tau"]) a.tau = scalar<std::uint64_t>(node["tau"], "attack.tau");
  if (node["beta"]) a.beta = scalar<double>(node["beta"], "attack.beta");
  a.x_inf = node["x_inf"] ? vector(node["x_inf"], "attack.x_inf") : Eigen::VectorXd::Ones(1);
  if (a.kind == AttackKind::replay && !node["tau"]) throw ConfigError("replay attack needs tau");
  return a;
}

NumberFormat format(const YAML::Node& node, const std::string& what) {
  return NumberFormat::parse(scalar<std::string>(node, what));
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.sim.model = hydro_turbine_model();
  c.sim.format = FloatFormat{5, 10};
  c.sim.L = 4;
  c.sim.r = 2;
  c.sim.T = 150;
  return c;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw ConfigError("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("invalid integer list '" + text + "'");
    }
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item));
    } else {
      const int lo = to_int(item.substr(0, dots));
      const int hi = to_int(item.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig c = default_config();
  if (root.IsNull()) return c;
  check_keys(root, "config",
             {"model", "format", "coding", "attacks", "channel", "noise", "T", "seed", "metrics", "security"});

  if (root["model"]) read_model(root["model"], c.sim.model);
  if (root["format"]) c.sim.format = format(root["format"], "format");
  if (const auto n = root["coding"]) {
    check_keys(n, "coding", {"L", "r", "master_key", "detector"});
    if (n["L"]) c.sim.L = scalar<int>(n["L"], "coding.L");
    if (n["r"]) c.sim.r = scalar<int>(n["r"], "coding.r");
    if (n["master_key"]) {
      try {
        c.sim.master_key = Key::from_hex(scalar<std::string>(n["master_key"], "coding.master_key"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("coding.master_key: ") + e.what());
      }
    }
    if (n["detector"]) c.sim.run_detector = scalar<bool>(n["detector"], "coding.detector");
  }
  if (const auto n = root["attacks"]) {
    if (!n.IsSequence()) throw ConfigError("attacks must be a list");
    for (const auto& a : n) c.sim.attacks.push_back(read_attack(a));
  }
  if (const auto n = root["channel"]) {
    check_keys(n, "channel", {"dropout_p", "start"});
    if (n["dropout_p"]) c.sim.channel.p = scalar<double>(n["dropout_p"], "channel.dropout_p");
    if (n["start"]) c.sim.channel.start = scalar<std::uint64_t>(n["start"], "channel.start");
  }
  if (root["noise"]) {
    const auto s = scalar<std::string>(root["noise"], "noise");
    if (s == "uniform") {
      c.sim.noise = NoiseKind::uniform;
    } else if (s == "gaussian") {
      c.sim.noise = NoiseKind::gaussian;
    } else {
      throw ConfigError("noise must be 'uniform' or 'gaussian'");
    }
  }
  if (root["T"]) c.sim.T = scalar<std::uint64_t>(root["T"], "T");
  if (root["seed"]) c.sim.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (const auto n = root["metrics"]) {
    check_keys(n, "metrics", {"formats", "L"});
    if (n["formats"]) {
      for (const auto& f : list<std::string>(n["formats"], "metrics.formats")) {
        c.metric_formats.push_back(NumberFormat::parse(f));
      }
    }
    if (n["L"]) {
      c.metric_L = n["L"].IsScalar() ? parse_int_list(scalar<std::string>(n["L"], "metrics.L"))
                                     : list<int>(n["L"], "metrics.L");
      if (c.metric_L.empty()) throw ConfigError("metrics.L is empty");
    }
  }
  if (const auto n = root["security"]) {
    check_keys(n, "security", {"L", "r", "T"});
    if (n["L"]) c.security_L = list<int>(n["L"], "security.L");
    if (n["r"]) c.security_r = list<int>(n["r"], "security.r");
    if (n["T"]) c.security_T = list<std::uint64_t>(n["T"], "security.T");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace lsbauth::cli
