#include "dklms/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dklms/rng.hpp"

namespace dklms {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Collects per-field diagnostics; throws them all at once.
class FieldErrors {
 public:
  void add(const std::string& key, const std::string& problem) {
    lines_ += "config: " + key + ": " + problem + "\n";
  }
  bool any() const { return !lines_.empty(); }
  [[noreturn]] void raise() const { throw ConfigError(lines_); }
  void raise_if_any() const {
    if (any()) raise();
  }

 private:
  std::string lines_;
};

class KeyReader {
 public:
  explicit KeyReader(std::map<std::string, std::string> kv)
      : kv_(std::move(kv)) {}

  bool has(const std::string& key) {
    seen_.insert(key);
    return kv_.count(key) > 0;
  }

  template <typename Fn>
  void read(const std::string& key, FieldErrors& errs, Fn&& parse_into) {
    seen_.insert(key);
    const auto it = kv_.find(key);
    if (it == kv_.end()) return;
    parse_into(it->second, key, errs);
  }

  void check_unknown(FieldErrors& errs) const {
    for (const auto& [key, value] : kv_) {
      (void)value;
      if (!seen_.count(key)) errs.add(key, "unknown key");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> seen_;
};

bool parse_bool(const std::string& v, bool& out) {
  if (v == "true") {
    out = true;
    return true;
  }
  if (v == "false") {
    out = false;
    return true;
  }
  return false;
}

bool parse_double(const std::string& v, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(v, &pos);
    return pos == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& v, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(v, &pos);
    return pos == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
  try {
    std::size_t pos = 0;
    out = std::stoull(v, &pos);
    return pos == v.size() && v.find('-') == std::string::npos;
  } catch (...) {
    return false;
  }
}

bool parse_edges(const std::string& v,
                 std::vector<std::pair<int, int>>& out) {
  out.clear();
  const std::string body = trim(v);
  if (body.empty()) return true;
  for (const std::string& tok : split(body, ',')) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) return false;
    long long a = 0, b = 0;
    if (!parse_int(trim(tok.substr(0, dash)), a) ||
        !parse_int(trim(tok.substr(dash + 1)), b)) {
      return false;
    }
    out.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return true;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kDklms:
      return "dklms";
    case Algorithm::kNoncoopKlms:
      return "noncoop_klms";
    case Algorithm::kLinearDlms:
      return "linear_dlms";
    case Algorithm::kCentralizedKlms:
      return "centralized_klms";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "dklms") return Algorithm::kDklms;
  if (name == "noncoop_klms") return Algorithm::kNoncoopKlms;
  if (name == "linear_dlms") return Algorithm::kLinearDlms;
  if (name == "centralized_klms") return Algorithm::kCentralizedKlms;
  throw ConfigError("config: run.algorithms: unknown algorithm '" + name +
                    "'\n");
}

std::vector<std::pair<int, int>> default_topology_edges() {
  return {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5},
          {4, 6}, {4, 9}, {5, 6}, {5, 7}, {6, 8}, {7, 8}, {7, 9}, {8, 9}};
}

void ExperimentConfig::validate() const {
  FieldErrors errs;
  if (schema_version != 1) {
    errs.add("schema_version", "must be 1");
  }
  if (topology.nodes < 1) {
    errs.add("topology.nodes", "must be >= 1");
  }
  if (topology.use_random &&
      !(topology.random_edge_prob >= 0.0 && topology.random_edge_prob <= 1.0)) {
    errs.add("topology.random.edge_prob", "must lie in [0, 1]");
  }
  if (topology.use_random && topology.random_max_retries < 0) {
    errs.add("topology.random.max_retries", "must be >= 0");
  }
  if (kernel.family != KernelParams::Family::kGaussian) {
    errs.add("kernel.family", "only 'gaussian' is supported");
  }
  if (!(kernel.bandwidth > 0.0)) {
    errs.add("kernel.bandwidth", "must be > 0");
  }
  if (!(step_size > 0.0)) {
    errs.add("adaptive.step_size", "must be > 0");
  }
  if (buffer_capacity < 1) {
    errs.add("adaptive.buffer_capacity", "must be >= 1");
  }
  if (!(noise_variance >= 0.0)) {
    errs.add("stream.noise_variance", "must be >= 0");
  }
  if (regressor_window < 1) {
    errs.add("stream.regressor_window", "must be >= 1");
  }
  if (!std::isfinite(initial_output)) {
    errs.add("stream.initial_output", "must be finite");
  }
  if (linear_dim < 1) {
    errs.add("stream.linear_dim", "must be >= 1");
  }
  if (steps < 1) {
    errs.add("run.steps", "must be >= 1");
  }
  if (trials < 1) {
    errs.add("run.trials", "must be >= 1");
  }
  if (threads < 0) {
    errs.add("run.threads", "must be >= 0");
  }
  if (algorithms.empty()) {
    errs.add("run.algorithms", "at least one algorithm must be selected");
  }
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    for (std::size_t j = i + 1; j < algorithms.size(); ++j) {
      if (algorithms[i] == algorithms[j]) {
        errs.add("run.algorithms",
                 "duplicate entry '" + algorithm_name(algorithms[i]) + "'");
      }
    }
  }
  if (output_dir.empty()) {
    errs.add("run.output_dir", "must be nonempty");
  }
  if (rng_algorithm != rng::kAlgorithmName) {
    errs.add("rng.algorithm",
             "only '" + std::string(rng::kAlgorithmName) + "' is supported");
  }
  errs.raise_if_any();
}

ExperimentConfig parse_config_text(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> kv;
  FieldErrors errs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.add("line " + std::to_string(lineno), "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      errs.add("line " + std::to_string(lineno), "empty key");
      continue;
    }
    if (kv.count(key)) {
      errs.add(key, "duplicate key");
      continue;
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  errs.raise_if_any();
  for (const auto& [key, value] : overrides) kv[key] = value;

  ExperimentConfig cfg;
  cfg.topology.edges = default_topology_edges();
  KeyReader reader(std::move(kv));

  const auto read_int = [&reader, &errs](const std::string& key, auto& field) {
    reader.read(key, errs, [&field](const std::string& v, const std::string& k,
                                    FieldErrors& e) {
      long long out = 0;
      if (!parse_int(v, out)) {
        e.add(k, "expected an integer, got '" + v + "'");
      } else {
        field = static_cast<std::decay_t<decltype(field)>>(out);
      }
    });
  };
  const auto read_double = [&reader, &errs](const std::string& key,
                                            double& field) {
    reader.read(key, errs, [&field](const std::string& v, const std::string& k,
                                    FieldErrors& e) {
      double out = 0;
      if (!parse_double(v, out)) {
        e.add(k, "expected a real number, got '" + v + "'");
      } else {
        field = out;
      }
    });
  };
  const auto read_bool = [&reader, &errs](const std::string& key,
                                          bool& field) {
    reader.read(key, errs, [&field](const std::string& v, const std::string& k,
                                    FieldErrors& e) {
      bool out = false;
      if (!parse_bool(v, out)) {
        e.add(k, "expected true or false, got '" + v + "'");
      } else {
        field = out;
      }
    });
  };

  read_int("schema_version", cfg.schema_version);
  read_int("topology.nodes", cfg.topology.nodes);
  reader.read("topology.edges", errs,
              [&cfg](const std::string& v, const std::string& k,
                     FieldErrors& e) {
                if (!parse_edges(v, cfg.topology.edges)) {
                  e.add(k, "expected comma-separated 'a-b' pairs, got '" + v +
                               "'");
                }
              });
  if (reader.has("topology.random.edge_prob")) cfg.topology.use_random = true;
  read_double("topology.random.edge_prob", cfg.topology.random_edge_prob);
  reader.read("topology.random.seed", errs,
              [&cfg](const std::string& v, const std::string& k,
                     FieldErrors& e) {
                if (!parse_u64(v, cfg.topology.random_seed)) {
                  e.add(k, "expected an unsigned integer, got '" + v + "'");
                }
              });
  read_int("topology.random.max_retries", cfg.topology.random_max_retries);
  reader.read("kernel.family", errs,
              [&cfg](const std::string& v, const std::string& k,
                     FieldErrors& e) {
                if (v == "gaussian") {
                  cfg.kernel.family = KernelParams::Family::kGaussian;
                } else {
                  e.add(k, "unknown kernel family '" + v + "'");
                }
              });
  read_double("kernel.bandwidth", cfg.kernel.bandwidth);
  read_double("adaptive.step_size", cfg.step_size);
  read_int("adaptive.buffer_capacity", cfg.buffer_capacity);
  read_bool("adaptive.mask_one_hop", cfg.mask_one_hop);
  reader.read("stream.kind", errs,
              [&cfg](const std::string& v, const std::string& k,
                     FieldErrors& e) {
                if (v == "nonlinear") {
                  cfg.stream_kind = StreamKind::kNonlinear;
                } else if (v == "linear") {
                  cfg.stream_kind = StreamKind::kLinear;
                } else {
                  e.add(k, "expected nonlinear or linear, got '" + v + "'");
                }
              });
  read_double("stream.noise_variance", cfg.noise_variance);
  read_int("stream.regressor_window", cfg.regressor_window);
  read_double("stream.initial_output", cfg.initial_output);
  read_bool("stream.resample_chi_per_trial", cfg.resample_chi_per_trial);
  read_int("stream.linear_dim", cfg.linear_dim);
  read_int("run.steps", cfg.steps);
  read_int("run.trials", cfg.trials);
  reader.read("run.seed", errs,
              [&cfg](const std::string& v, const std::string& k,
                     FieldErrors& e) {
                if (!parse_u64(v, cfg.seed)) {
                  e.add(k, "expected an unsigned integer, got '" + v + "'");
                }
              });
  reader.read("run.algorithms", errs,
              [&cfg](const std::string& v, const std::string& k,
                     FieldErrors& e) {
                cfg.algorithms.clear();
                for (const std::string& tok : split(v, ',')) {
                  if (tok.empty()) {
                    e.add(k, "empty algorithm name");
                    continue;
                  }
                  try {
                    cfg.algorithms.push_back(algorithm_from_name(tok));
                  } catch (const ConfigError&) {
                    e.add(k, "unknown algorithm '" + tok + "'");
                  }
                }
              });
  read_int("run.threads", cfg.threads);
  reader.read("run.output_dir", errs,
              [&cfg](const std::string& v, const std::string&, FieldErrors&) {
                cfg.output_dir = v;
              });
  reader.read("rng.algorithm", errs,
              [&cfg](const std::string& v, const std::string&, FieldErrors&) {
                cfg.rng_algorithm = v;
              });

  reader.check_unknown(errs);
  errs.raise_if_any();
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'\n");
  }
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config_text(body.str(), overrides);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "schema_version = " << cfg.schema_version << "\n";
  out << "topology.nodes = " << cfg.topology.nodes << "\n";
  if (cfg.topology.use_random) {
    out << "topology.random.edge_prob = "
        << format_double(cfg.topology.random_edge_prob) << "\n";
    out << "topology.random.seed = " << cfg.topology.random_seed << "\n";
    out << "topology.random.max_retries = " << cfg.topology.random_max_retries
        << "\n";
  } else {
    out << "topology.edges = ";
    for (std::size_t i = 0; i < cfg.topology.edges.size(); ++i) {
      if (i) out << ",";
      out << cfg.topology.edges[i].first << "-"
          << cfg.topology.edges[i].second;
    }
    out << "\n";
  }
  out << "kernel.family = gaussian\n";
  out << "kernel.bandwidth = " << format_double(cfg.kernel.bandwidth) << "\n";
  out << "adaptive.step_size = " << format_double(cfg.step_size) << "\n";
  out << "adaptive.buffer_capacity = " << cfg.buffer_capacity << "\n";
  out << "adaptive.mask_one_hop = " << (cfg.mask_one_hop ? "true" : "false")
      << "\n";
  out << "stream.kind = "
      << (cfg.stream_kind == StreamKind::kNonlinear ? "nonlinear" : "linear")
      << "\n";
  out << "stream.noise_variance = " << format_double(cfg.noise_variance)
      << "\n";
  out << "stream.regressor_window = " << cfg.regressor_window << "\n";
  out << "stream.initial_output = " << format_double(cfg.initial_output)
      << "\n";
  out << "stream.resample_chi_per_trial = "
      << (cfg.resample_chi_per_trial ? "true" : "false") << "\n";
  out << "stream.linear_dim = " << cfg.linear_dim << "\n";
  out << "run.steps = " << cfg.steps << "\n";
  out << "run.trials = " << cfg.trials << "\n";
  out << "run.seed = " << cfg.seed << "\n";
  out << "run.algorithms = ";
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
    if (i) out << ",";
    out << algorithm_name(cfg.algorithms[i]);
  }
  out << "\n";
  out << "run.threads = " << cfg.threads << "\n";
  out << "run.output_dir = " << cfg.output_dir << "\n";
  out << "rng.algorithm = " << cfg.rng_algorithm << "\n";
  return out.str();
}

Topology resolve_topology(const ExperimentConfig& cfg) {
  try {
    if (cfg.topology.use_random) {
      return Topology::random(cfg.topology.nodes,
                              cfg.topology.random_edge_prob,
                              cfg.topology.random_seed,
                              cfg.topology.random_max_retries);
    }
    return Topology::from_edges(cfg.topology.nodes, cfg.topology.edges);
  } catch (const std::exception& e) {
    throw ConfigError("config: topology: " + std::string(e.what()) + "\n");
  }
}

}  // namespace dklms
