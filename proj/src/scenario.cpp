#include "rmab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rmab/bounds.hpp"
#include "rmab/errors.hpp"

namespace rmab {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

double parse_real(const std::string& origin, int line, const std::string& tok) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) fail(origin, line, "expected a number, got '" + tok + "'");
  return v;
}

std::int64_t parse_int(const std::string& origin, int line, const std::string& tok) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    fail(origin, line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size()) fail(origin, line, "expected an integer, got '" + tok + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& origin, int line, const std::string& tok) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    fail(origin, line, "expected an unsigned integer, got '" + tok + "'");
  }
  if (pos != tok.size())
    fail(origin, line, "expected an unsigned integer, got '" + tok + "'");
  return v;
}

struct ArmDraft {
  std::string label;
  int declared_line = 0;
  int states = 0;
  std::vector<double> active;
  std::vector<double> passive;
  bool passive_same = false;
  std::vector<double> rewards;
  int start = -1;
  bool has_states = false, has_active = false, has_passive = false, has_rewards = false;
};

std::vector<double> parse_matrix(const std::string& origin, int line,
                                 const std::vector<std::string>& toks, int states,
                                 const std::string& key) {
  std::vector<std::vector<double>> rows(1);
  for (std::size_t i = 1; i < toks.size(); ++i) {
    if (toks[i] == "/")
      rows.emplace_back();
    else
      rows.back().push_back(parse_real(origin, line, toks[i]));
  }
  if (static_cast<int>(rows.size()) != states) {
    std::ostringstream os;
    os << key << " has " << rows.size() << " rows, expected " << states;
    fail(origin, line, os.str());
  }
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != states) {
      std::ostringstream os;
      os << key << " row has " << r.size() << " entries, expected " << states;
      fail(origin, line, os.str());
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return flat;
}

void close_arm(const std::string& origin, ArmDraft& draft, ScenarioConfig& cfg) {
  const int line = draft.declared_line;
  if (!draft.has_states) fail(origin, line, "arm '" + draft.label + "' missing 'states'");
  if (!draft.has_active) fail(origin, line, "arm '" + draft.label + "' missing 'active'");
  if (!draft.has_rewards)
    fail(origin, line, "arm '" + draft.label + "' missing 'rewards'");

  RewardedMarkovChain chain;
  chain.state_count = draft.states;
  chain.active = draft.active;
  chain.passive = draft.has_passive && !draft.passive_same ? draft.passive : draft.active;
  chain.rewards = draft.rewards;

  const auto v = validate_chain(chain);
  if (!v.ok) {
    std::string joined;
    for (std::size_t i = 0; i < v.errors.size(); ++i) {
      if (i) joined += "; ";
      joined += v.errors[i];
    }
    fail(origin, line, "arm '" + draft.label + "': " + joined);
  }
  for (const auto& w : v.warnings)
    cfg.warnings.push_back("arm '" + draft.label + "': " + w);

  if (draft.start < -1 || draft.start >= draft.states)
    fail(origin, line, "arm '" + draft.label + "' start state out of range");

  cfg.arms.push_back(std::move(chain));
  cfg.arm_labels.push_back(draft.label);
  cfg.start_states.push_back(draft.start);
  draft = ArmDraft{};
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  cfg.name = origin;

  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (const auto hash = raw.find('#'); hash != std::string::npos)
        raw.erase(hash);
      std::istringstream ls(raw);
      Line line;
      line.number = number;
      std::string tok;
      while (ls >> tok) line.tokens.push_back(tok);
      if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
  }

  bool in_arm = false;
  bool horizon_set = false;
  bool points_auto = true;
  std::vector<std::int64_t> explicit_points;
  ArmDraft draft;

  for (const auto& line : lines) {
    const auto& t = line.tokens;
    const std::string& key = t[0];
    const int ln = line.number;
    auto need = [&](std::size_t count) {
      if (t.size() != count + 1) {
        std::ostringstream os;
        os << "'" << key << "' expects " << count << " value(s), got " << t.size() - 1;
        fail(origin, ln, os.str());
      }
    };

    if (key == "arm") {
      need(1);
      if (in_arm) close_arm(origin, draft, cfg);
      in_arm = true;
      draft.label = t[1];
      draft.declared_line = ln;
      continue;
    }

    if (in_arm) {
      if (key == "states") {
        need(1);
        const auto s = parse_int(origin, ln, t[1]);
        if (s < 1 || s > 1000) fail(origin, ln, "states must be in 1..1000");
        draft.states = static_cast<int>(s);
        draft.has_states = true;
      } else if (key == "active") {
        if (!draft.has_states) fail(origin, ln, "'states' must precede 'active'");
        draft.active = parse_matrix(origin, ln, t, draft.states, "active");
        draft.has_active = true;
      } else if (key == "passive") {
        if (!draft.has_states) fail(origin, ln, "'states' must precede 'passive'");
        if (t.size() == 2 && t[1] == "same") {
          draft.passive_same = true;
        } else {
          draft.passive = parse_matrix(origin, ln, t, draft.states, "passive");
        }
        draft.has_passive = true;
      } else if (key == "rewards") {
        if (!draft.has_states) fail(origin, ln, "'states' must precede 'rewards'");
        need(static_cast<std::size_t>(draft.states));
        draft.rewards.clear();
        for (int i = 0; i < draft.states; ++i)
          draft.rewards.push_back(parse_real(origin, ln, t[static_cast<std::size_t>(i) + 1]));
        draft.has_rewards = true;
      } else if (key == "start") {
        need(1);
        if (t[1] == "stationary")
          draft.start = -1;
        else
          draft.start = static_cast<int>(parse_int(origin, ln, t[1]));
      } else {
        fail(origin, ln, "unknown arm key '" + key + "'");
      }
      continue;
    }

    if (key == "name") {
      need(1);
      cfg.name = t[1];
    } else if (key == "seed") {
      need(1);
      cfg.seed = parse_uint(origin, ln, t[1]);
    } else if (key == "horizon") {
      need(1);
      cfg.horizon = parse_int(origin, ln, t[1]);
      if (cfg.horizon < 1) fail(origin, ln, "horizon must be >= 1");
      horizon_set = true;
    } else if (key == "runs") {
      need(1);
      const auto r = parse_int(origin, ln, t[1]);
      if (r < 1 || r > 1000000) fail(origin, ln, "runs must be in 1..1000000");
      cfg.runs = static_cast<int>(r);
    } else if (key == "select") {
      need(1);
      const auto k = parse_int(origin, ln, t[1]);
      if (k < 1) fail(origin, ln, "select must be >= 1");
      cfg.select_count = static_cast<int>(k);
    } else if (key == "policy") {
      need(1);
      cfg.default_policy = t[1];
    } else if (key == "sample_points") {
      if (t.size() == 2 && t[1] == "auto") {
        points_auto = true;
      } else {
        if (t.size() < 2) fail(origin, ln, "'sample_points' expects 'auto' or a list");
        points_auto = false;
        explicit_points.clear();
        for (std::size_t i = 1; i < t.size(); ++i)
          explicit_points.push_back(parse_int(origin, ln, t[i]));
      }
    } else if (key == "cee_exploration") {
      need(1);
      cfg.cee.exploration = parse_real(origin, ln, t[1]);
    } else if (key == "cee_count_padded") {
      need(1);
      if (t[1] == "on")
        cfg.cee.count_padded = true;
      else if (t[1] == "off")
        cfg.cee.count_padded = false;
      else
        fail(origin, ln, "'cee_count_padded' expects on or off");
    } else if (key == "cee_schedule") {
      if (t.size() < 2) fail(origin, ln, "'cee_schedule' expects a kind");
      try {
        if (t[1] == "constant") {
          need(2);
          cfg.cee.schedule = StepSchedule::constant(parse_int(origin, ln, t[2]));
        } else if (t[1] == "log") {
          need(1);
          cfg.cee.schedule = StepSchedule::logarithmic();
        } else if (t[1] == "list") {
          if (t.size() < 4 || t.back() != "attested")
            fail(origin, ln,
                 "'cee_schedule list' requires step lengths followed by the "
                 "keyword 'attested' (a divergence attestation)");
          std::vector<std::int64_t> prefix;
          for (std::size_t i = 2; i + 1 < t.size(); ++i)
            prefix.push_back(parse_int(origin, ln, t[i]));
          cfg.cee.schedule = StepSchedule::custom(std::move(prefix), true);
        } else {
          fail(origin, ln, "unknown schedule kind '" + t[1] + "'");
        }
      } catch (const ConfigError& e) {
        fail(origin, ln, e.what());
      }
    } else if (key == "rca_exploration") {
      need(1);
      if (!cfg.rca) cfg.rca.emplace();
      cfg.rca->exploration = parse_real(origin, ln, t[1]);
    } else if (key == "rucb_exploration") {
      need(1);
      if (!cfg.rucb) cfg.rucb.emplace();
      cfg.rucb->exploration = parse_real(origin, ln, t[1]);
    } else if (key == "rucb_threshold") {
      need(1);
      if (!cfg.rucb) cfg.rucb.emplace();
      cfg.rucb->exploit_threshold = parse_real(origin, ln, t[1]);
    } else {
      fail(origin, ln, "unknown key '" + key + "'");
    }
  }
  if (in_arm) close_arm(origin, draft, cfg);

  if (!horizon_set) fail(origin, 0, "missing required key 'horizon'");
  if (cfg.arms.empty()) fail(origin, 0, "scenario declares no arms");

  if (!points_auto) {
    for (auto p : explicit_points)
      if (p < 1 || p > cfg.horizon)
        fail(origin, 0, "sample point outside 1..horizon");
    std::sort(explicit_points.begin(), explicit_points.end());
    explicit_points.erase(std::unique(explicit_points.begin(), explicit_points.end()),
                          explicit_points.end());
    cfg.sample_points = explicit_points;
  }

  finalize_scenario(cfg);
  return cfg;
}

void finalize_scenario(ScenarioConfig& cfg) {
  const int n = cfg.arm_count();
  if (n < 2) throw ConfigError(cfg.name + ": at least 2 arms are required");
  if (cfg.select_count < 1 || cfg.select_count >= n) {
    std::ostringstream os;
    os << cfg.name << ": select=" << cfg.select_count << " with " << n
       << " arms rejected (1 <= K < N)";
    throw ConfigError(os.str());
  }

  cfg.profiles.clear();
  for (const auto& c : cfg.arms) cfg.profiles.push_back(stationary_distribution(c));

  cfg.rank_order.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cfg.rank_order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(cfg.rank_order.begin(), cfg.rank_order.end(), [&](int a, int b) {
    return cfg.profiles[static_cast<std::size_t>(a)].mu >
           cfg.profiles[static_cast<std::size_t>(b)].mu;
  });
  for (int r = 0; r + 1 < n; ++r)
    if (cfg.profiles[static_cast<std::size_t>(cfg.rank_order[r])].mu ==
        cfg.profiles[static_cast<std::size_t>(cfg.rank_order[r + 1])].mu)
      cfg.warnings.push_back(
          "tied stationary means; rank order breaks the tie by arm index");

  cfg.genie_rate = 0.0;
  for (int r = 0; r < cfg.select_count; ++r)
    cfg.genie_rate += cfg.profiles[static_cast<std::size_t>(cfg.rank_order[r])].mu;

  // The cee initialization must fit in the horizon.
  const std::int64_t batches = (n + cfg.select_count - 1) / cfg.select_count;
  std::int64_t init_slots = 0;
  try {
    init_slots = cfg.cee.schedule.cumulative(batches);
  } catch (const UsageError& e) {
    throw ConfigError(cfg.name + ": " + e.what());
  }
  if (cfg.horizon < init_slots) {
    std::ostringstream os;
    os << cfg.name << ": horizon " << cfg.horizon << " is shorter than the "
       << init_slots << "-slot initialization";
    throw ConfigError(os.str());
  }

  if (cfg.sample_points.empty()) {
    std::vector<std::int64_t> pts;
    for (double e = 2.0;; e += 0.5) {
      const double v = std::pow(10.0, e);
      if (v >= static_cast<double>(cfg.horizon)) break;
      pts.push_back(static_cast<std::int64_t>(v));
    }
    if (pts.empty() || pts.back() != cfg.horizon) pts.push_back(cfg.horizon);
    cfg.sample_points = std::move(pts);
  } else if (cfg.sample_points.back() != cfg.horizon) {
    cfg.sample_points.push_back(cfg.horizon);
  }

  // Feasibility advisory for constant schedules.
  if (cfg.cee.schedule.kind() == StepSchedule::Kind::Constant &&
      cfg.cee.exploration > 2.0) {
    try {
      const auto truth = ScenarioTruth::from_chains(cfg.arms, cfg.select_count,
                                                    cfg.cee.exploration, cfg.cee.schedule);
      const double need = std::ceil(cfg.select_count == 1
                                        ? required_step_length(truth)
                                        : required_step_length_multi(truth));
      if (static_cast<double>(cfg.cee.schedule.constant_value()) < need) {
        std::ostringstream os;
        os << "constant step length " << cfg.cee.schedule.constant_value()
           << " is below the feasibility requirement " << need
           << "; the logarithmic-regret guarantee does not apply";
        cfg.warnings.push_back(os.str());
      }
    } catch (const Error&) {
      // Advisory only: ties or other truth failures are reported elsewhere.
    }
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.filename().string());
}

}  // namespace rmab
