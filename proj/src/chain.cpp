#include "rmab/chain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "rmab/errors.hpp"

namespace rmab {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kSolveTol = 1e-12;
constexpr double kReversibleTol = 1e-10;

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void check_matrix(const std::vector<double>& m, int n, const char* name,
                  std::vector<std::string>& errors) {
  if (static_cast<int>(m.size()) != n * n) {
    std::ostringstream os;
    os << name << " matrix has " << m.size() << " entries, expected " << n * n;
    errors.push_back(os.str());
    return;
  }
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double e = m[i * n + j];
      if (e < 0.0 || e > 1.0) {
        std::ostringstream os;
        os << name << " matrix entry (" << i << "," << j << ") = " << e
           << " outside [0,1]";
        errors.push_back(os.str());
      }
      sum += e;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      std::ostringstream os;
      os << name << " matrix row " << i << " sums to " << sum
         << ", not row-stochastic";
      errors.push_back(os.str());
    }
  }
}

// Support graph of the active matrix.
std::vector<std::vector<int>> support_edges(const RewardedMarkovChain& c, bool transpose) {
  const int n = c.state_count;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (c.active[i * n + j] > 0.0) adj[transpose ? j : i].push_back(transpose ? i : j);
  return adj;
}

std::vector<int> bfs_levels(const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> level(adj.size(), -1);
  std::vector<int> queue{src};
  level[src] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int v : adj[u])
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
  }
  return level;
}

bool strongly_connected(const RewardedMarkovChain& c) {
  const auto fwd = bfs_levels(support_edges(c, false), 0);
  if (std::any_of(fwd.begin(), fwd.end(), [](int l) { return l < 0; })) return false;
  const auto bwd = bfs_levels(support_edges(c, true), 0);
  return std::none_of(bwd.begin(), bwd.end(), [](int l) { return l < 0; });
}

// Period of a strongly connected support graph: gcd over edges (u,v) of
// |level(u) + 1 - level(v)| relative to any BFS layering.
int graph_period(const RewardedMarkovChain& c) {
  const auto adj = support_edges(c, false);
  const auto level = bfs_levels(adj, 0);
  long long g = 0;
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (int v : adj[u])
      g = std::gcd(g, std::llabs(level[u] + 1 - level[v]));
  return static_cast<int>(g);
}

std::vector<double> solve_stationary(const RewardedMarkovChain& chain) {
  const int n = chain.state_count;
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P(i, j) = chain.active[i * n + j];

  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);

  auto residual = [&](const Eigen::VectorXd& v) {
    return ((P.transpose() * v) - v).cwiseAbs().maxCoeff();
  };

  if (!pi.allFinite() || pi.minCoeff() < -kSolveTol || residual(pi) > kSolveTol) {
    // Damped power iteration fallback for chains where the direct solve is
    // ill-conditioned.
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
    const Eigen::MatrixXd T = 0.5 * (P.transpose() + Eigen::MatrixXd::Identity(n, n));
    for (int it = 0; it < 2000000; ++it) {
      Eigen::VectorXd next = T * v;
      next /= next.sum();
      const double delta = (next - v).cwiseAbs().maxCoeff();
      v = next;
      if (delta < 1e-15) break;
    }
    pi = v;
    const double res = residual(pi);
    if (res > kSolveTol) {
      std::ostringstream os;
      os << "stationary distribution solve failed to converge, residual " << res;
      throw NumericError(os.str());
    }
  }

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(pi(i), 0.0);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= total;
  return out;
}

}  // namespace

RewardedMarkovChain RewardedMarkovChain::gilbert_elliot(double p01, double p10,
                                                        double r_bad, double r_good) {
  RewardedMarkovChain c;
  c.state_count = 2;
  c.active = {1.0 - p01, p01, p10, 1.0 - p10};
  c.passive = c.active;
  c.rewards = {r_bad, r_good};
  return c;
}

ChainValidation validate_chain(const RewardedMarkovChain& chain) {
  ChainValidation v;
  const int n = chain.state_count;
  if (n < 1) {
    v.errors.push_back("state_count must be at least 1");
    return v;
  }
  check_matrix(chain.active, n, "active", v.errors);
  check_matrix(chain.passive, n, "passive", v.errors);
  if (static_cast<int>(chain.rewards.size()) != n) {
    std::ostringstream os;
    os << "rewards has " << chain.rewards.size() << " entries, expected " << n;
    v.errors.push_back(os.str());
  } else {
    for (int i = 0; i < n; ++i)
      if (!(chain.rewards[i] > 0.0) || chain.rewards[i] > 1.0) {
        std::ostringstream os;
        os << "reward for state " << i << " = " << chain.rewards[i]
           << " outside (0,1]";
        v.errors.push_back(os.str());
      }
  }
  if (!v.errors.empty()) return v;

  if (!strongly_connected(chain)) {
    v.errors.push_back("active matrix is reducible");
  } else {
    const int period = graph_period(chain);
    if (period != 1) {
      std::ostringstream os;
      os << "active matrix is periodic with period " << period;
      v.errors.push_back(os.str());
    }
  }
  if (!v.errors.empty()) return v;

  v.ok = true;
  const auto pi = solve_stationary(chain);
  v.reversible = true;
  for (int i = 0; i < n && v.reversible; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(pi[i] * chain.p(i, j) - pi[j] * chain.p(j, i)) > kReversibleTol) {
        v.reversible = false;
        std::ostringstream os;
        os << "active matrix is not reversible (detailed balance fails at " << i
           << "," << j << ")";
        v.warnings.push_back(os.str());
        break;
      }
  return v;
}

void require_valid(const RewardedMarkovChain& chain) {
  const auto v = validate_chain(chain);
  if (!v.ok) throw ValidationError("invalid chain: " + join(v.errors, "; "));
}

StationaryProfile stationary_distribution(const RewardedMarkovChain& chain) {
  require_valid(chain);
  StationaryProfile s;
  s.pi = solve_stationary(chain);
  s.min_pi = *std::min_element(s.pi.begin(), s.pi.end());
  if (s.min_pi <= 0.0)
    throw NumericError("stationary distribution has a zero entry on an irreducible chain");
  s.mu = 0.0;
  s.reward_sum = 0.0;
  for (int i = 0; i < chain.state_count; ++i) {
    s.mu += chain.rewards[i] * s.pi[i];
    s.reward_sum += chain.rewards[i];
  }
  return s;
}

double arm_deviation_bound(const RewardedMarkovChain& chain) {
  const auto s = stationary_distribution(chain);
  return s.reward_sum / s.min_pi;
}

double chain_constant_cp(const std::vector<RewardedMarkovChain>& chains) {
  if (chains.empty()) throw ValidationError("chain_constant_cp: empty arm set");
  double cp = 0.0;
  for (const auto& c : chains) cp = std::max(cp, arm_deviation_bound(c));
  return cp;
}

EigenGaps eigen_gap(const RewardedMarkovChain& chain) {
  require_valid(chain);
  const int n = chain.state_count;
  EigenGaps g;
  if (n == 1) {
    g.plain = 1.0;
    g.mult_symm = 1.0;
    return g;
  }
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P(i, j) = chain.active[i * n + j];

  // Plain gap: 1 minus the largest real part among non-Perron eigenvalues.
  Eigen::EigenSolver<Eigen::MatrixXd> es(P);
  if (es.info() != Eigen::Success) throw NumericError("eigen solve failed on active matrix");
  const auto vals = es.eigenvalues();
  int perron = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(vals(i) - std::complex<double>(1.0, 0.0));
    if (d < best) {
      best = d;
      perron = i;
    }
  }
  double lambda2 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    if (i != perron) lambda2 = std::max(lambda2, vals(i).real());
  g.plain = 1.0 - lambda2;

  // Multiplicative symmetrization gap: 1 - lambda_2(P~ P). With
  // B = D^{1/2} P D^{-1/2}, the product P~ P is similar to the symmetric
  // positive semidefinite B^T B, so a self-adjoint solve suffices.
  const auto pi = solve_stationary(chain);
  Eigen::VectorXd sq(n), isq(n);
  for (int i = 0; i < n; ++i) {
    sq(i) = std::sqrt(pi[i]);
    isq(i) = 1.0 / sq(i);
  }
  const Eigen::MatrixXd B = sq.asDiagonal() * P * isq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses(B.transpose() * B);
  if (ses.info() != Eigen::Success)
    throw NumericError("eigen solve failed on symmetrized matrix");
  g.mult_symm = 1.0 - ses.eigenvalues()(n - 2);
  return g;
}

int sample_stationary_state(const RewardedMarkovChain& chain, std::mt19937_64& rng) {
  const auto pi = solve_stationary(chain);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int i = 0; i < chain.state_count - 1; ++i) {
    acc += pi[i];
    if (u < acc) return i;
  }
  return chain.state_count - 1;
}

}  // namespace rmab
