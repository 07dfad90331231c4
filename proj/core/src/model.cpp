#include "disg/model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "disg/rng.hpp"

namespace disg {

namespace {
constexpr double kRowSumTolerance = 1e-9;
constexpr double kProbZero = 1e-15;  // below this, treated as an exact zero in log arguments

std::string row_label(const std::string& what, std::size_t row) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), " row %zu", row);
  return what + buf;
}
}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonStochasticRow: return "NonStochasticRow";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroLikelihood: return "ZeroLikelihood";
    case ErrorCode::SignalActionMismatch: return "SignalActionMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ResolutionTooLarge: return "ResolutionTooLarge";
    case ErrorCode::OracleViolation: return "OracleViolation";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t k) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(k + 0x632be59bd9b4e019ULL)));
}

int Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw DisgError(ErrorCode::DimensionMismatch, "ragged matrix rows");
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw DisgError(ErrorCode::InvalidArgument, "empty belief");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw DisgError(ErrorCode::NegativeEntry, "belief entry < 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw DisgError(ErrorCode::NonStochasticRow, "belief does not sum to 1");
  }
}

Belief Belief::uniform(std::size_t num_states) {
  return Belief(std::vector<double>(num_states, 1.0 / static_cast<double>(num_states)));
}

Belief Belief::vertex(std::size_t num_states, std::size_t state) {
  std::vector<double> p(num_states, 0.0);
  p.at(state) = 1.0;
  return Belief(std::move(p));
}

Signal Signal::obs(int index) {
  if (index < 0) throw DisgError(ErrorCode::InvalidArgument, "negative observation index");
  Signal s;
  s.index_ = index;
  return s;
}

int Signal::obs_index() const {
  if (is_epsilon()) throw DisgError(ErrorCode::InvalidArgument, "obs_index of epsilon signal");
  return index_;
}

const Matrix& MarkovModel::channel(int agent) const {
  if (agent != 1 && agent != 2) throw DisgError(ErrorCode::InvalidArgument, "agent must be 1 or 2");
  return channels[static_cast<std::size_t>(agent - 1)];
}

MarkovModel MarkovModel::binary_symmetric(const Matrix& transition, double p1, double p2) {
  MarkovModel m;
  m.num_states = 2;
  m.transition = transition;
  m.channels[0] = Matrix::from_rows({{p1, 1.0 - p1}, {1.0 - p1, p1}});
  m.channels[1] = Matrix::from_rows({{p2, 1.0 - p2}, {1.0 - p2, p2}});
  return m;
}

namespace {
void check_stochastic(const Matrix& m, const std::string& what, std::size_t expected_rows,
                      ValidationReport& report) {
  if (m.rows() != expected_rows || m.cols() == 0) {
    report.issues.push_back({ErrorCode::DimensionMismatch, what,
                             "expected " + std::to_string(expected_rows) + " rows, got " +
                                 std::to_string(m.rows())});
    return;
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) < 0.0) {
        report.issues.push_back({ErrorCode::NegativeEntry, row_label(what, r),
                                 "entry " + std::to_string(c) + " is negative"});
      }
      sum += m(r, c);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      report.issues.push_back(
          {ErrorCode::NonStochasticRow, row_label(what, r), "row sums to " + std::to_string(sum)});
    }
  }
}
}  // namespace

ValidationReport validate_model(const MarkovModel& model) {
  ValidationReport report;
  if (model.num_states < 2) {
    report.issues.push_back({ErrorCode::DimensionMismatch, "num_states", "must be at least 2"});
    return report;
  }
  if (model.transition.cols() != model.num_states) {
    report.issues.push_back({ErrorCode::DimensionMismatch, "transition",
                             "kernel must be square over the state space"});
  }
  check_stochastic(model.transition, "transition", model.num_states, report);
  check_stochastic(model.channels[0], "channel 1", model.num_states, report);
  check_stochastic(model.channels[1], "channel 2", model.num_states, report);
  return report;
}

void require_valid(const MarkovModel& model) {
  ValidationReport report = validate_model(model);
  if (!report.ok()) {
    const ValidationIssue& first = report.issues.front();
    throw DisgError(first.code, first.where + ": " + first.message);
  }
}

double signal_likelihood(const MarkovModel& model, std::size_t state, const Signal& signal,
                         int opp_action, int agent) {
  if (signal.is_epsilon()) {
    return opp_action == 0 ? 1.0 : 0.0;
  }
  if (opp_action == 0) return 0.0;
  const Matrix& opp = model.channel(opponent_of(agent));
  return opp(state, static_cast<std::size_t>(signal.obs_index()));
}

Belief belief_update(const MarkovModel& model, const Belief& belief, int own_obs,
                     const Signal& signal, int opp_action, int agent) {
  if (signal.is_epsilon() != (opp_action == 0)) {
    throw DisgError(ErrorCode::SignalActionMismatch,
                    "signal is epsilon iff the opponent defected");
  }
  const std::size_t n = model.num_states;
  if (belief.size() != n) {
    throw DisgError(ErrorCode::DimensionMismatch, "belief dimension != num_states");
  }
  const Matrix& own = model.channel(agent);

  std::vector<double> weighted(n);
  double norm = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double like = own(x, static_cast<std::size_t>(own_obs)) *
                  signal_likelihood(model, x, signal, opp_action, agent);
    weighted[x] = like * belief[x];
    norm += weighted[x];
  }
  if (norm < std::numeric_limits<double>::min()) {
    throw DisgError(ErrorCode::ZeroLikelihood, "observation impossible under the belief");
  }

  std::vector<double> next(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (weighted[x] == 0.0) continue;
    const double w = weighted[x] / norm;
    for (std::size_t xp = 0; xp < n; ++xp) {
      next[xp] += model.transition(x, xp) * w;
    }
  }
  // Guard against rounding drift so the output always satisfies the Belief
  // invariants.
  double total = std::accumulate(next.begin(), next.end(), 0.0);
  for (double& p : next) p /= total;
  return Belief(std::move(next));
}

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p < kProbZero) continue;
    h -= p * std::log2(p);
  }
  return h;
}

double conditional_mutual_information(const MarkovModel& model, const Belief& belief, int agent) {
  const Matrix& own = model.channel(agent);
  const Matrix& opp = model.channel(opponent_of(agent));
  const std::size_t nx = model.num_states;
  const std::size_t ny = own.cols();
  const std::size_t nm = opp.cols();
  if (belief.size() != nx) {
    throw DisgError(ErrorCode::DimensionMismatch, "belief dimension != num_states");
  }

  // I(X; Y^{-n} | Y^n) = sum p(x, yn, ym) log2[ P(ym|x) / P(ym|yn) ], using
  // the conditional independence of the observations given the state.
  std::vector<double> posterior(nx);
  double info = 0.0;
  for (std::size_t yn = 0; yn < ny; ++yn) {
    double p_yn = 0.0;
    for (std::size_t x = 0; x < nx; ++x) p_yn += belief[x] * own(x, yn);
    if (p_yn < kProbZero) continue;
    for (std::size_t x = 0; x < nx; ++x) posterior[x] = belief[x] * own(x, yn) / p_yn;
    for (std::size_t ym = 0; ym < nm; ++ym) {
      double p_ym_given_yn = 0.0;
      for (std::size_t x = 0; x < nx; ++x) p_ym_given_yn += posterior[x] * opp(x, ym);
      if (p_ym_given_yn < kProbZero) continue;
      for (std::size_t x = 0; x < nx; ++x) {
        const double joint = belief[x] * own(x, yn) * opp(x, ym);
        if (joint < kProbZero || opp(x, ym) < kProbZero) continue;
        info += joint * std::log2(opp(x, ym) / p_ym_given_yn);
      }
    }
  }
  // Degenerate cases (vertex beliefs, uninformative channels) cancel to
  // rounding residue; report them as exact zero.
  if (info < 1e-13) return 0.0;
  return info;
}

}  // namespace disg
