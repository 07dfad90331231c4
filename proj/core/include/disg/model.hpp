#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "disg/error.hpp"

namespace disg {

// Dense row-major matrix; rows index the conditioning variable, so stochastic
// matrices are row-stochastic.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// A point on the probability simplex over hidden states: entries nonnegative,
// summing to 1 within 1e-9.
class Belief {
 public:
  Belief() = default;
  explicit Belief(std::vector<double> probs);

  static Belief uniform(std::size_t num_states);
  static Belief vertex(std::size_t num_states, std::size_t state);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const Belief&) const = default;

 private:
  std::vector<double> probs_;
};

// The data-exchange signal: either the opponent's observation index or the
// no-share symbol epsilon.
class Signal {
 public:
  static Signal epsilon() { return Signal(); }
  static Signal obs(int index);

  bool is_epsilon() const { return index_ < 0; }
  int obs_index() const;

  bool operator==(const Signal&) const = default;

 private:
  int index_ = -1;
};

// Hidden Markov chain plus one emission channel per agent. Agents are named 1
// and 2 throughout; channel(n) is agent n's observation model.
struct MarkovModel {
  std::size_t num_states = 0;
  Matrix transition;                // |X| x |X|
  std::array<Matrix, 2> channels;   // channels[n-1]: |X| x |Y^n|

  const Matrix& channel(int agent) const;
  std::size_t obs_count(int agent) const { return channel(agent).cols(); }

  // Two-state chain with binary symmetric channels: p_n is the probability of
  // observing the true state.
  static MarkovModel binary_symmetric(const Matrix& transition, double p1, double p2);
};

inline int opponent_of(int agent) { return 3 - agent; }

struct ValidationIssue {
  ErrorCode code;
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks every MarkovModel invariant (row sums within 1e-9, no negative
// entries, dimensions) and names each violated row/entry.
ValidationReport validate_model(const MarkovModel& model);

// Throws DisgError with the first issue if the model is invalid.
void require_valid(const MarkovModel& model);

// P(z | x, a) of the data-exchange mechanism for the signal agent `agent`
// receives from its opponent: 1 for (epsilon, a=0), the opponent channel's
// P(y|x) for (obs y, a=1), and 0 for mismatched pairs.
double signal_likelihood(const MarkovModel& model, std::size_t state, const Signal& signal,
                         int opp_action, int agent);

// One exact Bayes step for agent `agent`: condition the belief on the own
// observation and the opponent signal, then predict through the kernel.
// Throws SignalActionMismatch if the signal contradicts opp_action and
// ZeroLikelihood if the observations are impossible under the belief.
Belief belief_update(const MarkovModel& model, const Belief& belief, int own_obs,
                     const Signal& signal, int opp_action, int agent);

// -sum p log2 p, with 0 log 0 = 0 and probabilities below 1e-15 treated as
// exact zeros.
double entropy_bits(std::span<const double> probs);

// I(X; Y^{-n} | Y^n) in bits under the joint pi(x) P(y^n|x) P(y^{-n}|x),
// by exact enumeration. Values below 1e-13 bits are returned as exact zero,
// which makes degenerate (vertex / uninformative-channel) cases compare
// cleanly against 0.
double conditional_mutual_information(const MarkovModel& model, const Belief& belief, int agent);

}  // namespace disg
