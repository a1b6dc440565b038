#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "csrl/error.hpp"

namespace csrl {

/// Exact tabular state-action values over integer state ids. Unseen pairs read
/// as 0 unless randomly initialized.
class QTable {
 public:
  explicit QTable(int num_actions) : num_actions_(num_actions) {}

  int num_actions() const { return num_actions_; }
  double get(int state, int action) const;
  void set(int state, int action, double value);
  double max_value(int state) const;
  /// ties resolve to the lowest action index
  int argmax(int state) const;

  void init_random(int num_states, double lo, double hi, std::mt19937_64& rng);

 private:
  int num_actions_;
  std::unordered_map<std::int64_t, double> values_;
};

/// The off-policy value update
///   Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a'))
/// with the max term zeroed when s' is terminal.
void q_update(QTable& table, int s, int a, double r, int s_next, bool terminal, double alpha,
              double gamma);

/// epsilon = epsilon0 * (num_episodes - episode) / num_episodes
double epsilon_schedule(int episode, int num_episodes, double epsilon0 = 0.75);

/// Epsilon-greedy pick over the valid actions: random valid action with
/// probability epsilon, otherwise the greedy one (ties to the lowest index).
int select_action(const std::vector<double>& q_values, const std::vector<std::uint8_t>& valid,
                  double epsilon, std::mt19937_64& rng);

/// Fully-connected value network: rectified-linear hidden layers, linear
/// output, one output per action.
class QNetwork {
 public:
  explicit QNetwork(std::vector<int> layer_sizes);

  int input_dim() const { return layers_.front(); }
  int output_dim() const { return layers_.back(); }
  const std::vector<int>& layer_sizes() const { return layers_; }

  /// uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]
  void init_random(std::mt19937_64& rng);

  Eigen::VectorXd forward(const Eigen::VectorXd& s) const;
  /// states are columns
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& states) const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

 private:
  std::vector<int> layers_;
  std::vector<Eigen::MatrixXd> weights_;  // weights_[l]: layers_[l+1] x layers_[l]
  std::vector<Eigen::VectorXd> biases_;
};

struct Transition {
  Eigen::VectorXd s;
  int a = 0;
  Eigen::VectorXd s_next;
  double r = 0.0;
  bool terminal = false;
};

/// FIFO ring buffer of transitions with uniform sampling without replacement.
class ExperienceBuffer {
 public:
  explicit ExperienceBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return store_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t total_pushed() const { return total_pushed_; }

  /// logical index 0 = oldest surviving transition
  const Transition& at(std::size_t i) const;

  /// throws NotReadyError when fewer than n transitions are stored
  std::vector<Transition> sample(std::size_t n, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::uint64_t total_pushed_ = 0;
  std::vector<Transition> store_;
};

struct TrainConfig {
  double alpha = 1e-3;    // gradient-descent step size
  double gamma = 0.99;
  int num_episodes = 200;
  int num_steps = 284;
  int batch = 32;
  double epsilon0 = 0.75;
  std::size_t capacity = 50000;
  std::uint64_t seed = 1;
  bool target_network = false;  // periodic-copy target net, synced every target_sync_every steps
  int target_sync_every = 100;
  bool translation_only_state = false;  // drop the normalized step index from the input

  void validate() const;
};

struct EpisodeStats {
  int episode = 0;       // 1-based
  double ret = 0.0;      // discounted return, sum of gamma^w r_w
  int steps = 0;
  int collisions = 0;
  double epsilon = 0.0;
};

struct BatchGradient {
  double loss = 0.0;
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
};

/// Loss and parameter gradient of J = 1/(2N) sum_i (target_i - Q(s_i, a_i))^2
/// for fixed targets; only the chosen-action output coordinates receive error.
BatchGradient batch_gradient(const QNetwork& net, const Eigen::MatrixXd& states,
                             const std::vector<int>& actions,
                             const Eigen::VectorXd& targets);

/// One mini-batch descent step: samples cfg.batch transitions, forms targets
/// r + gamma max_a Q(s', a) (r alone on terminal transitions) from target_net
/// when given and from net otherwise, applies theta -= alpha * grad J, and
/// returns J evaluated before the update.
double train_step(QNetwork& net, const QNetwork* target_net, const ExperienceBuffer& buffer,
                  const TrainConfig& cfg, std::mt19937_64& rng);

}  // namespace csrl
