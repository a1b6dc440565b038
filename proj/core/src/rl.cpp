#include "csrl/rl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csrl {

namespace {
std::int64_t key_of(int state, int action, int num_actions) {
  return static_cast<std::int64_t>(state) * num_actions + action;
}
}  // namespace

double QTable::get(int state, int action) const {
  const auto it = values_.find(key_of(state, action, num_actions_));
  return it == values_.end() ? 0.0 : it->second;
}

void QTable::set(int state, int action, double value) {
  values_[key_of(state, action, num_actions_)] = value;
}

double QTable::max_value(int state) const {
  double best = get(state, 0);
  for (int a = 1; a < num_actions_; ++a) best = std::max(best, get(state, a));
  return best;
}

int QTable::argmax(int state) const {
  int best = 0;
  double best_v = get(state, 0);
  for (int a = 1; a < num_actions_; ++a) {
    const double v = get(state, a);
    if (v > best_v) {
      best_v = v;
      best = a;
    }
  }
  return best;
}

void QTable::init_random(int num_states, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (int s = 0; s < num_states; ++s)
    for (int a = 0; a < num_actions_; ++a) set(s, a, u(rng));
}

void q_update(QTable& table, int s, int a, double r, int s_next, bool terminal, double alpha,
              double gamma) {
  const double bootstrap = terminal ? 0.0 : table.max_value(s_next);
  const double updated = (1.0 - alpha) * table.get(s, a) + alpha * (r + gamma * bootstrap);
  table.set(s, a, updated);
}

double epsilon_schedule(int episode, int num_episodes, double epsilon0) {
  return epsilon0 * static_cast<double>(num_episodes - episode) / num_episodes;
}

int select_action(const std::vector<double>& q_values, const std::vector<std::uint8_t>& valid,
                  double epsilon, std::mt19937_64& rng) {
  if (q_values.size() != valid.size())
    throw InvalidInputError("q_values and valid mask differ in size");
  std::vector<int> candidates;
  candidates.reserve(valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i)
    if (valid[i]) candidates.push_back(static_cast<int>(i));
  if (candidates.empty()) throw InvalidInputError("no valid action to select");

  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
  }
  int best = candidates.front();
  for (int a : candidates)
    if (q_values[a] > q_values[best]) best = a;
  return best;
}

QNetwork::QNetwork(std::vector<int> layer_sizes) : layers_(std::move(layer_sizes)) {
  if (layers_.size() < 2) throw ConfigError("network needs at least input and output layers");
  for (int n : layers_)
    if (n < 1) throw ConfigError("layer sizes must be positive");
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(layers_[l + 1], layers_[l]));
    biases_.emplace_back(Eigen::VectorXd::Zero(layers_[l + 1]));
  }
}

void QNetwork::init_random(std::mt19937_64& rng) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layers_[l]));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index i = 0; i < weights_[l].rows(); ++i)
      for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) weights_[l](i, j) = u(rng);
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l][i] = u(rng);
  }
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& states) const {
  if (states.rows() != input_dim()) throw InvalidInputError("state dimension mismatch");
  Eigen::MatrixXd act = states;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * act).colwise() + biases_[l];
    if (l + 1 < weights_.size()) z = z.cwiseMax(0.0);
    act = std::move(z);
  }
  return act;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& s) const {
  return forward_batch(s);
}

ExperienceBuffer::ExperienceBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("experience buffer capacity must be positive");
  store_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ExperienceBuffer::push(Transition t) {
  if (store_.size() < capacity_) {
    store_.push_back(std::move(t));
  } else {
    store_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
  ++total_pushed_;
}

const Transition& ExperienceBuffer::at(std::size_t i) const {
  if (i >= store_.size()) throw InvalidInputError("buffer index out of range");
  if (store_.size() < capacity_) return store_[i];
  return store_[(head_ + i) % capacity_];
}

std::vector<Transition> ExperienceBuffer::sample(std::size_t n, std::mt19937_64& rng) const {
  if (n > store_.size()) throw NotReadyError("experience buffer holds fewer transitions than requested");
  // partial Fisher-Yates over the index range
  std::vector<std::size_t> idx(store_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
    out.push_back(at(idx[i]));
  }
  return out;
}

void TrainConfig::validate() const {
  if (alpha <= 0.0) throw ConfigError("learning rate must be positive");
  if (gamma < 0.0 || gamma > 1.0) throw ConfigError("discount factor must lie in [0, 1]");
  if (batch < 1) throw ConfigError("batch size must be at least 1");
  if (num_episodes < 0 || num_steps < 1) throw ConfigError("bad episode/step counts");
  if (capacity == 0) throw ConfigError("buffer capacity must be positive");
}

BatchGradient batch_gradient(const QNetwork& net, const Eigen::MatrixXd& states,
                             const std::vector<int>& actions, const Eigen::VectorXd& targets) {
  const Eigen::Index n = states.cols();
  if (static_cast<Eigen::Index>(actions.size()) != n || targets.size() != n)
    throw InvalidInputError("batch shapes disagree");

  const auto& ws = net.weights();
  const auto& bs = net.biases();
  const std::size_t num_layers = ws.size();

  // forward pass keeping activations; acts[l] feeds layer l
  std::vector<Eigen::MatrixXd> acts(num_layers + 1);
  acts[0] = states;
  for (std::size_t l = 0; l < num_layers; ++l) {
    Eigen::MatrixXd z = (ws[l] * acts[l]).colwise() + bs[l];
    if (l + 1 < num_layers) z = z.cwiseMax(0.0);
    acts[l + 1] = std::move(z);
  }

  // residuals on the chosen-action coordinates only
  double loss = 0.0;
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(net.output_dim(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double diff = targets[i] - acts[num_layers](actions[i], i);
    loss += diff * diff;
    delta(actions[i], i) = -diff / static_cast<double>(n);  // dJ/dQ(s_i, a_i)
  }
  loss /= 2.0 * static_cast<double>(n);

  BatchGradient grad;
  grad.loss = loss;
  grad.dw.resize(num_layers);
  grad.db.resize(num_layers);
  for (std::size_t l = num_layers; l-- > 0;) {
    grad.dw[l] = delta * acts[l].transpose();
    grad.db[l] = delta.rowwise().sum();
    if (l > 0) {
      // relu' taken on the stored activation: positive output means active unit
      delta = (ws[l].transpose() * delta).array() * (acts[l].array() > 0.0).cast<double>();
    }
  }
  return grad;
}

double train_step(QNetwork& net, const QNetwork* target_net, const ExperienceBuffer& buffer,
                  const TrainConfig& cfg, std::mt19937_64& rng) {
  if (buffer.size() < static_cast<std::size_t>(cfg.batch))
    throw NotReadyError("experience buffer not yet warm");
  const std::vector<Transition> batch = buffer.sample(cfg.batch, rng);
  const QNetwork& bootstrap_net = target_net ? *target_net : net;

  Eigen::MatrixXd states(net.input_dim(), cfg.batch);
  Eigen::MatrixXd next_states(net.input_dim(), cfg.batch);
  std::vector<int> actions(cfg.batch);
  for (int i = 0; i < cfg.batch; ++i) {
    states.col(i) = batch[i].s;
    next_states.col(i) = batch[i].s_next;
    actions[i] = batch[i].a;
  }

  const Eigen::MatrixXd next_q = bootstrap_net.forward_batch(next_states);
  Eigen::VectorXd targets(cfg.batch);
  for (int i = 0; i < cfg.batch; ++i) {
    targets[i] = batch[i].r;
    if (!batch[i].terminal) targets[i] += cfg.gamma * next_q.col(i).maxCoeff();
  }

  BatchGradient grad = batch_gradient(net, states, actions, targets);
  for (std::size_t l = 0; l < net.weights().size(); ++l) {
    net.weights()[l] -= cfg.alpha * grad.dw[l];
    net.biases()[l] -= cfg.alpha * grad.db[l];
  }
  return grad.loss;
}

}  // namespace csrl
