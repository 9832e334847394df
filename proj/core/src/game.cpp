#include "gcmg/game.hpp"

#include <string>

#include "gcmg/errors.hpp"

namespace gcmg {

namespace {

double g_of(double x, PayoffKind pk, int n_agents) {
  switch (pk) {
    case PayoffKind::step:
      return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    case PayoffKind::proportional:
      return x;
    case PayoffKind::scaled:
      return x / n_agents;
  }
  return 0.0;
}

}  // namespace

void GameConfig::validate() const {
  if (n_agents < 1) throw ConfigError("n_agents must be >= 1");
  if (memory < 1 || memory > 25)
    throw ConfigError("memory must be in [1, 25], got " + std::to_string(memory));
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw ConfigError("lambda must be in [0, 1], got " + std::to_string(lambda));
  if (space == SpaceMode::draw) {
    if (n_strategies < 1) throw ConfigError("n_strategies must be >= 1");
  } else if (n_agents != 1) {
    throw ConfigError("n_agents must be 1 when playing a whole strategy space");
  }
  if (space == SpaceMode::full && memory > fss_memory_limit)
    throw ConfigError("full strategy space limited to memory <= " +
                      std::to_string(fss_memory_limit) + ", got " +
                      std::to_string(memory));
}

double payoff(int action, double outcome, GameKind kind, PayoffKind pk,
              int n_agents) {
  const double dir = kind == GameKind::minority ? -1.0 : 1.0;
  return dir * action * g_of(outcome, pk, n_agents);
}

int minority_action(double aggregate, Rng& rng) {
  if (aggregate > 0) return -1;
  if (aggregate < 0) return 1;
  return rng.sign();
}

int aggregate_demand(const std::vector<int>& actions) {
  int a = 0;
  for (int x : actions) a += x;
  return a;
}

namespace {

std::size_t argmax_with_ties(const std::vector<double>& u, bool gc,
                             std::vector<std::size_t>& ties, Rng& rng) {
  ties.clear();
  double best = u[0];
  ties.push_back(0);
  for (std::size_t k = 1; k < u.size(); ++k) {
    if (u[k] > best) {
      best = u[k];
      ties.assign(1, k);
    } else if (u[k] == best) {
      ties.push_back(k);
    }
  }
  if (gc) {  // the zero strategy competes with utility exactly 0
    if (0.0 > best) {
      ties.assign(1, u.size());
    } else if (0.0 == best) {
      ties.push_back(u.size());
    }
  }
  return ties.size() > 1 ? ties[rng.uniform_index(ties.size())] : ties[0];
}

}  // namespace

std::size_t choose_strategy(const std::vector<double>& utilities, Rng& rng) {
  if (utilities.empty()) throw ConfigError("choose_strategy: no strategies");
  std::vector<std::size_t> ties;
  return argmax_with_ties(utilities, false, ties, rng);
}

std::size_t choose_strategy_gc(const std::vector<double>& utilities, Rng& rng) {
  if (utilities.empty()) throw ConfigError("choose_strategy: no strategies");
  std::vector<std::size_t> ties;
  return argmax_with_ties(utilities, true, ties, rng);
}

Game::Game(const GameConfig& cfg)
    : cfg_(cfg), history_(cfg.memory), rng_(cfg.seed) {
  cfg_.validate();
  strategies_.reserve(cfg_.n_agents);
  switch (cfg_.space) {
    case SpaceMode::draw:
      for (int a = 0; a < cfg_.n_agents; ++a)
        strategies_.push_back(
            draw_strategies(cfg_.memory, cfg_.n_strategies, rng_));
      break;
    case SpaceMode::reduced:
      strategies_.push_back(reduced_strategy_space(cfg_.memory));
      break;
    case SpaceMode::full:
      strategies_.push_back(
          full_strategy_space(cfg_.memory, cfg_.fss_memory_limit));
      break;
  }
  s_per_agent_ = static_cast<int>(strategies_[0].size());
  cfg_.n_strategies = s_per_agent_;
  utilities_.assign(strategies_.size(),
                    std::vector<double>(s_per_agent_, 0.0));
  chosen_.assign(strategies_.size(), 0);
  actions_.assign(strategies_.size(), 0);
  init_history();
}

Game::Game(const GameConfig& cfg, std::vector<std::vector<Strategy>> per_agent)
    : cfg_(cfg), history_(cfg.memory), rng_(cfg.seed) {
  if (per_agent.size() != static_cast<std::size_t>(cfg_.n_agents))
    throw ConfigError("injected strategies: need one list per agent");
  const std::size_t p = 1u << cfg_.memory;
  s_per_agent_ = per_agent.empty() ? 0 : static_cast<int>(per_agent[0].size());
  if (s_per_agent_ < 1) throw ConfigError("injected strategies: empty list");
  for (const auto& list : per_agent) {
    if (static_cast<int>(list.size()) != s_per_agent_)
      throw ConfigError("injected strategies: ragged lists");
    for (const auto& s : list)
      if (s.size() != p)
        throw ConfigError("injected strategies: table size != 2^memory");
  }
  cfg_.n_strategies = s_per_agent_;
  strategies_ = std::move(per_agent);
  utilities_.assign(strategies_.size(),
                    std::vector<double>(s_per_agent_, 0.0));
  chosen_.assign(strategies_.size(), 0);
  actions_.assign(strategies_.size(), 0);
  init_history();
}

void Game::init_history() {
  history_.set_index(static_cast<unsigned>(
      rng_.uniform_index(std::size_t{1} << cfg_.memory)));
}

void Game::prime_history(const std::vector<int>& signs) {
  history_.set_index(encode_history(cfg_.memory, signs));
}

StepOutcome Game::choose() {
  const unsigned h = history_.index();
  StepOutcome out;
  for (std::size_t a = 0; a < strategies_.size(); ++a) {
    const std::size_t idx =
        argmax_with_ties(utilities_[a], cfg_.grand_canonical, tie_buf_, rng_);
    chosen_[a] = idx;
    const int action = idx == utilities_[a].size()
                           ? 0  // zero strategy: stay out
                           : strategies_[a][idx][h];
    actions_[a] = action;
    out.aggregate += action;
  }
  if (out.aggregate != 0) {
    const int minority = out.aggregate > 0 ? -1 : 1;
    out.forecast = cfg_.kind == GameKind::minority ? minority : -minority;
  } else {
    // undirected tie: the forecast itself is the fair coin, for either kind
    out.forecast = rng_.sign();
  }
  return out;
}

void Game::score(double signal) {
  const unsigned h = history_.index();
  const double dir = cfg_.kind == GameKind::minority ? -1.0 : 1.0;
  const double phi_plus = dir * g_of(signal, cfg_.payoff, cfg_.n_agents);
  const double lambda = cfg_.lambda;
  for (std::size_t a = 0; a < strategies_.size(); ++a) {
    const auto& tables = strategies_[a];
    auto& u = utilities_[a];
    for (std::size_t k = 0; k < u.size(); ++k)
      u[k] = lambda * u[k] + (tables[k][h] > 0 ? phi_plus : -phi_plus);
  }
}

StepOutcome Game::step_exogenous(int realized_sign) {
  if (realized_sign != 1 && realized_sign != -1)
    throw ConfigError("step_exogenous: realized sign must be +1 or -1");
  StepOutcome out = choose();
  score(static_cast<double>(cfg_.n_agents) * realized_sign);
  push_history(realized_sign);
  return out;
}

StepOutcome Game::step_endogenous() {
  StepOutcome out = choose();
  score(static_cast<double>(out.aggregate));
  push_history(out.forecast);
  return out;
}

const std::vector<double>& Game::utilities(int agent) const {
  return utilities_.at(agent);
}

std::size_t Game::chosen_index(int agent) const { return chosen_.at(agent); }

int Game::last_action(int agent) const { return actions_.at(agent); }

const std::vector<Strategy>& Game::agent_strategies(int agent) const {
  return strategies_.at(agent);
}

std::vector<double> Game::utilities_snapshot() const {
  std::vector<double> flat;
  flat.reserve(strategies_.size() * (s_per_agent_ + (cfg_.grand_canonical ? 1 : 0)));
  for (const auto& u : utilities_) {
    flat.insert(flat.end(), u.begin(), u.end());
    if (cfg_.grand_canonical) flat.push_back(0.0);
  }
  return flat;
}

}  // namespace gcmg
