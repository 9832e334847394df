#pragma once

#include <cstdint>
#include <vector>

#include "gcmg/rng.hpp"
#include "gcmg/strategy.hpp"

namespace gcmg {

enum class GameKind { minority, majority };
enum class PayoffKind { step, proportional, scaled };
enum class SpaceMode { draw, reduced, full };

/// Full parameter set of one game instance.
struct GameConfig {
  int n_agents = 1;
  int n_strategies = 2;  // per agent; derived from the space for reduced/full
  int memory = 3;
  GameKind kind = GameKind::minority;
  PayoffKind payoff = PayoffKind::step;
  SpaceMode space = SpaceMode::draw;
  bool grand_canonical = false;
  double lambda = 1.0;  // utility discount in [0, 1]
  std::uint64_t seed = 1;
  int fss_memory_limit = 4;  // capacity guard for SpaceMode::full

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Payoff function g lifted to a strategy's payoff:
///   minority:  phi = -action * g(outcome)
///   majority:  phi = +action * g(outcome)
/// with g = sgn (step), identity (proportional), x/N (scaled).
double payoff(int action, double outcome, GameKind kind, PayoffKind pk,
              int n_agents);

/// Minority action for an aggregate demand: -sgn(A), fair coin at A = 0.
int minority_action(double aggregate, Rng& rng);

/// Sum of agent actions (|A| <= N).
int aggregate_demand(const std::vector<int>& actions);

/// Greedy argmax over utilities; ties broken uniformly at random.
std::size_t choose_strategy(const std::vector<double>& utilities, Rng& rng);

/// Grand-canonical variant: a virtual zero strategy with utility 0 joins the
/// argmax; returns utilities.size() when the zero strategy wins.
std::size_t choose_strategy_gc(const std::vector<double>& utilities, Rng& rng);

/// What one step produced: the realized aggregate and the game's forecast
/// for the next sign (the prospective winning decision).
struct StepOutcome {
  int aggregate = 0;
  int forecast = 0;  // in {-1, +1}
};

/// One game instance: N agents, their strategies and utilities, the rolling
/// history, and the greedy-choice / scoring / history-shift primitives.
///
/// A step is choose() -> score(signal) -> push_history(sign); the
/// step_exogenous / step_endogenous helpers wrap the two standard wirings.
/// Utilities update as U <- lambda * U + phi for every strategy each step
/// (virtual payoffs), with the grand-canonical zero strategy pinned at 0.
///
/// Rng draw order is part of the reproducibility contract: construction
/// consumes draws for strategy tables (draw mode only, agent-major) then one
/// index for the initial random history; each choose() consumes one draw per
/// agent *only* when its argmax is tied, plus one sign when A = 0.
class Game {
 public:
  explicit Game(const GameConfig& cfg);

  /// Test/experiment hook: explicit per-agent strategy tables (slot order
  /// preserved; cfg.space is ignored). Utilities start at 0 as usual.
  Game(const GameConfig& cfg, std::vector<std::vector<Strategy>> per_agent);

  const GameConfig& config() const { return cfg_; }
  int memory() const { return cfg_.memory; }
  int strategies_per_agent() const { return s_per_agent_; }

  unsigned history() const { return history_.index(); }
  void set_history(unsigned index) { history_.set_index(index); }
  /// Replace the history with m known signs, oldest first.
  void prime_history(const std::vector<int>& signs);

  /// Agents act on the current history; forms A and the forecast.
  /// Call once per step (consumes tie-break randomness).
  StepOutcome choose();

  /// Score every strategy against an outcome signal (A itself in endogenous
  /// mode, N*sgn(y) in exogenous mode): U <- lambda*U + phi.
  void score(double signal);

  void push_history(int sign) { history_.push(sign); }

  /// Exogenous wiring: choose, score against the realized sign, shift the
  /// realized sign into the history. Returns the forecast made *before*
  /// the realized sign was revealed.
  StepOutcome step_exogenous(int realized_sign);

  /// Endogenous wiring: choose, score against the game's own A, shift the
  /// winning decision (the forecast) into the history.
  StepOutcome step_endogenous();

  const std::vector<double>& utilities(int agent) const;
  /// Chosen strategy slot of the last choose(); equals strategies_per_agent()
  /// when the grand-canonical zero strategy was played.
  std::size_t chosen_index(int agent) const;
  int last_action(int agent) const;
  const std::vector<Strategy>& agent_strategies(int agent) const;

  /// Flat utility snapshot, agent-major; appends the zero strategy's 0.0
  /// per agent when grand-canonical.
  std::vector<double> utilities_snapshot() const;

 private:
  void init_history();

  GameConfig cfg_;
  int s_per_agent_ = 0;
  std::vector<std::vector<Strategy>> strategies_;  // [agent][slot]
  std::vector<std::vector<double>> utilities_;     // [agent][slot]
  std::vector<std::size_t> chosen_;
  std::vector<int> actions_;
  std::vector<std::size_t> tie_buf_;
  History history_;
  Rng rng_;
};

}  // namespace gcmg
