#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gcmg/errors.hpp"
#include "gcmg/game.hpp"
#include "gcmg/predictor.hpp"
#include "gcmg/signal.hpp"

using namespace gcmg;

namespace {

std::vector<std::vector<Strategy>> random_tables(int n_agents, int s, int m,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t p = std::size_t{1} << m;
  std::vector<std::vector<Strategy>> out(n_agents);
  for (auto& list : out) {
    list.assign(s, Strategy(p, 0));
    for (auto& table : list)
      for (auto& cell : table) cell = static_cast<std::int8_t>(rng.sign());
  }
  return out;
}

GameConfig injected_cfg(int n_agents, int s, int m) {
  GameConfig cfg;
  cfg.n_agents = n_agents;
  cfg.n_strategies = s;
  cfg.memory = m;
  cfg.space = SpaceMode::draw;  // ignored by the injection ctor anyway
  return cfg;
}

}  // namespace

TEST_CASE("payoff matches the defining examples") {
  // minority, proportional: phi = -a * A
  CHECK(payoff(+1, 5.0, GameKind::minority, PayoffKind::proportional, 1) ==
        -5.0);
  // majority, step: phi = +a * sgn(A)
  CHECK(payoff(+1, 5.0, GameKind::majority, PayoffKind::step, 1) == 1.0);
  // minority, scaled by N: phi = -a * A / N
  CHECK(payoff(-1, 4.0, GameKind::minority, PayoffKind::scaled, 8) == 0.5);
  // step payoff is flat at a zero outcome
  CHECK(payoff(+1, 0.0, GameKind::minority, PayoffKind::step, 1) == 0.0);
  CHECK(payoff(-1, 0.0, GameKind::majority, PayoffKind::step, 4) == 0.0);
}

TEST_CASE("payoff is odd in the action and zero for an abstaining agent") {
  for (const double outcome : {-7.0, -1.0, 0.0, 2.0, 16.0})
    for (const auto kind : {GameKind::minority, GameKind::majority})
      for (const auto pk :
           {PayoffKind::step, PayoffKind::proportional, PayoffKind::scaled}) {
        CHECK(payoff(-1, outcome, kind, pk, 8) ==
              -payoff(+1, outcome, kind, pk, 8));
        CHECK(payoff(0, outcome, kind, pk, 8) == 0.0);
      }
}

TEST_CASE("minority_action opposes the aggregate and flips a fair coin at 0") {
  Rng rng(1);
  CHECK(minority_action(3.0, rng) == -1);
  CHECK(minority_action(-1.0, rng) == 1);
  CHECK(minority_action(0.5, rng) == -1);

  int plus = 0;
  for (int i = 0; i < 10000; ++i)
    if (minority_action(0.0, rng) == 1) ++plus;
  CHECK(plus > 4500);
  CHECK(plus < 5500);
}

TEST_CASE("aggregate_demand sums actions") {
  CHECK(aggregate_demand({1, 1, -1}) == 1);
  CHECK(aggregate_demand({-1}) == -1);
  CHECK(aggregate_demand({}) == 0);
}

TEST_CASE("choose_strategy is a greedy argmax") {
  Rng rng(2);
  CHECK(choose_strategy({0.0, 3.0, -1.0}, rng) == 1);
  CHECK(choose_strategy({-2.5}, rng) == 0);
  CHECK_THROWS_AS(choose_strategy({}, rng), ConfigError);
}

TEST_CASE("choose_strategy breaks ties uniformly") {
  Rng rng(3);
  int first = 0;
  for (int i = 0; i < 10000; ++i)
    if (choose_strategy({2.0, 2.0}, rng) == 0) ++first;
  CHECK(first > 4500);
  CHECK(first < 5500);
}

TEST_CASE("choose_strategy consumes randomness only on ties") {
  Rng a(5), b(5);
  CHECK(choose_strategy({1.0, 2.0, 3.0}, a) == 2);
  CHECK(a.next_u64() == b.next_u64());  // untouched stream
}

TEST_CASE("choose_strategy is invariant under positive scaling") {
  Rng rng(6);
  const std::vector<double> u{0.3, -0.8, 1.9, 0.4};
  std::vector<double> scaled = u;
  for (auto& x : scaled) x *= 2.0;
  CHECK(choose_strategy(u, rng) == choose_strategy(scaled, rng));
}

TEST_CASE("choose_strategy_gc lets the zero strategy compete at utility 0") {
  Rng rng(7);
  // all real strategies under water: the zero strategy (index == size) wins
  CHECK(choose_strategy_gc({-4.0, -1.0}, rng) == 2);
  // a positive utility beats it
  CHECK(choose_strategy_gc({3.0, -1.0}, rng) == 0);
  CHECK_THROWS_AS(choose_strategy_gc({}, rng), ConfigError);
}

TEST_CASE("choose_strategy_gc ties with the zero strategy are fair") {
  Rng rng(8);
  int zero_wins = 0;
  for (int i = 0; i < 10000; ++i)
    if (choose_strategy_gc({0.0, -1.0}, rng) == 2) ++zero_wins;
  CHECK(zero_wins > 4500);
  CHECK(zero_wins < 5500);

  // three-way tie: two real strategies at 0 plus the zero strategy
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 12000; ++i) ++counts[choose_strategy_gc({0.0, 0.0}, rng)];
  for (const int c : counts) {
    CHECK(c > 3600);
    CHECK(c < 4400);
  }
}

TEST_CASE("GameConfig::validate names the offending field") {
  GameConfig cfg;
  cfg.lambda = -0.1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("lambda"),
                       ConfigError);
  cfg.lambda = 1.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.lambda = 1.0;

  cfg.memory = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("memory"),
                       ConfigError);
  cfg.memory = 26;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.memory = 3;

  cfg.n_agents = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_agents"),
                       ConfigError);
  cfg.n_agents = 2;
  cfg.space = SpaceMode::reduced;
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       doctest::Contains("n_agents must be 1"), ConfigError);
  cfg.n_agents = 1;
  cfg.space = SpaceMode::full;
  cfg.memory = 5;  // over the default capacity guard of 4
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       doctest::Contains("full strategy space"), ConfigError);
  cfg.memory = 3;
  cfg.validate();  // back to a good state

  cfg.space = SpaceMode::draw;
  cfg.n_strategies = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_strategies"),
                       ConfigError);
}

TEST_CASE("construction materializes the requested strategy space") {
  GameConfig cfg;
  cfg.space = SpaceMode::reduced;
  cfg.memory = 3;
  Game reduced(cfg);
  CHECK(reduced.strategies_per_agent() == 16);
  CHECK(reduced.config().n_strategies == 16);
  CHECK(reduced.utilities(0).size() == 16);
  for (const double u : reduced.utilities(0)) CHECK(u == 0.0);

  cfg.space = SpaceMode::full;
  Game full(cfg);
  CHECK(full.strategies_per_agent() == 256);
  CHECK(full.agent_strategies(0).size() == 256);

  cfg.space = SpaceMode::draw;
  cfg.n_agents = 3;
  cfg.n_strategies = 2;
  Game drawn(cfg);
  for (int a = 0; a < 3; ++a) {
    const auto& list = drawn.agent_strategies(a);
    REQUIRE(list.size() == 2);
    CHECK(list[0].size() == 8);
    CHECK(list[1].size() == 8);
    CHECK(list[0] != list[1]);  // per-agent draws are pairwise distinct
  }
}

TEST_CASE("grand-canonical agents abstain when every strategy is losing") {
  GameConfig cfg = injected_cfg(1, 1, 1);
  cfg.grand_canonical = true;
  cfg.seed = 5;
  Game g(cfg, {{Strategy{+1, +1}}});  // always buys

  g.score(1.0);  // minority payoff of acting +1 into a +1 outcome: -1
  g.score(1.0);
  CHECK(g.utilities(0)[0] == -2.0);

  const StepOutcome out = g.choose();
  CHECK(g.chosen_index(0) == static_cast<std::size_t>(g.strategies_per_agent()));
  CHECK(g.last_action(0) == 0);
  CHECK(out.aggregate == 0);
  CHECK((out.forecast == 1 || out.forecast == -1));  // undirected coin

  // the zero strategy's utility stays pinned at exactly 0
  auto snap = g.utilities_snapshot();
  REQUIRE(snap.size() == 2);
  CHECK(snap[0] == -2.0);
  CHECK(snap[1] == 0.0);
  g.score(-1.0);
  snap = g.utilities_snapshot();
  CHECK(snap[0] == -1.0);
  CHECK(snap[1] == 0.0);
}

TEST_CASE("utility recursion at lambda=1 accumulates integer step payoffs") {
  GameConfig cfg = injected_cfg(1, 4, 2);
  cfg.seed = 3;
  auto tables = random_tables(1, 4, 2, 19);
  Game g(cfg, tables);
  g.prime_history({+1, +1});

  long long ref[4] = {0, 0, 0, 0};
  unsigned h = encode_history(2, {+1, +1});
  Rng signs(17);
  for (int t = 0; t < 300; ++t) {
    const int r = signs.sign();
    g.step_exogenous(r);
    // dir=-1 (minority), g=sgn, N=1: phi_plus = -r
    for (int k = 0; k < 4; ++k)
      ref[k] += (tables[0][k][h] > 0 ? -r : r);
    h = ((h << 1) | (r > 0 ? 1u : 0u)) & 3u;
    if (t % 50 == 49)
      for (int k = 0; k < 4; ++k)
        CHECK(g.utilities(0)[k] == static_cast<double>(ref[k]));
  }
  CHECK(g.history() == h);
}

TEST_CASE("utility recursion discounts with lambda before adding the payoff") {
  GameConfig cfg = injected_cfg(1, 4, 2);
  cfg.lambda = 0.97;
  cfg.payoff = PayoffKind::proportional;
  cfg.seed = 3;
  auto tables = random_tables(1, 4, 2, 19);
  Game g(cfg, tables);
  g.prime_history({-1, +1});

  double ref[4] = {0, 0, 0, 0};
  unsigned h = encode_history(2, {-1, +1});
  Rng signs(23);
  for (int t = 0; t < 200; ++t) {
    const int r = signs.sign();
    g.step_exogenous(r);
    const double phi_plus = -1.0 * (1.0 * r);  // dir * g(N*r), N=1, g=id
    for (int k = 0; k < 4; ++k)
      ref[k] = 0.97 * ref[k] + (tables[0][k][h] > 0 ? phi_plus : -phi_plus);
    h = ((h << 1) | (r > 0 ? 1u : 0u)) & 3u;
  }
  for (int k = 0; k < 4; ++k) CHECK(g.utilities(0)[k] == ref[k]);
}

// Conjugating every table by the sign flip sigma(s)[j] = -s[~j] and negating
// the input series must negate every forecast while reproducing the exact
// same utilities. This is the symmetry that makes the predictor unbiased
// between up- and down-trends.
TEST_CASE("sign-flip conjugation negates forecasts and preserves utilities") {
  const int n = 3, s = 2, m = 2;  // odd N: the aggregate can never be 0
  const unsigned mask = 3;
  auto tables_a = random_tables(n, s, m, 11);
  auto tables_b = tables_a;
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < s; ++k)
      for (unsigned j = 0; j <= mask; ++j)
        tables_b[a][k][j] =
            static_cast<std::int8_t>(-tables_a[a][k][(~j) & mask]);

  GameConfig cfg = injected_cfg(n, s, m);
  cfg.payoff = PayoffKind::proportional;
  cfg.lambda = 0.97;
  cfg.seed = 99;
  Game ga(cfg, tables_a);
  Game gb(cfg, tables_b);
  ga.prime_history({+1, +1});
  gb.prime_history({-1, -1});

  Rng series(21);
  for (int t = 0; t < 300; ++t) {
    const int r = series.sign();
    const StepOutcome oa = ga.step_exogenous(r);
    const StepOutcome ob = gb.step_exogenous(-r);
    CHECK(ob.aggregate == -oa.aggregate);
    CHECK(ob.forecast == -oa.forecast);
    CHECK(gb.history() == ((~ga.history()) & mask));
    for (int a = 0; a < n; ++a) {
      const auto& ua = ga.utilities(a);
      const auto& ub = gb.utilities(a);
      for (int k = 0; k < s; ++k) CHECK(ua[k] == ub[k]);
    }
  }
}

// A majority game whose tables are the elementwise negation of a minority
// game's sees the mirrored aggregate and earns the same payoffs, so both
// produce the same forecast stream (the shared rng even aligns the A=0 coin).
TEST_CASE("minority and mirrored majority games forecast identically") {
  const int n = 4, s = 2, m = 3;
  auto tables_min = random_tables(n, s, m, 13);
  auto tables_maj = tables_min;
  for (auto& list : tables_maj)
    for (auto& table : list)
      for (auto& cell : table) cell = static_cast<std::int8_t>(-cell);

  GameConfig cfg = injected_cfg(n, s, m);
  cfg.seed = 77;
  GameConfig cfg_maj = cfg;
  cfg_maj.kind = GameKind::majority;
  Game gmin(cfg, tables_min);
  Game gmaj(cfg_maj, tables_maj);
  gmin.prime_history({+1, -1, +1});
  gmaj.prime_history({+1, -1, +1});

  Rng series(31);
  int coin_steps = 0;
  for (int t = 0; t < 400; ++t) {
    const int r = series.sign();
    const StepOutcome omin = gmin.step_exogenous(r);
    const StepOutcome omaj = gmaj.step_exogenous(r);
    CHECK(omaj.aggregate == -omin.aggregate);
    CHECK(omaj.forecast == omin.forecast);
    if (omin.aggregate == 0) ++coin_steps;
    for (int a = 0; a < n; ++a) {
      CHECK(gmin.chosen_index(a) == gmaj.chosen_index(a));
      const auto& umin = gmin.utilities(a);
      const auto& umaj = gmaj.utilities(a);
      for (int k = 0; k < s; ++k) CHECK(umin[k] == umaj[k]);
    }
  }
  CHECK(coin_steps > 0);  // N even: the undirected branch actually ran
}

TEST_CASE("single-agent full-space minority and majority runs track closely") {
  Rng series_rng(101);
  const auto y = ar_generate(ArProcess{{0.7, -0.5, -0.2}, 1.0, {}}, 3003,
                             series_rng, 50);
  GameConfig cfg;
  cfg.space = SpaceMode::full;
  cfg.memory = 3;
  cfg.seed = 7;
  GameConfig cfg_maj = cfg;
  cfg_maj.kind = GameKind::majority;

  const auto rmin = run_prediction(cfg, y, 3000, 0, 3);
  const auto rmaj = run_prediction(cfg_maj, y, 3000, 0, 3);
  CHECK(rmin.psi_final > 0.55);
  CHECK(std::abs(rmin.psi_final - rmaj.psi_final) < 0.03);
}

TEST_CASE("a constant sign is learned almost immediately") {
  GameConfig cfg;
  cfg.space = SpaceMode::reduced;
  cfg.memory = 1;
  cfg.seed = 9;
  const std::vector<double> ones(1001, 1.0);
  const auto res = run_prediction(cfg, ones, 1000, 0, 1);
  CHECK(res.scored == 1000);
  CHECK(res.skipped == 0);
  CHECK(res.psi_final >= 0.99);
}

TEST_CASE("endogenous stepping is deterministic and feeds back the forecast") {
  GameConfig cfg;
  cfg.n_agents = 1;
  cfg.n_strategies = 2;
  cfg.memory = 2;
  cfg.lambda = 0.9;
  cfg.payoff = PayoffKind::proportional;
  cfg.seed = 55;
  Game g1(cfg), g2(cfg);
  for (int t = 0; t < 100; ++t) {
    const StepOutcome o1 = g1.step_endogenous();
    const StepOutcome o2 = g2.step_endogenous();
    CHECK(o1.aggregate == o2.aggregate);
    CHECK(o1.forecast == o2.forecast);
    CHECK(g1.history() == g2.history());
    // the winning decision is what enters the history
    CHECK((g1.history() & 1u) == (o1.forecast > 0 ? 1u : 0u));
  }
}

TEST_CASE("an endogenous majority crowd locks into a trend") {
  GameConfig cfg;
  cfg.n_agents = 64;
  cfg.n_strategies = 2;
  cfg.memory = 3;
  cfg.kind = GameKind::majority;
  cfg.payoff = PayoffKind::proportional;
  cfg.seed = 23;
  Game g(cfg);
  long long drift = 0;
  for (int t = 0; t < 2000; ++t) {
    const StepOutcome out = g.step_endogenous();
    CHECK(std::abs(out.aggregate) <= 64);
    drift += out.aggregate;
  }
  CHECK(std::llabs(drift) >= 10000);  // herding: |mean A| >= 5 out of 64
}

TEST_CASE("with one agent the forecast is read off the chosen table") {
  for (const auto kind : {GameKind::minority, GameKind::majority}) {
    GameConfig cfg;
    cfg.space = SpaceMode::full;
    cfg.memory = 3;
    cfg.kind = kind;
    cfg.seed = 41;
    Game g(cfg);
    g.prime_history({+1, -1, +1});
    Rng series(43);
    for (int t = 0; t < 50; ++t) {
      const unsigned h = g.history();
      const StepOutcome out = g.choose();
      const std::size_t idx = g.chosen_index(0);
      REQUIRE(idx < 256);
      const int a = g.agent_strategies(0)[idx][h];
      CHECK(out.aggregate == a);
      CHECK(out.forecast == (kind == GameKind::minority ? -a : a));
      const int r = series.sign();
      g.score(static_cast<double>(r));
      g.push_history(r);
    }
  }
}

TEST_CASE("step_exogenous rejects anything but a +1/-1 sign") {
  GameConfig cfg;
  Game g(cfg);
  CHECK_THROWS_AS(g.step_exogenous(0), ConfigError);
  CHECK_THROWS_AS(g.step_exogenous(2), ConfigError);
}

TEST_CASE("injected strategy lists are validated") {
  const Strategy t4{+1, -1, +1, -1};
  CHECK_THROWS_WITH_AS(Game(injected_cfg(2, 1, 2), {{t4}}),
                       doctest::Contains("one list per agent"), ConfigError);
  CHECK_THROWS_WITH_AS(Game(injected_cfg(1, 1, 2), {{}}),
                       doctest::Contains("empty"), ConfigError);
  CHECK_THROWS_WITH_AS(Game(injected_cfg(2, 2, 2), {{t4, t4}, {t4}}),
                       doctest::Contains("ragged"), ConfigError);
  CHECK_THROWS_WITH_AS(Game(injected_cfg(1, 1, 2), {{Strategy{+1, -1, +1}}}),
                       doctest::Contains("table size"), ConfigError);
}

TEST_CASE("prime_history encodes known signs; set_history is bounds-checked") {
  GameConfig cfg;
  cfg.memory = 3;
  Game g(cfg);
  CHECK_THROWS_AS(g.prime_history({+1, -1}), ConfigError);
  g.prime_history({+1, -1, +1});
  CHECK(g.history() == encode_history(3, {+1, -1, +1}));
  CHECK(g.history() == 5u);
  CHECK_THROWS_AS(g.set_history(8), ConfigError);
  g.set_history(7);
  CHECK(g.history() == 7u);
}
