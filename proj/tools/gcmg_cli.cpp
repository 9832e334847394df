// gcmg: run the canonical sweeps or a one-off CSV prediction from the shell.
//
// Exit codes: 0 ok, 1 configuration error (bad flags, bad grid), 2 data error
// (unreadable/degenerate input). Every experiment writes raw.csv,
// aggregate.csv and manifest.txt into --out; the manifest pins the seeding
// scheme so any single grid point can be re-run in isolation.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gcmg/errors.hpp"
#include "gcmg/experiments.hpp"

namespace {

using namespace gcmg;

GameKind parse_kind(const std::string& s) {
  if (s == "minority") return GameKind::minority;
  if (s == "majority") return GameKind::majority;
  throw ConfigError("unknown kind '" + s + "' (want minority|majority)");
}

PayoffKind parse_payoff(const std::string& s) {
  if (s == "step") return PayoffKind::step;
  if (s == "prop") return PayoffKind::proportional;
  if (s == "scaled") return PayoffKind::scaled;
  throw ConfigError("unknown payoff '" + s + "' (want step|prop|scaled)");
}

SpaceMode parse_space(const std::string& s) {
  if (s == "draw") return SpaceMode::draw;
  if (s == "rss") return SpaceMode::reduced;
  if (s == "fss") return SpaceMode::full;
  throw ConfigError("unknown space '" + s + "' (want draw|rss|fss)");
}

// game-shape overrides; when set they apply to every grid point
struct GameFlags {
  std::optional<int> n, s, m, gc;
  std::optional<double> lambda;
  std::optional<std::string> kind, space, payoff;

  void add_to(CLI::App* sub) {
    sub->add_option("--n", n, "agents per game");
    sub->add_option("--s", s, "strategies per agent (draw space only)");
    sub->add_option("--m", m, "history length in signs");
    sub->add_option("--lambda", lambda, "utility discount in [0,1]");
    sub->add_option("--kind", kind, "minority|majority");
    sub->add_option("--space", space, "draw|rss|fss");
    sub->add_option("--payoff", payoff, "step|prop|scaled");
    sub->add_option("--grand-canonical", gc,
                    "0|1: agents may sit out at negative utility")
        ->check(CLI::Range(0, 1));
  }

  void apply(GameConfig& g) const {
    if (n) g.n_agents = *n;
    if (s) g.n_strategies = *s;
    if (m) g.memory = *m;
    if (lambda) g.lambda = *lambda;
    if (kind) g.kind = parse_kind(*kind);
    if (space) g.space = parse_space(*space);
    if (payoff) g.payoff = parse_payoff(*payoff);
    if (gc) g.grand_canonical = *gc != 0;
  }
};

struct SweepFlags {
  std::optional<int> replicas, horizon, window, jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<double> coeffs, coeffs2;
  std::optional<double> sigma;
  std::optional<int> switch_at, burn_in;

  void add_to(CLI::App* sub) {
    sub->add_option("--replicas", replicas, "independent runs per grid point");
    sub->add_option("--horizon", horizon, "scored steps per run");
    sub->add_option("--seed", seed, "base seed; replica r derives from base+r");
    sub->add_option("--window", window, "sliding window for psi traces");
    sub->add_option("--jobs", jobs,
                    "worker threads, 0 = auto (outputs are identical "
                    "whatever the count)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--coeffs", coeffs, "AR coefficients of the source");
    sub->add_option("--coeffs2", coeffs2,
                    "AR coefficients after the regime switch");
    sub->add_option("--sigma", sigma, "innovation standard deviation");
    sub->add_option("--switch-at", switch_at, "step of the regime switch");
    sub->add_option("--burn-in", burn_in,
                    "warm-up samples discarded by the AR source");
  }

  void apply(ExperimentSpec& spec) const {
    if (replicas) spec.replicas = *replicas;
    if (horizon) spec.horizon = *horizon;
    if (window) spec.window = *window;
    if (jobs) spec.jobs = *jobs;
    if (seed) spec.base_seed = *seed;
    if (out) spec.out_dir = *out;
    if (!coeffs.empty()) spec.source.coeffs = coeffs;
    if (!coeffs2.empty()) spec.source.coeffs2 = coeffs2;
    if (sigma) spec.source.noise_sd = *sigma;
    if (switch_at) spec.source.switch_at = *switch_at;
    if (burn_in) spec.source.burn_in = *burn_in;
  }
};

struct SubState {
  CLI::App* sub = nullptr;
  ExperimentSpec (*builder)() = nullptr;
  GameFlags game;
  SweepFlags sweep;
  std::vector<double> lambda_grid;
  std::vector<int> n_grid;
  std::vector<int> m_grid;
};

void rebuild_lambda_grid(ExperimentSpec& spec, const std::vector<double>& lambdas) {
  const GridPoint proto = spec.grid.front();
  spec.grid.clear();
  int pg = 0;
  for (double lam : lambdas) {
    GridPoint p = proto;
    p.game.lambda = lam;
    char id[32];
    std::snprintf(id, sizeof id, "lambda_%.2f", lam);
    p.id = id;
    p.pair_group = pg++;
    spec.grid.push_back(std::move(p));
  }
}

void rebuild_n_grid(ExperimentSpec& spec, const std::vector<int>& ns) {
  const GridPoint proto = spec.grid.front();  // minority template
  spec.grid.clear();
  int pg = 0;
  for (int n : ns) {
    for (GameKind kind : {GameKind::minority, GameKind::majority}) {
      GridPoint p = proto;
      p.game.n_agents = n;
      p.game.kind = kind;
      p.id = "n" + std::to_string(n) +
             (kind == GameKind::minority ? "_min" : "_maj");
      p.pair_group = pg;
      spec.grid.push_back(std::move(p));
    }
    ++pg;
  }
}

void rebuild_m_grid(ExperimentSpec& spec, const std::vector<int>& ms) {
  const GridPoint proto = spec.grid.front();
  spec.grid.clear();
  int pg = 0;
  for (int m : ms) {
    GridPoint p = proto;
    p.game.memory = m;
    p.id = "m" + std::to_string(m);
    p.pair_group = pg++;
    spec.grid.push_back(std::move(p));
  }
}

int run_sweep(const SubState& st) {
  ExperimentSpec spec = st.builder();
  if (!st.lambda_grid.empty()) rebuild_lambda_grid(spec, st.lambda_grid);
  if (!st.n_grid.empty()) rebuild_n_grid(spec, st.n_grid);
  if (!st.m_grid.empty()) rebuild_m_grid(spec, st.m_grid);
  st.sweep.apply(spec);
  for (auto& p : spec.grid) st.game.apply(p.game);

  const SweepResult res = run_experiment(spec);

  std::printf("%s: %zu grid points x %d replicas, horizon %d\n",
              spec.name.c_str(), spec.grid.size(), spec.replicas, spec.horizon);
  for (const auto& p : res.points)
    std::printf("  %-14s psi = %.4f +/- %.4f\n", p.point.id.c_str(), p.mean,
                p.sd);
  std::printf("raw:       %s\naggregate: %s\nmanifest:  %s\n",
              res.raw_csv.string().c_str(), res.aggregate_csv.string().c_str(),
              res.manifest.string().c_str());
  return 0;
}

int run_predict_cmd(const PredictOptions& opt_in, const GameFlags& game,
                    const std::string& delimiter) {
  PredictOptions opt = opt_in;
  if (delimiter.size() != 1)
    throw ConfigError("delimiter must be a single character, got '" +
                      delimiter + "'");
  opt.delimiter = delimiter[0];
  game.apply(opt.game);

  const PredictReport rep = run_predict(opt);

  std::printf("psi_final: %.4f over %d scored steps (%d zero-return steps "
              "skipped)\n",
              rep.psi_final, rep.scored, rep.skipped);
  if (rep.wiener_note.empty()) {
    std::printf("wiener baseline: psi = %.4f on the second half (weights:",
                rep.wiener_psi);
    for (double w : rep.wiener_weights) std::printf(" %.4f", w);
    std::printf(")\n");
  } else {
    std::printf("wiener baseline: %s\n", rep.wiener_note.c_str());
  }
  std::printf("records:  %s\nwindowed: %s\nreport:   %s\n",
              rep.records_csv.string().c_str(),
              rep.windowed_csv.string().c_str(),
              rep.report_txt.string().c_str());
  if (!rep.utilities_csv.empty())
    std::printf("utilities: %s\n", rep.utilities_csv.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grand-canonical minority/majority game as a sign predictor"};
  app.set_version_flag("--version", std::string("1.0.0"));
  app.require_subcommand(1);

  struct Named {
    const char* name;
    const char* help;
    ExperimentSpec (*builder)();
  };
  const Named experiments[] = {
      {"ns-sweep", "single agents with whole spaces vs crowds at matched N*S",
       ns_sweep_spec},
      {"min-vs-maj", "minority vs majority payoffs across crowd sizes",
       min_vs_maj_spec},
      {"lambda-sweep", "utility discount sweep on a regime-switching source",
       lambda_sweep_spec},
      {"regime-switch",
       "windowed psi traces around the regime switch, three discounts",
       regime_switch_spec},
      {"m-sweep", "history length sweep on a lag-1 anticorrelated source",
       m_sweep_spec},
      {"utility-trace", "per-step strategy utilities of one discounted run",
       utility_trace_spec},
  };

  std::vector<SubState> states(6);
  for (std::size_t i = 0; i < 6; ++i) {
    SubState& st = states[i];
    st.builder = experiments[i].builder;
    st.sub = app.add_subcommand(experiments[i].name, experiments[i].help);
    st.sub->set_config("--config", "",
                       "key=value file; command-line flags win");
    st.sweep.add_to(st.sub);
    st.game.add_to(st.sub);
  }
  states[1].sub->add_option("--n-grid", states[1].n_grid,
                            "crowd sizes to compare (replaces the grid)");
  states[2].sub->add_option("--lambda-grid", states[2].lambda_grid,
                            "discounts to sweep (replaces the grid)");
  states[3].sub->add_option("--lambda-grid", states[3].lambda_grid,
                            "discounts to trace (replaces the grid)");
  states[4].sub->add_option("--m-grid", states[4].m_grid,
                            "history lengths to sweep (replaces the grid)");

  PredictOptions popt;
  GameFlags pgame;
  std::string pdelim = ",";
  CLI::App* predict =
      app.add_subcommand("predict", "one-step sign forecast over a price CSV");
  predict->set_config("--config", "", "key=value file; command-line flags win");
  predict->add_option("--csv", popt.csv_path, "price file (header row required)")
      ->required();
  predict->add_option("--column", popt.column, "price column name");
  predict->add_option("--delimiter", pdelim, "field separator (one character)");
  predict->add_option("--window", popt.window, "sliding window for psi");
  predict->add_option("--wiener-order", popt.wiener_order,
                      "lags of the linear baseline");
  predict->add_option("--seed", popt.seed, "run seed");
  predict->add_option("--out", popt.out_dir, "output directory");
  predict->add_flag("--utility-trace", popt.utility_trace,
                    "also write per-step utilities");
  pgame.add_to(predict);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& st : states)
      if (st.sub->parsed()) return run_sweep(st);
    if (predict->parsed()) return run_predict_cmd(popt, pgame, pdelim);
    std::fprintf(stderr, "no subcommand selected\n");
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
