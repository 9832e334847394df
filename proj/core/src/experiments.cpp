#include "gcmg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "gcmg/errors.hpp"
#include "gcmg/predictor.hpp"
#include "gcmg/signal.hpp"
#include "gcmg/wiener.hpp"

namespace gcmg {

namespace {

// canonical number formatting so output files are byte-stable
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string kind_name(GameKind k) {
  return k == GameKind::minority ? "minority" : "majority";
}
std::string space_name(SpaceMode s) {
  switch (s) {
    case SpaceMode::draw: return "draw";
    case SpaceMode::reduced: return "rss";
    case SpaceMode::full: return "fss";
  }
  return "?";
}
std::string payoff_name(PayoffKind p) {
  switch (p) {
    case PayoffKind::step: return "step";
    case PayoffKind::proportional: return "prop";
    case PayoffKind::scaled: return "scaled";
  }
  return "?";
}

// strategies per agent after space resolution
int resolved_s(const GameConfig& g) {
  switch (g.space) {
    case SpaceMode::draw: return g.n_strategies;
    case SpaceMode::reduced: return 1 << (g.memory + 1);
    case SpaceMode::full: return 1 << (1 << g.memory);
  }
  return 0;
}

std::string point_params(const GridPoint& p) {
  const GameConfig& g = p.game;
  return "n=" + std::to_string(g.n_agents) + " s=" + std::to_string(resolved_s(g)) +
         " m=" + std::to_string(g.memory) + " kind=" + kind_name(g.kind) +
         " space=" + space_name(g.space) + " payoff=" + payoff_name(g.payoff) +
         " lambda=" + fmt(g.lambda) + " gc=" + (g.grand_canonical ? "1" : "0") +
         " pair_group=" + std::to_string(p.pair_group);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

GameConfig base_game(SpaceMode space, double lambda, bool gc) {
  GameConfig g;
  g.n_agents = 1;
  g.memory = 3;
  g.space = space;
  g.kind = GameKind::minority;
  g.payoff = PayoffKind::step;
  g.lambda = lambda;
  g.grand_canonical = gc;
  return g;
}

}  // namespace

std::vector<double> SourceSpec::realize(std::size_t length,
                                        std::uint64_t seed) const {
  switch (kind) {
    case Kind::ar: {
      Rng rng(seed);
      return ar_generate({coeffs, noise_sd, {}}, length, rng,
                         static_cast<std::size_t>(burn_in));
    }
    case Kind::regime_switch: {
      Rng rng(seed);
      if (burn_in != 0)
        throw ConfigError("regime_switch source does not support burn_in");
      return regime_switch_series({coeffs, noise_sd, {}}, {coeffs2, noise_sd, {}},
                                  length,
                                  std::min<std::size_t>(switch_at, length), rng);
    }
    case Kind::csv_returns:
      return load_prices(csv_path, csv_column, csv_delimiter).returns;
    case Kind::fixed:
      return fixed_series;
  }
  throw ConfigError("unknown source kind");
}

std::string SourceSpec::describe() const {
  auto vec = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + fmt(v[i]);
    return s + "]";
  };
  switch (kind) {
    case Kind::ar:
      return "ar coeffs=" + vec(coeffs) + " noise_sd=" + fmt(noise_sd) +
             " burn_in=" + std::to_string(burn_in);
    case Kind::regime_switch:
      return "regime_switch coeffs=" + vec(coeffs) + " coeffs2=" + vec(coeffs2) +
             " noise_sd=" + fmt(noise_sd) + " switch_at=" + std::to_string(switch_at);
    case Kind::csv_returns:
      return "csv_returns path=" + csv_path + " column=" + csv_column +
             " delimiter='" + std::string(1, csv_delimiter) + "'";
    case Kind::fixed:
      return "fixed length=" + std::to_string(fixed_series.size());
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (name.empty()) throw ConfigError("experiment name is empty");
  if (grid.empty()) throw ConfigError("experiment grid is empty");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  if (jobs < 0) throw ConfigError("jobs must be >= 0");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (out_dir.empty()) throw ConfigError("output directory is empty");
  std::set<std::string> ids;
  for (const auto& p : grid) {
    if (p.id.empty()) throw ConfigError("grid point with empty id");
    if (!ids.insert(p.id).second)
      throw ConfigError("duplicate grid point id: " + p.id);
    p.game.validate();
  }
  if (source.kind == SourceSpec::Kind::ar ||
      source.kind == SourceSpec::Kind::regime_switch) {
    if (source.coeffs.empty()) throw ConfigError("source coeffs are empty");
    if (source.noise_sd <= 0) throw ConfigError("source noise_sd must be > 0");
  }
  if (source.kind == SourceSpec::Kind::csv_returns && source.csv_path.empty())
    throw ConfigError("csv source without a path");
}

SweepResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();

  int max_m = 1;
  for (const auto& p : spec.grid) max_m = std::max(max_m, p.game.memory);

  // One source realization per replica, shared by every grid point. Each
  // point scores from its own start = memory (the primed-history window);
  // generators are prefix-stable in length, so a single point re-run from
  // the manifest reproduces its rows exactly.
  const std::size_t needed = static_cast<std::size_t>(max_m) + spec.horizon;
  std::vector<std::vector<double>> series;
  if (spec.source.stochastic()) {
    series.reserve(spec.replicas);
    for (int r = 0; r < spec.replicas; ++r)
      series.push_back(spec.source.realize(
          needed, source_seed(replica_seed(spec.base_seed, r))));
  } else {
    series.assign(spec.replicas, spec.source.realize(needed, 0));
  }
  // data sources may truncate the horizon, per point
  std::vector<int> horizons(spec.grid.size(), spec.horizon);
  if (!spec.source.stochastic()) {
    const int size = static_cast<int>(series[0].size());
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
      horizons[p] = std::min(spec.horizon, size - spec.grid[p].game.memory);
      if (horizons[p] < 1)
        throw DataError("source too short for grid point " + spec.grid[p].id +
                        ": " + std::to_string(size) + " samples, memory " +
                        std::to_string(spec.grid[p].game.memory));
    }
  }

  const std::size_t n_points = spec.grid.size();
  const std::size_t n_tasks = n_points * spec.replicas;
  std::vector<std::vector<double>> psi(n_points,
                                       std::vector<double>(spec.replicas, 0.0));
  std::vector<std::vector<std::vector<std::uint8_t>>> hits;
  if (spec.windowed_trace)
    hits.assign(n_points, std::vector<std::vector<std::uint8_t>>(spec.replicas));
  std::vector<std::vector<std::vector<double>>> traces;
  if (spec.utility_trace) traces.assign(n_points, {});
  std::vector<std::string> failures(n_tasks);

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t task = cursor.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t p = task / spec.replicas;
      const int r = static_cast<int>(task % spec.replicas);
      try {
        GameConfig cfg = spec.grid[p].game;
        cfg.seed = game_seed(replica_seed(spec.base_seed, r),
                             spec.grid[p].pair_group);
        const bool trace = spec.utility_trace && r == 0;
        RunResult res = run_prediction(cfg, series[r], horizons[p], 0,
                                       spec.grid[p].game.memory, trace);
        psi[p][r] = res.psi_final;
        if (spec.windowed_trace) hits[p][r] = std::move(res.hits);
        if (trace) traces[p] = std::move(res.utility_trace);
      } catch (const std::exception& e) {
        failures[task] = e.what();
      }
    }
  };
  unsigned n_threads = spec.jobs > 0
                           ? static_cast<unsigned>(spec.jobs)
                           : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
  {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // deterministic sequential reduce in canonical (grid, replica) order
  SweepResult result;
  result.points.reserve(n_points);
  std::vector<std::string> incomplete;
  for (std::size_t p = 0; p < n_points; ++p) {
    PointResult pr;
    pr.point = spec.grid[p];
    pr.psi = psi[p];
    for (int r = 0; r < spec.replicas; ++r)
      if (!failures[p * spec.replicas + r].empty()) pr.complete = false;
    if (pr.complete) {
      double sum = 0.0;
      for (double v : pr.psi) sum += v;
      pr.mean = sum / pr.psi.size();
      if (pr.psi.size() > 1) {
        double ss = 0.0;
        for (double v : pr.psi) ss += (v - pr.mean) * (v - pr.mean);
        pr.sd = std::sqrt(ss / (pr.psi.size() - 1));
      }
    } else {
      incomplete.push_back(pr.point.id);
    }
    result.points.push_back(std::move(pr));
  }

  const std::filesystem::path dir(spec.out_dir);
  std::filesystem::create_directories(dir);

  result.raw_csv = dir / "raw.csv";
  {
    auto out = open_out(result.raw_csv);
    out << "point_id,replica,seed,psi_final\n";
    for (std::size_t p = 0; p < n_points; ++p)
      for (int r = 0; r < spec.replicas; ++r) {
        if (!failures[p * spec.replicas + r].empty()) continue;
        out << spec.grid[p].id << ',' << r << ','
            << replica_seed(spec.base_seed, r) << ',' << fmt(psi[p][r]) << '\n';
      }
  }

  result.aggregate_csv = dir / "aggregate.csv";
  {
    auto out = open_out(result.aggregate_csv);
    out << "point_id,n,s,m,kind,space,payoff,lambda,grand_canonical,"
           "psi_mean,psi_std,replicas\n";
    for (const auto& pr : result.points) {
      if (!pr.complete) continue;
      const GameConfig& g = pr.point.game;
      out << pr.point.id << ',' << g.n_agents << ',' << resolved_s(g) << ','
          << g.memory << ',' << kind_name(g.kind) << ',' << space_name(g.space)
          << ',' << payoff_name(g.payoff) << ',' << fmt(g.lambda) << ','
          << (g.grand_canonical ? 1 : 0) << ',' << fmt(pr.mean) << ','
          << fmt(pr.sd) << ',' << spec.replicas << '\n';
    }
  }

  if (spec.windowed_trace) {
    for (std::size_t p = 0; p < n_points; ++p) {
      bool ok = true;
      std::size_t len = hits[p].empty() ? 0 : hits[p][0].size();
      for (const auto& h : hits[p])
        if (h.size() != len) ok = false;
      if (!ok || len == 0 || !result.points[p].complete) continue;
      // mean hit across replicas, then the sliding window (they commute)
      std::vector<double> mean_hit(len, 0.0);
      for (const auto& h : hits[p])
        for (std::size_t t = 0; t < len; ++t) mean_hit[t] += h[t];
      for (auto& v : mean_hit) v /= spec.replicas;
      auto out = open_out(dir / ("trace_" + spec.grid[p].id + ".csv"));
      out << "t,psi_window\n";
      double sum = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        sum += mean_hit[t];
        if (t >= static_cast<std::size_t>(spec.window))
          sum -= mean_hit[t - spec.window];
        const std::size_t span =
            std::min<std::size_t>(t + 1, spec.window);
        out << (t + 1) << ',' << fmt(sum / span) << '\n';
      }
    }
  }

  if (spec.utility_trace) {
    for (std::size_t p = 0; p < n_points; ++p) {
      if (traces[p].empty()) continue;
      auto out = open_out(dir / ("utilities_" + spec.grid[p].id + ".csv"));
      const std::size_t cols = traces[p][0].size();
      const bool gc = spec.grid[p].game.grand_canonical;
      out << "t";
      for (std::size_t k = 0; k < cols; ++k) {
        if (gc && k == cols - 1)
          out << ",u_zero";
        else
          out << ",u_" << k;
      }
      out << '\n';
      for (std::size_t t = 0; t < traces[p].size(); ++t) {
        out << (t + 1);
        for (double v : traces[p][t]) out << ',' << fmt(v);
        out << '\n';
      }
    }
  }

  result.manifest = dir / "manifest.txt";
  {
    auto out = open_out(result.manifest);
    out << "experiment: " << spec.name << '\n'
        << "source: " << spec.source.describe() << '\n'
        << "horizon: " << spec.horizon << '\n'
        << "start: per point, equal to its memory m (history primed from the "
           "series' first m signs)\n"
        << "replicas: " << spec.replicas << '\n'
        << "base_seed: " << spec.base_seed << '\n'
        << "window: " << spec.window << '\n'
        << "seeding: replica_seed = base_seed + replica; "
           "source_seed = splitmix64_mix(replica_seed, 0x736F7572); "
           "game_seed = splitmix64_mix(replica_seed, 0x67616D65 + pair_group)\n"
        << "aggregate_std: sample standard deviation (n-1)\n"
        << "grid:\n";
    for (std::size_t p = 0; p < n_points; ++p)
      out << "  " << spec.grid[p].id << ": " << point_params(spec.grid[p])
          << " horizon=" << horizons[p] << '\n';
    if (!incomplete.empty()) {
      out << "incomplete_points:\n";
      for (std::size_t p = 0; p < n_points; ++p) {
        for (int r = 0; r < spec.replicas; ++r) {
          const auto& msg = failures[p * spec.replicas + r];
          if (!msg.empty())
            out << "  " << spec.grid[p].id << " replica " << r << ": " << msg
                << '\n';
        }
      }
    }
  }

  if (!incomplete.empty())
    throw DataError(std::to_string(incomplete.size()) +
                    " grid point(s) incomplete; see " + result.manifest.string());
  return result;
}

ExperimentSpec ns_sweep_spec() {
  ExperimentSpec spec;
  spec.name = "ns_sweep";
  spec.out_dir = "gcmg_out/ns_sweep";
  // single agents holding whole spaces vs crowds at matched N*S
  GameConfig fss = base_game(SpaceMode::full, 1.0, true);
  GameConfig rss = base_game(SpaceMode::reduced, 1.0, true);
  spec.grid.push_back({"n1_s256_fss", fss, 0});
  spec.grid.push_back({"n1_s16_rss", rss, 1});
  int pg = 2;
  for (auto [n, s] : {std::pair{4, 16}, std::pair{16, 4}, std::pair{32, 2}}) {
    GameConfig g = base_game(SpaceMode::draw, 1.0, true);
    g.n_agents = n;
    g.n_strategies = s;
    spec.grid.push_back({"n" + std::to_string(n) + "_s" + std::to_string(s) +
                             "_draw",
                         g, pg++});
  }
  return spec;
}

ExperimentSpec min_vs_maj_spec() {
  ExperimentSpec spec;
  spec.name = "min_vs_maj";
  spec.out_dir = "gcmg_out/min_vs_maj";
  int pg = 0;
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    for (GameKind kind : {GameKind::minority, GameKind::majority}) {
      GameConfig g = base_game(SpaceMode::draw, 1.0, true);
      g.n_agents = n;
      g.n_strategies = 2;
      g.kind = kind;
      spec.grid.push_back({"n" + std::to_string(n) + "_" +
                               (kind == GameKind::minority ? "min" : "maj"),
                           g, pg});
    }
    ++pg;  // both kinds at one N share the group -> matched strategy draws
  }
  return spec;
}

namespace {

ExperimentSpec lambda_grid_spec(const std::string& name,
                                const std::vector<double>& lambdas) {
  ExperimentSpec spec;
  spec.name = name;
  spec.out_dir = "gcmg_out/" + name;
  spec.source.kind = SourceSpec::Kind::regime_switch;
  int pg = 0;
  for (double lam : lambdas) {
    GameConfig g = base_game(SpaceMode::reduced, lam, true);
    char id[32];
    std::snprintf(id, sizeof id, "lambda_%.2f", lam);
    spec.grid.push_back({id, g, pg++});
  }
  return spec;
}

}  // namespace

ExperimentSpec lambda_sweep_spec() {
  return lambda_grid_spec("lambda_sweep", {0.7, 0.9, 0.95, 0.97, 0.99, 1.0});
}

ExperimentSpec regime_switch_spec() {
  ExperimentSpec spec = lambda_grid_spec("regime_switch", {0.7, 0.97, 1.0});
  spec.windowed_trace = true;
  return spec;
}

ExperimentSpec m_sweep_spec() {
  ExperimentSpec spec;
  spec.name = "m_sweep";
  spec.out_dir = "gcmg_out/m_sweep";
  spec.source.coeffs = {-0.6};  // lag-1 anticorrelated synthetic default
  int pg = 0;
  for (int m : {1, 2, 3, 4, 5}) {
    GameConfig g = base_game(SpaceMode::reduced, 0.97, true);
    g.memory = m;
    spec.grid.push_back({"m" + std::to_string(m), g, pg++});
  }
  return spec;
}

ExperimentSpec utility_trace_spec() {
  ExperimentSpec spec;
  spec.name = "utility_trace";
  spec.out_dir = "gcmg_out/utility_trace";
  spec.replicas = 1;
  spec.utility_trace = true;
  spec.grid.push_back({"trace", base_game(SpaceMode::reduced, 0.97, true), 0});
  return spec;
}

PredictOptions::PredictOptions() {
  game.n_agents = 1;
  game.memory = 3;
  game.space = SpaceMode::reduced;
  game.lambda = 0.97;
  game.grand_canonical = true;
  game.kind = GameKind::minority;
  game.payoff = PayoffKind::step;
}

PredictReport run_predict(const PredictOptions& opt) {
  opt.game.validate();
  if (opt.window < 1) throw ConfigError("window must be >= 1");
  if (opt.wiener_order < 1) throw ConfigError("wiener order must be >= 1");

  const ReturnSeries data =
      load_prices(opt.csv_path, opt.column, opt.delimiter);
  const int m = opt.game.memory;
  if (data.returns.size() < static_cast<std::size_t>(m) + 1)
    throw DataError(opt.csv_path + ": need at least m+2 = " +
                    std::to_string(m + 2) + " prices, got " +
                    std::to_string(data.returns.size() + 1));

  GameConfig cfg = opt.game;
  cfg.seed = mix_seed(opt.seed, kGameStream);
  const int horizon = static_cast<int>(data.returns.size()) - m;
  RunResult res =
      run_prediction(cfg, data.returns, horizon, 0, m, opt.utility_trace);
  if (res.scored == 0)
    throw DataError(opt.csv_path +
                    ": every return has zero sign (constant prices) — "
                    "no signal to predict");

  PredictReport report;
  report.psi_final = res.psi_final;
  report.scored = res.scored;
  report.skipped = res.skipped;

  // linear baseline: fit on the first half, score on the second
  const std::size_t half = data.returns.size() / 2;
  if (half >= static_cast<std::size_t>(10) * opt.wiener_order) {
    try {
      const std::vector<double> train(data.returns.begin(),
                                      data.returns.begin() + half);
      const WienerFilter f = fit_wiener(train, opt.wiener_order);
      report.wiener_weights = f.weights;
      report.wiener_psi = wiener_psi(f, data.returns, half,
                                     mix_seed(opt.seed, kWienerStream));
    } catch (const DataError& e) {
      report.wiener_note = e.what();
    }
  } else {
    report.wiener_note = "baseline skipped: series too short for order " +
                         std::to_string(opt.wiener_order);
  }

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);

  report.records_csv = dir / "records.csv";
  {
    auto out = open_out(report.records_csv);
    out << "t,forecast,realized,hit,psi_running\n";
    for (const auto& rec : res.records)
      out << rec.t << ',' << rec.predicted << ',' << rec.realized << ','
          << (rec.predicted == rec.realized ? 1 : 0) << ','
          << fmt(rec.psi_running) << '\n';
  }

  report.windowed_csv = dir / "windowed.csv";
  {
    auto out = open_out(report.windowed_csv);
    out << "t,psi_window\n";
    const auto w = psi_windowed(res.hits, opt.window);
    for (std::size_t k = 0; k < w.size(); ++k)
      out << res.records[k].t << ',' << fmt(w[k]) << '\n';
  }

  if (opt.utility_trace) {
    report.utilities_csv = dir / "utilities.csv";
    auto out = open_out(report.utilities_csv);
    const std::size_t cols =
        res.utility_trace.empty() ? 0 : res.utility_trace[0].size();
    out << "t";
    for (std::size_t k = 0; k < cols; ++k) {
      if (cfg.grand_canonical && k == cols - 1)
        out << ",u_zero";
      else
        out << ",u_" << k;
    }
    out << '\n';
    for (std::size_t t = 0; t < res.utility_trace.size(); ++t) {
      out << (t + 1);
      for (double v : res.utility_trace[t]) out << ',' << fmt(v);
      out << '\n';
    }
  }

  report.report_txt = dir / "report.txt";
  {
    auto out = open_out(report.report_txt);
    out << "input: " << data.note << '\n'
        << "column: " << data.instrument << '\n'
        << "game: n=" << cfg.n_agents << " s=" << resolved_s(cfg)
        << " m=" << cfg.memory << " kind=" << kind_name(cfg.kind)
        << " space=" << space_name(cfg.space)
        << " payoff=" << payoff_name(cfg.payoff) << " lambda=" << fmt(cfg.lambda)
        << " gc=" << (cfg.grand_canonical ? 1 : 0) << " seed=" << opt.seed
        << '\n'
        << "steps_scored: " << report.scored << '\n'
        << "steps_skipped_zero_return: " << report.skipped << '\n'
        << "psi_final: " << fmt(report.psi_final) << '\n';
    if (report.wiener_note.empty()) {
      out << "wiener_order: " << opt.wiener_order << '\n' << "wiener_weights:";
      for (double w : report.wiener_weights) out << ' ' << fmt(w);
      out << '\n' << "wiener_psi_second_half: " << fmt(report.wiener_psi) << '\n';
    } else {
      out << "wiener: " << report.wiener_note << '\n';
    }
    out << "records: " << report.records_csv.string() << '\n'
        << "windowed: " << report.windowed_csv.string() << '\n';
  }
  return report;
}

}  // namespace gcmg
